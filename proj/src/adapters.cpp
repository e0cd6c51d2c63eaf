#include "relaxedsync/adapters.hpp"

#include "relaxedsync/stacks.hpp"

namespace relaxedsync {

WorkStealingPool::WorkStealingPool(Memory& mem, const StructureConfig& config)
    : owner_(config.ws_owner) {
  StructureConfig core_cfg = config;
  if (config.core == "setseqstack")
    core_ = std::make_unique<SetSeqStack>(mem, core_cfg);
  else if (config.core == "setseqqueue")
    core_ = std::make_unique<SetSeqQueue>(mem, core_cfg);
  else
    throw ContractViolation("work-stealing core must be setseqstack or setseqqueue, got " +
                            config.core);
}

std::unique_ptr<StepMachine> WorkStealingPool::make_insert(int proc, std::int64_t item) {
  if (proc != owner_)
    throw ContractViolation("Put invoked by process " + std::to_string(proc) +
                            " but the pool owner is " + std::to_string(owner_));
  return core_->make_insert(proc, item);
}

std::unique_ptr<StepMachine> WorkStealingPool::make_remove(int proc) {
  return core_->make_remove(proc);
}

std::vector<std::int64_t> WorkStealingPool::resident_items(const Memory& mem) const {
  return core_->resident_items(mem);
}

namespace {

/// Balancer step (when round-robin) followed by the lane operation.
class KFifoOp final : public StepMachine {
 public:
  KFifoOp(KFifoQueue& q, int proc, bool insert, std::int64_t item, CellId balancer_cell,
          int preset_lane)
      : StepMachine(proc),
        q_(q),
        insert_(insert),
        item_(item),
        balancer_cell_(balancer_cell),
        lane_(preset_lane) {
    if (lane_ >= 0) make_inner();
  }

  void step(Memory& mem) override {
    if (inner_ == nullptr) {
      std::int64_t ticket = mem.fai(proc_, balancer_cell_);
      lane_ = static_cast<int>(ticket % q_.lanes());
      make_inner();
      return;
    }
    inner_->step(mem);
    if (inner_->done()) finish(inner_->result());
  }

 private:
  void make_inner() {
    Structure& lane = q_.lane(lane_);
    inner_ = insert_ ? lane.make_insert(proc_, item_) : lane.make_remove(proc_);
  }

  KFifoQueue& q_;
  bool insert_;
  std::int64_t item_;
  CellId balancer_cell_;
  int lane_;
  std::unique_ptr<StepMachine> inner_;
};

}  // namespace

KFifoQueue::KFifoQueue(Memory& mem, const StructureConfig& config)
    : random_balancer_(config.balancer == "random") {
  if (config.lanes < 1) throw ContractViolation("kfifo needs at least one lane");
  if (config.balancer != "random" && config.balancer != "fai")
    throw ContractViolation("kfifo balancer must be fai or random, got " + config.balancer);
  StructureConfig lane_cfg = config;
  for (int l = 0; l < config.lanes; ++l) {
    // Lane cells carry an L<k>. prefix so per-lane histories can be
    // extracted from access logs.
    lane_cfg.cell_prefix = config.cell_prefix + "L" + std::to_string(l + 1) + ".";
    lanes_.push_back(std::make_unique<SetSeqQueue>(mem, lane_cfg));
  }
  if (!random_balancer_) {
    enq_rr_ = mem.allocate(CellFamily::Int, config.cell_prefix + "EnqBalancer", 0);
    deq_rr_ = mem.allocate(CellFamily::Int, config.cell_prefix + "DeqBalancer", 0);
  }
  rng_.reserve(static_cast<std::size_t>(config.nprocs) + 1);
  for (int p = 0; p <= config.nprocs; ++p)
    rng_.emplace_back(config.seed * 7919u + static_cast<std::uint64_t>(p));
}

std::unique_ptr<StepMachine> KFifoQueue::make_insert(int proc, std::int64_t item) {
  int preset = -1;
  if (random_balancer_)
    preset = static_cast<int>(rng_[static_cast<std::size_t>(proc)]() %
                              static_cast<std::uint64_t>(lanes()));
  return std::make_unique<KFifoOp>(*this, proc, true, item, enq_rr_, preset);
}

std::unique_ptr<StepMachine> KFifoQueue::make_remove(int proc) {
  int preset = -1;
  if (random_balancer_)
    preset = static_cast<int>(rng_[static_cast<std::size_t>(proc)]() %
                              static_cast<std::uint64_t>(lanes()));
  return std::make_unique<KFifoOp>(*this, proc, false, 0, deq_rr_, preset);
}

std::vector<std::int64_t> KFifoQueue::resident_items(const Memory& mem) const {
  std::vector<std::int64_t> out;
  for (const auto& lane : lanes_) {
    auto items = lane->resident_items(mem);
    out.insert(out.end(), items.begin(), items.end());
  }
  return out;
}

}  // namespace relaxedsync
