#pragma once

#include <memory>
#include <random>
#include <vector>

#include "relaxedsync/queues.hpp"
#include "relaxedsync/structure.hpp"

namespace relaxedsync {

/// Idempotent work-stealing over a relaxed core: Put is the owner's
/// insert, Take and Steal both map to the core removal, so any process
/// may extract and a task may be returned to several concurrent callers.
class WorkStealingPool final : public Structure {
 public:
  WorkStealingPool(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "workstealing"; }
  bool queue_like() const override { return core_->queue_like(); }
  OpKind insert_kind(int) const override { return OpKind::Put; }
  OpKind remove_kind(int proc) const override {
    return proc == owner_ ? OpKind::Take : OpKind::Steal;
  }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;
  std::optional<int> owner() const override { return owner_; }

  Structure& core() { return *core_; }

 private:
  int owner_;
  std::unique_ptr<Structure> core_;
};

/// k-FIFO-with-multiplicity composition: p independent set-concurrent
/// queues behind a load balancer.  Strict round-robin needs a fetch&inc
/// (flagged by the audit, as expected); the seeded-random balancer stays
/// RMW-free.  k is measured, not guaranteed; it depends on the balancer.
class KFifoQueue final : public Structure {
 public:
  KFifoQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "kfifo"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  int lanes() const { return static_cast<int>(lanes_.size()); }
  Structure& lane(int index) { return *lanes_[static_cast<std::size_t>(index)]; }

 private:
  friend class KFifoOp;

  std::vector<std::unique_ptr<Structure>> lanes_;
  bool random_balancer_;
  CellId enq_rr_ = 0;  // fetch&inc round-robin cells (one per direction)
  CellId deq_rr_ = 0;
  std::vector<std::mt19937_64> rng_;  // per process, random balancer
};

}  // namespace relaxedsync
