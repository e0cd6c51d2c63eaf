#include "relaxedsync/queues.hpp"

namespace relaxedsync {

namespace {

class FaiEnq final : public StepMachine {
 public:
  FaiEnq(CellId tail, LazyCellArray& items, int proc, std::int64_t item)
      : StepMachine(proc), tail_(tail), items_(items), item_(item) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Fai:
        slot_ = mem.fai(proc_, tail_);
        pc_ = Pc::Write;
        return;
      case Pc::Write:
        mem.write_item(proc_, items_.at(mem, static_cast<std::size_t>(slot_)),
                       CellValue::item(item_));
        finish(OpResult::ok());
        return;
    }
  }

 private:
  enum class Pc { Fai, Write };
  CellId tail_;
  LazyCellArray& items_;
  std::int64_t item_;
  std::int64_t slot_ = 0;
  Pc pc_ = Pc::Fai;
};

class SeqQueueDeq final : public StepMachine {
 public:
  SeqQueueDeq(SeqQueue& q, int proc) : StepMachine(proc), q_(q) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::ReadTail:
        limit_ = mem.read_int(proc_, q_.tail_cell()) - 1;
        taken_ = 0;
        row_ = 1;
        if (row_ > limit_) {
          end_of_pass();
          return;
        }
        pc_ = Pc::Read;
        return;
      case Pc::Read: {
        CellValue v = mem.read_item(proc_, q_.items().at(mem, static_cast<std::size_t>(row_)));
        if (!v.is_bottom()) {
          pc_ = Pc::Swap;
          return;
        }
        if (++row_ > limit_) end_of_pass();
        return;
      }
      case Pc::Swap: {
        CellValue v = mem.swap_item(proc_, q_.items().at(mem, static_cast<std::size_t>(row_)),
                                    CellValue::taken_mark());
        if (v.is_item()) {
          finish(OpResult::value(v.payload()));
          return;
        }
        ++taken_;
        if (++row_ > limit_) {
          end_of_pass();
        } else {
          pc_ = Pc::Read;
        }
        return;
      }
    }
  }

 private:
  enum class Pc { ReadTail, Read, Swap };

  // Two consecutive scans taking the same count license the empty
  // return; otherwise chase the tail with another pass.
  void end_of_pass() {
    if (taken_ == taken_prev_) {
      finish(OpResult::empty());
      return;
    }
    taken_prev_ = taken_;
    pc_ = Pc::ReadTail;
  }

  SeqQueue& q_;
  std::int64_t limit_ = 0;
  std::int64_t row_ = 0;
  std::int64_t taken_ = 0;
  std::int64_t taken_prev_ = 0;
  Pc pc_ = Pc::ReadTail;
};

class NaiveQueueDeq final : public StepMachine {
 public:
  NaiveQueueDeq(NaiveQueue& q, int proc) : StepMachine(proc), q_(q) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::ReadTail:
        limit_ = mem.read_int(proc_, q_.tail_cell()) - 1;
        row_ = 1;
        if (row_ > limit_) {
          finish(OpResult::empty());
          return;
        }
        pc_ = Pc::Swap;
        return;
      case Pc::Swap: {
        CellValue v = mem.swap_item(proc_, q_.items().at(mem, static_cast<std::size_t>(row_)),
                                    CellValue::bottom());
        if (v.is_item()) {
          finish(OpResult::value(v.payload()));
          return;
        }
        if (++row_ > limit_) finish(OpResult::empty());
        return;
      }
    }
  }

 private:
  enum class Pc { ReadTail, Swap };
  NaiveQueue& q_;
  std::int64_t limit_ = 0;
  std::int64_t row_ = 0;
  Pc pc_ = Pc::ReadTail;
};

class IntSeqQueueDeq final : public StepMachine {
 public:
  IntSeqQueueDeq(IntSeqQueue& q, int proc) : StepMachine(proc), q_(q) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::ReadTail:
        limit_ = mem.read_int(proc_, q_.tail_cell()) - 1;
        row_ = 1;
        if (row_ > limit_) {
          end_of_pass();
          return;
        }
        pc_ = Pc::Read;
        return;
      case Pc::Read: {
        CellValue v = mem.read_item(proc_, q_.items().at(mem, static_cast<std::size_t>(row_)));
        if (!v.is_bottom()) {
          pc_ = Pc::Swap;
          return;
        }
        if (++row_ > limit_) end_of_pass();
        return;
      }
      case Pc::Swap: {
        CellValue v = mem.swap_item(proc_, q_.items().at(mem, static_cast<std::size_t>(row_)),
                                    CellValue::taken_mark());
        if (v.is_item()) {
          finish(OpResult::value(v.payload()));
          return;
        }
        ++taken_[pass_];
        if (++row_ > limit_) {
          end_of_pass();
        } else {
          pc_ = Pc::Read;
        }
        return;
      }
    }
  }

 private:
  enum class Pc { ReadTail, Read, Swap };

  // Exactly two passes; equal taken counts mean a double clean scan.
  void end_of_pass() {
    if (pass_ == 0) {
      pass_ = 1;
      pc_ = Pc::ReadTail;
      return;
    }
    finish(taken_[0] == taken_[1] ? OpResult::empty() : OpResult::weak_empty());
  }

  IntSeqQueue& q_;
  std::int64_t limit_ = 0;
  std::int64_t row_ = 0;
  int pass_ = 0;
  std::int64_t taken_[2] = {0, 0};
  Pc pc_ = Pc::ReadTail;
};

class CounterEnq final : public StepMachine {
 public:
  CounterEnq(RwCounter& tail, LazyCellMatrix& items, int proc, std::int64_t item)
      : StepMachine(proc), tail_(tail), items_(items), item_(item) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Collect:
        if (collect_.step(mem, proc_, tail_)) {
          row_ = collect_.total(tail_);
          pc_ = Pc::Inc;
        }
        return;
      case Pc::Inc:
        tail_.inc(mem, proc_);
        pc_ = Pc::Write;
        return;
      case Pc::Write:
        mem.write_item(proc_, items_.at(mem, static_cast<std::size_t>(row_), proc_),
                       CellValue::item(item_));
        finish(OpResult::ok());
        return;
    }
  }

 private:
  enum class Pc { Collect, Inc, Write };
  RwCounter& tail_;
  LazyCellMatrix& items_;
  std::int64_t item_;
  std::int64_t row_ = 0;
  CounterCollect collect_;
  Pc pc_ = Pc::Collect;
};

/// Matrix scan shared by SetSeqQueue (unbounded passes) and
/// RwIntSeqQueue (exactly two passes).
class MatrixDeq final : public StepMachine {
 public:
  MatrixDeq(RwCounter& tail, LazyCellMatrix& items, int nprocs, int proc, int max_passes)
      : StepMachine(proc), tail_(tail), items_(items), nprocs_(nprocs), max_passes_(max_passes) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Collect:
        if (collect_.step(mem, proc_, tail_)) {
          limit_ = collect_.total(tail_) - 1;
          row_ = 1;
          col_ = 1;
          if (row_ > limit_) {
            end_of_pass();
            return;
          }
          pc_ = Pc::Read;
        }
        return;
      case Pc::Read: {
        CellValue v =
            mem.read_item(proc_, items_.at(mem, static_cast<std::size_t>(row_), col_));
        if (!v.is_bottom()) {
          got_ = v;
          pc_ = Pc::WriteTaken;
          return;
        }
        if (!advance()) end_of_pass();
        return;
      }
      case Pc::WriteTaken:
        // Unconditional, even over an existing taken mark (Line T13).
        mem.write_item(proc_, items_.at(mem, static_cast<std::size_t>(row_), col_),
                       CellValue::taken_mark());
        if (got_.is_item()) {
          finish(OpResult::value(got_.payload()));
          return;
        }
        ++taken_;
        if (!advance()) {
          end_of_pass();
        } else {
          pc_ = Pc::Read;
        }
        return;
    }
  }

 private:
  enum class Pc { Collect, Read, WriteTaken };

  // Rows 1..tail, columns 1..n, exactly the pseudocode order.
  bool advance() {
    if (++col_ <= nprocs_) return true;
    col_ = 1;
    return ++row_ <= limit_;
  }

  void end_of_pass() {
    ++pass_;
    if (max_passes_ > 0) {
      // Fixed two-pass mode: the counts are compared only once both
      // passes are done.
      if (pass_ >= max_passes_) {
        finish(taken_ == taken_prev_ ? OpResult::empty() : OpResult::weak_empty());
        return;
      }
    } else if (taken_ == taken_prev_) {
      finish(OpResult::empty());
      return;
    }
    taken_prev_ = taken_;
    taken_ = 0;
    collect_.reset();
    pc_ = Pc::Collect;
  }

  RwCounter& tail_;
  LazyCellMatrix& items_;
  int nprocs_;
  int max_passes_;  // 0 = until double clean scan
  std::int64_t limit_ = 0;
  std::int64_t row_ = 0;
  int col_ = 0;
  int pass_ = 0;
  std::int64_t taken_ = 0;
  std::int64_t taken_prev_ = 0;
  CellValue got_;
  CounterCollect collect_;
  Pc pc_ = Pc::Collect;
};

std::vector<std::int64_t> sweep_array(const Memory& mem, const LazyCellArray& items) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i <= items.capacity(); ++i) {
    auto id = items.materialized(i);
    if (!id.has_value()) continue;
    CellValue v = CellValue::decode(mem.peek(*id));
    if (v.is_item()) out.push_back(v.payload());
  }
  return out;
}

std::vector<std::int64_t> sweep_matrix(const Memory& mem, const LazyCellMatrix& items) {
  std::vector<std::int64_t> out;
  std::size_t rows = items.materialized_rows();
  for (std::size_t r = 1; r <= rows; ++r) {
    for (int c = 1; c <= items.cols(); ++c) {
      auto id = items.materialized(r, c);
      if (!id.has_value()) continue;
      CellValue v = CellValue::decode(mem.peek(*id));
      if (v.is_item()) out.push_back(v.payload());
    }
  }
  return out;
}

}  // namespace

SeqQueue::SeqQueue(Memory& mem, const StructureConfig& config)
    : tail_(mem.allocate(CellFamily::Int, config.cell_prefix + "Tail", 1)),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity) {}

std::unique_ptr<StepMachine> SeqQueue::make_insert(int proc, std::int64_t item) {
  return std::make_unique<FaiEnq>(tail_, items_, proc, item);
}

std::unique_ptr<StepMachine> SeqQueue::make_remove(int proc) {
  return std::make_unique<SeqQueueDeq>(*this, proc);
}

std::vector<std::int64_t> SeqQueue::resident_items(const Memory& mem) const {
  return sweep_array(mem, items_);
}

SetSeqQueue::SetSeqQueue(Memory& mem, const StructureConfig& config)
    : nprocs_(config.nprocs),
      tail_(mem, config.cell_prefix + "Tail", config.nprocs, 1),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity, config.nprocs) {}

std::unique_ptr<StepMachine> SetSeqQueue::make_insert(int proc, std::int64_t item) {
  return std::make_unique<CounterEnq>(tail_, items_, proc, item);
}

std::unique_ptr<StepMachine> SetSeqQueue::make_remove(int proc) {
  return std::make_unique<MatrixDeq>(tail_, items_, nprocs_, proc, 0);
}

std::vector<std::int64_t> SetSeqQueue::resident_items(const Memory& mem) const {
  return sweep_matrix(mem, items_);
}

NaiveQueue::NaiveQueue(Memory& mem, const StructureConfig& config)
    : tail_(mem.allocate(CellFamily::Int, config.cell_prefix + "Tail", 1)),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity) {}

std::unique_ptr<StepMachine> NaiveQueue::make_insert(int proc, std::int64_t item) {
  return std::make_unique<FaiEnq>(tail_, items_, proc, item);
}

std::unique_ptr<StepMachine> NaiveQueue::make_remove(int proc) {
  return std::make_unique<NaiveQueueDeq>(*this, proc);
}

std::vector<std::int64_t> NaiveQueue::resident_items(const Memory& mem) const {
  return sweep_array(mem, items_);
}

IntSeqQueue::IntSeqQueue(Memory& mem, const StructureConfig& config)
    : tail_(mem.allocate(CellFamily::Int, config.cell_prefix + "Tail", 1)),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity) {}

std::unique_ptr<StepMachine> IntSeqQueue::make_insert(int proc, std::int64_t item) {
  return std::make_unique<FaiEnq>(tail_, items_, proc, item);
}

std::unique_ptr<StepMachine> IntSeqQueue::make_remove(int proc) {
  return std::make_unique<IntSeqQueueDeq>(*this, proc);
}

std::vector<std::int64_t> IntSeqQueue::resident_items(const Memory& mem) const {
  return sweep_array(mem, items_);
}

RwIntSeqQueue::RwIntSeqQueue(Memory& mem, const StructureConfig& config)
    : nprocs_(config.nprocs),
      tail_(mem, config.cell_prefix + "Tail", config.nprocs, 1),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity, config.nprocs) {}

std::unique_ptr<StepMachine> RwIntSeqQueue::make_insert(int proc, std::int64_t item) {
  return std::make_unique<CounterEnq>(tail_, items_, proc, item);
}

std::unique_ptr<StepMachine> RwIntSeqQueue::make_remove(int proc) {
  return std::make_unique<MatrixDeq>(tail_, items_, nprocs_, proc, 2);
}

std::vector<std::int64_t> RwIntSeqQueue::resident_items(const Memory& mem) const {
  return sweep_matrix(mem, items_);
}

}  // namespace relaxedsync
