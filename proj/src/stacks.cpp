#include "relaxedsync/stacks.hpp"

#include <algorithm>

namespace relaxedsync {

namespace {

class SeqStackPush final : public StepMachine {
 public:
  SeqStackPush(SeqStack& s, int proc, std::int64_t item)
      : StepMachine(proc), s_(s), item_(item) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Fai:
        slot_ = mem.fai(proc_, s_.top_cell());
        pc_ = Pc::Write;
        return;
      case Pc::Write:
        mem.write_item(proc_, s_.items().at(mem, static_cast<std::size_t>(slot_)),
                       CellValue::item(item_));
        finish(OpResult::ok());
        return;
    }
  }

 private:
  enum class Pc { Fai, Write };
  SeqStack& s_;
  std::int64_t item_;
  std::int64_t slot_ = 0;
  Pc pc_ = Pc::Fai;
};

class SeqStackPop final : public StepMachine {
 public:
  SeqStackPop(SeqStack& s, int proc) : StepMachine(proc), s_(s) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::ReadTop:
        row_ = mem.read_int(proc_, s_.top_cell()) - 1;
        if (row_ < 1) {
          finish(OpResult::empty());
          return;
        }
        pc_ = Pc::Swap;
        return;
      case Pc::Swap: {
        CellValue v = mem.swap_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_)),
                                    CellValue::bottom());
        if (v.is_item()) {
          finish(OpResult::value(v.payload()));
          return;
        }
        if (--row_ < 1) finish(OpResult::empty());
        return;
      }
    }
  }

 private:
  enum class Pc { ReadTop, Swap };
  SeqStack& s_;
  std::int64_t row_ = 0;
  Pc pc_ = Pc::ReadTop;
};

class SetSeqStackPush final : public StepMachine {
 public:
  SetSeqStackPush(SetSeqStack& s, int proc, std::int64_t item)
      : StepMachine(proc), s_(s), item_(item) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Collect:
        if (collect_.step(mem, proc_, s_.top())) {
          row_ = collect_.total(s_.top());
          pc_ = Pc::Inc;
        }
        return;
      case Pc::Inc:
        s_.top().inc(mem, proc_);
        pc_ = Pc::Write;
        return;
      case Pc::Write:
        mem.write_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), proc_),
                       CellValue::item(item_));
        finish(OpResult::ok());
        return;
    }
  }

 private:
  enum class Pc { Collect, Inc, Write };
  SetSeqStack& s_;
  std::int64_t item_;
  std::int64_t row_ = 0;
  CounterCollect collect_;
  Pc pc_ = Pc::Collect;
};

class SetSeqStackPop final : public StepMachine {
 public:
  SetSeqStackPop(SetSeqStack& s, int proc) : StepMachine(proc), s_(s) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Collect:
        if (collect_.step(mem, proc_, s_.top())) {
          row_ = collect_.total(s_.top()) - 1;
          col_ = s_.nprocs();
          if (row_ < 1) {
            finish(OpResult::empty());
            return;
          }
          pc_ = Pc::Read;
        }
        return;
      case Pc::Read: {
        CellValue v =
            mem.read_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), col_));
        if (!v.is_bottom()) {
          got_ = v;
          pc_ = Pc::WriteBack;
          return;
        }
        if (!advance()) finish(OpResult::empty());
        return;
      }
      case Pc::WriteBack:
        mem.write_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), col_),
                       CellValue::bottom());
        finish(OpResult::value(got_.payload()));
        return;
    }
  }

 private:
  enum class Pc { Collect, Read, WriteBack };

  // Scan order is fixed by the pseudocode: rows high to low, columns
  // n down to 1.
  bool advance() {
    if (--col_ >= 1) return true;
    col_ = s_.nprocs();
    return --row_ >= 1;
  }

  SetSeqStack& s_;
  std::int64_t row_ = 0;
  int col_ = 0;
  CellValue got_;
  CounterCollect collect_;
  Pc pc_ = Pc::Collect;
};

class RenStackPush final : public StepMachine {
 public:
  RenStackPush(RenSetSeqStack& s, int proc, std::int64_t item)
      : StepMachine(proc), s_(s), item_(item) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::Collect:
        if (collect_.step(mem, proc_, s_.top())) {
          row_ = collect_.total(s_.top());
          s_.ren(mem, static_cast<std::size_t>(row_)).claim(proc_);
          pc_ = Pc::Rename;
        }
        return;
      case Pc::Rename:
        if (walk_.step(mem, proc_, s_.ren(mem, static_cast<std::size_t>(row_)))) {
          tiebreaker_ = static_cast<int>(walk_.name);
          pc_ = Pc::IncTop;
        }
        return;
      case Pc::IncTop:
        s_.top().inc(mem, proc_);
        pc_ = Pc::IncNops;
        return;
      case Pc::IncNops:
        s_.nops(mem, static_cast<std::size_t>(row_)).inc(mem, proc_);
        pc_ = Pc::Write;
        return;
      case Pc::Write:
        mem.write_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), tiebreaker_),
                       CellValue::item(item_));
        finish(OpResult::ok());
        return;
    }
  }

 private:
  enum class Pc { Collect, Rename, IncTop, IncNops, Write };
  RenSetSeqStack& s_;
  std::int64_t item_;
  std::int64_t row_ = 0;
  int tiebreaker_ = 0;
  CounterCollect collect_;
  RenameWalk walk_;
  Pc pc_ = Pc::Collect;
};

class RenStackPop final : public StepMachine {
 public:
  RenStackPop(RenSetSeqStack& s, int proc) : StepMachine(proc), s_(s) {}

  void step(Memory& mem) override {
    switch (pc_) {
      case Pc::CollectTop:
        if (collect_.step(mem, proc_, s_.top())) {
          row_ = collect_.total(s_.top()) - 1;
          if (row_ < 1) {
            finish(OpResult::empty());
            return;
          }
          nops_collect_.reset();
          pc_ = Pc::CollectNops;
        }
        return;
      case Pc::CollectNops:
        if (nops_collect_.step(mem, proc_, s_.nops(mem, static_cast<std::size_t>(row_)))) {
          std::int64_t bound =
              RenamingInstance::name_bound(nops_collect_.total(s_.nops(mem, static_cast<std::size_t>(row_))));
          col_ = static_cast<int>(std::min<std::int64_t>(bound, s_.items().cols()));
          if (col_ < 1) {
            if (!next_row()) finish(OpResult::empty());
            return;
          }
          pc_ = Pc::Read;
        }
        return;
      case Pc::Read: {
        CellValue v =
            mem.read_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), col_));
        if (!v.is_bottom()) {
          got_ = v;
          pc_ = Pc::WriteBack;
          return;
        }
        if (--col_ < 1 && !next_row()) finish(OpResult::empty());
        return;
      }
      case Pc::WriteBack:
        mem.write_item(proc_, s_.items().at(mem, static_cast<std::size_t>(row_), col_),
                       CellValue::bottom());
        finish(OpResult::value(got_.payload()));
        return;
    }
  }

 private:
  enum class Pc { CollectTop, CollectNops, Read, WriteBack };

  bool next_row() {
    if (--row_ < 1) return false;
    nops_collect_.reset();
    pc_ = Pc::CollectNops;
    return true;
  }

  RenSetSeqStack& s_;
  std::int64_t row_ = 0;
  int col_ = 0;
  CellValue got_;
  CounterCollect collect_;
  CounterCollect nops_collect_;
  Pc pc_ = Pc::CollectTop;
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

SeqStack::SeqStack(Memory& mem, const StructureConfig& config)
    : top_(mem.allocate(CellFamily::Int, config.cell_prefix + "Top", 1)),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity) {}

std::unique_ptr<StepMachine> SeqStack::make_insert(int proc, std::int64_t item) {
  return std::make_unique<SeqStackPush>(*this, proc, item);
}

std::unique_ptr<StepMachine> SeqStack::make_remove(int proc) {
  return std::make_unique<SeqStackPop>(*this, proc);
}

std::vector<std::int64_t> SeqStack::resident_items(const Memory& mem) const {
  return sweep_array(mem, items_);
}

SetSeqStack::SetSeqStack(Memory& mem, const StructureConfig& config)
    : nprocs_(config.nprocs),
      top_(mem, config.cell_prefix + "Top", config.nprocs, 1),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity, config.nprocs) {}

std::unique_ptr<StepMachine> SetSeqStack::make_insert(int proc, std::int64_t item) {
  return std::make_unique<SetSeqStackPush>(*this, proc, item);
}

std::unique_ptr<StepMachine> SetSeqStack::make_remove(int proc) {
  return std::make_unique<SetSeqStackPop>(*this, proc);
}

std::vector<std::int64_t> SetSeqStack::resident_items(const Memory& mem) const {
  return sweep_matrix(mem, items_);
}

RenSetSeqStack::RenSetSeqStack(Memory& mem, const StructureConfig& config)
    : nprocs_(config.nprocs),
      top_(mem, config.cell_prefix + "Top", config.nprocs, 1),
      items_(config.cell_prefix + "Items", CellFamily::Item, CellValue::bottom().encode(),
             config.capacity, static_cast<int>(RenamingInstance::name_bound(config.nprocs))),
      prefix_(config.cell_prefix) {
  nops_.resize(config.capacity);
  ren_.resize(config.capacity);
}

RwCounter& RenSetSeqStack::nops(Memory& mem, std::size_t row) {
  if (row < 1 || row > nops_.size())
    throw CapacityExceeded("NOPS row " + std::to_string(row) + " exceeds capacity");
  auto& slot = nops_[row - 1];
  if (!slot) {
    std::lock_guard<std::mutex> lock(row_mu_);
    if (!slot)
      slot = std::make_unique<RwCounter>(mem, prefix_ + "NOPS[" + std::to_string(row) + "]", nprocs_, 0);
  }
  return *slot;
}

RenamingInstance& RenSetSeqStack::ren(Memory& mem, std::size_t row) {
  if (row < 1 || row > ren_.size())
    throw CapacityExceeded("Ren row " + std::to_string(row) + " exceeds capacity");
  auto& slot = ren_[row - 1];
  if (!slot) {
    std::lock_guard<std::mutex> lock(row_mu_);
    if (!slot)
      slot = std::make_unique<RenamingInstance>(mem, prefix_ + "Ren[" + std::to_string(row) + "]", nprocs_);
  }
  return *slot;
}

std::unique_ptr<StepMachine> RenSetSeqStack::make_insert(int proc, std::int64_t item) {
  return std::make_unique<RenStackPush>(*this, proc, item);
}

std::unique_ptr<StepMachine> RenSetSeqStack::make_remove(int proc) {
  return std::make_unique<RenStackPop>(*this, proc);
}

std::vector<std::int64_t> RenSetSeqStack::resident_items(const Memory& mem) const {
  return sweep_matrix(mem, items_);
}

std::vector<std::int64_t> RenSetSeqStack::items_beyond_bound(const Memory& mem) const {
  std::vector<std::int64_t> out;
  std::size_t rows = items_.materialized_rows();
  for (std::size_t r = 1; r <= rows && r <= nops_.size(); ++r) {
    if (!nops_[r - 1]) continue;
    std::int64_t count = 0;
    for (int p = 1; p <= nprocs_; ++p) count += mem.peek(nops_[r - 1]->entry(p));
    std::int64_t bound = RenamingInstance::name_bound(count);
    for (int c = static_cast<int>(bound) + 1; c <= items_.cols(); ++c) {
      auto id = items_.materialized(r, c);
      if (!id.has_value()) continue;
      CellValue v = CellValue::decode(mem.peek(*id));
      if (v.is_item()) out.push_back(v.payload());
    }
  }
  return out;
}

}  // namespace relaxedsync
