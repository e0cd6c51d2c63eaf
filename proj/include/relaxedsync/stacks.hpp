#pragma once

#include <memory>
#include <vector>

#include "relaxedsync/registers.hpp"
#include "relaxedsync/structure.hpp"

namespace relaxedsync {

/// Wait-free linearizable stack of Afek, Gafni and Morrison from
/// consensus-number-2 objects: a readable fetch&inc top and an array of
/// swap registers.  The consensus-2 reference the R/W stacks relax.
class SeqStack final : public Structure {
 public:
  SeqStack(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "seqstack"; }
  bool queue_like() const override { return false; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  CellId top_cell() const { return top_; }
  LazyCellArray& items() { return items_; }

 private:
  CellId top_;
  LazyCellArray items_;
};

/// R/W wait-free set-concurrent stack with multiplicity.  The fetch&inc
/// is split into a counter read + increment, and the swap into a read +
/// write; rows of the item matrix absorb push collisions (one column per
/// process), and pops that race on one cell may both return its item.
class SetSeqStack final : public Structure {
 public:
  SetSeqStack(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "setseqstack"; }
  bool queue_like() const override { return false; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  RwCounter& top() { return top_; }
  LazyCellMatrix& items() { return items_; }
  int nprocs() const { return nprocs_; }

 private:
  int nprocs_;
  RwCounter top_;
  LazyCellMatrix items_;
};

/// SetSeqStack variant for low contention: pushes acquire their column
/// through per-row adaptive renaming, and per-row operation counters let
/// pops scan only the first f(nops) columns, f(p) = p(p+1)/2.
class RenSetSeqStack final : public Structure {
 public:
  RenSetSeqStack(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "renstack"; }
  bool queue_like() const override { return false; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  RwCounter& top() { return top_; }
  LazyCellMatrix& items() { return items_; }
  RwCounter& nops(Memory& mem, std::size_t row);
  RenamingInstance& ren(Memory& mem, std::size_t row);
  int nprocs() const { return nprocs_; }

  /// Diagnostic sweep: items sitting beyond f(NOPS[row]) in their row.
  /// Expected empty at quiescence; racing reads may lag transiently.
  std::vector<std::int64_t> items_beyond_bound(const Memory& mem) const;

 private:
  int nprocs_;
  RwCounter top_;
  LazyCellMatrix items_;
  std::string prefix_;
  std::vector<std::unique_ptr<RwCounter>> nops_;
  std::vector<std::unique_ptr<RenamingInstance>> ren_;
  std::mutex row_mu_;
};

}  // namespace relaxedsync
