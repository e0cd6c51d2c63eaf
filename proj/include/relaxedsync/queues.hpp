#pragma once

#include <memory>
#include <vector>

#include "relaxedsync/registers.hpp"
#include "relaxedsync/structure.hpp"

namespace relaxedsync {

/// Non-blocking linearizable queue from consensus-number-2 objects
/// (readable fetch&inc tail + swap registers); a variant of Li's queue,
/// itself derived from Herlihy-Wing.  Dequeue rescans until two
/// consecutive scans see the same number of taken cells.
class SeqQueue final : public Structure {
 public:
  SeqQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "seqqueue"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  CellId tail_cell() const { return tail_; }
  LazyCellArray& items() { return items_; }

 private:
  CellId tail_;
  LazyCellArray items_;
};

/// R/W non-blocking set-concurrent queue with multiplicity: SeqQueue
/// with the fetch&inc split into counter read + increment, the item
/// array widened to one column per process, and the swap simulated by a
/// read followed by a write.  The taken mark is written unconditionally
/// on any non-bottom read, exactly as the pseudocode has it.
class SetSeqQueue final : public Structure {
 public:
  SetSeqQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "setseqqueue"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  RwCounter& tail() { return tail_; }
  LazyCellMatrix& items() { return items_; }
  int nprocs() const { return nprocs_; }

 private:
  int nprocs_;
  RwCounter tail_;
  LazyCellMatrix items_;
};

/// Intentionally non-linearizable single-scan queue: a dequeue reads the
/// tail once, sweeps forward swapping out the first item it finds, and
/// reports empty after one unsuccessful pass.  Ships as the negative
/// control for the tail-chasing discussion; do not use it as a queue.
class NaiveQueue final : public Structure {
 public:
  NaiveQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "naivequeue"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  CellId tail_cell() const { return tail_; }
  LazyCellArray& items() { return items_; }

 private:
  CellId tail_;
  LazyCellArray items_;
};

/// Wait-free interval-concurrent queue with weak-emptiness from
/// consensus-number-2 objects: dequeue makes at most two scan passes;
/// equal taken counts license `empty`, unequal counts `weakempty`.
class IntSeqQueue final : public Structure {
 public:
  IntSeqQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "intseqqueue"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  CellId tail_cell() const { return tail_; }
  LazyCellArray& items() { return items_; }

 private:
  CellId tail_;
  LazyCellArray items_;
};

/// R/W wait-free interval-concurrent queue with weak-emptiness and
/// multiplicity: IntSeqQueue with the three R/W substitutions (counter
/// tail, item matrix, read+write for swap).
class RwIntSeqQueue final : public Structure {
 public:
  RwIntSeqQueue(Memory& mem, const StructureConfig& config);

  std::string_view name() const override { return "rwintseqqueue"; }
  bool queue_like() const override { return true; }
  std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) override;
  std::unique_ptr<StepMachine> make_remove(int proc) override;
  std::vector<std::int64_t> resident_items(const Memory& mem) const override;

  RwCounter& tail() { return tail_; }
  LazyCellMatrix& items() { return items_; }
  int nprocs() const { return nprocs_; }

 private:
  int nprocs_;
  RwCounter tail_;
  LazyCellMatrix items_;
};

}  // namespace relaxedsync
