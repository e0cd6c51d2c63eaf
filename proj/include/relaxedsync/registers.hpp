#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relaxedsync/machine.hpp"
#include "relaxedsync/memory.hpp"

namespace relaxedsync {

/// Wait-free linearizable counter from plain registers: one entry per
/// process, INC writes the owner's entry, a read collects all entries and
/// returns base + sum.  INC never reads shared memory; it bumps a
/// process-local cached copy of the owner's entry, so an operation built
/// on it can keep the read-then-write access discipline.
class RwCounter {
 public:
  RwCounter(Memory& mem, const std::string& name, int nprocs, std::int64_t base);

  int nprocs() const { return nprocs_; }
  std::int64_t base() const { return base_; }
  CellId entry(int proc) const { return first_ + static_cast<CellId>(proc - 1); }

  /// One shared write of cached+1 into the caller's own entry.
  void inc(Memory& mem, int proc);

 private:
  int nprocs_;
  std::int64_t base_;
  CellId first_;
  std::vector<std::int64_t> cached_;  // per proc, written only by its owner thread
};

/// Sub-machine: one-by-one collect of a counter's entries.
/// step() performs one read; once it returns true, total() is the value.
struct CounterCollect {
  int next = 1;
  std::int64_t sum = 0;

  void reset() { next = 1; sum = 0; }
  bool step(Memory& mem, int proc, const RwCounter& counter) {
    sum += mem.read_int(proc, counter.entry(next));
    ++next;
    return next > counter.nprocs();
  }
  std::int64_t total(const RwCounter& counter) const { return counter.base() + sum; }
};

/// 1-D growable array of registers; slots materialize on first touch up
/// to the configured capacity.  Materialization is plumbing below the
/// model (the paper's arrays are unbounded), so it is not a shared access.
class LazyCellArray {
 public:
  LazyCellArray(std::string name, CellFamily family, std::int64_t init, std::size_t capacity);

  /// 1-based index.
  CellId at(Memory& mem, std::size_t index);
  std::optional<CellId> materialized(std::size_t index) const;
  std::size_t capacity() const { return cap_; }

 private:
  std::string name_;
  CellFamily family_;
  std::int64_t init_;
  std::unique_ptr<std::atomic<CellId>[]> slots_;
  std::size_t cap_;
  std::mutex grow_mu_;
};

/// 2-D variant with a fixed column count per row; rows materialize on
/// first touch as contiguous blocks.
class LazyCellMatrix {
 public:
  LazyCellMatrix(std::string name, CellFamily family, std::int64_t init, std::size_t row_capacity,
                 int cols);

  /// 1-based row and column.
  CellId at(Memory& mem, std::size_t row, int col);
  std::optional<CellId> materialized(std::size_t row, int col) const;
  int cols() const { return cols_; }
  std::size_t row_capacity() const { return cap_; }
  std::size_t materialized_rows() const;

 private:
  CellId row_base(Memory& mem, std::size_t row);

  std::string name_;
  CellFamily family_;
  std::int64_t init_;
  std::unique_ptr<std::atomic<CellId>[]> rows_;
  std::size_t cap_;
  int cols_;
  std::mutex grow_mu_;
};

/// Moir-Anderson splitter grid: f(p)-adaptive renaming with
/// f(p) = p(p+1)/2 and O(p) register accesses per participant.
/// Grid cell (r, d) is reached after r down-moves and d right-moves and
/// carries name (r+d)(r+d+1)/2 + d + 1.
class RenamingInstance {
 public:
  RenamingInstance(Memory& mem, const std::string& name, int nprocs);

  int nprocs() const { return nprocs_; }
  CellId x_cell(int row, int col) const;
  CellId y_cell(int row, int col) const;
  static std::int64_t grid_name(int row, int col) {
    int diag = row + col;
    return static_cast<std::int64_t>(diag) * (diag + 1) / 2 + col + 1;
  }
  static std::int64_t name_bound(std::int64_t participants) {
    return participants * (participants + 1) / 2;
  }

  /// Each process may acquire at most one name per instance.
  void claim(int proc);
  void record_name(int proc, std::int64_t name) { assigned_[static_cast<std::size_t>(proc)] = name; }
  std::int64_t assigned(int proc) const { return assigned_[static_cast<std::size_t>(proc)]; }

 private:
  int cell_index(int row, int col) const;

  int nprocs_;
  CellId first_x_;
  CellId first_y_;
  std::vector<bool> claimed_;
  std::vector<std::int64_t> assigned_;
  std::mutex claim_mu_;
};

/// Sub-machine: splitter walk through a renaming grid.
/// X := proc; if Y then move right; else Y := true; if X == proc stop
/// else move down.  At most one process stops per splitter, and with k
/// visitors at most k-1 leave on each side, which pins every stop inside
/// diagonal p-1.
struct RenameWalk {
  enum class Pc { WriteX, ReadY, WriteY, ReadX };
  Pc pc = Pc::WriteX;
  int row = 0;
  int col = 0;
  std::int64_t name = -1;

  void reset() { pc = Pc::WriteX; row = 0; col = 0; name = -1; }
  /// One access; true when the name is acquired.
  bool step(Memory& mem, int proc, RenamingInstance& grid);
};

// --- Register-level operations as history-producing machines. ---

class CounterIncMachine final : public StepMachine {
 public:
  CounterIncMachine(RwCounter& c, int proc) : StepMachine(proc), counter_(c) {}
  void step(Memory& mem) override {
    counter_.inc(mem, proc_);
    finish(OpResult::ok());
  }

 private:
  RwCounter& counter_;
};

class CounterReadMachine final : public StepMachine {
 public:
  CounterReadMachine(RwCounter& c, int proc) : StepMachine(proc), counter_(c) {}
  void step(Memory& mem) override {
    if (collect_.step(mem, proc_, counter_)) finish(OpResult::value(collect_.total(counter_)));
  }

 private:
  RwCounter& counter_;
  CounterCollect collect_;
};

class FaiMachine final : public StepMachine {
 public:
  FaiMachine(CellId cell, int proc) : StepMachine(proc), cell_(cell) {}
  void step(Memory& mem) override { finish(OpResult::value(mem.fai(proc_, cell_))); }

 private:
  CellId cell_;
};

class SwapMachine final : public StepMachine {
 public:
  SwapMachine(CellId cell, int proc, CellValue v) : StepMachine(proc), cell_(cell), value_(v) {}
  void step(Memory& mem) override;

 private:
  CellId cell_;
  CellValue value_;
};

class RegReadMachine final : public StepMachine {
 public:
  RegReadMachine(CellId cell, int proc) : StepMachine(proc), cell_(cell) {}
  void step(Memory& mem) override;

 private:
  CellId cell_;
};

class RegWriteMachine final : public StepMachine {
 public:
  RegWriteMachine(CellId cell, int proc, CellValue v) : StepMachine(proc), cell_(cell), value_(v) {}
  void step(Memory& mem) override {
    mem.write_item(proc_, cell_, value_);
    finish(OpResult::ok());
  }

 private:
  CellId cell_;
  CellValue value_;
};

class RenameMachine final : public StepMachine {
 public:
  RenameMachine(RenamingInstance& grid, int proc) : StepMachine(proc), grid_(grid) {}
  void step(Memory& mem) override {
    if (!claimed_) {
      grid_.claim(proc_);
      claimed_ = true;
    }
    if (walk_.step(mem, proc_, grid_)) finish(OpResult::value(walk_.name));
  }

 private:
  RenamingInstance& grid_;
  RenameWalk walk_;
  bool claimed_ = false;
};

/// Maps a raw register value to a history response: items stay integers,
/// the never-written mark reads as `empty`.  Used only by the raw
/// register operations above.
OpResult cell_value_result(CellValue v);

}  // namespace relaxedsync
