#include "relaxedsync/registers.hpp"

namespace relaxedsync {

RwCounter::RwCounter(Memory& mem, const std::string& name, int nprocs, std::int64_t base)
    : nprocs_(nprocs),
      base_(base),
      first_(mem.allocate_block(CellFamily::Int, name, 0, nprocs)),
      cached_(static_cast<std::size_t>(nprocs) + 1, 0) {}

void RwCounter::inc(Memory& mem, int proc) {
  std::int64_t next = ++cached_[static_cast<std::size_t>(proc)];
  mem.write_int(proc, entry(proc), next);
}

LazyCellArray::LazyCellArray(std::string name, CellFamily family, std::int64_t init,
                             std::size_t capacity)
    : name_(std::move(name)),
      family_(family),
      init_(init),
      slots_(new std::atomic<CellId>[capacity]),
      cap_(capacity) {
  for (std::size_t i = 0; i < cap_; ++i) slots_[i].store(0, std::memory_order_relaxed);
}

CellId LazyCellArray::at(Memory& mem, std::size_t index) {
  if (index < 1 || index > cap_)
    throw CapacityExceeded(name_ + " index " + std::to_string(index) + " exceeds capacity " +
                           std::to_string(cap_));
  std::atomic<CellId>& slot = slots_[index - 1];
  CellId id = slot.load(std::memory_order_acquire);
  if (id != 0) return id;
  std::lock_guard<std::mutex> lock(grow_mu_);
  id = slot.load(std::memory_order_acquire);
  if (id != 0) return id;
  id = mem.allocate(family_, name_ + "[" + std::to_string(index) + "]", init_);
  slot.store(id, std::memory_order_release);
  return id;
}

std::optional<CellId> LazyCellArray::materialized(std::size_t index) const {
  if (index < 1 || index > cap_) return std::nullopt;
  CellId id = slots_[index - 1].load(std::memory_order_acquire);
  if (id == 0) return std::nullopt;
  return id;
}

LazyCellMatrix::LazyCellMatrix(std::string name, CellFamily family, std::int64_t init,
                               std::size_t row_capacity, int cols)
    : name_(std::move(name)),
      family_(family),
      init_(init),
      rows_(new std::atomic<CellId>[row_capacity]),
      cap_(row_capacity),
      cols_(cols) {
  for (std::size_t i = 0; i < cap_; ++i) rows_[i].store(0, std::memory_order_relaxed);
}

CellId LazyCellMatrix::row_base(Memory& mem, std::size_t row) {
  if (row < 1 || row > cap_)
    throw CapacityExceeded(name_ + " row " + std::to_string(row) + " exceeds capacity " +
                           std::to_string(cap_));
  std::atomic<CellId>& slot = rows_[row - 1];
  CellId base = slot.load(std::memory_order_acquire);
  if (base != 0) return base;
  std::lock_guard<std::mutex> lock(grow_mu_);
  base = slot.load(std::memory_order_acquire);
  if (base != 0) return base;
  base = mem.allocate_block(family_, name_ + "[" + std::to_string(row) + "]", init_, cols_);
  slot.store(base, std::memory_order_release);
  return base;
}

CellId LazyCellMatrix::at(Memory& mem, std::size_t row, int col) {
  return row_base(mem, row) + static_cast<CellId>(col - 1);
}

std::optional<CellId> LazyCellMatrix::materialized(std::size_t row, int col) const {
  if (row < 1 || row > cap_ || col < 1 || col > cols_) return std::nullopt;
  CellId base = rows_[row - 1].load(std::memory_order_acquire);
  if (base == 0) return std::nullopt;
  return base + static_cast<CellId>(col - 1);
}

std::size_t LazyCellMatrix::materialized_rows() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < cap_; ++i)
    if (rows_[i].load(std::memory_order_acquire) != 0) count = i + 1;
  return count;
}

int RenamingInstance::cell_index(int row, int col) const {
  // Triangular layout over diagonals: (r, d) lives at offset
  // T(r+d) + d where T(k) = k(k+1)/2.
  int diag = row + col;
  return diag * (diag + 1) / 2 + col;
}

RenamingInstance::RenamingInstance(Memory& mem, const std::string& name, int nprocs)
    : nprocs_(nprocs),
      claimed_(static_cast<std::size_t>(nprocs) + 1, false),
      assigned_(static_cast<std::size_t>(nprocs) + 1, -1) {
  int cells = nprocs * (nprocs + 1) / 2;
  first_x_ = mem.allocate_block(CellFamily::Int, name + ".X", 0, cells);
  first_y_ = mem.allocate_block(CellFamily::Int, name + ".Y", 0, cells);
}

CellId RenamingInstance::x_cell(int row, int col) const {
  if (row + col > nprocs_ - 1)
    throw ContractViolation("renaming grid overrun: more participants than the instance allows");
  return first_x_ + static_cast<CellId>(cell_index(row, col));
}

CellId RenamingInstance::y_cell(int row, int col) const {
  if (row + col > nprocs_ - 1)
    throw ContractViolation("renaming grid overrun: more participants than the instance allows");
  return first_y_ + static_cast<CellId>(cell_index(row, col));
}

void RenamingInstance::claim(int proc) {
  std::lock_guard<std::mutex> lock(claim_mu_);
  if (claimed_[static_cast<std::size_t>(proc)])
    throw ContractViolation("process " + std::to_string(proc) +
                            " invoked rename twice on one instance");
  claimed_[static_cast<std::size_t>(proc)] = true;
}

bool RenameWalk::step(Memory& mem, int proc, RenamingInstance& grid) {
  switch (pc) {
    case Pc::WriteX:
      mem.write_int(proc, grid.x_cell(row, col), proc);
      pc = Pc::ReadY;
      return false;
    case Pc::ReadY:
      if (mem.read_int(proc, grid.y_cell(row, col)) != 0) {
        ++col;  // right
        pc = Pc::WriteX;
      } else {
        pc = Pc::WriteY;
      }
      return false;
    case Pc::WriteY:
      mem.write_int(proc, grid.y_cell(row, col), 1);
      pc = Pc::ReadX;
      return false;
    case Pc::ReadX:
      if (mem.read_int(proc, grid.x_cell(row, col)) == proc) {
        name = RenamingInstance::grid_name(row, col);
        grid.record_name(proc, name);
        return true;
      }
      ++row;  // down
      pc = Pc::WriteX;
      return false;
  }
  return false;
}

void SwapMachine::step(Memory& mem) {
  finish(cell_value_result(mem.swap_item(proc_, cell_, value_)));
}

void RegReadMachine::step(Memory& mem) {
  finish(cell_value_result(mem.read_item(proc_, cell_)));
}

OpResult cell_value_result(CellValue v) {
  if (v.is_item()) return OpResult::value(v.payload());
  if (v.is_bottom()) return OpResult::empty();
  return OpResult::weak_empty();  // taken mark; raw register tests only
}

}  // namespace relaxedsync
