#include "relaxedsync/memory.hpp"

#include <algorithm>
#include <sstream>

namespace relaxedsync {

const char* access_kind_name(AccessKind k) {
  switch (k) {
    case AccessKind::Read: return "read";
    case AccessKind::Write: return "write";
    case AccessKind::Fai: return "fai";
    case AccessKind::Swap: return "swap";
  }
  return "?";
}

Recorder::Recorder(int nprocs, std::string impl)
    : nprocs_(nprocs), impl_(std::move(impl)), per_proc_(static_cast<std::size_t>(nprocs) + 1) {}

int Recorder::begin_op(int proc, OpKind kind, std::optional<std::int64_t> arg) {
  PerProc& pp = per_proc_[static_cast<std::size_t>(proc)];
  if (pp.current_op >= 0)
    throw ContractViolation("process " + std::to_string(proc) +
                            " invoked an operation while one is in flight");
  int index = next_op_.fetch_add(1, std::memory_order_relaxed);
  std::uint64_t seq = seq_.fetch_add(1, std::memory_order_relaxed);

  Event e;
  e.seq = seq;
  e.proc = proc;
  e.is_inv = true;
  e.op = kind;
  e.arg = arg;
  e.op_index = index;
  pp.events.push_back(e);

  OpInfo info;
  info.index = index;
  info.proc = proc;
  info.kind = kind;
  info.arg = arg;
  info.inv_seq = seq;
  pp.ops.push_back(info);
  pp.current_op = index;
  return index;
}

void Recorder::end_op(int proc, OpResult result) {
  PerProc& pp = per_proc_[static_cast<std::size_t>(proc)];
  if (pp.current_op < 0) throw ContractViolation("response without pending operation");
  std::uint64_t seq = seq_.fetch_add(1, std::memory_order_relaxed);

  Event e;
  e.seq = seq;
  e.proc = proc;
  e.is_inv = false;
  e.op = pp.ops.back().kind;
  e.result = result;
  e.op_index = pp.current_op;
  pp.events.push_back(e);

  OpInfo& info = pp.ops.back();
  info.result = result;
  info.res_seq = seq;
  info.completed = true;
  pp.current_op = -1;
}

void Recorder::log_access(int proc, AccessKind kind, CellId cell, std::int64_t before,
                          std::int64_t after) {
  PerProc& pp = per_proc_[static_cast<std::size_t>(proc)];
  std::uint64_t seq = seq_.fetch_add(1, std::memory_order_relaxed);
  if (!pp.ops.empty() && pp.current_op >= 0) pp.ops.back().access_count++;
  if (!log_accesses_) return;
  AccessRecord rec;
  rec.seq = seq;
  rec.proc = proc;
  rec.kind = kind;
  rec.cell = cell;
  rec.before = before;
  rec.after = after;
  rec.op_index = pp.current_op;
  pp.accesses.push_back(rec);
}

History Recorder::history() const {
  std::vector<Event> events;
  for (const PerProc& pp : per_proc_)
    events.insert(events.end(), pp.events.begin(), pp.events.end());
  return History(nprocs_, impl_, std::move(events));
}

std::vector<AccessRecord> Recorder::sorted_accesses() const {
  std::vector<AccessRecord> out;
  for (const PerProc& pp : per_proc_)
    out.insert(out.end(), pp.accesses.begin(), pp.accesses.end());
  std::sort(out.begin(), out.end(),
            [](const AccessRecord& a, const AccessRecord& b) { return a.seq < b.seq; });
  return out;
}

std::vector<Recorder::OpInfo> Recorder::op_infos() const {
  std::vector<OpInfo> out;
  for (const PerProc& pp : per_proc_) out.insert(out.end(), pp.ops.begin(), pp.ops.end());
  std::sort(out.begin(), out.end(),
            [](const OpInfo& a, const OpInfo& b) { return a.index < b.index; });
  return out;
}

std::uint64_t Recorder::total_accesses() const {
  std::uint64_t total = 0;
  for (const PerProc& pp : per_proc_)
    for (const OpInfo& op : pp.ops) total += op.access_count;
  return total;
}

std::string Recorder::access_log_text(const Memory& mem) const {
  std::ostringstream out;
  std::uint64_t seq = 0;
  for (const AccessRecord& rec : sorted_accesses()) {
    out << seq++ << ' ' << rec.proc << ' ' << access_kind_name(rec.kind) << ' '
        << mem.name(rec.cell) << ' ' << mem.render_value(rec.cell, rec.before) << ' '
        << mem.render_value(rec.cell, rec.after) << "\n";
  }
  return out.str();
}

Memory::Memory(std::size_t max_cells) : max_cells_(max_cells) {}

CellId Memory::allocate(CellFamily family, std::string name, std::int64_t init) {
  std::lock_guard<std::mutex> lock(alloc_mu_);
  if (cells_.size() >= max_cells_)
    throw CapacityExceeded("register space exhausted at " + std::to_string(cells_.size()) +
                           " cells");
  cells_.emplace_back(init, family, std::move(name));
  return static_cast<CellId>(cells_.size());
}

CellId Memory::allocate_block(CellFamily family, const std::string& name_prefix,
                              std::int64_t init, int count) {
  std::lock_guard<std::mutex> lock(alloc_mu_);
  if (cells_.size() + static_cast<std::size_t>(count) > max_cells_)
    throw CapacityExceeded("register space exhausted");
  CellId first = static_cast<CellId>(cells_.size() + 1);
  for (int c = 1; c <= count; ++c)
    cells_.emplace_back(init, family, name_prefix + "[" + std::to_string(c) + "]");
  return first;
}

void Memory::log(int proc, AccessKind k, CellId cell, std::int64_t before, std::int64_t after) {
  if (rec_ != nullptr) rec_->log_access(proc, k, cell, before, after);
}

std::int64_t Memory::read_int(int proc, CellId id) {
  std::int64_t v = cell(id).value.load(std::memory_order_seq_cst);
  log(proc, AccessKind::Read, id, v, v);
  return v;
}

void Memory::write_int(int proc, CellId id, std::int64_t v) {
  std::int64_t before = cell(id).value.exchange(v, std::memory_order_seq_cst);
  log(proc, AccessKind::Write, id, before, v);
}

std::int64_t Memory::fai(int proc, CellId id) {
  std::int64_t before = cell(id).value.fetch_add(1, std::memory_order_seq_cst);
  log(proc, AccessKind::Fai, id, before, before + 1);
  return before;
}

CellValue Memory::read_item(int proc, CellId id) {
  std::int64_t v = cell(id).value.load(std::memory_order_seq_cst);
  log(proc, AccessKind::Read, id, v, v);
  return CellValue::decode(v);
}

void Memory::write_item(int proc, CellId id, CellValue v) {
  std::int64_t before = cell(id).value.exchange(v.encode(), std::memory_order_seq_cst);
  log(proc, AccessKind::Write, id, before, v.encode());
}

CellValue Memory::swap_item(int proc, CellId id, CellValue v) {
  std::int64_t before = cell(id).value.exchange(v.encode(), std::memory_order_seq_cst);
  log(proc, AccessKind::Swap, id, before, v.encode());
  return CellValue::decode(before);
}

std::size_t Memory::cell_count() const { return cells_.size(); }

const std::string& Memory::name(CellId id) const { return cell(id).name; }

CellFamily Memory::family(CellId id) const { return cell(id).family; }

std::int64_t Memory::peek(CellId id) const {
  return cell(id).value.load(std::memory_order_seq_cst);
}

void Memory::poke(CellId id, std::int64_t v) {
  cell(id).value.store(v, std::memory_order_seq_cst);
}

std::string Memory::render_value(CellId id, std::int64_t raw) const {
  if (cell(id).family == CellFamily::Item) return CellValue::decode(raw).to_string();
  return std::to_string(raw);
}

}  // namespace relaxedsync
