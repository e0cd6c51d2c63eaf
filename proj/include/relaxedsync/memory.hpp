#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "relaxedsync/history.hpp"
#include "relaxedsync/values.hpp"

namespace relaxedsync {

/// Register handle. 0 is reserved for "no cell".
using CellId = std::uint32_t;

enum class AccessKind { Read, Write, Fai, Swap };

const char* access_kind_name(AccessKind k);

/// How a cell's value is rendered in the access log.
enum class CellFamily { Int, Item };

struct AccessRecord {
  std::uint64_t seq = 0;
  int proc = 0;
  AccessKind kind = AccessKind::Read;
  CellId cell = 0;
  std::int64_t before = 0;
  std::int64_t after = 0;
  int op_index = -1;
};

class Memory;

/// Records invocation/response events and (optionally) every shared
/// access.  One global atomic counter stamps both, which gives the total
/// order the checkers need.  Per-process buffers keep live-mode recording
/// contention-free; each process id must be driven by at most one thread.
class Recorder {
 public:
  Recorder(int nprocs, std::string impl);

  void set_access_logging(bool on) { log_accesses_ = on; }
  bool access_logging() const { return log_accesses_; }

  int begin_op(int proc, OpKind kind, std::optional<std::int64_t> arg);
  void end_op(int proc, OpResult result);
  void log_access(int proc, AccessKind kind, CellId cell, std::int64_t before,
                  std::int64_t after);

  int nprocs() const { return nprocs_; }
  const std::string& impl() const { return impl_; }
  int current_op(int proc) const { return per_proc_[static_cast<std::size_t>(proc)].current_op; }

  struct OpInfo {
    int index = -1;
    int proc = 0;
    OpKind kind = OpKind::Push;
    std::optional<std::int64_t> arg;
    std::optional<OpResult> result;
    std::uint64_t inv_seq = 0;
    std::uint64_t res_seq = 0;
    bool completed = false;
    std::uint32_t access_count = 0;
  };

  History history() const;
  std::vector<AccessRecord> sorted_accesses() const;
  std::vector<OpInfo> op_infos() const;  // sorted by op index
  std::uint64_t total_accesses() const;

  /// Access-log file body: `seq proc kind cell_id value_before value_after`,
  /// seq renumbered to run from 0.  Needs the memory for cell names.
  std::string access_log_text(const Memory& mem) const;

 private:
  struct PerProc {
    std::vector<Event> events;
    std::vector<AccessRecord> accesses;
    std::vector<OpInfo> ops;
    int current_op = -1;
  };

  int nprocs_;
  std::string impl_;
  bool log_accesses_ = false;
  std::atomic<std::uint64_t> seq_{0};
  std::atomic<int> next_op_{0};
  std::vector<PerProc> per_proc_;  // index by proc id, slot 0 unused
};

/// The shared-memory register space.  Cells are atomic in both modes: the
/// stress driver hits them from real threads, the sim controller from a
/// single thread, through the identical interface.  Every access performs
/// exactly one atomic operation on the cell.
class Memory {
 public:
  explicit Memory(std::size_t max_cells = 1u << 22);

  void attach(Recorder* rec) { rec_ = rec; }

  CellId allocate(CellFamily family, std::string name, std::int64_t init);
  /// Allocates `count` cells with contiguous ids; returns the first id.
  CellId allocate_block(CellFamily family, const std::string& name_prefix,
                        std::int64_t init, int count);

  std::int64_t read_int(int proc, CellId cell);
  void write_int(int proc, CellId cell, std::int64_t v);
  std::int64_t fai(int proc, CellId cell);

  CellValue read_item(int proc, CellId cell);
  void write_item(int proc, CellId cell, CellValue v);
  CellValue swap_item(int proc, CellId cell, CellValue v);

  std::size_t cell_count() const;
  const std::string& name(CellId cell) const;
  CellFamily family(CellId cell) const;

  // Unlogged inspection; for quiescent sweeps and test setup only.
  std::int64_t peek(CellId cell) const;
  void poke(CellId cell, std::int64_t v);

  std::string render_value(CellId cell, std::int64_t raw) const;

 private:
  struct Cell {
    std::atomic<std::int64_t> value;
    std::int64_t init;
    CellFamily family;
    std::string name;
    Cell(std::int64_t v, CellFamily f, std::string n)
        : value(v), init(v), family(f), name(std::move(n)) {}
  };

  Cell& cell(CellId id) { return cells_[id - 1]; }
  const Cell& cell(CellId id) const { return cells_[id - 1]; }
  void log(int proc, AccessKind k, CellId cell, std::int64_t before, std::int64_t after);

  std::deque<Cell> cells_;
  std::mutex alloc_mu_;
  std::size_t max_cells_;
  Recorder* rec_ = nullptr;
};

}  // namespace relaxedsync
