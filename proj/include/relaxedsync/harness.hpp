#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "relaxedsync/checker.hpp"
#include "relaxedsync/history.hpp"
#include "relaxedsync/memory.hpp"
#include "relaxedsync/structure.hpp"

namespace relaxedsync {

/// Scripted operation on a structure: insert(item) or remove.
struct ProgramOp {
  bool insert = false;
  std::int64_t item = 0;
};

/// Per-process scripts.  Items must be unique across the program.
struct Program {
  std::vector<std::vector<ProgramOp>> scripts;  // scripts[i] is process i+1

  int nprocs() const { return static_cast<int>(scripts.size()); }
  std::size_t total_ops() const;
  void validate() const;

  /// "push 1, pop ; pop" — processes separated by ';', ops by ','.
  /// Insert ops are push/enq/put with an item; removals pop/deq/take/steal.
  static Program parse(const std::string& text);
  std::string to_string() const;
};

/// One schedulable operation for the sim controller.
struct SimOp {
  OpKind kind = OpKind::Push;
  std::optional<std::int64_t> arg;
  std::function<std::unique_ptr<StepMachine>()> make;
};

/// Everything one deterministic run needs, rebuilt fresh per replay.
struct SimWorld {
  Memory memory;
  Recorder recorder;
  std::unique_ptr<Structure> structure;     // null for register-level programs
  std::vector<std::vector<SimOp>> program;  // program[proc], slot 0 unused
  std::vector<std::shared_ptr<void>> extras;  // keeps register-level objects alive

  SimWorld(int nprocs, const std::string& impl, std::size_t max_cells = 1u << 22)
      : memory(max_cells), recorder(nprocs, impl) {
    memory.attach(&recorder);
    program.resize(static_cast<std::size_t>(nprocs) + 1);
  }
};

using WorldFactory = std::function<std::unique_ptr<SimWorld>()>;

/// Builds a world running `program` against a named structure.
std::unique_ptr<SimWorld> make_structure_world(const std::string& impl, const Program& program,
                                               const StructureConfig& config, bool log_accesses);
WorldFactory structure_world_factory(std::string impl, Program program, StructureConfig config,
                                     bool log_accesses);

/// Single-owner deterministic scheduler: advances one process by exactly
/// one shared access per step.
class SimController {
 public:
  explicit SimController(SimWorld& world);

  bool proc_available(int proc) const;
  std::vector<int> available() const;
  bool finished() const;
  std::uint64_t steps_taken() const { return steps_; }

  void step(int proc);
  void crash(int proc);  // the process takes no further steps

 private:
  struct ProcState {
    std::size_t next_op = 0;
    std::unique_ptr<StepMachine> machine;
    bool crashed = false;
  };

  SimWorld& world_;
  std::vector<ProcState> procs_;
  std::uint64_t steps_ = 0;
};

/// Who takes the next step; negative entries crash a process.
struct Schedule {
  std::vector<int> steps;

  std::string to_string() const;
  static Schedule parse(const std::string& text);
};

/// Deterministic replay: identical schedule, identical world factory,
/// byte-identical trace.
std::unique_ptr<SimWorld> replay(const WorldFactory& factory, const Schedule& schedule);

/// Random maximal schedule (uniform choice among available processes).
Schedule random_schedule(const WorldFactory& factory, std::uint64_t seed,
                         std::uint64_t max_steps = 1u << 20);

struct EnumerateOptions {
  std::uint64_t max_steps = 22;  // total shared steps per schedule
  bool include_crashes = false;
  std::uint64_t max_schedules = 0;  // 0 = unlimited
};

struct EnumerationStats {
  std::uint64_t schedules = 0;
  std::uint64_t distinct_histories = 0;
};

/// DFS over all maximal schedules.  `visit` sees every schedule with its
/// finished world and whether the history is new; returning false stops
/// the walk.  Throws BoundExceeded when a schedule would exceed
/// max_steps.
EnumerationStats enumerate_schedules(
    const WorldFactory& factory, const EnumerateOptions& options,
    const std::function<bool(const Schedule&, SimWorld&, bool)>& visit);

/// Stochastic mixed workload for the live-thread stress driver.
struct Workload {
  int nprocs = 2;
  std::uint64_t total_ops = 1000;
  double insert_ratio = 0.5;
  std::uint64_t seed = 1;
};

struct StressOutcome {
  History history;
  std::vector<Recorder::OpInfo> ops;
  bool aborted = false;
  std::string error;
};

StressOutcome run_stress(const std::string& impl, const Workload& workload,
                         const StructureConfig& config, bool log_accesses = false);

/// Access-pattern audit: read-modify-write usage, reads after the
/// first (any / first effectful) write inside one operation, redundant
/// taken-mark writes.
struct AuditReport {
  std::uint64_t ops_audited = 0;
  std::uint64_t rmw_accesses = 0;
  std::uint64_t ops_with_rmw = 0;
  std::uint64_t reads_after_any_write = 0;
  std::uint64_t ops_with_read_after_any_write = 0;
  std::uint64_t reads_after_effectful_write = 0;
  std::uint64_t ops_with_read_after_effectful_write = 0;
  std::uint64_t redundant_taken_writes = 0;

  std::string summary() const;
};

AuditReport audit_access_patterns(const std::vector<AccessRecord>& accesses);

/// Per-pass statistics of a scan-based dequeue, reconstructed from its
/// access log (passes are delimited by reads of the tail register).
struct DeqPassStats {
  int passes = 0;
  std::vector<std::int64_t> tail_observed;
  std::vector<std::uint64_t> accesses_per_pass;
  std::vector<std::int64_t> taken_per_pass;  // swaps/writes that hit an already-taken cell
};

DeqPassStats analyze_deq_passes(const std::vector<AccessRecord>& op_accesses, const Memory& mem);

/// Named scripted runs reproducing the paper's figures.
/// fig8: tail-chasing schedule on the naive queue (empty return).
/// fig8weak: the same history with empty replaced by weak-empty.
/// weakempty: a genuine weak-empty execution of the interval queue.
struct DemoRun {
  std::string impl;
  History history;
  std::string trace_text;
};
DemoRun run_demo(const std::string& name, const StructureConfig& config = {});
const std::vector<std::string>& demo_names();

/// Replaces `empty` responses of one process's removals by `weakempty`.
History substitute_weak_empty(const History& h, int proc);

}  // namespace relaxedsync
