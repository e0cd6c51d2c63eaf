#include "relaxedsync/harness.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <map>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace relaxedsync {

std::size_t Program::total_ops() const {
  std::size_t n = 0;
  for (const auto& s : scripts) n += s.size();
  return n;
}

void Program::validate() const {
  std::unordered_set<std::int64_t> items;
  for (const auto& script : scripts) {
    for (const ProgramOp& op : script) {
      if (!op.insert) continue;
      if (op.item < 1) throw ContractViolation("items must be positive integers");
      if (!items.insert(op.item).second)
        throw ContractViolation("item " + std::to_string(op.item) +
                                " inserted more than once; items are unique per execution");
    }
  }
}

Program Program::parse(const std::string& text) {
  Program program;
  std::istringstream procs(text);
  std::string script;
  while (std::getline(procs, script, ';')) {
    std::vector<ProgramOp> ops;
    std::istringstream ops_in(script);
    std::string tok;
    while (std::getline(ops_in, tok, ',')) {
      std::istringstream op_in(tok);
      std::string word;
      op_in >> word;
      if (word.empty()) continue;
      auto kind = op_kind_from_name(word);
      if (!kind.has_value()) throw TraceParseError("unknown operation in program: " + word);
      ProgramOp op;
      if (*kind == OpKind::Push || *kind == OpKind::Enq || *kind == OpKind::Put) {
        op.insert = true;
        if (!(op_in >> op.item))
          throw TraceParseError("insert operation needs an item: " + tok);
      } else if (*kind == OpKind::Pop || *kind == OpKind::Deq || *kind == OpKind::Take ||
                 *kind == OpKind::Steal) {
        op.insert = false;
      } else {
        throw TraceParseError("program operations must be inserts or removals: " + word);
      }
      ops.push_back(op);
    }
    program.scripts.push_back(std::move(ops));
  }
  while (!program.scripts.empty() && program.scripts.back().empty()) program.scripts.pop_back();
  if (program.scripts.empty()) throw TraceParseError("empty program");
  program.validate();
  return program;
}

std::string Program::to_string() const {
  std::ostringstream out;
  for (std::size_t p = 0; p < scripts.size(); ++p) {
    if (p > 0) out << "; ";
    for (std::size_t i = 0; i < scripts[p].size(); ++i) {
      if (i > 0) out << ", ";
      if (scripts[p][i].insert)
        out << "insert " << scripts[p][i].item;
      else
        out << "remove";
    }
  }
  return out.str();
}

std::unique_ptr<SimWorld> make_structure_world(const std::string& impl, const Program& program,
                                               const StructureConfig& config, bool log_accesses) {
  program.validate();
  StructureConfig cfg = config;
  cfg.nprocs = std::max(cfg.nprocs, program.nprocs());
  auto world = std::make_unique<SimWorld>(cfg.nprocs, impl);
  world->recorder.set_access_logging(log_accesses);
  world->structure = make_structure(impl, world->memory, cfg);
  Structure* s = world->structure.get();
  for (int proc = 1; proc <= program.nprocs(); ++proc) {
    for (const ProgramOp& op : program.scripts[static_cast<std::size_t>(proc - 1)]) {
      SimOp sim;
      if (op.insert) {
        if (s->owner().has_value() && proc != *s->owner())
          throw ContractViolation("only the owner may insert into a work-stealing pool");
        sim.kind = s->insert_kind(proc);
        sim.arg = op.item;
        std::int64_t item = op.item;
        sim.make = [s, proc, item] { return s->make_insert(proc, item); };
      } else {
        sim.kind = s->remove_kind(proc);
        sim.make = [s, proc] { return s->make_remove(proc); };
      }
      world->program[static_cast<std::size_t>(proc)].push_back(std::move(sim));
    }
  }
  return world;
}

WorldFactory structure_world_factory(std::string impl, Program program, StructureConfig config,
                                     bool log_accesses) {
  return [impl = std::move(impl), program = std::move(program), config, log_accesses] {
    return make_structure_world(impl, program, config, log_accesses);
  };
}

SimController::SimController(SimWorld& world)
    : world_(world), procs_(world.program.size()) {}

bool SimController::proc_available(int proc) const {
  const ProcState& ps = procs_[static_cast<std::size_t>(proc)];
  if (ps.crashed) return false;
  return ps.machine != nullptr ||
         ps.next_op < world_.program[static_cast<std::size_t>(proc)].size();
}

std::vector<int> SimController::available() const {
  std::vector<int> out;
  for (int proc = 1; proc < static_cast<int>(procs_.size()); ++proc)
    if (proc_available(proc)) out.push_back(proc);
  return out;
}

bool SimController::finished() const { return available().empty(); }

void SimController::step(int proc) {
  if (!proc_available(proc))
    throw ContractViolation("invalid schedule: process " + std::to_string(proc) +
                            " has no step to take");
  ProcState& ps = procs_[static_cast<std::size_t>(proc)];
  if (ps.machine == nullptr) {
    const SimOp& op = world_.program[static_cast<std::size_t>(proc)][ps.next_op];
    world_.recorder.begin_op(proc, op.kind, op.arg);
    ps.machine = op.make();
  }
  ps.machine->step(world_.memory);
  ++steps_;
  if (ps.machine->done()) {
    world_.recorder.end_op(proc, ps.machine->result());
    ps.machine.reset();
    ++ps.next_op;
  }
}

void SimController::crash(int proc) {
  procs_[static_cast<std::size_t>(proc)].crashed = true;
  procs_[static_cast<std::size_t>(proc)].machine.reset();
}

std::string Schedule::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) out << ' ';
    out << steps[i];
  }
  return out.str();
}

Schedule Schedule::parse(const std::string& text) {
  Schedule s;
  std::istringstream in(text);
  int v = 0;
  while (in >> v) s.steps.push_back(v);
  return s;
}

std::unique_ptr<SimWorld> replay(const WorldFactory& factory, const Schedule& schedule) {
  auto world = factory();
  SimController controller(*world);
  for (int step : schedule.steps) {
    if (step < 0)
      controller.crash(-step);
    else
      controller.step(step);
  }
  return world;
}

Schedule random_schedule(const WorldFactory& factory, std::uint64_t seed,
                         std::uint64_t max_steps) {
  auto world = factory();
  SimController controller(*world);
  std::mt19937_64 rng(seed);
  Schedule schedule;
  while (!controller.finished()) {
    if (schedule.steps.size() >= max_steps)
      throw BoundExceeded("random schedule exceeded the step bound");
    std::vector<int> options = controller.available();
    int pick = options[rng() % options.size()];
    controller.step(pick);
    schedule.steps.push_back(pick);
  }
  return schedule;
}

namespace {

std::vector<int> schedule_options(const SimController& controller, bool include_crashes) {
  std::vector<int> options = controller.available();
  if (include_crashes) {
    std::size_t n = options.size();
    for (std::size_t i = 0; i < n; ++i) options.push_back(-options[i]);
  }
  return options;
}

void apply_choice(SimController& controller, int choice) {
  if (choice < 0)
    controller.crash(-choice);
  else
    controller.step(choice);
}

}  // namespace

EnumerationStats enumerate_schedules(
    const WorldFactory& factory, const EnumerateOptions& options,
    const std::function<bool(const Schedule&, SimWorld&, bool)>& visit) {
  EnumerationStats stats;
  std::unordered_set<std::string> seen_histories;

  struct Level {
    std::vector<int> options;
    std::size_t chosen = 0;
  };
  std::vector<Level> path;

  auto world = factory();
  auto controller = std::make_unique<SimController>(*world);

  while (true) {
    // Extend the current prefix to a maximal schedule, always taking the
    // first untried option at the deepest level.
    while (!controller->finished()) {
      std::uint64_t real_steps = 0;
      for (const Level& l : path)
        if (l.options[l.chosen] > 0) ++real_steps;
      if (real_steps >= options.max_steps)
        throw BoundExceeded("schedule enumeration exceeded the step bound of " +
                            std::to_string(options.max_steps));
      Level level;
      level.options = schedule_options(*controller, options.include_crashes);
      apply_choice(*controller, level.options[0]);
      path.push_back(std::move(level));
    }

    ++stats.schedules;
    if (options.max_schedules != 0 && stats.schedules > options.max_schedules)
      throw BoundExceeded("schedule enumeration exceeded the schedule cap");

    Schedule schedule;
    for (const Level& l : path) schedule.steps.push_back(l.options[l.chosen]);
    std::string trace = world->recorder.history().to_trace();
    bool fresh = seen_histories.insert(trace).second;
    if (fresh) ++stats.distinct_histories;
    if (!visit(schedule, *world, fresh)) return stats;

    // Backtrack to the deepest level with an untried option.
    while (!path.empty() && path.back().chosen + 1 == path.back().options.size())
      path.pop_back();
    if (path.empty()) return stats;
    ++path.back().chosen;

    // Rebuild the world along the new prefix.
    world = factory();
    controller = std::make_unique<SimController>(*world);
    for (const Level& l : path) apply_choice(*controller, l.options[l.chosen]);
  }
}

StressOutcome run_stress(const std::string& impl, const Workload& workload,
                         const StructureConfig& config, bool log_accesses) {
  StructureConfig cfg = config;
  cfg.nprocs = workload.nprocs;
  auto world = std::make_unique<SimWorld>(cfg.nprocs, impl);
  world->recorder.set_access_logging(log_accesses);
  world->structure = make_structure(impl, world->memory, cfg);
  Structure* s = world->structure.get();

  std::atomic<bool> abort{false};
  std::mutex error_mu;
  std::string error;

  std::barrier start_line(workload.nprocs);
  std::vector<std::thread> threads;
  for (int proc = 1; proc <= workload.nprocs; ++proc) {
    threads.emplace_back([&, proc] {
      std::mt19937_64 rng(workload.seed * 1000003u + static_cast<std::uint64_t>(proc));
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      std::uint64_t ops = workload.total_ops / static_cast<std::uint64_t>(workload.nprocs);
      if (proc <= static_cast<int>(workload.total_ops % workload.nprocs)) ++ops;
      std::int64_t next_item = proc;  // proc-strided items stay unique
      start_line.arrive_and_wait();
      try {
        for (std::uint64_t i = 0; i < ops && !abort.load(std::memory_order_relaxed); ++i) {
          bool insert = coin(rng) < workload.insert_ratio;
          if (s->owner().has_value() && proc != *s->owner()) insert = false;
          std::unique_ptr<StepMachine> machine;
          if (insert) {
            world->recorder.begin_op(proc, s->insert_kind(proc), next_item);
            machine = s->make_insert(proc, next_item);
            next_item += workload.nprocs;
          } else {
            world->recorder.begin_op(proc, s->remove_kind(proc), std::nullopt);
            machine = s->make_remove(proc);
          }
          OpResult r = run_to_completion(*machine, world->memory);
          world->recorder.end_op(proc, r);
        }
      } catch (const std::exception& e) {
        abort.store(true, std::memory_order_relaxed);
        std::lock_guard<std::mutex> lock(error_mu);
        if (error.empty()) error = e.what();
      }
    });
  }
  for (std::thread& t : threads) t.join();

  StressOutcome outcome{world->recorder.history(), world->recorder.op_infos(),
                        abort.load(), error};
  return outcome;
}

AuditReport audit_access_patterns(const std::vector<AccessRecord>& accesses) {
  AuditReport report;
  std::map<int, std::vector<const AccessRecord*>> by_op;
  for (const AccessRecord& a : accesses)
    if (a.op_index >= 0) by_op[a.op_index].push_back(&a);

  const std::int64_t taken = CellValue::taken_mark().encode();
  for (auto& [op, recs] : by_op) {
    std::sort(recs.begin(), recs.end(),
              [](const AccessRecord* a, const AccessRecord* b) { return a->seq < b->seq; });
    ++report.ops_audited;
    bool weak_raw = false, strict_raw = false, rmw = false;
    bool wrote = false, wrote_effectful = false;
    for (const AccessRecord* a : recs) {
      switch (a->kind) {
        case AccessKind::Fai:
        case AccessKind::Swap:
          ++report.rmw_accesses;
          rmw = true;
          break;
        case AccessKind::Write:
          wrote = true;
          if (a->before != a->after) wrote_effectful = true;
          if (a->before == taken && a->after == taken) ++report.redundant_taken_writes;
          break;
        case AccessKind::Read:
          if (wrote) {
            ++report.reads_after_any_write;
            strict_raw = true;
          }
          if (wrote_effectful) {
            ++report.reads_after_effectful_write;
            weak_raw = true;
          }
          break;
      }
    }
    if (rmw) ++report.ops_with_rmw;
    if (strict_raw) ++report.ops_with_read_after_any_write;
    if (weak_raw) ++report.ops_with_read_after_effectful_write;
  }
  return report;
}

std::string AuditReport::summary() const {
  std::ostringstream out;
  out << "ops=" << ops_audited << " rmw=" << rmw_accesses << " (ops " << ops_with_rmw << ")"
      << " read-after-write=" << reads_after_any_write << " (ops " << ops_with_read_after_any_write
      << ")"
      << " read-after-effectful-write=" << reads_after_effectful_write << " (ops "
      << ops_with_read_after_effectful_write << ")"
      << " redundant-taken-writes=" << redundant_taken_writes;
  return out.str();
}

DeqPassStats analyze_deq_passes(const std::vector<AccessRecord>& op_accesses, const Memory& mem) {
  DeqPassStats stats;
  const std::int64_t taken = CellValue::taken_mark().encode();
  auto new_pass = [&stats] {
    stats.tail_observed.push_back(0);
    stats.accesses_per_pass.push_back(0);
    stats.taken_per_pass.push_back(0);
    ++stats.passes;
  };
  for (const AccessRecord& a : op_accesses) {
    std::string name = mem.name(a.cell);
    std::size_t dot = name.rfind('.');
    if (dot != std::string::npos) name = name.substr(dot + 1);  // strip lane prefixes
    // A pass opens with the tail read: the register itself, or the first
    // entry of a counter collect.
    bool pass_start =
        a.kind == AccessKind::Read && (name == "Tail" || name == "Tail[1]");
    if (pass_start || stats.passes == 0) new_pass();
    ++stats.accesses_per_pass.back();
    if (a.kind == AccessKind::Read) {
      if (name == "Tail")
        stats.tail_observed.back() = a.before - 1;
      else if (name.rfind("Tail[", 0) == 0)
        stats.tail_observed.back() += a.before;  // counter collect sums entries
    }
    if ((a.kind == AccessKind::Swap || a.kind == AccessKind::Write) && a.before == taken)
      ++stats.taken_per_pass.back();
  }
  return stats;
}

namespace {

DemoRun run_scheduled_demo(const std::string& impl, const Program& program,
                           const Schedule& schedule, const StructureConfig& config) {
  auto world = replay(structure_world_factory(impl, program, config, true), schedule);
  DemoRun demo;
  demo.impl = impl;
  demo.history = world->recorder.history();
  demo.trace_text = demo.history.to_trace();
  return demo;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"fig8", "fig8weak", "weakempty"};
  return names;
}

DemoRun run_demo(const std::string& name, const StructureConfig& config) {
  if (name == "fig8" || name == "fig8weak") {
    // Tail-chasing: enq(1) completes; one dequeuer reads the tail; enq(2)
    // completes; a second dequeuer takes item 1; the first returns empty
    // although the queue was never empty during its run.
    Program program;
    program.scripts = {{{true, 1}, {true, 2}}, {{false, 0}}, {{false, 0}}};
    Schedule schedule = Schedule::parse("1 1 2 1 1 3 3 2");
    DemoRun demo = run_scheduled_demo("naivequeue", program, schedule, config);
    if (name == "fig8weak") {
      demo.history = substitute_weak_empty(demo.history, 2);
      demo.trace_text = demo.history.to_trace();
    }
    return demo;
  }
  if (name == "weakempty") {
    // A dequeue of the interval queue whose two passes observe different
    // taken counts and certify weak-empty.
    Program program;
    program.scripts = {{{true, 1}, {true, 2}}, {{false, 0}}, {{false, 0}, {false, 0}}};
    Schedule schedule = Schedule::parse("1 1 3 3 3 1 2 2 2 2 1 3 3 3 3 3 2 2 2 2 2");
    return run_scheduled_demo("intseqqueue", program, schedule, config);
  }
  throw ContractViolation("unknown demo script: " + name);
}

History substitute_weak_empty(const History& h, int proc) {
  std::vector<Event> events = h.events();
  for (Event& e : events) {
    if (e.is_inv || e.proc != proc) continue;
    if (e.result.has_value() && e.result->is_empty()) e.result = OpResult::weak_empty();
  }
  return History(h.nprocs(), h.impl(), std::move(events));
}

}  // namespace relaxedsync
