// relaxedsync command-line front end: run workloads (live threads or
// deterministic sim), check recorded traces against the three
// correctness conditions, and exhaustively enumerate schedules.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "relaxedsync/adapters.hpp"
#include "relaxedsync/checker.hpp"
#include "relaxedsync/harness.hpp"

using namespace relaxedsync;

namespace {

struct RunArgs {
  std::string impl = "setseqstack";
  std::string mode = "sim";
  int procs = 2;
  std::uint64_t ops = 16;
  double insert_ratio = 0.5;
  std::uint64_t seed = 1;
  std::size_t capacity = 1u << 16;
  std::string script;
  std::string program;
  std::string schedule;
  std::string out;
  std::string access_log;
};

Program random_program(int procs, std::uint64_t total_ops, double insert_ratio,
                       std::uint64_t seed) {
  Program program;
  program.scripts.resize(static_cast<std::size_t>(procs));
  std::int64_t next_item = 1;
  for (int p = 1; p <= procs; ++p) {
    std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(p));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uint64_t ops = total_ops / static_cast<std::uint64_t>(procs);
    if (p <= static_cast<int>(total_ops % static_cast<std::uint64_t>(procs))) ++ops;
    for (std::uint64_t i = 0; i < ops; ++i) {
      ProgramOp op;
      op.insert = coin(rng) < insert_ratio;
      if (op.insert) op.item = next_item++;
      program.scripts[static_cast<std::size_t>(p - 1)].push_back(op);
    }
  }
  return program;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

int cmd_run(const RunArgs& args) {
  StructureConfig config;
  config.nprocs = args.procs;
  config.capacity = args.capacity;
  config.seed = args.seed;

  std::string trace_text;
  std::string access_text;

  if (!args.script.empty()) {
    DemoRun demo = run_demo(args.script, config);
    trace_text = demo.trace_text;
  } else if (args.mode == "live") {
    Workload workload;
    workload.nprocs = args.procs;
    workload.total_ops = args.ops;
    workload.insert_ratio = args.insert_ratio;
    workload.seed = args.seed;
    StressOutcome outcome = run_stress(args.impl, workload, config, !args.access_log.empty());
    if (outcome.aborted) {
      std::cerr << "run aborted: " << outcome.error << "\n";
      return 4;
    }
    trace_text = outcome.history.to_trace();
  } else if (args.mode == "sim") {
    Program program = args.program.empty()
                          ? random_program(args.procs, args.ops, args.insert_ratio, args.seed)
                          : Program::parse(args.program);
    WorldFactory factory =
        structure_world_factory(args.impl, program, config, true);
    Schedule schedule = args.schedule.empty()
                            ? random_schedule(factory, args.seed)
                            : Schedule::parse(args.schedule);
    auto world = replay(factory, schedule);
    trace_text = world->recorder.history().to_trace();
    access_text = world->recorder.access_log_text(world->memory);
  } else {
    std::cerr << "mode must be live or sim\n";
    return 4;
  }

  write_text(args.out, trace_text);
  if (!args.access_log.empty() && !access_text.empty()) write_text(args.access_log, access_text);
  return 0;
}

struct CheckArgs {
  std::string trace;
  std::string condition = "lin";
  std::string spec = "stack";
  bool singleton = false;
  bool multiplicity = false;
  bool no_weak_point = false;
  std::uint64_t budget = 0;
};

int cmd_check(const CheckArgs& args) {
  History history = [&] {
    std::ifstream in(args.trace, std::ios::binary);
    if (!in) throw TraceParseError("cannot open trace file: " + args.trace);
    return History::from_trace_stream(in);
  }();
  history.validate_well_formed();

  CheckOptions options;
  options.node_budget = args.budget != 0 ? args.budget : default_node_budget();
  options.singleton_classes_only = args.singleton;

  Verdict verdict;
  if (args.condition == "lemmas") {
    LemmaReport report = check_lemma_properties(history, args.spec != "stack", options);
    std::cout << "duplicate pairs: " << report.duplicates.size() << " ("
              << report.disjoint_duplicates << " disjoint)\n";
    std::cout << "sequential=" << report.sequential
              << " no-concurrent-removals=" << report.no_concurrent_removals
              << " all-distinct-returns=" << report.all_distinct_returns << "\n";
    if (report.linearizable.has_value())
      std::cout << "linearizable=" << (*report.linearizable ? "yes" : "no") << "\n";
    if (!report.note.empty()) std::cout << report.note << "\n";
    std::cout << (report.ok() ? "lemma properties hold\n" : "lemma properties VIOLATED\n");
    return report.ok() ? 0 : 1;
  }

  if (args.condition == "lin") {
    if (args.spec == "queue" || args.spec == "intqueue") {
      SeqQueueSpec spec;
      verdict = check_linearizable(history, spec, options);
    } else {
      SeqStackSpec spec;
      verdict = check_linearizable(history, spec, options);
    }
  } else if (args.condition == "setlin") {
    if (args.spec == "queue" || args.spec == "intqueue") {
      SetQueueSpec spec;
      verdict = check_set_linearizable(history, spec, options);
    } else {
      SetStackSpec spec;
      verdict = check_set_linearizable(history, spec, options);
    }
  } else if (args.condition == "intlin") {
    IntervalQueueSpec::Options spec_options;
    spec_options.allow_empty_point_weak = !args.no_weak_point;
    spec_options.multiplicity = args.multiplicity;
    IntervalQueueSpec spec(history.nprocs(), spec_options);
    verdict = check_interval_linearizable(history, spec, options);
  } else {
    std::cerr << "condition must be lin, setlin, intlin or lemmas\n";
    return 4;
  }

  switch (verdict.status) {
    case Verdict::Status::Accepted:
      std::cout << "ACCEPTED (" << verdict.nodes << " nodes)\n";
      for (const std::string& line : verdict.witness_lines) std::cout << "  " << line << "\n";
      return 0;
    case Verdict::Status::Rejected:
      std::cout << "REJECTED (" << verdict.nodes << " nodes): " << verdict.note << "\n";
      return 1;
    case Verdict::Status::BudgetExceeded:
      std::cout << "BUDGET EXCEEDED (" << verdict.nodes << " nodes): " << verdict.note << "\n";
      return 2;
  }
  return 4;
}

struct EnumArgs {
  std::string impl = "setseqstack";
  std::string program;
  std::string condition = "setlin";
  std::string spec;
  std::uint64_t bound = 22;
  bool crashes = false;
  bool fail_fast = true;
  std::size_t capacity = 256;
  std::uint64_t budget = 0;
};

int cmd_enumerate(const EnumArgs& args) {
  Program program = Program::parse(args.program);
  StructureConfig config;
  config.nprocs = program.nprocs();
  config.capacity = args.capacity;

  CheckOptions options;
  options.node_budget = args.budget != 0 ? args.budget : default_node_budget();

  std::string spec_name = args.spec;
  if (spec_name.empty()) {
    Memory probe;
    auto s = make_structure(args.impl, probe, config);
    spec_name = s->queue_like() ? "queue" : "stack";
  }

  EnumerateOptions enum_options;
  enum_options.max_steps = args.bound;
  enum_options.include_crashes = args.crashes;

  std::uint64_t accepted = 0, rejected = 0, budget_hits = 0;
  bool stop = false;
  std::string first_rejection;

  WorldFactory factory = structure_world_factory(args.impl, program, config, false);
  EnumerationStats stats = enumerate_schedules(
      factory, enum_options, [&](const Schedule& schedule, SimWorld& world, bool fresh) {
        if (!fresh) return true;
        History history = world.recorder.history();
        Verdict verdict;
        if (args.condition == "lin") {
          if (spec_name == "stack") {
            SeqStackSpec spec;
            verdict = check_linearizable(history, spec, options);
          } else {
            SeqQueueSpec spec;
            verdict = check_linearizable(history, spec, options);
          }
        } else if (args.condition == "setlin") {
          if (spec_name == "stack") {
            SetStackSpec spec;
            verdict = check_set_linearizable(history, spec, options);
          } else {
            SetQueueSpec spec;
            verdict = check_set_linearizable(history, spec, options);
          }
        } else if (args.condition == "intlin") {
          IntervalQueueSpec spec(history.nprocs(),
                                 {true, args.impl == "rwintseqqueue"});
          verdict = check_interval_linearizable(history, spec, options);
        } else {
          throw std::runtime_error("condition must be lin, setlin or intlin");
        }
        if (verdict.accepted()) {
          ++accepted;
        } else if (verdict.status == Verdict::Status::Rejected) {
          ++rejected;
          if (first_rejection.empty())
            first_rejection = "schedule " + schedule.to_string();
          if (args.fail_fast) {
            stop = true;
            return false;
          }
        } else {
          ++budget_hits;
        }
        return true;
      });

  std::cout << "schedules=" << stats.schedules << " distinct-histories="
            << stats.distinct_histories << " accepted=" << accepted << " rejected=" << rejected;
  if (budget_hits > 0) std::cout << " budget-exceeded=" << budget_hits;
  if (stop) std::cout << " (stopped at first rejection)";
  std::cout << "\n";
  if (!first_rejection.empty()) std::cout << "first rejection: " << first_rejection << "\n";
  if (budget_hits > 0 && rejected == 0) return 2;
  return rejected == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaxed concurrent stacks/queues: run, check, enumerate"};
  app.set_config("--config");
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "execute a workload and record a trace");
  run->add_option("--impl", run_args.impl, "structure name")
      ->check(CLI::IsMember(structure_names()));
  run->add_option("--mode", run_args.mode, "live or sim")->check(CLI::IsMember({"live", "sim"}));
  run->add_option("--procs", run_args.procs, "process count")->check(CLI::Range(1, 30));
  run->add_option("--ops", run_args.ops, "total operations");
  run->add_option("--insert-ratio", run_args.insert_ratio, "fraction of inserts");
  run->add_option("--seed", run_args.seed, "workload / schedule seed");
  run->add_option("--capacity", run_args.capacity, "array capacity bound (slots)");
  run->add_option("--script", run_args.script, "named demo script")
      ->check(CLI::IsMember(demo_names()));
  run->add_option("--program", run_args.program, "explicit program, e.g. 'push 1, pop; pop'");
  run->add_option("--schedule", run_args.schedule, "explicit sim schedule (proc ids)");
  run->add_option("--out", run_args.out, "trace output path (default stdout)");
  run->add_option("--access-log", run_args.access_log, "access log output path");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "check a trace against a condition");
  check->add_option("--trace", check_args.trace, "trace file")->required();
  check->add_option("--condition", check_args.condition, "lin | setlin | intlin | lemmas")
      ->check(CLI::IsMember({"lin", "setlin", "intlin", "lemmas"}));
  check->add_option("--spec", check_args.spec, "stack | queue | intqueue")
      ->check(CLI::IsMember({"stack", "queue", "intqueue"}));
  check->add_flag("--singleton", check_args.singleton, "restrict classes to singletons");
  check->add_flag("--multiplicity", check_args.multiplicity,
                  "allow multi-dequeue anchors (interval condition)");
  check->add_flag("--no-weak-point", check_args.no_weak_point,
                  "disable the weak-empty-at-a-point case 2(e)");
  check->add_option("--budget", check_args.budget, "search node budget");

  EnumArgs enum_args;
  CLI::App* enumerate = app.add_subcommand("enumerate", "run every schedule of a program");
  enumerate->add_option("--impl", enum_args.impl, "structure name")
      ->check(CLI::IsMember(structure_names()));
  enumerate->add_option("--program", enum_args.program, "program to enumerate")->required();
  enumerate->add_option("--condition", enum_args.condition, "lin | setlin | intlin")
      ->check(CLI::IsMember({"lin", "setlin", "intlin"}));
  enumerate->add_option("--spec", enum_args.spec, "stack | queue (default by impl)");
  enumerate->add_option("--bound", enum_args.bound, "total shared-step bound");
  enumerate->add_flag("--crashes", enum_args.crashes, "include crash-truncated schedules");
  enumerate->add_flag("!--no-fail-fast", enum_args.fail_fast, "scan past rejections");
  enumerate->add_option("--capacity", enum_args.capacity, "array capacity bound");
  enumerate->add_option("--budget", enum_args.budget, "checker node budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (check->parsed()) return cmd_check(check_args);
    if (enumerate->parsed()) return cmd_enumerate(enum_args);
  } catch (const TraceParseError& e) {
    std::cerr << "trace parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
