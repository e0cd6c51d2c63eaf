#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "relaxedsync/checker.hpp"
#include "relaxedsync/harness.hpp"
#include "relaxedsync/queues.hpp"

using namespace relaxedsync;

namespace {

Program parse(const std::string& text) { return Program::parse(text); }

void run_one_op(SimController& controller, SimWorld& world, int proc) {
  REQUIRE(controller.proc_available(proc));
  do {
    controller.step(proc);
  } while (world.recorder.current_op(proc) != -1);
}

void step_n(SimController& controller, int proc, int n) {
  for (int i = 0; i < n; ++i) controller.step(proc);
}

}  // namespace

TEST_CASE("sequential FIFO behavior of all queue variants") {
  for (const char* impl : {"seqqueue", "setseqqueue", "naivequeue", "intseqqueue",
                           "rwintseqqueue"}) {
    CAPTURE(impl);
    auto world =
        make_structure_world(impl, parse("enq 1, enq 2, deq, deq, deq"), {}, false);
    SimController controller(*world);
    while (!controller.finished()) controller.step(1);
    auto ops = world->recorder.op_infos();
    REQUIRE(ops.size() == 5);
    CHECK(*ops[2].result == OpResult::value(1));
    CHECK(*ops[3].result == OpResult::value(2));
    CHECK(*ops[4].result == OpResult::empty());  // never weak-empty sequentially
  }
}

TEST_CASE("dequeue on a fresh queue reports empty after one clean double-scan") {
  auto world = make_structure_world("seqqueue", parse("deq; deq"), {}, false);
  SimController controller(*world);
  run_one_op(controller, *world, 1);
  auto ops = world->recorder.op_infos();
  CHECK(*ops[0].result == OpResult::empty());
  CHECK(ops[0].access_count == 1);  // taken' = taken = 0 right after the tail read

  world = make_structure_world("intseqqueue", parse("deq; deq"), {}, false);
  SimController controller2(*world);
  run_one_op(controller2, *world, 1);
  ops = world->recorder.op_infos();
  CHECK(*ops[0].result == OpResult::empty());
  CHECK(ops[0].access_count == 2);  // both passes read the tail and take zero
}

TEST_CASE("seqqueue: enumerated two-process histories are linearizable") {
  for (const char* text :
       {"enq 1, deq; enq 2, deq", "enq 1, deq; deq", "enq 1; enq 2, deq", "deq; deq",
        "enq 1, enq 2; deq, deq"}) {
    CAPTURE(text);
    WorldFactory factory = structure_world_factory("seqqueue", parse(text), {}, false);
    EnumerationStats stats = enumerate_schedules(
        factory, {40, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
          if (!fresh) return true;
          SeqQueueSpec spec;
          Verdict v = check_linearizable(world.recorder.history(), spec);
          if (!v.accepted()) {
            CAPTURE(sched.to_string());
            REQUIRE(v.accepted());
          }
          return true;
        });
    CHECK(stats.distinct_histories >= 1);
  }
}

TEST_CASE("setseqqueue: multiplicity appears and every history is set-linearizable") {
  WorldFactory factory =
      structure_world_factory("setseqqueue", parse("enq 1, deq; deq"), {}, false);
  bool duplicate_seen = false;
  EnumerationStats stats = enumerate_schedules(
      factory, {32, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
        History h = world.recorder.history();
        int ones = 0;
        for (const OpRecord& op : h.ops())
          if (op.kind == OpKind::Deq && op.result->is_int() && op.result->int_value() == 1) ++ones;
        if (ones == 2) duplicate_seen = true;
        if (!fresh) return true;
        SetQueueSpec spec;
        Verdict v = check_set_linearizable(h, spec);
        if (!v.accepted()) {
          CAPTURE(sched.to_string());
          REQUIRE(v.accepted());
        }
        LemmaReport lemmas = check_lemma_properties(h, true);
        CHECK(lemmas.ok());
        if (lemmas.all_distinct_returns && lemmas.linearizable.has_value())
          CHECK(*lemmas.linearizable);  // Lemma 4.2 item 3
        return true;
      });
  CHECK(duplicate_seen);
  CHECK(stats.distinct_histories > 1);
}

TEST_CASE("setseqqueue: pending dequeues finish once enqueues stop") {
  // Non-blocking in practice: with no new enqueues, every adversarial
  // schedule completes all dequeues within the step bound.
  WorldFactory factory = structure_world_factory("setseqqueue", parse("deq; enq 1, deq"), {}, false);
  EnumerationStats stats =
      enumerate_schedules(factory, {48, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
        for (const auto& op : world.recorder.op_infos()) CHECK(op.completed);
        return true;
      });
  CHECK(stats.schedules > 0);
}

TEST_CASE("naivequeue: the tail-chasing schedule is not linearizable") {
  DemoRun demo = run_demo("fig8");
  SeqQueueSpec spec;
  Verdict v = check_linearizable(demo.history, spec);
  CHECK(v.status == Verdict::Status::Rejected);

  // Sequentially the naive queue behaves like the real one; the defect
  // needs concurrency to show.
  auto world = make_structure_world("naivequeue", parse("enq 1, deq, deq; deq"), {}, false);
  SimController controller(*world);
  while (controller.proc_available(1)) controller.step(1);
  auto ops = world->recorder.op_infos();
  CHECK(*ops[1].result == OpResult::value(1));
  CHECK(*ops[2].result == OpResult::empty());
}

TEST_CASE("intseqqueue: scripted weak-empty run is interval-linearizable") {
  DemoRun demo = run_demo("weakempty");
  bool weak_seen = false;
  for (const OpRecord& op : demo.history.ops())
    if (op.result->is_weak_empty()) weak_seen = true;
  CHECK(weak_seen);
  IntervalQueueSpec spec(demo.history.nprocs());
  CHECK(check_interval_linearizable(demo.history, spec).accepted());

  // Histories without weak-empty responses linearize against the plain
  // sequential queue.
  WorldFactory factory = structure_world_factory("intseqqueue", parse("enq 1; deq"), {}, false);
  enumerate_schedules(factory, {16, false, 0}, [&](const Schedule&, SimWorld& world, bool fresh) {
    if (!fresh) return true;
    History h = world.recorder.history();
    bool weak = false;
    for (const OpRecord& op : h.ops())
      if (op.result->is_weak_empty()) weak = true;
    if (!weak) {
      SeqQueueSpec seq;
      CHECK(check_linearizable(h, seq).accepted());
    }
    IntervalQueueSpec ispec(h.nprocs());
    CHECK(check_interval_linearizable(h, ispec).accepted());
    return true;
  });
}

TEST_CASE("intseqqueue: at most two passes, bounded accesses, honest empties") {
  WorldFactory factory = structure_world_factory(
      "intseqqueue", parse("enq 1, deq; deq, enq 2; deq"), {}, true);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto world = replay(factory, random_schedule(factory, seed, 4096));
    auto accesses = world->recorder.sorted_accesses();
    for (const auto& op : world->recorder.op_infos()) {
      if (op.kind != OpKind::Deq) continue;
      std::vector<AccessRecord> mine;
      for (const AccessRecord& a : accesses)
        if (a.op_index == op.index) mine.push_back(a);
      DeqPassStats stats = analyze_deq_passes(mine, world->memory);
      CAPTURE(seed);
      CHECK(stats.passes <= 2);
      for (int pass = 0; pass < stats.passes; ++pass)
        CHECK(stats.accesses_per_pass[static_cast<std::size_t>(pass)] <=
              static_cast<std::uint64_t>(2 * stats.tail_observed[static_cast<std::size_t>(pass)] + 3));
      if (op.result->is_empty() && stats.passes == 2)
        CHECK(stats.taken_per_pass[0] == stats.taken_per_pass[1]);
    }
  }
}

TEST_CASE("rwintseqqueue: duplicate and weak-empty in one history, combined checker accepts") {
  // Scripted schedule, n = 4: deqA and deqB both take item 1; deqW misses
  // item 2 in its first pass, sees it taken in the second, and certifies
  // weak-empty; deqC takes item 2 in between.
  Program program;
  program.scripts = {{{true, 1}, {true, 2}},  // p1
                     {{false, 0}},            // p2: deqW
                     {{false, 0}, {false, 0}},  // p3: deqA, deqC
                     {{false, 0}}};           // p4: deqB
  auto world = make_structure_world("rwintseqqueue", program, {}, true);
  SimController c(*world);
  run_one_op(c, *world, 1);  // enq(1): collect 4 + inc + write
  step_n(c, 3, 5);           // deqA: collect 4 + read Items[1][1]=1
  step_n(c, 4, 5);           // deqB: collect 4 + read Items[1][1]=1
  step_n(c, 3, 1);           // deqA writes taken, returns 1
  step_n(c, 4, 1);           // deqB writes taken, returns 1
  step_n(c, 1, 5);           // enq(2): collect 4 + inc, write still pending
  step_n(c, 2, 13);          // deqW pass 1: sees one taken cell, item 2 unwritten
  step_n(c, 1, 1);           // enq(2) write lands
  run_one_op(c, *world, 3);  // deqC takes item 2
  run_one_op(c, *world, 2);  // deqW pass 2: sees two taken cells -> weak-empty

  auto ops = world->recorder.op_infos();
  REQUIRE(ops.size() == 6);
  std::vector<OpResult> deq3, deq4, deq2;
  for (const auto& op : ops) {
    if (op.kind != OpKind::Deq) continue;
    if (op.proc == 3) deq3.push_back(*op.result);
    if (op.proc == 4) deq4.push_back(*op.result);
    if (op.proc == 2) deq2.push_back(*op.result);
  }
  REQUIRE(deq3.size() == 2);
  CHECK(deq3[0] == OpResult::value(1));             // deqA
  CHECK(deq4.at(0) == OpResult::value(1));          // deqB (duplicate)
  CHECK(deq3[1] == OpResult::value(2));             // deqC
  CHECK(deq2.at(0) == OpResult::weak_empty());      // deqW

  History h = world->recorder.history();
  IntervalQueueSpec combined(h.nprocs(), {true, true});
  CHECK(check_interval_linearizable(h, combined).accepted());
  // Without multiplicity the duplicate cannot be explained.
  IntervalQueueSpec plain(h.nprocs(), {true, false});
  CHECK(check_interval_linearizable(h, plain).status == Verdict::Status::Rejected);

  // R/W only: the audit sees no read-modify-write accesses.
  AuditReport audit = audit_access_patterns(world->recorder.sorted_accesses());
  CHECK(audit.rmw_accesses == 0);
}

TEST_CASE("rwintseqqueue: enumerated histories pass the combined checker") {
  WorldFactory factory = structure_world_factory("rwintseqqueue", parse("enq 1; deq"), {}, false);
  EnumerationStats stats = enumerate_schedules(
      factory, {24, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
        if (!fresh) return true;
        IntervalQueueSpec spec(world.recorder.nprocs(), {true, true});
        Verdict v = check_interval_linearizable(world.recorder.history(), spec);
        if (!v.accepted()) {
          CAPTURE(sched.to_string());
          REQUIRE(v.accepted());
        }
        return true;
      });
  CHECK(stats.distinct_histories >= 1);
}

TEST_CASE("taken marks are terminal and rewritten idempotently") {
  auto world = make_structure_world("setseqqueue", parse("enq 1, deq, deq; deq"), {}, true);
  SimController c(*world);
  for (int i = 0; i < 3; ++i) run_one_op(c, *world, 1);
  // The consumed cell keeps its taken mark; later deqs rewrite it.
  std::uint64_t taken_rewrites = 0;
  const std::int64_t taken = CellValue::taken_mark().encode();
  for (const AccessRecord& a : world->recorder.sorted_accesses())
    if (a.kind == AccessKind::Write && a.before == taken && a.after == taken) ++taken_rewrites;
  CHECK(taken_rewrites >= 1);  // Line T13 writes unconditionally
}
