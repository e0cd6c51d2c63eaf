#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "relaxedsync/checker.hpp"
#include "relaxedsync/harness.hpp"
#include "relaxedsync/stacks.hpp"

using namespace relaxedsync;

namespace {

Program parse(const std::string& text) { return Program::parse(text); }

// Runs proc's next operation to completion.
void run_one_op(SimController& controller, SimWorld& world, int proc) {
  REQUIRE(controller.proc_available(proc));
  do {
    controller.step(proc);
  } while (world.recorder.current_op(proc) != -1);
}

std::vector<OpResult> results_of(SimWorld& world) {
  std::vector<OpResult> out;
  for (const auto& op : world.recorder.op_infos()) {
    REQUIRE(op.completed);
    out.push_back(*op.result);
  }
  return out;
}

}  // namespace

TEST_CASE("sequential LIFO behavior of all three stacks") {
  for (const char* impl : {"seqstack", "setseqstack", "renstack"}) {
    CAPTURE(impl);
    auto world = make_structure_world(impl, parse("push 1, push 2, pop, pop, pop"), {}, false);
    SimController controller(*world);
    while (!controller.finished()) controller.step(1);
    auto results = results_of(*world);
    REQUIRE(results.size() == 5);
    CHECK(results[2] == OpResult::value(2));
    CHECK(results[3] == OpResult::value(1));
    CHECK(results[4] == OpResult::empty());
  }
}

TEST_CASE("solo push lands in row 1 and bumps the counter to 2") {
  auto world = make_structure_world("setseqstack", parse("push 9; pop"), {}, true);
  auto* stack = dynamic_cast<SetSeqStack*>(world->structure.get());
  REQUIRE(stack != nullptr);
  SimController controller(*world);
  run_one_op(controller, *world, 1);

  auto cell = stack->items().materialized(1, 1);
  REQUIRE(cell.has_value());
  CHECK(CellValue::decode(world->memory.peek(*cell)) == CellValue::item(9));

  std::int64_t sum = 1;  // counter base
  for (int p = 1; p <= stack->nprocs(); ++p) sum += world->memory.peek(stack->top().entry(p));
  CHECK(sum == 2);
}

TEST_CASE("seqstack: enumerated two-process histories are linearizable") {
  // <= 2 pushes and <= 2 pops, two processes, every schedule.
  for (const char* text : {"push 1, pop; push 2, pop", "push 1, pop; pop", "push 1; push 2, pop",
                           "pop; pop", "push 1, push 2; pop, pop"}) {
    CAPTURE(text);
    WorldFactory factory = structure_world_factory("seqstack", parse(text), {}, false);
    EnumerationStats stats = enumerate_schedules(
        factory, {24, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
          if (!fresh) return true;
          SeqStackSpec spec;
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

TEST_CASE("seqstack: racing pops over one item never duplicate it") {
  WorldFactory factory =
      structure_world_factory("seqstack", parse("push 1; pop; pop"), {}, false);
  bool both_after_push_seen = false;
  enumerate_schedules(factory, {12, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
    History h = world.recorder.history();
    const OpRecord* push = nullptr;
    std::vector<const OpRecord*> pops;
    for (const OpRecord& op : h.ops())
      if (op.kind == OpKind::Push)
        push = &op;
      else
        pops.push_back(&op);
    int winners = 0;
    for (const OpRecord* pop : pops)
      if (pop->result->is_int()) ++winners;
    CHECK(winners <= 1);
    bool both_after = h.precedes(*push, *pops[0]) && h.precedes(*push, *pops[1]);
    if (both_after) {
      both_after_push_seen = true;
      // Exactly one pop wins the item; the other reports empty.
      CHECK(winners == 1);
    }
    return true;
  });
  CHECK(both_after_push_seen);
}

TEST_CASE("setseqstack: colliding pushes share a row at distinct columns, nothing lost") {
  WorldFactory factory = structure_world_factory("setseqstack", parse("push 1; push 2"), {}, false);
  bool same_row_seen = false;
  enumerate_schedules(factory, {16, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
    auto* stack = dynamic_cast<SetSeqStack*>(world.structure.get());
    std::map<std::int64_t, std::pair<std::size_t, int>> where;
    for (std::size_t r = 1; r <= stack->items().materialized_rows(); ++r) {
      for (int c = 1; c <= stack->items().cols(); ++c) {
        auto cell = stack->items().materialized(r, c);
        if (!cell.has_value()) continue;
        CellValue v = CellValue::decode(world.memory.peek(*cell));
        if (v.is_item()) CHECK(where.emplace(v.payload(), std::make_pair(r, c)).second);
      }
    }
    // No pushed item lost: both live at unique (row, column) pairs.
    REQUIRE(where.size() == 2);
    CHECK(where.at(1) != where.at(2));
    if (where.at(1).first == where.at(2).first) same_row_seen = true;
    return true;
  });
  CHECK(same_row_seen);
}

TEST_CASE("setseqstack: multiplicity appears and every history is set-linearizable") {
  WorldFactory factory =
      structure_world_factory("setseqstack", parse("push 1, pop; pop"), {}, false);
  bool duplicate_seen = false;
  EnumerationStats stats = enumerate_schedules(
      factory, {20, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
        History h = world.recorder.history();
        int ones = 0;
        for (const OpRecord& op : h.ops())
          if (op.kind == OpKind::Pop && op.result->is_int() && op.result->int_value() == 1) ++ones;
        if (ones == 2) duplicate_seen = true;
        if (!fresh) return true;
        SetStackSpec spec;
        Verdict v = check_set_linearizable(h, spec);
        if (!v.accepted()) {
          CAPTURE(sched.to_string());
          REQUIRE(v.accepted());
        }
        LemmaReport lemmas = check_lemma_properties(h, false);
        CHECK(lemmas.ok());
        return true;
      });
  CHECK(duplicate_seen);  // some schedule returns item 1 twice
  CHECK(stats.distinct_histories > 1);
}

TEST_CASE("setseqstack: pool property at quiescence") {
  WorldFactory factory = structure_world_factory(
      "setseqstack", parse("push 1, pop, push 3; push 2, pop, pop"), {}, false);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Schedule schedule = random_schedule(factory, seed, 4096);
    auto world = replay(factory, schedule);
    std::set<std::int64_t> popped;
    for (const auto& op : world->recorder.op_infos())
      if (op.kind == OpKind::Pop && op.result->is_int()) popped.insert(op.result->int_value());
    std::set<std::int64_t> resident;
    for (std::int64_t v : world->structure->resident_items(world->memory)) resident.insert(v);
    // {pushed} = {popped} (+) {resident}, disjointly.
    std::set<std::int64_t> both;
    std::set_intersection(popped.begin(), popped.end(), resident.begin(), resident.end(),
                          std::inserter(both, both.begin()));
    CHECK(both.empty());
    std::set<std::int64_t> all = popped;
    all.insert(resident.begin(), resident.end());
    CHECK(all == std::set<std::int64_t>{1, 2, 3});
  }
}

TEST_CASE("setseqstack: operational wait-freedom bound under adversarial schedules") {
  Program program = parse("push 1, pop, pop; push 2, pop; push 3, pop");
  WorldFactory factory = structure_world_factory("setseqstack", program, {}, false);
  const int nprocs = 3;
  const std::int64_t pushes = 3;
  // pop <= collect(n) + rows*n scans + 1 write; push <= n + 2.
  const std::uint32_t pop_bound = nprocs + pushes * nprocs + 1;
  const std::uint32_t push_bound = nprocs + 2;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto world = replay(factory, random_schedule(factory, seed, 4096));
    for (const auto& op : world->recorder.op_infos()) {
      CAPTURE(seed);
      CHECK(op.access_count <= (op.kind == OpKind::Push ? push_bound : pop_bound));
    }
  }
}

TEST_CASE("renstack: solo push takes name 1 in row 1") {
  auto world = make_structure_world("renstack", parse("push 7; pop"), {}, false);
  auto* stack = dynamic_cast<RenSetSeqStack*>(world->structure.get());
  SimController controller(*world);
  run_one_op(controller, *world, 1);
  auto cell = stack->items().materialized(1, 1);
  REQUIRE(cell.has_value());
  CHECK(CellValue::decode(world->memory.peek(*cell)) == CellValue::item(7));
}

TEST_CASE("renstack: pops scan at most f(k) columns of a k-push row") {
  // Three pushes race into row 1 (their counter collects all read top=1),
  // then a pop scans.  f counts the adaptive name bound k(k+1)/2.
  Program program = parse("push 1, pop; push 2; push 3");
  auto world = make_structure_world("renstack", program, {}, true);
  SimController controller(*world);
  // Interleave the three collect phases (n = 3 reads each).
  for (int round = 0; round < 3; ++round)
    for (int proc = 1; proc <= 3; ++proc) controller.step(proc);
  // Finish the pushes one by one.
  while (world->recorder.current_op(1) != -1) controller.step(1);
  while (world->recorder.current_op(2) != -1) controller.step(2);
  while (world->recorder.current_op(3) != -1) controller.step(3);
  // All three items sit in row 1.
  auto* stack = dynamic_cast<RenSetSeqStack*>(world->structure.get());
  int in_row1 = 0;
  for (int c = 1; c <= stack->items().cols(); ++c) {
    auto cell = stack->items().materialized(1, c);
    if (cell.has_value() && CellValue::decode(world->memory.peek(*cell)).is_item()) {
      ++in_row1;
      CHECK(c <= RenamingInstance::name_bound(3));
    }
  }
  REQUIRE(in_row1 == 3);
  CHECK(stack->items_beyond_bound(world->memory).empty());

  // The pop scans row 1 through at most f(3) = 6 item cells.
  run_one_op(controller, *world, 1);
  auto ops = world->recorder.op_infos();
  const auto& pop = ops.back();
  CHECK(pop.result->is_int());
  int row1_reads = 0;
  for (const AccessRecord& a : world->recorder.sorted_accesses()) {
    if (a.op_index != pop.index || a.kind != AccessKind::Read) continue;
    if (world->memory.name(a.cell).rfind("Items[1]", 0) == 0) ++row1_reads;
  }
  CHECK(row1_reads >= 1);
  CHECK(row1_reads <= RenamingInstance::name_bound(3));
}

TEST_CASE("renstack: enumerated small histories are set-linearizable") {
  for (const char* text : {"push 1; pop", "push 1, pop; pop"}) {
    CAPTURE(text);
    WorldFactory factory = structure_world_factory("renstack", parse(text), {}, false);
    EnumerationStats stats = enumerate_schedules(
        factory, {40, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
          if (!fresh) return true;
          SetStackSpec spec;
          Verdict v = check_set_linearizable(world.recorder.history(), spec);
          if (!v.accepted()) {
            CAPTURE(sched.to_string());
            REQUIRE(v.accepted());
          }
          return true;
        });
    CHECK(stats.distinct_histories >= 1);
  }
}

TEST_CASE("lemma 3.2 cases: restricted histories pass the plain checker") {
  // A sequential multi-process history and an all-distinct-returns run.
  WorldFactory factory =
      structure_world_factory("setseqstack", parse("push 1, pop; push 2, pop"), {}, false);
  int checked = 0;
  enumerate_schedules(factory, {24, false, 0}, [&](const Schedule&, SimWorld& world, bool fresh) {
    if (!fresh) return true;
    History h = world.recorder.history();
    LemmaReport report = check_lemma_properties(h, false);
    CHECK(report.ok());
    if (report.linearizable.has_value()) {
      ++checked;
      CHECK(*report.linearizable);
    }
    return true;
  });
  CHECK(checked > 0);
}
