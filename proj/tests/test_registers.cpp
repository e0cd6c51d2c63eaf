#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "relaxedsync/checker.hpp"
#include "relaxedsync/harness.hpp"
#include "relaxedsync/registers.hpp"

using namespace relaxedsync;

namespace {

// Register-level worlds: program over counters / fai / swap / renaming.
struct CounterWorldSetup {
  int nprocs;
  std::int64_t base = 0;
  std::vector<std::vector<OpKind>> scripts;  // Inc / Read per proc (1-based outer index unused)
};

WorldFactory counter_world(CounterWorldSetup setup) {
  return [setup] {
    auto world = std::make_unique<SimWorld>(setup.nprocs, "counter");
    world->recorder.set_access_logging(true);
    auto counter =
        std::make_shared<RwCounter>(world->memory, "C", setup.nprocs, setup.base);
    world->extras.push_back(counter);
    for (int proc = 1; proc <= setup.nprocs; ++proc) {
      for (OpKind kind : setup.scripts[static_cast<std::size_t>(proc - 1)]) {
        SimOp op;
        op.kind = kind;
        if (kind == OpKind::Inc)
          op.make = [counter, proc] { return std::make_unique<CounterIncMachine>(*counter, proc); };
        else
          op.make = [counter, proc] { return std::make_unique<CounterReadMachine>(*counter, proc); };
        world->program[static_cast<std::size_t>(proc)].push_back(std::move(op));
      }
    }
    return world;
  };
}

Schedule solo_schedule(int proc, std::size_t steps) {
  Schedule s;
  s.steps.assign(steps, proc);
  return s;
}

}  // namespace

TEST_CASE("counter: fresh read and sequential increments") {
  auto factory = counter_world({2, 0, {{OpKind::Read}, {}}});
  auto world = replay(factory, solo_schedule(1, 2));  // collect = 2 reads
  auto ops = world->recorder.op_infos();
  REQUIRE(ops.size() == 1);
  CHECK(*ops[0].result == OpResult::value(0));

  // inc by p1 writes M[1]=1 with a single shared access
  factory = counter_world({2, 0, {{OpKind::Inc, OpKind::Read}, {}}});
  world = replay(factory, solo_schedule(1, 3));
  ops = world->recorder.op_infos();
  REQUIRE(ops.size() == 2);
  CHECK(ops[0].access_count == 1);  // INC is exactly one shared write
  CHECK(*ops[1].result == OpResult::value(1));

  // n sequential incs then read = n
  factory = counter_world({2, 0, {{OpKind::Inc, OpKind::Inc, OpKind::Inc, OpKind::Read}, {}}});
  world = replay(factory, solo_schedule(1, 5));
  ops = world->recorder.op_infos();
  CHECK(*ops[3].result == OpResult::value(3));
}

TEST_CASE("counter: concurrent increments are never lost") {
  // p1 and p2 each inc once; p2 then reads.  Whenever the read starts
  // after both incs completed, it must see 2 in every interleaving.
  auto factory = counter_world({2, 0, {{OpKind::Inc}, {OpKind::Inc, OpKind::Read}}});
  bool read_after_both_seen = false;
  EnumerationStats stats = enumerate_schedules(
      factory, {16, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
        History h = world.recorder.history();
        const OpRecord* read = nullptr;
        std::vector<const OpRecord*> incs;
        for (const OpRecord& op : h.ops()) {
          if (op.kind == OpKind::Read)
            read = &op;
          else
            incs.push_back(&op);
        }
        REQUIRE(read != nullptr);
        std::int64_t value = read->result->int_value();
        CHECK(value >= 0);
        CHECK(value <= 2);
        bool after_both = true;
        for (const OpRecord* inc : incs)
          if (!h.precedes(*inc, *read)) after_both = false;
        if (after_both) {
          read_after_both_seen = true;
          CHECK(value == 2);
        }
        return true;
      });
  CHECK(stats.schedules > 1);
  CHECK(read_after_both_seen);
}

TEST_CASE("counter: every sim history linearizes against the counter spec") {
  std::vector<CounterWorldSetup> setups = {
      {2, 0, {{OpKind::Inc}, {OpKind::Read}}},
      {2, 0, {{OpKind::Inc, OpKind::Read}, {OpKind::Inc, OpKind::Read}}},
      {3, 0, {{OpKind::Inc}, {OpKind::Inc}, {OpKind::Read}}},
      {2, 0, {{OpKind::Read, OpKind::Inc}, {OpKind::Read}}},
  };
  for (const auto& setup : setups) {
    EnumerationStats stats = enumerate_schedules(
        counter_world(setup), {24, false, 0}, [&](const Schedule& sched, SimWorld& world, bool fresh) {
          if (!fresh) return true;
          CounterSpec spec;
          Verdict v = check_linearizable(world.recorder.history(), spec);
          if (!v.accepted()) {
            CAPTURE(sched.to_string());
            CHECK(v.accepted());
          }
          return true;
        });
    CHECK(stats.distinct_histories >= 1);
  }
}

TEST_CASE("counter read overlapping one inc sees either value") {
  auto factory = counter_world({2, 0, {{OpKind::Inc}, {OpKind::Read}}});
  std::set<std::int64_t> seen;
  enumerate_schedules(factory, {8, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
    for (const auto& op : world.recorder.op_infos())
      if (op.kind == OpKind::Read) seen.insert(op.result->int_value());
    return true;
  });
  CHECK(seen == std::set<std::int64_t>{0, 1});
}

TEST_CASE("fai and swap objects") {
  Memory mem;
  Recorder rec(2, "regs");
  mem.attach(&rec);
  CellId fai_cell = mem.allocate(CellFamily::Int, "F", 1);
  CHECK(mem.fai(1, fai_cell) == 1);
  CHECK(mem.peek(fai_cell) == 2);

  CellId swap_cell = mem.allocate(CellFamily::Item, "S", CellValue::item(4).encode());
  CellValue old = mem.swap_item(1, swap_cell, CellValue::bottom());
  CHECK(old == CellValue::item(4));
  CHECK(CellValue::decode(mem.peek(swap_cell)) == CellValue::bottom());
}

TEST_CASE("concurrent fai: a contiguous duplicate-free ticket range in every schedule") {
  auto factory = [] {
    auto world = std::make_unique<SimWorld>(3, "fai");
    // Cell ids stay valid across the world's lifetime; capture by value.
    CellId cell = world->memory.allocate(CellFamily::Int, "F", 1);
    for (int proc = 1; proc <= 3; ++proc) {
      SimOp op;
      op.kind = OpKind::Read;  // raw ticket draw; recorded kind is immaterial
      op.make = [cell, proc] { return std::make_unique<FaiMachine>(cell, proc); };
      world->program[static_cast<std::size_t>(proc)].push_back(op);
      if (proc == 1) world->program[1].push_back(op);  // p1 draws twice
    }
    return world;
  };
  EnumerationStats stats =
      enumerate_schedules(factory, {8, false, 0}, [&](const Schedule&, SimWorld& world, bool) {
        std::set<std::int64_t> tickets;
        for (const auto& op : world.recorder.op_infos())
          CHECK(tickets.insert(op.result->int_value()).second);
        CHECK(*tickets.begin() == 1);
        CHECK(*tickets.rbegin() == static_cast<std::int64_t>(tickets.size()));
        return true;
      });
  CHECK(stats.schedules > 1);
}

TEST_CASE("raw register: read racing a write returns old or new, both linearizable") {
  auto factory = [] {
    auto world = std::make_unique<SimWorld>(2, "register");
    world->recorder.set_access_logging(true);
    CellId cell = world->memory.allocate(CellFamily::Item, "R", CellValue::bottom().encode());
    SimOp w;
    w.kind = OpKind::RegWrite;
    w.arg = 7;
    w.make = [cell] { return std::make_unique<RegWriteMachine>(cell, 1, CellValue::item(7)); };
    world->program[1].push_back(std::move(w));
    SimOp r;
    r.kind = OpKind::RegRead;
    r.make = [cell] { return std::make_unique<RegReadMachine>(cell, 2); };
    world->program[2].push_back(std::move(r));
    return world;
  };
  std::set<std::string> outcomes;
  EnumerationStats stats =
      enumerate_schedules(factory, {4, false, 0}, [&](const Schedule&, SimWorld& world, bool fresh) {
        if (!fresh) return true;
        History h = world.recorder.history();
        RegisterSpec spec;
        CHECK(check_linearizable(h, spec).accepted());
        for (const auto& op : world.recorder.op_infos())
          if (op.kind == OpKind::RegRead) outcomes.insert(op.result->to_string());
        return true;
      });
  CHECK(stats.schedules == 2);  // two 1-step ops -> 2 interleavings
  CHECK(outcomes == std::set<std::string>{"empty", "7"});
}

TEST_CASE("renaming: solo participant gets name 1 in four accesses") {
  Memory mem;
  Recorder rec(2, "ren");
  mem.attach(&rec);
  RenamingInstance grid(mem, "Ren", 2);
  RenameMachine m(grid, 1);
  rec.begin_op(1, OpKind::Rename, std::nullopt);
  OpResult r = run_to_completion(m, mem);
  rec.end_op(1, r);
  CHECK(r == OpResult::value(1));
  CHECK(rec.op_infos()[0].access_count == 4);
}

TEST_CASE("renaming: reuse of an instance by one process is reported") {
  Memory mem;
  RenamingInstance grid(mem, "Ren", 2);
  grid.claim(1);
  CHECK_THROWS_AS(grid.claim(1), ContractViolation);
}

namespace {

WorldFactory rename_world(int nprocs, int participants) {
  return [nprocs, participants] {
    auto world = std::make_unique<SimWorld>(nprocs, "rename");
    auto grid = std::make_shared<RenamingInstance>(world->memory, "Ren", nprocs);
    world->extras.push_back(grid);
    for (int proc = 1; proc <= participants; ++proc) {
      SimOp op;
      op.kind = OpKind::Rename;
      op.make = [grid, proc] { return std::make_unique<RenameMachine>(*grid, proc); };
      world->program[static_cast<std::size_t>(proc)].push_back(std::move(op));
    }
    return world;
  };
}

void check_rename_history(SimWorld& world, std::int64_t participants) {
  std::set<std::int64_t> names;
  for (const auto& op : world.recorder.op_infos()) {
    if (op.kind != OpKind::Rename || !op.completed) continue;
    std::int64_t name = op.result->int_value();
    CHECK(name >= 1);
    CHECK(name <= RenamingInstance::name_bound(participants));
    CHECK(names.insert(name).second);  // unique
  }
}

}  // namespace

TEST_CASE("renaming: two fully concurrent participants, every interleaving") {
  EnumerationStats stats = enumerate_schedules(
      rename_world(2, 2), {20, false, 0},
      [&](const Schedule&, SimWorld& world, bool) {
        check_rename_history(world, 2);
        return true;
      });
  CHECK(stats.schedules > 10);
}

TEST_CASE("renaming: sequential participants stay within the adaptive bound") {
  for (int participants = 1; participants <= 6; ++participants) {
    auto world = rename_world(8, participants)();
    SimController controller(*world);
    for (int proc = 1; proc <= participants; ++proc)
      while (controller.proc_available(proc)) controller.step(proc);
    check_rename_history(*world, participants);
  }
}

TEST_CASE("renaming: randomized trials for up to eight participants") {
  // 10^5 rename executions across random schedules.
  std::mt19937_64 seeds(42);
  std::uint64_t renames = 0;
  int trial = 0;
  while (renames < 100000) {
    int participants = 2 + static_cast<int>(seeds() % 7);  // 2..8
    auto factory = rename_world(participants, participants);
    Schedule schedule = random_schedule(factory, seeds(), 4096);
    auto world = replay(factory, schedule);
    check_rename_history(*world, participants);
    renames += static_cast<std::uint64_t>(participants);
    ++trial;
  }
  CHECK(trial > 0);
}

TEST_CASE("access log: every access appears once, attributed and ordered") {
  auto factory = counter_world({2, 0, {{OpKind::Inc}, {OpKind::Read}}});
  auto world = replay(factory, Schedule::parse("1 2 2"));
  auto accesses = world->recorder.sorted_accesses();
  REQUIRE(accesses.size() == 3);  // one write + two collect reads
  CHECK(accesses[0].kind == AccessKind::Write);
  CHECK(accesses[0].proc == 1);
  CHECK(accesses[1].kind == AccessKind::Read);
  CHECK(accesses[1].proc == 2);
  CHECK(accesses[2].kind == AccessKind::Read);
  for (std::size_t i = 1; i < accesses.size(); ++i) CHECK(accesses[i].seq > accesses[i - 1].seq);
  // Renders as `seq proc kind cell before after` with seq from 0.
  std::string text = world->recorder.access_log_text(world->memory);
  CHECK(text == "0 1 write C[1] 0 1\n1 2 read C[1] 1 1\n2 2 read C[2] 0 0\n");
}

TEST_CASE("counter with base one reads one on a fresh instance") {
  auto factory = counter_world({2, 1, {{OpKind::Read}, {}}});
  auto world = replay(factory, solo_schedule(1, 2));
  CHECK(*world->recorder.op_infos()[0].result == OpResult::value(1));
}
