#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaxedsync/values.hpp"

namespace relaxedsync {

/// Sequential spec state: the stack/queue contents as a finite string of
/// items, front first (top of stack, head of queue).  Counters and raw
/// registers use a single-element state.
using SeqState = std::vector<std::int64_t>;

struct StepOutcome {
  SeqState state;
  OpResult result;
};

/// Deterministic sequential specification: one transition per
/// invocation.  Work-stealing kinds normalize onto the core operations.
class SequentialSpec {
 public:
  virtual ~SequentialSpec() = default;
  virtual const char* name() const = 0;
  virtual SeqState initial() const { return {}; }
  virtual std::optional<StepOutcome> step(const SeqState& state, OpKind kind,
                                          std::optional<std::int64_t> arg) const = 0;
};

class SeqStackSpec final : public SequentialSpec {
 public:
  const char* name() const override { return "stack"; }
  std::optional<StepOutcome> step(const SeqState& state, OpKind kind,
                                  std::optional<std::int64_t> arg) const override;
};

class SeqQueueSpec final : public SequentialSpec {
 public:
  const char* name() const override { return "queue"; }
  std::optional<StepOutcome> step(const SeqState& state, OpKind kind,
                                  std::optional<std::int64_t> arg) const override;
};

class CounterSpec final : public SequentialSpec {
 public:
  const char* name() const override { return "counter"; }
  SeqState initial() const override { return {0}; }
  std::optional<StepOutcome> step(const SeqState& state, OpKind kind,
                                  std::optional<std::int64_t> arg) const override;
};

/// Single register holding a CellValue (encoded); reads of the initial
/// mark respond `empty`.
class RegisterSpec final : public SequentialSpec {
 public:
  const char* name() const override { return "register"; }
  SeqState initial() const override { return {CellValue::bottom().encode()}; }
  std::optional<StepOutcome> step(const SeqState& state, OpKind kind,
                                  std::optional<std::int64_t> arg) const override;
};

/// One operation inside a concurrency class.  A missing result means the
/// operation is pending in the history; the spec assigns its completion.
struct ClassMember {
  int op_index = -1;
  int proc = 0;
  OpKind kind = OpKind::Push;
  std::optional<std::int64_t> arg;
  std::optional<OpResult> result;
};

/// Set-concurrent specification: whole concurrency classes take effect
/// at one point.  Valid classes are one insert, one empty-returning
/// removal, or 1..n removals all returning the current head.
class SetSpec {
 public:
  virtual ~SetSpec() = default;
  virtual const char* name() const = 0;
  virtual SeqState initial() const { return {}; }
  /// Validates the class against the state; fills results of pending
  /// members.  nullopt = the class is not a legal transition.
  virtual std::optional<SeqState> apply_class(const SeqState& state,
                                              std::vector<ClassMember>& members) const = 0;
};

class SetStackSpec final : public SetSpec {
 public:
  const char* name() const override { return "set-stack"; }
  std::optional<SeqState> apply_class(const SeqState& state,
                                      std::vector<ClassMember>& members) const override;
};

class SetQueueSpec final : public SetSpec {
 public:
  const char* name() const override { return "set-queue"; }
  std::optional<SeqState> apply_class(const SeqState& state,
                                      std::vector<ClassMember>& members) const override;
};

/// Interval-concurrent queue state: the queue string plus, per process,
/// the prefix of it a pending weak-empty dequeue still has to see
/// drained.  A missing entry is the unregistered mark.
struct IntervalState {
  SeqState queue;
  std::vector<std::optional<SeqState>> pending;  // index 0 unused; 1..n

  bool operator==(const IntervalState& other) const {
    return queue == other.queue && pending == other.pending;
  }
  std::string encode() const;
};

/// One transition of the interval-concurrent queue: an anchor
/// (enqueue, head dequeue, or empty-queue point), newly registered
/// processes, and processes responding weak-empty.
struct IntervalTransition {
  enum class Kind { EnqAnchor, DeqAnchor, EmptyPoint };
  Kind kind = Kind::EnqAnchor;
  std::vector<int> anchor_procs;  // one proc, or several head dequeues with multiplicity
  std::int64_t enq_item = 0;      // EnqAnchor
  bool point_weak = false;        // EmptyPoint: weakempty instead of empty
  std::vector<int> registered;
  std::vector<int> responded;

  std::string to_string() const;
};

struct IntervalOptions {
  bool allow_empty_point_weak = true;  // Def. 5.1 case 2(e) weak-empty at a point
  bool multiplicity = false;           // several dequeues may share the head anchor
};

class IntervalQueueSpec {
 public:
  using Options = IntervalOptions;

  explicit IntervalQueueSpec(int nprocs, Options options = Options());

  int nprocs() const { return nprocs_; }
  const Options& options() const { return options_; }
  IntervalState initial() const;

  /// Validates every lettered side condition of the matching case of the
  /// definition; nullopt = inadmissible transition.
  std::optional<IntervalState> apply(const IntervalState& state,
                                     const IntervalTransition& t) const;

 private:
  int nprocs_;
  Options options_;
};

}  // namespace relaxedsync
