#include "relaxedsync/specs.hpp"

#include <algorithm>
#include <sstream>

namespace relaxedsync {

namespace {

bool is_insert(OpKind k) { return k == OpKind::Push || k == OpKind::Enq || k == OpKind::Put; }
bool is_remove(OpKind k) {
  return k == OpKind::Pop || k == OpKind::Deq || k == OpKind::Take || k == OpKind::Steal;
}

}  // namespace

std::optional<StepOutcome> SeqStackSpec::step(const SeqState& state, OpKind kind,
                                              std::optional<std::int64_t> arg) const {
  if (is_insert(kind)) {
    if (!arg.has_value()) return std::nullopt;
    SeqState next;
    next.reserve(state.size() + 1);
    next.push_back(*arg);  // push prepends: front is the top
    next.insert(next.end(), state.begin(), state.end());
    return StepOutcome{std::move(next), OpResult::ok()};
  }
  if (is_remove(kind)) {
    if (state.empty()) return StepOutcome{state, OpResult::empty()};
    SeqState next(state.begin() + 1, state.end());
    return StepOutcome{std::move(next), OpResult::value(state.front())};
  }
  return std::nullopt;
}

std::optional<StepOutcome> SeqQueueSpec::step(const SeqState& state, OpKind kind,
                                              std::optional<std::int64_t> arg) const {
  if (is_insert(kind)) {
    if (!arg.has_value()) return std::nullopt;
    SeqState next = state;
    next.push_back(*arg);  // enq appends: front is the head
    return StepOutcome{std::move(next), OpResult::ok()};
  }
  if (is_remove(kind)) {
    if (state.empty()) return StepOutcome{state, OpResult::empty()};
    SeqState next(state.begin() + 1, state.end());
    return StepOutcome{std::move(next), OpResult::value(state.front())};
  }
  return std::nullopt;
}

std::optional<StepOutcome> CounterSpec::step(const SeqState& state, OpKind kind,
                                             std::optional<std::int64_t>) const {
  if (kind == OpKind::Inc) return StepOutcome{{state[0] + 1}, OpResult::ok()};
  if (kind == OpKind::Read) return StepOutcome{state, OpResult::value(state[0])};
  return std::nullopt;
}

std::optional<StepOutcome> RegisterSpec::step(const SeqState& state, OpKind kind,
                                              std::optional<std::int64_t> arg) const {
  if (kind == OpKind::RegWrite) {
    if (!arg.has_value()) return std::nullopt;
    return StepOutcome{{CellValue::item(*arg).encode()}, OpResult::ok()};
  }
  if (kind == OpKind::RegRead) {
    CellValue v = CellValue::decode(state[0]);
    return StepOutcome{state, v.is_item() ? OpResult::value(v.payload()) : OpResult::empty()};
  }
  return std::nullopt;
}

namespace {

/// Shared Def. 3.1 / 4.1 class semantics; only the insert direction
/// differs between stack and queue.
std::optional<SeqState> apply_set_class(const SeqState& state, std::vector<ClassMember>& members,
                                        bool stack_order) {
  if (members.empty()) return std::nullopt;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (members[i].proc == members[j].proc) return std::nullopt;

  std::size_t inserts = 0, removals = 0;
  for (const ClassMember& m : members) {
    if (is_insert(m.kind))
      ++inserts;
    else if (is_remove(m.kind))
      ++removals;
    else
      return std::nullopt;
  }

  if (inserts == 1 && removals == 0) {
    ClassMember& m = members.front();
    if (!m.arg.has_value()) return std::nullopt;
    if (m.result.has_value() && *m.result != OpResult::ok()) return std::nullopt;
    m.result = OpResult::ok();
    SeqState next;
    if (stack_order) {
      next.reserve(state.size() + 1);
      next.push_back(*m.arg);
      next.insert(next.end(), state.begin(), state.end());
    } else {
      next = state;
      next.push_back(*m.arg);
    }
    return next;
  }

  if (inserts != 0 || removals == 0) return std::nullopt;

  if (state.empty()) {
    // Only a single removal may take effect on the empty state.
    if (members.size() != 1) return std::nullopt;
    ClassMember& m = members.front();
    if (m.result.has_value() && *m.result != OpResult::empty()) return std::nullopt;
    m.result = OpResult::empty();
    return state;
  }

  std::int64_t head = state.front();
  for (ClassMember& m : members) {
    if (m.result.has_value() && *m.result != OpResult::value(head)) return std::nullopt;
    m.result = OpResult::value(head);
  }
  return SeqState(state.begin() + 1, state.end());
}

}  // namespace

std::optional<SeqState> SetStackSpec::apply_class(const SeqState& state,
                                                  std::vector<ClassMember>& members) const {
  return apply_set_class(state, members, /*stack_order=*/true);
}

std::optional<SeqState> SetQueueSpec::apply_class(const SeqState& state,
                                                  std::vector<ClassMember>& members) const {
  return apply_set_class(state, members, /*stack_order=*/false);
}

std::string IntervalState::encode() const {
  std::ostringstream out;
  for (std::int64_t v : queue) out << v << ',';
  out << '|';
  for (std::size_t i = 1; i < pending.size(); ++i) {
    if (!pending[i].has_value()) {
      out << "_;";
      continue;
    }
    for (std::int64_t v : *pending[i]) out << v << ',';
    out << ';';
  }
  return out.str();
}

std::string IntervalTransition::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::EnqAnchor:
      out << "enq(" << enq_item << ") by p" << anchor_procs.front();
      break;
    case Kind::DeqAnchor:
      out << "deq by";
      for (int p : anchor_procs) out << " p" << p;
      break;
    case Kind::EmptyPoint:
      out << "deq:" << (point_weak ? "weakempty" : "empty") << " by p" << anchor_procs.front();
      break;
  }
  if (!registered.empty()) {
    out << " | register";
    for (int p : registered) out << " p" << p;
  }
  if (!responded.empty()) {
    out << " | weakempty";
    for (int p : responded) out << " p" << p;
  }
  return out.str();
}

IntervalQueueSpec::IntervalQueueSpec(int nprocs, Options options)
    : nprocs_(nprocs), options_(options) {}

IntervalState IntervalQueueSpec::initial() const {
  IntervalState s;
  s.pending.resize(static_cast<std::size_t>(nprocs_) + 1);
  return s;
}

namespace {

bool distinct_in_range(const std::vector<int>& procs, int nprocs) {
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (procs[i] < 1 || procs[i] > nprocs) return false;
    for (std::size_t j = i + 1; j < procs.size(); ++j)
      if (procs[i] == procs[j]) return false;
  }
  return true;
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

std::optional<IntervalState> IntervalQueueSpec::apply(const IntervalState& state,
                                                      const IntervalTransition& t) const {
  if (t.anchor_procs.empty()) return std::nullopt;
  if (!distinct_in_range(t.anchor_procs, nprocs_)) return std::nullopt;
  if (!distinct_in_range(t.registered, nprocs_)) return std::nullopt;
  if (!distinct_in_range(t.responded, nprocs_)) return std::nullopt;
  for (int p : t.anchor_procs)
    if (contains(t.registered, p) || contains(t.responded, p)) return std::nullopt;

  const auto& pending = state.pending;
  auto unregistered = [&](int p) { return !pending[static_cast<std::size_t>(p)].has_value(); };

  // (b): a process registers only while unregistered.
  for (int p : t.registered)
    if (!unregistered(p)) return std::nullopt;

  switch (t.kind) {
    case IntervalTransition::Kind::EnqAnchor: {
      if (t.anchor_procs.size() != 1) return std::nullopt;
      // (c): responders have drained their prefix, or register-and-respond
      // on an empty queue within this very transition.
      for (int p : t.responded) {
        const auto& pen = pending[static_cast<std::size_t>(p)];
        bool drained = pen.has_value() && pen->empty();
        bool immediate = !pen.has_value() && state.queue.empty() && contains(t.registered, p);
        if (!drained && !immediate) return std::nullopt;
      }
      IntervalState next = state;
      next.queue.push_back(t.enq_item);
      // (d): responders reset, registrants adopt the pre-enqueue queue.
      for (int p : t.registered) next.pending[static_cast<std::size_t>(p)] = state.queue;
      for (int p : t.responded) next.pending[static_cast<std::size_t>(p)] = std::nullopt;
      return next;
    }

    case IntervalTransition::Kind::DeqAnchor: {
      if (state.queue.empty()) return std::nullopt;
      if (t.anchor_procs.size() > 1 && !options_.multiplicity) return std::nullopt;
      std::int64_t head = state.queue.front();
      SeqState rest(state.queue.begin() + 1, state.queue.end());
      // (c): responders were waiting for exactly this head, or
      // register-and-respond when the queue empties out here.
      for (int p : t.responded) {
        const auto& pen = pending[static_cast<std::size_t>(p)];
        bool last_item = pen.has_value() && pen->size() == 1 && pen->front() == head;
        bool immediate = !pen.has_value() && rest.empty() && contains(t.registered, p);
        if (!last_item && !immediate) return std::nullopt;
      }
      IntervalState next = state;
      next.queue = rest;
      // (d): every surviving registered prefix drops the dequeued head;
      // an already-drained prefix survives unchanged.
      for (int p = 1; p <= nprocs_; ++p) {
        auto& pen = next.pending[static_cast<std::size_t>(p)];
        if (contains(t.responded, p)) {
          pen = std::nullopt;
        } else if (contains(t.registered, p)) {
          pen = rest;
        } else if (pen.has_value() && !pen->empty()) {
          if (pen->front() != head) return std::nullopt;
          pen->erase(pen->begin());
        }
      }
      return next;
    }

    case IntervalTransition::Kind::EmptyPoint: {
      // 2(e): single dequeue on the empty queue, no registrations or
      // other responses; empty always, weak-empty behind the option.
      if (!state.queue.empty()) return std::nullopt;
      if (t.anchor_procs.size() != 1) return std::nullopt;
      if (!t.registered.empty() || !t.responded.empty()) return std::nullopt;
      if (t.point_weak && !options_.allow_empty_point_weak) return std::nullopt;
      return state;
    }
  }
  return std::nullopt;
}

}  // namespace relaxedsync
