#include "relaxedsync/checker.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace relaxedsync {

namespace {

bool removal_kind(OpKind k) {
  return k == OpKind::Pop || k == OpKind::Deq || k == OpKind::Take || k == OpKind::Steal;
}
bool insert_kind(OpKind k) {
  return k == OpKind::Push || k == OpKind::Enq || k == OpKind::Put;
}

struct BudgetHit {};

std::string render_member(const History& h, int op_index, const OpResult& result) {
  const OpRecord& op = h.op(op_index);
  std::ostringstream out;
  out << 'p' << op.proc << ':' << op_kind_name(op.kind) << '(';
  if (op.arg.has_value()) out << *op.arg;
  out << "):" << result.to_string();
  return out.str();
}

/// Shared DFS scaffolding: walk the event list in order, keeping the set
/// of open operations per process; firing moves are checker-specific.
/// Firing inside the open window is what enforces the real-time order.
class SearchBase {
 public:
  SearchBase(const History& h, const CheckOptions& opt) : h_(h), opt_(opt) {
    open_.assign(static_cast<std::size_t>(h.nprocs()) + 1, -1);
  }

 protected:
  void bump_nodes() {
    if (++nodes_ > opt_.node_budget) throw BudgetHit{};
  }

  const History& h_;
  CheckOptions opt_;
  std::vector<int> open_;  // per proc: open op index or -1
  std::uint64_t nodes_ = 0;
  std::unordered_set<std::string> visited_;
};

// ---------------------------------------------------------------------
// Linearizability
// ---------------------------------------------------------------------

class LinSearch : SearchBase {
 public:
  LinSearch(const History& h, const SequentialSpec& spec, const CheckOptions& opt)
      : SearchBase(h, opt), spec_(spec) {}

  Verdict run() {
    Verdict v;
    if (static_cast<int>(h_.ops().size()) > opt_.max_ops_linear) {
      v.status = Verdict::Status::BudgetExceeded;
      v.note = "history exceeds the documented operation cap (" +
               std::to_string(opt_.max_ops_linear) + ")";
      return v;
    }
    bool ok = false;
    try {
      ok = dfs(0, spec_.initial());
    } catch (const BudgetHit&) {
      v.status = Verdict::Status::BudgetExceeded;
      v.nodes = nodes_;
      v.note = "node budget exhausted";
      return v;
    }
    v.nodes = nodes_;
    if (ok) {
      v.status = Verdict::Status::Accepted;
      LinWitness w{witness_};
      revalidate(h_, spec_, w);
      for (std::size_t i = 0; i < witness_.size(); ++i)
        v.witness_lines.push_back("{" + render_member(h_, witness_[i], results_[i]) + "}");
      v.lin = std::move(w);
    } else {
      v.status = Verdict::Status::Rejected;
      v.note = "no linearization exists (search exhausted)";
    }
    return v;
  }

 private:
  std::string key(std::size_t pos, const SeqState& state) const {
    std::ostringstream out;
    out << pos << '#' << lin_mask_ << '#';
    for (std::int64_t x : state) out << x << ',';
    return out.str();
  }

  bool dfs(std::size_t pos, const SeqState& state) {
    bump_nodes();
    const auto& events = h_.events();
    if (pos == events.size()) return true;  // leftovers are pending ops, droppable
    if (!visited_.insert(key(pos, state)).second) return false;

    // Move 1: consume the next event.
    const Event& e = events[pos];
    if (e.is_inv) {
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      if (dfs(pos + 1, state)) return true;
      open_[static_cast<std::size_t>(e.proc)] = -1;
    } else if (lin_mask_ & (1u << e.proc)) {
      lin_mask_ &= ~(1u << e.proc);
      open_[static_cast<std::size_t>(e.proc)] = -1;
      if (dfs(pos + 1, state)) return true;
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      lin_mask_ |= 1u << e.proc;
    }

    // Move 2: linearize an open, not-yet-linearized operation.
    for (int proc = 1; proc <= h_.nprocs(); ++proc) {
      int idx = open_[static_cast<std::size_t>(proc)];
      if (idx < 0 || (lin_mask_ & (1u << proc))) continue;
      const OpRecord& op = h_.op(idx);
      auto outcome = spec_.step(state, op.kind, op.arg);
      if (!outcome.has_value()) continue;
      if (op.result.has_value() && *op.result != outcome->result) continue;
      lin_mask_ |= 1u << proc;
      witness_.push_back(idx);
      results_.push_back(outcome->result);
      if (dfs(pos, outcome->state)) return true;
      results_.pop_back();
      witness_.pop_back();
      lin_mask_ &= ~(1u << proc);
    }
    return false;
  }

  const SequentialSpec& spec_;
  std::uint32_t lin_mask_ = 0;
  std::vector<int> witness_;
  std::vector<OpResult> results_;
};

// ---------------------------------------------------------------------
// Set-linearizability
// ---------------------------------------------------------------------

class SetSearch : SearchBase {
 public:
  SetSearch(const History& h, const SetSpec& spec, const CheckOptions& opt)
      : SearchBase(h, opt), spec_(spec) {}

  Verdict run() {
    Verdict v;
    if (static_cast<int>(h_.ops().size()) > opt_.max_ops_linear) {
      v.status = Verdict::Status::BudgetExceeded;
      v.note = "history exceeds the documented operation cap (" +
               std::to_string(opt_.max_ops_linear) + ")";
      return v;
    }
    bool ok = false;
    try {
      ok = dfs(0, spec_.initial());
    } catch (const BudgetHit&) {
      v.status = Verdict::Status::BudgetExceeded;
      v.nodes = nodes_;
      v.note = "node budget exhausted";
      return v;
    }
    v.nodes = nodes_;
    if (ok) {
      v.status = Verdict::Status::Accepted;
      SetWitness w{classes_};
      revalidate(h_, spec_, w);
      for (std::size_t c = 0; c < classes_.size(); ++c) {
        std::string line = "{";
        for (std::size_t m = 0; m < classes_[c].size(); ++m) {
          if (m > 0) line += ", ";
          line += render_member(h_, classes_[c][m], class_results_[c][m]);
        }
        line += "}";
        v.witness_lines.push_back(line);
      }
      v.set = std::move(w);
    } else {
      v.status = Verdict::Status::Rejected;
      v.note = "no set-linearization exists (search exhausted)";
    }
    return v;
  }

 private:
  std::string key(std::size_t pos, const SeqState& state) const {
    std::ostringstream out;
    out << pos << '#' << done_mask_ << '#';
    for (std::int64_t x : state) out << x << ',';
    return out.str();
  }

  bool fire(std::size_t pos, const SeqState& state, const std::vector<int>& member_ops) {
    std::vector<ClassMember> members;
    members.reserve(member_ops.size());
    for (int idx : member_ops) {
      const OpRecord& op = h_.op(idx);
      members.push_back(ClassMember{idx, op.proc, op.kind, op.arg, op.result});
    }
    auto next = spec_.apply_class(state, members);
    if (!next.has_value()) return false;
    std::uint32_t saved = done_mask_;
    for (int idx : member_ops) done_mask_ |= 1u << h_.op(idx).proc;
    classes_.push_back(member_ops);
    std::vector<OpResult> results;
    for (const ClassMember& m : members) results.push_back(*m.result);
    class_results_.push_back(std::move(results));
    if (dfs(pos, *next)) return true;
    class_results_.pop_back();
    classes_.pop_back();
    done_mask_ = saved;
    return false;
  }

  bool dfs(std::size_t pos, const SeqState& state) {
    bump_nodes();
    const auto& events = h_.events();
    if (pos == events.size()) return true;
    if (!visited_.insert(key(pos, state)).second) return false;

    const Event& e = events[pos];
    if (e.is_inv) {
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      if (dfs(pos + 1, state)) return true;
      open_[static_cast<std::size_t>(e.proc)] = -1;
    } else if (done_mask_ & (1u << e.proc)) {
      done_mask_ &= ~(1u << e.proc);
      open_[static_cast<std::size_t>(e.proc)] = -1;
      if (dfs(pos + 1, state)) return true;
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      done_mask_ |= 1u << e.proc;
    }

    // Candidate classes, explored in process-id order: singleton inserts
    // first, then removal groups.
    std::vector<int> removals;
    for (int proc = 1; proc <= h_.nprocs(); ++proc) {
      int idx = open_[static_cast<std::size_t>(proc)];
      if (idx < 0 || (done_mask_ & (1u << proc))) continue;
      const OpRecord& op = h_.op(idx);
      if (insert_kind(op.kind)) {
        if (fire(pos, state, {idx})) return true;
      } else if (removal_kind(op.kind)) {
        removals.push_back(idx);
      }
    }
    if (opt_.singleton_classes_only) {
      for (int idx : removals)
        if (fire(pos, state, {idx})) return true;
    } else {
      std::uint32_t n = static_cast<std::uint32_t>(removals.size());
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> group;
        for (std::uint32_t b = 0; b < n; ++b)
          if (mask & (1u << b)) group.push_back(removals[b]);
        if (fire(pos, state, group)) return true;
      }
    }
    return false;
  }

  const SetSpec& spec_;
  std::uint32_t done_mask_ = 0;
  std::vector<std::vector<int>> classes_;
  std::vector<std::vector<OpResult>> class_results_;
};

// ---------------------------------------------------------------------
// Interval-linearizability
// ---------------------------------------------------------------------

class IntervalSearch : SearchBase {
 public:
  IntervalSearch(const History& h, const IntervalQueueSpec& spec, const CheckOptions& opt)
      : SearchBase(h, opt), spec_(spec) {
    phase_.assign(static_cast<std::size_t>(h.nprocs()) + 1, Phase::None);
  }

  Verdict run() {
    Verdict v;
    if (static_cast<int>(h_.ops().size()) > opt_.max_ops_interval) {
      v.status = Verdict::Status::BudgetExceeded;
      v.note = "history exceeds the documented operation cap (" +
               std::to_string(opt_.max_ops_interval) + ")";
      return v;
    }
    bool ok = false;
    try {
      ok = dfs(0, spec_.initial());
    } catch (const BudgetHit&) {
      v.status = Verdict::Status::BudgetExceeded;
      v.nodes = nodes_;
      v.note = "node budget exhausted";
      return v;
    }
    v.nodes = nodes_;
    if (ok) {
      v.status = Verdict::Status::Accepted;
      IntervalWitness w{steps_};
      revalidate(h_, spec_, w);
      for (const IntervalWitnessStep& s : steps_)
        v.witness_lines.push_back("[" + s.transition.to_string() + "]");
      v.interval = std::move(w);
    } else {
      v.status = Verdict::Status::Rejected;
      v.note = "no interval-linearization exists (search exhausted)";
    }
    return v;
  }

 private:
  enum class Phase : std::uint8_t { None, Invoked, Registered, Done };

  std::string key(std::size_t pos, const IntervalState& state) const {
    std::ostringstream out;
    out << pos << '#';
    for (std::size_t p = 1; p < phase_.size(); ++p)
      out << static_cast<int>(phase_[p]);
    out << '#' << state.encode();
    return out.str();
  }

  bool weak_capable(const OpRecord& op) const {
    return removal_kind(op.kind) &&
           (!op.result.has_value() || op.result->is_weak_empty());
  }

  /// Fires one transition; `registered`/`responded` carry op indices.
  bool fire(std::size_t pos, const IntervalState& state, IntervalTransition t,
            const std::vector<int>& anchor_ops, const std::vector<int>& registered_ops,
            const std::vector<int>& responded_ops) {
    for (int idx : registered_ops) t.registered.push_back(h_.op(idx).proc);
    for (int idx : responded_ops) t.responded.push_back(h_.op(idx).proc);
    auto next = spec_.apply(state, t);
    if (!next.has_value()) return false;

    std::vector<std::pair<int, Phase>> saved;
    auto set_phase = [&](int proc, Phase ph) {
      saved.emplace_back(proc, phase_[static_cast<std::size_t>(proc)]);
      phase_[static_cast<std::size_t>(proc)] = ph;
    };
    for (int idx : anchor_ops) set_phase(h_.op(idx).proc, Phase::Done);
    for (int idx : registered_ops) set_phase(h_.op(idx).proc, Phase::Registered);
    for (int idx : responded_ops) set_phase(h_.op(idx).proc, Phase::Done);

    steps_.push_back(IntervalWitnessStep{t, anchor_ops, registered_ops, responded_ops});
    if (dfs(pos, *next)) return true;
    steps_.pop_back();
    for (auto it = saved.rbegin(); it != saved.rend(); ++it)
      phase_[static_cast<std::size_t>(it->first)] = it->second;
    return false;
  }

  /// Enumerates registration/response subsets around a fixed anchor.
  bool fire_with_subsets(std::size_t pos, const IntervalState& state,
                         const IntervalTransition& base, const std::vector<int>& anchor_ops) {
    std::vector<int> reg_candidates;
    for (int proc = 1; proc <= h_.nprocs(); ++proc) {
      int idx = open_[static_cast<std::size_t>(proc)];
      if (idx < 0 || phase_[static_cast<std::size_t>(proc)] != Phase::Invoked) continue;
      if (std::find(anchor_ops.begin(), anchor_ops.end(), idx) != anchor_ops.end()) continue;
      if (weak_capable(h_.op(idx))) reg_candidates.push_back(idx);
    }
    std::uint32_t rn = static_cast<std::uint32_t>(reg_candidates.size());
    for (std::uint32_t rmask = 0; rmask < (1u << rn); ++rmask) {
      std::vector<int> registered_ops;
      for (std::uint32_t b = 0; b < rn; ++b)
        if (rmask & (1u << b)) registered_ops.push_back(reg_candidates[b]);

      // Response candidates: already-registered processes plus the ones
      // registering in this very transition.
      std::vector<int> resp_candidates;
      for (int proc = 1; proc <= h_.nprocs(); ++proc) {
        int idx = open_[static_cast<std::size_t>(proc)];
        if (idx < 0 || phase_[static_cast<std::size_t>(proc)] != Phase::Registered) continue;
        resp_candidates.push_back(idx);
      }
      resp_candidates.insert(resp_candidates.end(), registered_ops.begin(), registered_ops.end());

      std::uint32_t wn = static_cast<std::uint32_t>(resp_candidates.size());
      for (std::uint32_t wmask = 0; wmask < (1u << wn); ++wmask) {
        std::vector<int> responded_ops;
        for (std::uint32_t b = 0; b < wn; ++b)
          if (wmask & (1u << b)) responded_ops.push_back(resp_candidates[b]);
        if (fire(pos, state, base, anchor_ops, registered_ops, responded_ops)) return true;
      }
    }
    return false;
  }

  bool dfs(std::size_t pos, const IntervalState& state) {
    bump_nodes();
    const auto& events = h_.events();
    if (pos == events.size()) return true;
    if (!visited_.insert(key(pos, state)).second) return false;

    const Event& e = events[pos];
    if (e.is_inv) {
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      phase_[static_cast<std::size_t>(e.proc)] = Phase::Invoked;
      if (dfs(pos + 1, state)) return true;
      phase_[static_cast<std::size_t>(e.proc)] = Phase::None;
      open_[static_cast<std::size_t>(e.proc)] = -1;
    } else if (phase_[static_cast<std::size_t>(e.proc)] == Phase::Done) {
      phase_[static_cast<std::size_t>(e.proc)] = Phase::None;
      open_[static_cast<std::size_t>(e.proc)] = -1;
      if (dfs(pos + 1, state)) return true;
      open_[static_cast<std::size_t>(e.proc)] = e.op_index;
      phase_[static_cast<std::size_t>(e.proc)] = Phase::Done;
    }

    // Anchors in process-id order.
    std::vector<int> head_deqs;
    for (int proc = 1; proc <= h_.nprocs(); ++proc) {
      int idx = open_[static_cast<std::size_t>(proc)];
      if (idx < 0 || phase_[static_cast<std::size_t>(proc)] != Phase::Invoked) continue;
      const OpRecord& op = h_.op(idx);

      if (insert_kind(op.kind) && op.arg.has_value()) {
        IntervalTransition t;
        t.kind = IntervalTransition::Kind::EnqAnchor;
        t.anchor_procs = {proc};
        t.enq_item = *op.arg;
        if (fire_with_subsets(pos, state, t, {idx})) return true;
      }

      if (!removal_kind(op.kind)) continue;

      if (!state.queue.empty()) {
        std::int64_t head = state.queue.front();
        if (!op.result.has_value() || *op.result == OpResult::value(head))
          head_deqs.push_back(idx);
      } else {
        // Def. 5.1 case 2(e): a single point on the empty queue.
        bool try_empty = !op.result.has_value() || op.result->is_empty();
        bool try_weak = (!op.result.has_value() || op.result->is_weak_empty()) &&
                        spec_.options().allow_empty_point_weak;
        for (int weak = 0; weak <= 1; ++weak) {
          if ((weak == 0 && !try_empty) || (weak == 1 && !try_weak)) continue;
          IntervalTransition t;
          t.kind = IntervalTransition::Kind::EmptyPoint;
          t.anchor_procs = {proc};
          t.point_weak = weak == 1;
          if (fire(pos, state, t, {idx}, {}, {})) return true;
        }
      }
    }

    if (!head_deqs.empty()) {
      std::uint32_t n = static_cast<std::uint32_t>(head_deqs.size());
      std::uint32_t mask_limit = spec_.options().multiplicity ? (1u << n) : 0;
      if (spec_.options().multiplicity) {
        for (std::uint32_t mask = 1; mask < mask_limit; ++mask) {
          std::vector<int> anchors;
          for (std::uint32_t b = 0; b < n; ++b)
            if (mask & (1u << b)) anchors.push_back(head_deqs[b]);
          IntervalTransition t;
          t.kind = IntervalTransition::Kind::DeqAnchor;
          for (int idx : anchors) t.anchor_procs.push_back(h_.op(idx).proc);
          if (fire_with_subsets(pos, state, t, anchors)) return true;
        }
      } else {
        for (int idx : head_deqs) {
          IntervalTransition t;
          t.kind = IntervalTransition::Kind::DeqAnchor;
          t.anchor_procs = {h_.op(idx).proc};
          if (fire_with_subsets(pos, state, t, {idx})) return true;
        }
      }
    }
    return false;
  }

  const IntervalQueueSpec& spec_;
  std::vector<Phase> phase_;
  std::vector<IntervalWitnessStep> steps_;
};

}  // namespace

std::uint64_t default_node_budget() {
  const char* env = std::getenv("RELAXEDSYNC_BUDGET");
  if (env != nullptr) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return v;
  }
  return CheckOptions{}.node_budget;
}

Verdict check_linearizable(const History& h, const SequentialSpec& spec,
                           const CheckOptions& opt) {
  return LinSearch(h, spec, opt).run();
}

Verdict check_set_linearizable(const History& h, const SetSpec& spec, const CheckOptions& opt) {
  return SetSearch(h, spec, opt).run();
}

Verdict check_interval_linearizable(const History& h, const IntervalQueueSpec& spec,
                                    const CheckOptions& opt) {
  return IntervalSearch(h, spec, opt).run();
}

LemmaReport check_lemma_properties(const History& h, bool queue_flavor,
                                   const CheckOptions& opt) {
  LemmaReport report;

  std::unordered_map<std::int64_t, std::vector<int>> by_item;
  std::vector<int> removals;
  for (const OpRecord& op : h.ops()) {
    if (!removal_kind(op.kind)) continue;
    removals.push_back(op.index);
    if (op.completed() && op.result->is_int()) by_item[op.result->int_value()].push_back(op.index);
  }

  report.all_distinct_returns = true;
  for (const auto& [item, ops] : by_item) {
    for (std::size_t i = 0; i < ops.size(); ++i) {
      for (std::size_t j = i + 1; j < ops.size(); ++j) {
        report.all_distinct_returns = false;
        bool overlap = h.overlaps(h.op(ops[i]), h.op(ops[j]));
        report.duplicates.push_back(LemmaReport::DuplicatePair{ops[i], ops[j], item, overlap});
        if (!overlap) ++report.disjoint_duplicates;
      }
    }
  }

  report.sequential = h.is_sequential();
  report.no_concurrent_removals = true;
  for (std::size_t i = 0; i < removals.size() && report.no_concurrent_removals; ++i)
    for (std::size_t j = i + 1; j < removals.size(); ++j)
      if (h.overlaps(h.op(removals[i]), h.op(removals[j]))) {
        report.no_concurrent_removals = false;
        break;
      }

  if (report.sequential || report.no_concurrent_removals || report.all_distinct_returns) {
    if (static_cast<int>(h.ops().size()) <= opt.max_ops_linear) {
      Verdict v;
      if (queue_flavor) {
        SeqQueueSpec spec;
        v = check_linearizable(h, spec, opt);
      } else {
        SeqStackSpec spec;
        v = check_linearizable(h, spec, opt);
      }
      if (v.status == Verdict::Status::BudgetExceeded)
        report.note = "linearizability sub-check hit the budget";
      else
        report.linearizable = v.accepted();
    } else {
      report.note = "history too large for the linearizability sub-check";
    }
  }
  return report;
}

// ---------------------------------------------------------------------
// Witness revalidation
// ---------------------------------------------------------------------

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("witness revalidation failed: ") + what);
}

}  // namespace

void revalidate(const History& h, const SequentialSpec& spec, const LinWitness& w) {
  SeqState state = spec.initial();
  std::unordered_set<int> seen;
  for (int idx : w.order) {
    const OpRecord& op = h.op(idx);
    require(seen.insert(idx).second, "operation appears twice");
    auto outcome = spec.step(state, op.kind, op.arg);
    require(outcome.has_value(), "spec rejected a witness step");
    if (op.result.has_value()) require(*op.result == outcome->result, "result mismatch");
    state = outcome->state;
  }
  for (const OpRecord& op : h.ops())
    require(!op.completed() || seen.count(op.index) == 1, "completed operation missing");
  for (std::size_t i = 0; i < w.order.size(); ++i)
    for (std::size_t j = i + 1; j < w.order.size(); ++j)
      require(!h.precedes(h.op(w.order[j]), h.op(w.order[i])), "real-time order violated");
}

void revalidate(const History& h, const SetSpec& spec, const SetWitness& w) {
  SeqState state = spec.initial();
  std::unordered_set<int> seen;
  for (const auto& cls : w.classes) {
    std::vector<ClassMember> members;
    for (int idx : cls) {
      const OpRecord& op = h.op(idx);
      require(seen.insert(idx).second, "operation appears twice");
      members.push_back(ClassMember{idx, op.proc, op.kind, op.arg, op.result});
    }
    auto next = spec.apply_class(state, members);
    require(next.has_value(), "spec rejected a witness class");
    state = *next;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        require(h.overlaps(h.op(cls[i]), h.op(cls[j])), "same-class operations do not overlap");
  }
  for (const OpRecord& op : h.ops())
    require(!op.completed() || seen.count(op.index) == 1, "completed operation missing");
  for (std::size_t ci = 0; ci < w.classes.size(); ++ci)
    for (std::size_t cj = ci; cj < w.classes.size(); ++cj)
      for (int a : w.classes[ci])
        for (int b : w.classes[cj])
          if (a != b) require(!h.precedes(h.op(b), h.op(a)), "real-time order violated");
}

void revalidate(const History& h, const IntervalQueueSpec& spec, const IntervalWitness& w) {
  IntervalState state = spec.initial();
  std::unordered_map<int, std::pair<int, int>> span;  // op -> [first, last] step
  auto note = [&](int idx, int step) {
    auto [it, fresh] = span.emplace(idx, std::pair<int, int>{step, step});
    if (!fresh) it->second.second = step;
  };
  for (std::size_t s = 0; s < w.steps.size(); ++s) {
    const IntervalWitnessStep& step = w.steps[s];
    std::optional<std::int64_t> head;
    if (!state.queue.empty()) head = state.queue.front();
    auto next = spec.apply(state, step.transition);
    require(next.has_value(), "spec rejected a witness transition");
    state = *next;
    for (int idx : step.anchor_ops) note(idx, static_cast<int>(s));
    for (int idx : step.registered_ops) note(idx, static_cast<int>(s));
    for (int idx : step.responded_ops) note(idx, static_cast<int>(s));
    // Anchored operations take effect at this single point; their
    // declared results must match what the spec just produced.
    for (int idx : step.anchor_ops) {
      const OpRecord& op = h.op(idx);
      if (!op.result.has_value()) continue;
      switch (step.transition.kind) {
        case IntervalTransition::Kind::EnqAnchor:
          require(*op.result == OpResult::ok(), "enqueue result mismatch");
          break;
        case IntervalTransition::Kind::DeqAnchor:
          require(head.has_value() && *op.result == OpResult::value(*head),
                  "head dequeue result mismatch");
          break;
        case IntervalTransition::Kind::EmptyPoint:
          require(*op.result == (step.transition.point_weak ? OpResult::weak_empty()
                                                            : OpResult::empty()),
                  "empty-point result mismatch");
          break;
      }
    }
    for (int idx : step.responded_ops) {
      const OpRecord& op = h.op(idx);
      if (op.result.has_value())
        require(op.result->is_weak_empty(), "weak-empty response mismatch");
    }
  }
  // Every completed op participates; weak-empty ops must have responded.
  std::unordered_set<int> responded;
  for (const IntervalWitnessStep& step : w.steps) {
    for (int idx : step.anchor_ops) responded.insert(idx);
    for (int idx : step.responded_ops) responded.insert(idx);
  }
  for (const OpRecord& op : h.ops())
    if (op.completed()) require(responded.count(op.index) == 1, "completed operation missing");
  for (const auto& [a, sa] : span)
    for (const auto& [b, sb] : span)
      if (a != b && h.precedes(h.op(a), h.op(b)))
        require(sa.second < sb.first, "real-time order violated");
}

}  // namespace relaxedsync
