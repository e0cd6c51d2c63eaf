#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaxedsync/history.hpp"
#include "relaxedsync/specs.hpp"

namespace relaxedsync {

struct CheckOptions {
  std::uint64_t node_budget = 10'000'000;
  int max_ops_linear = 14;   // documented scale cap for lin / set-lin
  int max_ops_interval = 10; // documented scale cap for interval-lin
  bool singleton_classes_only = false;
};

/// Node budget with the RELAXEDSYNC_BUDGET environment override applied.
std::uint64_t default_node_budget();

struct LinWitness {
  std::vector<int> order;  // op indices in linearization order
};

struct SetWitness {
  std::vector<std::vector<int>> classes;  // op indices per concurrency class
};

struct IntervalWitnessStep {
  IntervalTransition transition;
  std::vector<int> anchor_ops;
  std::vector<int> registered_ops;
  std::vector<int> responded_ops;
};

struct IntervalWitness {
  std::vector<IntervalWitnessStep> steps;
};

/// Checker output: acceptance with a witness that revalidates through
/// the spec module, rejection after exhausting the search space, or a
/// budget stop (which is not a rejection).
struct Verdict {
  enum class Status { Accepted, Rejected, BudgetExceeded };

  Status status = Status::Rejected;
  std::uint64_t nodes = 0;
  std::string note;
  std::vector<std::string> witness_lines;  // one class / transition per line
  std::optional<LinWitness> lin;
  std::optional<SetWitness> set;
  std::optional<IntervalWitness> interval;

  bool accepted() const { return status == Status::Accepted; }
};

Verdict check_linearizable(const History& h, const SequentialSpec& spec,
                           const CheckOptions& opt = {});
Verdict check_set_linearizable(const History& h, const SetSpec& spec,
                               const CheckOptions& opt = {});
Verdict check_interval_linearizable(const History& h, const IntervalQueueSpec& spec,
                                    const CheckOptions& opt = {});

/// Direct checks of the per-lemma properties: duplicate returns must
/// overlap, and histories that are sequential / free of concurrent
/// removals / free of duplicate returns must pass the plain
/// linearizability check against the unrelaxed spec.
struct LemmaReport {
  struct DuplicatePair {
    int op_a = -1;
    int op_b = -1;
    std::int64_t item = 0;
    bool overlapping = false;
  };

  std::vector<DuplicatePair> duplicates;
  int disjoint_duplicates = 0;
  bool sequential = false;
  bool no_concurrent_removals = false;
  bool all_distinct_returns = false;
  std::optional<bool> linearizable;  // set when one of the three cases applies and size permits
  std::string note;

  bool ok() const {
    return disjoint_duplicates == 0 && (!linearizable.has_value() || *linearizable);
  }
};

LemmaReport check_lemma_properties(const History& h, bool queue_flavor,
                                   const CheckOptions& opt = {});

// Witness revalidation: replays a witness through the spec module and
// re-checks the real-time order.  Throws std::logic_error on any
// mismatch; the checkers call these on every acceptance.
void revalidate(const History& h, const SequentialSpec& spec, const LinWitness& w);
void revalidate(const History& h, const SetSpec& spec, const SetWitness& w);
void revalidate(const History& h, const IntervalQueueSpec& spec, const IntervalWitness& w);

}  // namespace relaxedsync
