#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaxedsync/values.hpp"

namespace relaxedsync {

/// One invocation or response event, totally ordered by seq.
struct Event {
  std::uint64_t seq = 0;
  int proc = 0;  // 1-based
  bool is_inv = true;
  OpKind op = OpKind::Push;
  std::optional<std::int64_t> arg;   // inv payload
  std::optional<OpResult> result;    // res payload
  int op_index = -1;                 // pairs inv with res
};

/// An operation reconstructed from its events.  `res_pos == -1` means the
/// operation is pending (its process crashed or was cut off).
struct OpRecord {
  int index = -1;
  int proc = 0;
  OpKind kind = OpKind::Push;
  std::optional<std::int64_t> arg;
  std::optional<OpResult> result;
  int inv_pos = -1;  // position in History::events
  int res_pos = -1;

  bool completed() const { return res_pos >= 0; }
};

/// Totally ordered event log of an execution, n processes.  Induces the
/// real-time partial order: a < b iff res(a) precedes inv(b).
class History {
 public:
  History() = default;
  History(int nprocs, std::string impl, std::vector<Event> events);

  int nprocs() const { return nprocs_; }
  const std::string& impl() const { return impl_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<OpRecord>& ops() const { return ops_; }
  const OpRecord& op(int index) const { return ops_[static_cast<std::size_t>(index)]; }

  bool precedes(const OpRecord& a, const OpRecord& b) const {
    return a.res_pos >= 0 && a.res_pos < b.inv_pos;
  }
  bool overlaps(const OpRecord& a, const OpRecord& b) const {
    return !precedes(a, b) && !precedes(b, a);
  }

  bool is_sequential() const;

  /// Per-process events alternate inv/res with matching op indices.
  /// Throws TraceParseError when violated.
  void validate_well_formed() const;

  std::string to_trace() const;
  static History from_trace(const std::string& text);
  static History from_trace_stream(std::istream& in);

 private:
  void rebuild_ops();

  int nprocs_ = 0;
  std::string impl_;
  std::vector<Event> events_;
  std::vector<OpRecord> ops_;
};

}  // namespace relaxedsync
