#include "relaxedsync/history.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace relaxedsync {

History::History(int nprocs, std::string impl, std::vector<Event> events)
    : nprocs_(nprocs), impl_(std::move(impl)), events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.seq < b.seq; });
  rebuild_ops();
}

void History::rebuild_ops() {
  // Incoming op indices only need to pair each res with its inv; they are
  // remapped to dense indices in invocation order.
  ops_.clear();
  std::unordered_map<int, int> remap;
  for (int pos = 0; pos < static_cast<int>(events_.size()); ++pos) {
    Event& e = events_[static_cast<std::size_t>(pos)];
    if (e.is_inv) {
      if (remap.count(e.op_index)) throw TraceParseError("duplicate invocation op index");
      int dense = static_cast<int>(ops_.size());
      remap[e.op_index] = dense;
      e.op_index = dense;
      OpRecord rec;
      rec.index = dense;
      rec.proc = e.proc;
      rec.kind = e.op;
      rec.arg = e.arg;
      rec.inv_pos = pos;
      ops_.push_back(rec);
    } else {
      auto it = remap.find(e.op_index);
      if (it == remap.end()) throw TraceParseError("response without invocation");
      e.op_index = it->second;
      OpRecord& rec = ops_[static_cast<std::size_t>(it->second)];
      if (rec.res_pos >= 0) throw TraceParseError("duplicate response");
      rec.result = e.result;
      rec.res_pos = pos;
    }
  }
}

bool History::is_sequential() const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    for (std::size_t j = i + 1; j < ops_.size(); ++j)
      if (overlaps(ops_[i], ops_[j])) return false;
  return true;
}

void History::validate_well_formed() const {
  std::vector<int> open(static_cast<std::size_t>(nprocs_) + 1, -1);
  for (const Event& e : events_) {
    if (e.proc < 1 || e.proc > nprocs_) throw TraceParseError("event process id out of range");
    int& cur = open[static_cast<std::size_t>(e.proc)];
    if (e.is_inv) {
      if (cur >= 0) throw TraceParseError("process invoked while an operation is pending");
      cur = e.op_index;
    } else {
      if (cur != e.op_index) throw TraceParseError("response does not match the pending operation");
      if (!e.result.has_value()) throw TraceParseError("response carries no result");
      cur = -1;
    }
  }
}

std::string History::to_trace() const {
  std::ostringstream out;
  out << "trace v1 n=" << nprocs_ << " impl=" << impl_ << "\n";
  std::uint64_t seq = 0;
  for (const Event& e : events_) {
    out << seq++ << ' ' << e.proc << ' ' << (e.is_inv ? "inv" : "res") << ' '
        << op_kind_name(e.op) << ' ';
    if (e.is_inv)
      out << (e.arg.has_value() ? std::to_string(*e.arg) : std::string("-"));
    else
      out << e.result->to_string();
    out << "\n";
  }
  return out.str();
}

History History::from_trace(const std::string& text) {
  std::istringstream in(text);
  return from_trace_stream(in);
}

History History::from_trace_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw TraceParseError("empty trace");
  std::istringstream head(line);
  std::string magic, version, nfield, implfield;
  head >> magic >> version >> nfield >> implfield;
  if (magic != "trace" || version != "v1" || nfield.rfind("n=", 0) != 0 ||
      implfield.rfind("impl=", 0) != 0)
    throw TraceParseError("bad trace header: " + line);
  int nprocs = 0;
  try {
    nprocs = std::stoi(nfield.substr(2));
  } catch (const std::exception&) {
    throw TraceParseError("bad process count in header");
  }
  std::string impl = implfield.substr(5);

  std::vector<Event> events;
  // op indices are reconstructed: per process, inv opens, res closes.
  std::vector<int> open(static_cast<std::size_t>(nprocs) + 1, -1);
  int next_op = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::uint64_t seq = 0;
    int proc = 0;
    std::string kind, opname, payload;
    if (!(row >> seq >> proc >> kind >> opname >> payload))
      throw TraceParseError("bad trace line: " + line);
    if (proc < 1 || proc > nprocs) throw TraceParseError("process id out of range: " + line);
    auto op = op_kind_from_name(opname);
    if (!op.has_value()) throw TraceParseError("unknown operation: " + opname);
    Event e;
    e.seq = seq;
    e.proc = proc;
    e.op = *op;
    int& cur = open[static_cast<std::size_t>(proc)];
    if (kind == "inv") {
      e.is_inv = true;
      if (cur >= 0) throw TraceParseError("process invoked twice without response: " + line);
      if (payload != "-") {
        try {
          e.arg = std::stoll(payload);
        } catch (const std::exception&) {
          throw TraceParseError("bad invocation payload: " + line);
        }
      }
      e.op_index = next_op++;
      cur = e.op_index;
    } else if (kind == "res") {
      e.is_inv = false;
      if (cur < 0) throw TraceParseError("response without invocation: " + line);
      auto result = OpResult::from_string(payload);
      if (!result.has_value()) throw TraceParseError("bad response payload: " + line);
      e.result = result;
      e.op_index = cur;
      cur = -1;
    } else {
      throw TraceParseError("event kind must be inv or res: " + line);
    }
    if (!events.empty() && e.seq <= events.back().seq)
      throw TraceParseError("event seq not strictly increasing: " + line);
    events.push_back(e);
  }
  return History(nprocs, impl, std::move(events));
}

}  // namespace relaxedsync
