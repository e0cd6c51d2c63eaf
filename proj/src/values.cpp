#include "relaxedsync/values.hpp"

namespace relaxedsync {

std::string CellValue::to_string() const {
  if (is_bottom()) return "bot";
  if (is_taken()) return "taken";
  return std::to_string(enc_);
}

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Push: return "push";
    case OpKind::Pop: return "pop";
    case OpKind::Enq: return "enq";
    case OpKind::Deq: return "deq";
    case OpKind::Inc: return "inc";
    case OpKind::Read: return "read";
    case OpKind::Put: return "put";
    case OpKind::Take: return "take";
    case OpKind::Steal: return "steal";
    case OpKind::Rename: return "rename";
    case OpKind::RegRead: return "regread";
    case OpKind::RegWrite: return "regwrite";
  }
  return "?";
}

std::optional<OpKind> op_kind_from_name(const std::string& name) {
  static const struct { const char* n; OpKind k; } table[] = {
      {"push", OpKind::Push},   {"pop", OpKind::Pop},       {"enq", OpKind::Enq},
      {"deq", OpKind::Deq},     {"inc", OpKind::Inc},       {"read", OpKind::Read},
      {"put", OpKind::Put},     {"take", OpKind::Take},     {"steal", OpKind::Steal},
      {"rename", OpKind::Rename}, {"regread", OpKind::RegRead}, {"regwrite", OpKind::RegWrite},
  };
  for (const auto& row : table)
    if (name == row.n) return row.k;
  return std::nullopt;
}

std::string OpResult::to_string() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::Int: return std::to_string(value_);
    case Kind::Empty: return "empty";
    case Kind::WeakEmpty: return "weakempty";
  }
  return "?";
}

std::optional<OpResult> OpResult::from_string(const std::string& text) {
  if (text == "true") return ok();
  if (text == "empty") return empty();
  if (text == "weakempty") return weak_empty();
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == nullptr || *end != '\0') return std::nullopt;
  return value(v);
}

}  // namespace relaxedsync
