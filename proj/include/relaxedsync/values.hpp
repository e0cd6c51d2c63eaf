#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace relaxedsync {

/// A contract breach by the caller (wrong process id, duplicate item,
/// rename reuse).  Reported, never silently ignored.
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A harness resource limit was hit (array capacity, step bound).
struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Value stored in an item register: a positive-integer item, the
/// never-written initial mark, or the taken mark.  Sentinels are tagged,
/// not magic integers, so items may use the whole positive range.
class CellValue {
 public:
  constexpr CellValue() : enc_(kBottom) {}

  static constexpr CellValue bottom() { return CellValue(kBottom); }
  static constexpr CellValue taken_mark() { return CellValue(kTaken); }
  static CellValue item(std::int64_t payload) {
    if (payload < 1) throw ContractViolation("items must be positive integers");
    return CellValue(payload);
  }

  constexpr bool is_bottom() const { return enc_ == kBottom; }
  constexpr bool is_taken() const { return enc_ == kTaken; }
  constexpr bool is_item() const { return enc_ >= 1; }

  std::int64_t payload() const {
    if (!is_item()) throw ContractViolation("payload() on a sentinel");
    return enc_;
  }

  friend constexpr bool operator==(CellValue a, CellValue b) { return a.enc_ == b.enc_; }
  friend constexpr bool operator!=(CellValue a, CellValue b) { return a.enc_ != b.enc_; }

  std::string to_string() const;

  // Storage encoding used by the register layer and the access log.
  constexpr std::int64_t encode() const { return enc_; }
  static constexpr CellValue decode(std::int64_t raw) { return CellValue(raw); }

 private:
  static constexpr std::int64_t kBottom = -1;
  static constexpr std::int64_t kTaken = -2;

  explicit constexpr CellValue(std::int64_t enc) : enc_(enc) {}

  std::int64_t enc_;
};

/// High-level operations that can appear in a history.
enum class OpKind {
  Push,
  Pop,
  Enq,
  Deq,
  Inc,      // counter increment
  Read,     // counter read
  Put,      // work-stealing insert (owner only)
  Take,     // work-stealing remove by owner
  Steal,    // work-stealing remove by thief
  Rename,   // adaptive renaming acquire
  RegRead,  // raw register read, for register-level histories
  RegWrite, // raw register write
};

const char* op_kind_name(OpKind k);
std::optional<OpKind> op_kind_from_name(const std::string& name);

/// Response of a completed operation.
class OpResult {
 public:
  enum class Kind { True, Int, Empty, WeakEmpty };

  static OpResult ok() { return OpResult(Kind::True, 0); }
  static OpResult value(std::int64_t v) { return OpResult(Kind::Int, v); }
  static OpResult empty() { return OpResult(Kind::Empty, 0); }
  static OpResult weak_empty() { return OpResult(Kind::WeakEmpty, 0); }

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_weak_empty() const { return kind_ == Kind::WeakEmpty; }

  std::int64_t int_value() const {
    if (kind_ != Kind::Int) throw ContractViolation("int_value() on non-integer result");
    return value_;
  }

  friend bool operator==(OpResult a, OpResult b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Int || a.value_ == b.value_);
  }
  friend bool operator!=(OpResult a, OpResult b) { return !(a == b); }

  std::string to_string() const;
  static std::optional<OpResult> from_string(const std::string& text);

 private:
  OpResult(Kind k, std::int64_t v) : kind_(k), value_(v) {}

  Kind kind_;
  std::int64_t value_;
};

}  // namespace relaxedsync
