#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaxedsync/machine.hpp"

namespace relaxedsync {

struct StructureConfig {
  int nprocs = 2;
  std::size_t capacity = 1u << 16;   // slots per array / rows per matrix
  std::uint64_t seed = 1;            // used by the k-FIFO random balancer
  int lanes = 2;                     // k-FIFO lane count
  std::string core = "setseqstack";  // work-stealing core structure
  int ws_owner = 1;                  // work-stealing pool owner
  std::string balancer = "fai";      // k-FIFO balancer: fai | random
  std::string cell_prefix;           // prepended to register names (k-FIFO lanes)
};

/// A registered concurrent structure: a factory of step machines plus
/// quiescent introspection.  Up to nprocs pre-registered processes, one
/// in-flight operation per process.
class Structure {
 public:
  virtual ~Structure() = default;

  virtual std::string_view name() const = 0;
  virtual bool queue_like() const = 0;

  virtual OpKind insert_kind(int proc) const {
    (void)proc;
    return queue_like() ? OpKind::Enq : OpKind::Push;
  }
  virtual OpKind remove_kind(int proc) const {
    (void)proc;
    return queue_like() ? OpKind::Deq : OpKind::Pop;
  }

  virtual std::unique_ptr<StepMachine> make_insert(int proc, std::int64_t item) = 0;
  virtual std::unique_ptr<StepMachine> make_remove(int proc) = 0;

  /// Items currently stored in cells; meaningful at quiescence.
  virtual std::vector<std::int64_t> resident_items(const Memory& mem) const = 0;

  virtual std::optional<int> owner() const { return std::nullopt; }
};

std::unique_ptr<Structure> make_structure(const std::string& impl, Memory& mem,
                                          const StructureConfig& config);
const std::vector<std::string>& structure_names();

}  // namespace relaxedsync
