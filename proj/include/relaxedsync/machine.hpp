#pragma once

#include <memory>
#include <optional>

#include "relaxedsync/memory.hpp"
#include "relaxedsync/values.hpp"

namespace relaxedsync {

/// A resumable operation.  Each step() performs exactly one shared
/// register access and then yields; local computation rides along with
/// the access.  That granularity makes exhaustive interleaving feasible:
/// with atomic registers, finer schedules are indistinguishable.
class StepMachine {
 public:
  explicit StepMachine(int proc) : proc_(proc) {}
  virtual ~StepMachine() = default;

  StepMachine(const StepMachine&) = delete;
  StepMachine& operator=(const StepMachine&) = delete;

  /// Performs one shared access. Must not be called after done().
  virtual void step(Memory& mem) = 0;

  bool done() const { return result_.has_value(); }
  const OpResult& result() const { return *result_; }
  int proc() const { return proc_; }

 protected:
  void finish(OpResult r) { result_ = r; }

  int proc_;

 private:
  std::optional<OpResult> result_;
};

/// Runs a machine to completion; the caller in live mode is the worker
/// thread owning this process id.
inline OpResult run_to_completion(StepMachine& m, Memory& mem) {
  while (!m.done()) m.step(mem);
  return m.result();
}

}  // namespace relaxedsync
