#include "relaxedsync/structure.hpp"

#include "relaxedsync/adapters.hpp"
#include "relaxedsync/queues.hpp"
#include "relaxedsync/stacks.hpp"

namespace relaxedsync {

std::unique_ptr<Structure> make_structure(const std::string& impl, Memory& mem,
                                          const StructureConfig& config) {
  if (impl == "seqstack") return std::make_unique<SeqStack>(mem, config);
  if (impl == "setseqstack") return std::make_unique<SetSeqStack>(mem, config);
  if (impl == "renstack") return std::make_unique<RenSetSeqStack>(mem, config);
  if (impl == "seqqueue") return std::make_unique<SeqQueue>(mem, config);
  if (impl == "setseqqueue") return std::make_unique<SetSeqQueue>(mem, config);
  if (impl == "naivequeue") return std::make_unique<NaiveQueue>(mem, config);
  if (impl == "intseqqueue") return std::make_unique<IntSeqQueue>(mem, config);
  if (impl == "rwintseqqueue") return std::make_unique<RwIntSeqQueue>(mem, config);
  if (impl == "workstealing") return std::make_unique<WorkStealingPool>(mem, config);
  if (impl == "kfifo") return std::make_unique<KFifoQueue>(mem, config);
  throw ContractViolation("unknown implementation: " + impl);
}

const std::vector<std::string>& structure_names() {
  static const std::vector<std::string> names = {
      "seqstack",  "setseqstack", "renstack",      "seqqueue", "setseqqueue",
      "naivequeue", "intseqqueue", "rwintseqqueue", "workstealing", "kfifo"};
  return names;
}

}  // namespace relaxedsync
