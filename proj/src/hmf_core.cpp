#include "hmflab/hmf_core.hpp"

namespace hmf {

const CoefficientEntry& CoefficientTable::at(const PauliString& op) const {
  for (const auto& e : entries) {
    if (e.op == op) return e;
  }
  throw UsageError("coefficient table has no entry for " + op.to_string());
}

}  // namespace hmf
