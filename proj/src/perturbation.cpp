#include "hmflab/perturbation.hpp"

namespace hmf {

std::optional<int> k0_numeric(const std::vector<CoefficientTable>& tables, const PauliString& op, double tol) {
  for (const auto& t : tables) {
    if (t.order < 1) continue;
    if (std::abs(t.at(op).value) > tol) return t.order;
  }
  return std::nullopt;
}

int k0_lower_bound(const PauliString& op, int n_sites_a) {
  return 2 * (distance(op, n_sites_a) + 1) - op.body_count();
}

}  // namespace hmf
