#include <gtest/gtest.h>

#include <cmath>

#include "hmflab/perturbation.hpp"

using namespace hmf;

namespace {

Bipartition fig4(int l, int la, double scale = 1.0) {
  return bipartition(build_xxz(l, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2), la, scale);
}

std::vector<PauliString> all_ops(int la) {
  std::vector<PauliString> out;
  for (int n = 1; n <= la; ++n) {
    auto e = enumerate_pauli(la, n);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

}  // namespace

TEST(Hmf, RejectsNonPositiveBeta) {
  ThermalEngine<double> eng(fig4(4, 2));
  EXPECT_THROW(eng.compute(0.0), UsageError);
  EXPECT_THROW(eng.compute(-1.0), UsageError);
}

TEST(Hmf, VanishingCouplingGivesBareHamiltonian) {
  ThermalEngine<DDReal> eng(fig4(5, 3, 0.0));
  for (double beta : {0.1, 1.0}) {
    const auto r = eng.compute(beta);
    EXPECT_LT(normalized_norm(r.hmf - eng.h_a()), 1e-28) << beta;
  }
  // weights spanning e^{-beta * range} cost relative accuracy in the small eigenvalues of rho_s
  EXPECT_LT(normalized_norm(eng.compute(5.0).hmf - eng.h_a()), 1e-15);
}

TEST(Hmf, TwoSiteXXIsIdentityOnA) {
  // L=2, L_A=1, H = X1X2 + Y1Y2: rho_A = I/2 by symmetry
  const auto b = bipartition(build_xxz(2, 1.0, 0.0, FieldMode::uniform, 0.0, 0.0), 1);
  ThermalEngine<DDReal> eng(b);
  const auto r = eng.compute(1.0);
  const auto t = deviation_table(eng, r, all_ops(1));
  for (const auto& e : t.entries) EXPECT_TRUE(e.below_floor) << e.op.to_string();
  EXPECT_NEAR(std::abs(num::to_double(r.hmf(0, 1).re)), 0.0, 1e-30);
  // Z* = Z/Z_B = (2 e^{2} + 2 e^{-2}... ) / 2: eigenvalues of XX+YY are {2,-2,0,0}
  const double z = 2.0 + std::exp(2.0) + std::exp(-2.0);
  EXPECT_NEAR(num::to_double(r.log_zstar), std::log(z / 2.0), 1e-15);
  // identity part: e^{-H*} = rho_s / Z_B with rho_s = (z/2) I
  EXPECT_NEAR(num::to_double(r.hmf(0, 0).re), -std::log(z / 4.0), 1e-15);
}

TEST(Hmf, SingleBondClosedForm) {
  // H = J X1X2, L_A = 1: tr_B e^{-bH} = 2 cosh(bJ) I, Z_B = 2, H* = -(1/b) ln cosh(bJ) I
  ModelSpec s;
  s.n_sites = 2;
  s.terms.push_back({0.7, PauliString::parse("X1 X2", 2)});
  ThermalEngine<DDReal> eng(bipartition(s, 1));
  for (double beta : {0.01, 0.5, 3.0}) {
    const auto r = eng.compute(beta);
    EXPECT_NEAR(num::to_double(r.hmf(0, 0).re), -std::log(std::cosh(0.7 * beta)) / beta, 1e-14);
    EXPECT_NEAR(num::to_double(r.hmf(1, 1).re), -std::log(std::cosh(0.7 * beta)) / beta, 1e-14);
  }
}

TEST(Hmf, SmallBetaApproachesBareHamiltonian) {
  ThermalEngine<DDReal> eng(fig4(6, 4));
  const auto r = eng.compute(1e-6);
  const double rel = num::to_double((r.hmf - eng.h_a()).frobenius_norm() / eng.h_a().frobenius_norm());
  EXPECT_LE(rel, 1e-5);
  const auto t = deviation_table(eng, r, all_ops(4));
  for (const auto& e : t.entries) EXPECT_LE(std::abs(e.value), 1e-5);
}

TEST(Hmf, ReconstructsReducedThermalState) {
  ThermalEngine<DDReal> eng(fig4(6, 3));
  for (double beta : {0.05, 1.0, 4.0}) {
    const auto r = eng.compute(beta);
    EXPECT_LE(num::to_double(r.hmf.hermiticity_defect()), std::ldexp(1.0, -106 + 20) * num::to_double(r.hmf.frobenius_norm()));
    const auto rho = eng.reduced_thermal_state(beta);
    // e^{-beta H*} / Z* = rho_A
    auto e = func_hermitian(r.hmf, ExpScaled{beta});
    using std::exp;
    e *= exp(-r.log_zstar);
    EXPECT_LE(num::to_double((e - rho).frobenius_norm()), std::ldexp(1.0, -106 + 24)) << beta;
  }
}

TEST(Hmf, SelectionRuleZerosWithoutFields) {
  const auto b = bipartition(build_xxz(6, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0), 4);
  ThermalEngine<DDReal> eng(b);
  const auto terms = build_xxz(6, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0).strings();
  for (double beta : {0.1, 0.5, 1.0, 2.0}) {
    const auto t = deviation_table(eng, eng.compute(beta), all_ops(4));
    for (const auto& e : t.entries) {
      if (sign_excludes(terms, e.op.with_chain_length(6))) {
        EXPECT_TRUE(e.below_floor) << e.op.to_string() << " beta=" << beta << " c=" << e.value;
      }
    }
  }
}

TEST(Hmf, SkinMonotonicityForOneBodyFamily) {
  ThermalEngine<DDReal> eng(fig4(7, 6));
  for (double beta : {0.05, 0.2}) {
    const auto r = eng.compute(beta);
    const auto fam = family_members(PauliString::parse("X1", 6), 6);
    const auto t = deviation_table(eng, r, fam);
    // members are ordered by decreasing distance, so |c| must be non-decreasing along the list
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
      if (t.entries[i - 1].below_floor) continue;
      EXPECT_LE(std::abs(t.entries[i - 1].value), std::abs(t.entries[i].value)) << beta;
    }
  }
}

TEST(Hmf, DeviationTableRejectsOperatorsOutsideA) {
  ThermalEngine<double> eng(fig4(4, 2));
  const auto r = eng.compute(1.0);
  EXPECT_THROW(deviation_table(eng, r, {PauliString::parse("X3", 4)}), UsageError);
}

TEST(Entanglement, PolarizedProductState) {
  const int l = 4;
  const auto spec = build_fields(l, std::vector<double>(l, 0.0), std::vector<double>(l, -1.0));
  const auto ent = entanglement_hamiltonian<DDReal>(spec, 2);
  EXPECT_EQ(ent.gs_degeneracy, 1);
  EXPECT_EQ(ent.reduced_rank, 1);
  EXPECT_EQ(ent.regularization_eps, std::ldexp(1.0, -53));
  const auto sd = hermitian_eigen(ent.ent_ham);
  EXPECT_NEAR(num::to_double(sd.eigenvalues[0]), 0.0, 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(num::to_double(sd.eigenvalues[i]), 53.0 * std::log(2.0), 1e-12);
  EXPECT_THROW(entanglement_hamiltonian<DDReal>(spec, 2, 1e-10, 0.0), DomainError);
}

TEST(Entanglement, DegenerateGroundStateIsNormalized) {
  // H = X1X2 on 3 sites: X1X2 = -1 on two states of sites 1,2, times site 3
  ModelSpec s;
  s.n_sites = 3;
  s.terms.push_back({1.0, PauliString::parse("X1 X2", 3)});
  const auto ent = entanglement_hamiltonian<DDReal>(s, 2);
  EXPECT_EQ(ent.gs_degeneracy, 4);
  EXPECT_NEAR(num::to_double(ent.reduced_gs.trace().re), 1.0, 1e-30);
  ModelSpec s2;
  s2.n_sites = 3;
  s2.terms.push_back({1.0, PauliString::parse("Z1", 3)});
  s2.terms.push_back({1.0, PauliString::parse("Z2", 3)});
  s2.terms.push_back({1.0, PauliString::parse("X2 X3", 3)});
  const auto e2 = entanglement_hamiltonian<DDReal>(s2, 1);
  EXPECT_NEAR(num::to_double(e2.reduced_gs.trace().re), 1.0, 1e-30);
}

TEST(Entanglement, DistanceInvariantUnderConsistentShift) {
  const auto b = fig4(5, 2);
  ThermalEngine<DDReal> eng(b);
  auto r = eng.compute(3.0);
  const auto ent = entanglement_hamiltonian(eng.spectrum(), 5, 2);
  const double d0 = rescaled_distance(r, ent);
  // H* -> H* + c I with ln Z* -> ln Z* - beta c leaves the distance unchanged
  const DDReal c(0.37);
  for (std::size_t i = 0; i < r.hmf.dim(); ++i) r.hmf(i, i).re += c;
  r.log_zstar -= DDReal(3.0) * c;
  EXPECT_NEAR(rescaled_distance(r, ent), d0, 1e-25);
}

TEST(Entanglement, SmallBetaDistanceIsLarge) {
  const auto b = fig4(5, 2);
  ThermalEngine<DDReal> eng(b);
  const auto ent = entanglement_hamiltonian(eng.spectrum(), 5, 2);
  EXPECT_GT(rescaled_distance(eng.compute(1e-3), ent), 1.0);
}
