#include <gtest/gtest.h>

#include <random>

#include "hmflab/model.hpp"
#include "hmflab/pauli.hpp"
#include "hmflab/pauli_matrix.hpp"

using namespace hmf;

namespace {

PauliString P(const char* s, int n = 7) { return PauliString::parse(s, n); }

std::vector<PauliString> all_strings(int n) {
  std::vector<PauliString> out{PauliString::identity(n)};
  for (int k = 1; k <= n; ++k) {
    auto e = enumerate_pauli(n, k);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

}  // namespace

TEST(Pauli, ParseAndPrint) {
  EXPECT_EQ(P("X1 Z3").to_string(), "X1 Z3");
  EXPECT_EQ(P("z3x1").to_string(), "X1 Z3");
  EXPECT_TRUE(P("I").is_identity());
  EXPECT_EQ(P("I").to_string(), "I");
  EXPECT_THROW(P("X9"), UsageError);
  EXPECT_THROW(P("X1 Y1"), UsageError);
  EXPECT_THROW(P("Q2"), UsageError);
}

TEST(Pauli, SingleSiteProducts) {
  const auto r = multiply(P("X1", 1), P("Y1", 1));
  EXPECT_EQ(r.phase_quarters, 1);
  EXPECT_EQ(r.string, P("Z1", 1));
  EXPECT_EQ(multiply(P("Y1", 1), P("X1", 1)).phase_quarters, 3);
  EXPECT_EQ(multiply(P("Z1", 1), P("X1", 1)).phase_quarters, 1);
  EXPECT_EQ(multiply(P("Y1", 1), P("Z1", 1)).phase_quarters, 1);
  const auto id = multiply(P("I", 3), P("X2", 3));
  EXPECT_EQ(id.phase_quarters, 0);
  EXPECT_EQ(id.string, P("X2", 3));
  const auto xx = multiply(P("X1 X2", 3), P("X2 X3", 3));
  EXPECT_EQ(xx.phase_quarters, 0);
  EXPECT_EQ(xx.string, P("X1 X3", 3));
}

TEST(Pauli, MultiplyChainMismatchIsUsageError) {
  EXPECT_THROW(multiply(P("X1", 2), P("X1", 3)), UsageError);
}

TEST(Pauli, MultiplyIsAssociativeOnTwoSites) {
  const auto all = all_strings(2);
  for (const auto& a : all) {
    for (const auto& b : all) {
      for (const auto& c : all) {
        const auto l = multiply(multiply(PhasedPauli{0, a}, PhasedPauli{0, b}), PhasedPauli{0, c});
        const auto r = multiply(PhasedPauli{0, a}, multiply(PhasedPauli{0, b}, PhasedPauli{0, c}));
        ASSERT_EQ(l, r) << a.to_string() << " " << b.to_string() << " " << c.to_string();
      }
    }
  }
}

TEST(Pauli, MatrixRealizationIsAHomomorphism) {
  const auto all = all_strings(2);
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto ab = multiply(a, b);
      const auto [pre, pim] = detail::i_power(ab.phase_quarters);
      auto rhs = to_matrix<double>(ab.string, 2);
      for (auto& e : rhs.entries()) e = e * Complex<double>(pre, pim);
      const auto lhs = to_matrix<double>(a, 2) * to_matrix<double>(b, 2);
      ASSERT_EQ((lhs - rhs).frobenius_norm(), 0.0) << a.to_string() << " * " << b.to_string();
    }
  }
  std::mt19937 rng(4);
  const auto big = all_strings(4);
  std::uniform_int_distribution<std::size_t> pick(0, big.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const auto& a = big[pick(rng)];
    const auto& b = big[pick(rng)];
    const auto ab = multiply(a, b);
    const auto [pre, pim] = detail::i_power(ab.phase_quarters);
    auto rhs = to_matrix<double>(ab.string, 4);
    for (auto& e : rhs.entries()) e = e * Complex<double>(pre, pim);
    ASSERT_EQ((to_matrix<double>(a, 4) * to_matrix<double>(b, 4) - rhs).frobenius_norm(), 0.0);
  }
}

TEST(Pauli, MatrixExamples) {
  EXPECT_EQ((to_matrix<double>(P("I", 2), 2) - DenseOperator<double>::identity(4)).frobenius_norm(), 0.0);
  const auto z = to_matrix<double>(P("Z1", 1), 1);
  EXPECT_EQ(z(0, 0).re, 1.0);
  EXPECT_EQ(z(1, 1).re, -1.0);
  // site 2 is the least significant qubit: I (x) X
  const auto x2 = to_matrix<double>(P("X2", 2), 2);
  EXPECT_EQ(x2(0, 1).re, 1.0);
  EXPECT_EQ(x2(2, 3).re, 1.0);
  EXPECT_EQ(x2(0, 2).re, 0.0);
  const auto y = to_matrix<double>(P("Y1", 1), 1);
  EXPECT_EQ(y(0, 1).im, -1.0);
  EXPECT_EQ(y(1, 0).im, 1.0);
  EXPECT_THROW(to_matrix<double>(P("X3", 3), 2), UsageError);
}

TEST(Pauli, MatricesAreHermitianUnitaryInvolutions) {
  for (const auto& s : all_strings(3)) {
    const auto m = to_matrix<double>(s, 3);
    EXPECT_EQ(m.hermiticity_defect(), 0.0);
    EXPECT_EQ((m * m - DenseOperator<double>::identity(8)).frobenius_norm(), 0.0);
  }
}

TEST(Pauli, HilbertSchmidtOrthonormality) {
  for (int n = 1; n <= 3; ++n) {
    const auto all = all_strings(n);
    for (const auto& a : all) {
      const auto m = to_matrix<double>(a, n);
      for (const auto& b : all) {
        ASSERT_EQ(pauli_coefficient(m, b), a == b ? 1.0 : 0.0) << a.to_string() << " " << b.to_string();
      }
    }
  }
}

TEST(Pauli, CoefficientOfHamiltonianTerm) {
  const auto spec = restrict_to_a(build_xxz(4, 0.8, 0.95, FieldMode::uniform, 0.2, 0.3), 4);
  const auto h = dense<double>(spec);
  EXPECT_DOUBLE_EQ(pauli_coefficient(h, P("X1 X2", 4)), 0.8);
  EXPECT_DOUBLE_EQ(pauli_coefficient(h, P("Z3 Z4", 4)), 0.95);
  EXPECT_DOUBLE_EQ(pauli_coefficient(h, P("Z2", 4)), 0.3);
  EXPECT_DOUBLE_EQ(pauli_coefficient(h, P("X4", 4)), 0.2);
  EXPECT_EQ(pauli_coefficient(h, P("X1 Y2", 4)), 0.0);
}

TEST(Pauli, CoefficientRejectsNonHermitian) {
  DenseOperator<double> m(2);
  m(0, 1) = Complex<double>(1.0);
  EXPECT_THROW(pauli_coefficient(m, P("X1", 1)), NumericalError);
}

TEST(Pauli, Distance) {
  EXPECT_EQ(distance(P("X6", 6), 6), 0);
  EXPECT_EQ(distance(P("X1", 6), 6), 5);
  EXPECT_EQ(distance(P("Z3 Z5", 6), 6), 3);
  EXPECT_THROW(distance(P("I", 6), 6), UsageError);
  EXPECT_THROW(distance(P("X7", 7), 6), UsageError);
}

TEST(Pauli, EnumerationCounts) {
  EXPECT_EQ(enumerate_pauli(2, 1).size(), 6U);
  EXPECT_EQ(enumerate_pauli(4, 2).size(), 54U);
  std::size_t total = 0;
  for (int n = 1; n <= 4; ++n) total += enumerate_pauli(4, n).size();
  EXPECT_EQ(total, 255U);
  const auto e = enumerate_pauli(3, 2);
  EXPECT_EQ(e.front().to_string(), "X1 X2");
  EXPECT_EQ(e.back().to_string(), "Z2 Z3");
}

TEST(Pauli, FamilyMembersOrderedByDecreasingDistance) {
  const auto f = family_members(P("X3 X4"), 6);
  ASSERT_EQ(f.size(), 5U);
  EXPECT_EQ(f.front().to_string(), "X1 X2");
  EXPECT_EQ(f.back().to_string(), "X5 X6");
  EXPECT_EQ(distance(f.front(), 6), 5);
  EXPECT_EQ(distance(f.back(), 6), 1);
}

TEST(SelectionRules, XXZWithoutFields) {
  const auto terms = build_xxz(7, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0).strings();
  EXPECT_TRUE(sign_excludes(terms, P("Z3")));
  EXPECT_TRUE(sign_excludes(terms, P("X1")));
  EXPECT_TRUE(sign_excludes(terms, P("X2 Y4")));
  EXPECT_TRUE(sign_excludes(terms, P("Z2 X3")));
  EXPECT_FALSE(sign_excludes(terms, P("X1 Y2 Z3")));
  EXPECT_FALSE(sign_excludes(terms, P("X2 X3")));
  EXPECT_EQ(excluding_assignment(terms, P("Z3"))->plus_axis, Axis::x);
  EXPECT_EQ(excluding_assignment(terms, P("X2 Y4"))->plus_axis, Axis::x);
}

TEST(SelectionRules, FieldsRemoveExclusions) {
  const auto terms = build_xxz(7, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2).strings();
  EXPECT_FALSE(sign_excludes(terms, P("Z3")));
  EXPECT_FALSE(sign_excludes(terms, P("X2 Z3")));
}

TEST(SelectionRules, SignIsMultiplicative) {
  const auto all = all_strings(2);
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const SignAssignment s{a};
    for (const auto& p : all) {
      for (const auto& q : all) EXPECT_EQ(s.sign(multiply(p, q).string), s.sign(p) * s.sign(q));
    }
  }
}

TEST(Factorization, MinimalProductLength) {
  const auto xx = std::vector<PauliString>{P("X1 X2", 3), P("X2 X3", 3)};
  EXPECT_EQ(minimal_product_length(xx, P("X1 X2", 3), 4), 1);
  EXPECT_EQ(minimal_product_length(xx, P("X1 X3", 3), 4), 2);
  EXPECT_FALSE(minimal_product_length(xx, P("Z1", 3), 1).has_value());
  EXPECT_FALSE(minimal_product_length(xx, P("Z1", 3), 6).has_value());
}

TEST(Split, Examples) {
  EXPECT_TRUE(tuple_splits({P("X1 X2")}, 6));
  EXPECT_TRUE(tuple_splits({P("X1 X2"), P("Z6 Z7")}, 6));
  // chain connecting X5 X6 to the bath through Z6 Z7 twice
  const std::vector<PauliString> chain{P("X5 X6"), P("Z6 Z7"), P("Z6 Z7")};
  EXPECT_FALSE(tuple_splits(chain, 6));
  // X6 X7 commutes with X5 X6 so the A-only part can be peeled off
  EXPECT_TRUE(tuple_splits({P("X5 X6"), P("X6 X7"), P("X6 X7")}, 6));
}

TEST(Split, ComponentFormAgreesWithExhaustive) {
  const auto terms = build_xxz(6, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2).strings();
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  std::uniform_int_distribution<int> len(1, 7);
  for (int t = 0; t < 3000; ++t) {
    std::vector<PauliString> tuple;
    const int m = len(rng);
    for (int i = 0; i < m; ++i) tuple.push_back(terms[pick(rng)]);
    for (int la = 1; la < 6; ++la) {
      ASSERT_EQ(tuple_splits(tuple, la), tuple_splits_by_components(tuple, la));
    }
  }
}

TEST(Conjecture, NearestNeighbourOrders) {
  const auto terms = build_xxz(7, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2).strings();
  for (int d = 1; d <= 3; ++d) {
    const int j = 6 - d;
    const auto same = PauliString(7, {{j, Axis::x}, {j + 1, Axis::x}});
    EXPECT_EQ(conjecture_k0(terms, same, 6, 10), 2 * d) << same.to_string();
    // the bath-connecting chains built from squared bonds give 2d+1; fields
    // inside B can shorten them, so only the upper bound is fixed here
    const auto mixed = PauliString(7, {{j, Axis::y}, {j + 1, Axis::x}});
    EXPECT_LE(conjecture_k0(terms, mixed, 6, 10).value(), 2 * d + 1) << mixed.to_string();
  }
  for (int d = 0; d <= 3; ++d) {
    const auto one = PauliString(7, {{6 - d, Axis::x}});
    EXPECT_LE(conjecture_k0(terms, one, 6, 10).value(), 2 * d + 1) << one.to_string();
  }
}

TEST(Conjecture, FieldInBathGivesShorterUnsplittableTuple) {
  // X4 = -(X4 X5)(Y5 Y6)(Z5 Z6)(X6 X7)(X7): five factors, one connected
  // anticommutation component reaching the bath
  const std::vector<PauliString> t{P("X4 X5"), P("Y5 Y6"), P("Z5 Z6"), P("X6 X7"), P("X7")};
  PhasedPauli prod{0, PauliString::identity(7)};
  for (const auto& h : t) prod = multiply(prod, PhasedPauli{0, h});
  EXPECT_EQ(prod.string, P("X4"));
  EXPECT_EQ(prod.phase_quarters, 2);
  EXPECT_FALSE(tuple_splits(t, 6));
  const auto terms = build_xxz(7, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2).strings();
  EXPECT_EQ(conjecture_k0(terms, P("X4"), 6, 10), 4);
  // without fields on B sites the shortcut disappears
  std::vector<PauliString> no_bath_field;
  for (const auto& h : terms) {
    if (!(h.body_count() == 1 && h.min_site() == 7)) no_bath_field.push_back(h);
  }
  EXPECT_EQ(conjecture_k0(no_bath_field, P("X4"), 6, 10), 5);
}

TEST(Conjecture, AbsentWhenUnreachable) {
  const auto terms = build_xxz(5, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0).strings();
  EXPECT_FALSE(conjecture_k0(terms, P("Z2", 5), 4, 6).has_value());
}

namespace {

// Every multiset of `len` terms, by nondecreasing index tuples.
bool brute_nonsplitting(const std::vector<PauliString>& terms, const PauliString& op, int la, int len) {
  const std::size_t m = terms.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
  while (true) {
    std::vector<PauliString> tuple;
    PhasedPauli prod{0, PauliString::identity(op.chain_length())};
    for (auto i : idx) {
      tuple.push_back(terms[i]);
      prod = multiply(prod, PhasedPauli{0, terms[i]});
    }
    if (prod.string == op && !tuple_splits(tuple, la)) return true;
    std::size_t p = idx.size();
    while (p > 0 && idx[p - 1] == m - 1) --p;
    if (p == 0) return false;
    ++idx[p - 1];
    for (std::size_t q = p; q < idx.size(); ++q) idx[q] = idx[p - 1];
  }
}

}  // namespace

TEST(Conjecture, LengthMatchesBruteForceTuples) {
  const auto terms = build_xxz(5, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2).strings();
  const int la = 3;
  for (const auto& op : {P("X2", 5), P("Z1", 5), P("Z2 Z3", 5), P("Y2 X3", 5), P("X1 X2 Z3", 5)}) {
    std::optional<int> brute;
    for (int len = 2; len <= 5; ++len) {
      const bool b = brute_nonsplitting(terms, op, la, len);
      EXPECT_EQ(nonsplitting_tuple_exists(terms, op, la, len), b) << op.to_string() << " len=" << len;
      if (b && !brute) brute = len - 1;
    }
    EXPECT_EQ(conjecture_k0(terms, op, la, 4), brute) << op.to_string();
  }
}
