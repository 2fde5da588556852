// Acceptance run: one PASS/FAIL line per criterion, details on indented lines.
// Exits nonzero if any criterion fails.
// All computations run at P = 106 (double-double).

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmflab/analysis.hpp"
#include "hmflab/perturbation.hpp"

using namespace hmf;
using Real = DDReal;

namespace {

constexpr int kBits = 106;
const double kTol = std::ldexp(1.0, -kBits + 30);

int g_failed = 0;

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void info(const std::string& s) { std::printf("    %s\n", s.c_str()); }

void criterion(int id, const char* title, const std::function<bool()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!error.empty()) info("error: " + error);
  std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, title, secs);
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  v.front() = lo;
  v.back() = hi;
  return v;
}

Bipartition fig2(double delta = 0.95, double h = 0.2, int l = 7, int la = 6, double jab = 1.0) {
  return bipartition(build_xxz(l, 1.0, delta, FieldMode::uniform, h, h), la, jab);
}

PauliString op(const std::string& text, int la) { return PauliString::parse(text, la); }

double max_diff(const DenseOperator<Real>& a, const DenseOperator<Real>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const auto d = a(i, j) - b(i, j);
      m = std::max({m, std::abs(num::to_double(d.re)), std::abs(num::to_double(d.im))});
    }
  }
  return m;
}

std::vector<CoefficientTable> exact_tables(const ThermalEngine<Real>& eng, const std::vector<PauliString>& ops,
                                           const std::vector<double>& betas) {
  std::vector<CoefficientTable> out;
  for (double b : betas) out.push_back(deviation_table(eng, eng.compute(b), ops));
  return out;
}

// ---------------------------------------------------------------------------

bool small_beta_limit() {
  const auto b = fig2(0.95, 0.2, 6, 4);
  ThermalEngine<Real> eng(b);
  auto rel = [&](double beta) {
    const auto r = eng.compute(beta);
    return num::to_double((r.hmf - eng.h_a()).frobenius_norm() / eng.h_a().frobenius_norm());
  };
  const double r4 = rel(1e-4);
  const double r3 = rel(1e-3);
  info(fmt("||H*-H_A||/||H_A||: %.6e at beta=1e-4, %.6e at beta=1e-3, ratio %.5f (need <= 0.11)", r4, r3, r4 / r3));
  return r4 <= 0.11 * r3;
}

bool first_order_identity() {
  const auto b = fig2(0.95, 0.0, 5, 3);
  const auto c1 = series_coefficient<Real>(b, 1).matrix;
  const auto expect = DenseOperator<Real>::identity(c1.dim()) * Real(1.45125);
  const double dev = max_diff(c1, expect);
  const double off = max_diff(c1, DenseOperator<Real>::identity(c1.dim()) * c1(0, 0).re);
  info(fmt("L=5, L_A=3, no fields: H*_1 = %.17g * I (off-identity part %.2e)", num::to_double(c1(0, 0).re), off));
  info(fmt("deviation from +1.45125 * I: %.3e (need <= %.3e)", dev, kTol));
  return dev <= kTol;
}

bool oracle_equivalence() {
  bool ok = true;
  for (auto [l, la] : {std::pair{4, 2}, std::pair{5, 3}, std::pair{6, 3}, std::pair{6, 4}}) {
    const auto b = fig2(0.95, 0.2, l, la);
    SeriesEngine<Real> s(b, 2);
    const auto cf = closed_forms<Real>(b);
    const double d0 = max_diff(s.coefficient(0).matrix, cf.k0);
    const double d1 = max_diff(s.coefficient(1).matrix, cf.k1);
    const double d2 = max_diff(s.coefficient(2).matrix, cf.k2);
    info(fmt("L=%d L_A=%d: |k=0| %.2e  |k=1| %.2e  |k=2| %.2e", l, la, d0, d1, d2));
    ok = ok && d0 <= kTol && d1 <= kTol && d2 <= kTol;
  }
  // printed second-order form: agrees up to the identity when B has no fields
  auto spec = build_xxz(5, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0);
  for (int j = 1; j <= 3; ++j) {
    spec.terms.push_back({0.2, PauliString(5, {{j, Axis::z}})});
    spec.terms.push_back({0.2, PauliString(5, {{j, Axis::x}})});
  }
  const auto b = bipartition(spec, 3);
  const auto c2 = series_coefficient<Real>(b, 2).matrix;
  const double dp = max_diff(traceless_part(c2), traceless_part(printed_second_order<Real>(b)));
  info(fmt("printed k=2 form, fields in A only, traceless parts: %.2e", dp));
  return ok && dp <= kTol;
}

struct ExponentCase {
  std::string label;
  std::vector<PauliString> members;
  std::function<double(const PauliString&)> expected;
};

bool exponents() {
  const auto betas = logspace(1e-3, 1e-2, 5);
  const int la = 6;
  auto family = [&](const std::string& p) { return family_members(op(p, la), la); };
  auto bound = [&](const PauliString& o) { return 2.0 * distance(o, la) + 2.0 - o.body_count(); };

  auto run = [&](const Bipartition& b, const std::vector<ExponentCase>& cases, bool counted) {
    std::vector<PauliString> ops;
    for (const auto& c : cases) ops.insert(ops.end(), c.members.begin(), c.members.end());
    ThermalEngine<Real> eng(b);
    const auto tables = exact_tables(eng, ops, betas);
    bool ok = true;
    std::size_t j = 0;
    for (const auto& c : cases) {
      std::string line = c.label + ":";
      for (const auto& m : c.members) {
        std::vector<BetaSample> s;
        bool above = true;
        for (const auto& t : tables) {
          s.push_back({t.beta, t.entries[j].value, t.entries[j].below_floor});
          above = above && !t.entries[j].below_floor;
        }
        ++j;
        const int d = distance(m, la);
        if (!above) {
          line += fmt(" d=%d below-floor", d);
          continue;
        }
        const auto f = fit_beta_exponent(s, betas.front(), betas.back());
        const double want = c.expected(m);
        const bool hit = std::abs(f.slope - want) <= 0.1;
        if (counted) ok = ok && hit;
        line += fmt(" d=%d %.3f/%g%s", d, f.slope, want, hit ? "" : "(x)");
      }
      info(line);
    }
    return ok;
  };

  info("fitted/expected exponent per member, window beta in [1e-3, 1e-2]; (x) marks a miss");
  bool ok = run(fig2(), {{"X1 family", family("X1"), bound},
                         {"Z1 family", family("Z1"), bound},
                         {"X1 X2 family", family("X1 X2"), bound},
                         {"Y1 Y2 family", family("Y1 Y2"), bound},
                         {"Z1 Z2 family", family("Z1 Z2"), bound},
                         {"X1 Z2 Z3 family", family("X1 Z2 Z3"), bound},
                         {"X1 Z2 X3 Z4 family", family("X1 Z2 X3 Z4"), bound}},
                true);

  std::vector<PauliString> mixed_inner;
  std::vector<PauliString> mixed_edge;
  for (int j = 1; j <= la - 2; ++j) mixed_inner.push_back(PauliString(la, {{j, Axis::x}, {j + 1, Axis::z}}));
  for (int j = 1; j <= la - 1; ++j) mixed_edge.push_back(PauliString(la, {{j, Axis::x}, {la, Axis::z}}));
  info("Delta=1, h=1:");
  ok = run(fig2(1.0, 1.0),
           {{"X_j Z_j+1 (second site inside A)", mixed_inner,
             [&](const PauliString& o) { return 2.0 * distance(o, la) + 1.0; }},
            {"X_j Z_6 (second site at L_A)", mixed_edge,
             [&](const PauliString& o) { return 2.0 * distance(o, la) + 2.0; }}},
           true) &&
       ok;
  info("for reference, not scored:");
  run(fig2(), {{"X1 X2 Z3 family", family("X1 X2 Z3"), bound}, {"X1 X2 Z3 Z4 family", family("X1 X2 Z3 Z4"), bound}},
      false);
  run(fig2(0.95, 1.0), {{"X_j Z_j+1 at Delta=0.95, h=1", mixed_inner,
                         [&](const PauliString& o) { return 2.0 * distance(o, la) + 1.0; }}},
      false);
  return ok;
}

bool skin_law() {
  const auto betas = logspace(0.01, 1.0, 21);
  const int la = 6;
  const std::vector<std::string> families{"X1", "X1 X2", "X1 X2 Z3"};
  std::vector<PauliString> ops;
  for (const auto& f : families) {
    const auto m = family_members(op(f, la), la);
    ops.insert(ops.end(), m.begin(), m.end());
  }
  ThermalEngine<Real> eng(fig2());
  const auto tables = exact_tables(eng, ops, betas);
  bool ok = true;
  for (const auto& f : families) {
    std::vector<std::pair<double, double>> dc;
    double worst_r2 = 1.0;
    for (const auto& t : tables) {
      const auto fit = fit_skin_depth(t, op(f, la));
      if (t.beta <= 0.2 + 1e-12) worst_r2 = std::min(worst_r2, fit.r_squared);
      dc.emplace_back(t.beta, skin_depth(fit));
    }
    const auto law = fit_skin_law(dc);
    const bool fam_ok = worst_r2 >= 0.99 && std::abs(law.slope - 1.0) <= 0.05 && law.r_squared >= 0.99 &&
                        law.intercept > 1.0;
    info(fmt("%-9s min r^2(ln|c| vs d, beta<=0.2) %.5f; 1/d_c law slope %.4f r^2 %.5f a %.4f %s", f.c_str(), worst_r2,
             law.slope, law.r_squared, law.intercept, fam_ok ? "" : "(x)"));
    ok = ok && fam_ok;
  }
  return ok;
}

bool selection_rules() {
  const int l = 7;
  const int la = 6;
  const auto spec = build_xxz(l, 1.0, 0.95, FieldMode::uniform, 0.0, 0.0);
  ThermalEngine<Real> eng(bipartition(spec, la));
  std::vector<PauliString> ones = enumerate_pauli(la, 1);
  std::vector<PauliString> mixed;
  for (const auto& o : enumerate_pauli(la, 2)) {
    if (o.factors()[0].axis != o.factors()[1].axis) mixed.push_back(o);
  }
  std::vector<PauliString> xyz;
  for (const auto& o : enumerate_pauli(la, 3)) {
    const auto& f = o.factors();
    if (f[0].axis != f[1].axis && f[1].axis != f[2].axis && f[0].axis != f[2].axis) xyz.push_back(o);
  }
  std::vector<PauliString> ops = ones;
  ops.insert(ops.end(), mixed.begin(), mixed.end());
  ops.insert(ops.end(), xyz.begin(), xyz.end());
  const auto tables = exact_tables(eng, ops, {0.1, 0.5, 1.0, 2.0});
  bool zeros_ok = true;
  bool xyz_ok = true;
  for (const auto& t : tables) {
    double max_zero = 0.0;
    double max_xyz = 0.0;
    int xyz_above = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& e = t.entries[i];
      if (i < ones.size() + mixed.size()) {
        max_zero = std::max(max_zero, std::abs(e.value));
        zeros_ok = zeros_ok && e.below_floor;
      } else {
        max_xyz = std::max(max_xyz, std::abs(e.value));
        xyz_above += e.below_floor ? 0 : 1;
      }
    }
    if (t.beta >= 0.5) xyz_ok = xyz_ok && xyz_above > 0;
    info(fmt("beta=%g floor %.2e: max |c| 1-body+mixed 2-body %.2e; XYZ-type 3-body max %.2e, %d of %zu above floor",
             t.beta, t.floor, max_zero, max_xyz, xyz_above, xyz.size()));
  }
  info(fmt("structural zeros %s; XYZ-type coefficients above floor for beta >= 0.5: %s", zeros_ok ? "hold" : "violated",
           xyz_ok ? "yes" : "no (H is real, so strings with an odd number of Y have zero coefficient)"));
  return zeros_ok && xyz_ok;
}

bool lower_bound() {
  const int la = 6;
  const int k_max = 10;
  const auto b = fig2();
  SeriesEngine<Real> s(b, k_max);
  std::vector<SeriesCoefficient<Real>> cs;
  for (int k = 0; k <= k_max; ++k) cs.push_back(s.coefficient(k));
  const double tol = default_order_tolerance(cs);
  std::vector<PauliString> ops;
  for (int n = 1; n <= 4; ++n) {
    auto e = enumerate_pauli(la, n);
    ops.insert(ops.end(), e.begin(), e.end());
  }
  const auto ha = dense<Real>(restrict_to_a(b.h_a, la));
  std::vector<CoefficientTable> tables;
  for (int k = 1; k <= k_max; ++k) tables.push_back(series_deviation_table(cs[k], ha, ops, tol));
  int violations = 0;
  for (const auto& o : ops) {
    const auto k0 = k0_numeric(tables, o, tol);
    if (k0 && *k0 < k0_lower_bound(o, la)) {
      ++violations;
      if (violations <= 10) info(fmt("bound violated: %s k0=%d bound=%d", o.to_string().c_str(), *k0, k0_lower_bound(o, la)));
    }
  }
  info(fmt("bound k0 >= 2(d+1)-n: %d violations over %zu operators, k <= %d (order tolerance %.2e)", violations,
           ops.size(), k_max, tol));

  bool equality = true;
  for (const char* f : {"X1", "Z1", "X1 X2", "Y1 Y2", "Z1 Z2", "X1 Z2 Z3", "X1 Z2 X3 Z4"}) {
    std::string line = fmt("equality %s:", f);
    for (const auto& m : family_members(op(f, la), la)) {
      const int bnd = k0_lower_bound(m, la);
      if (bnd > k_max) continue;
      const auto k0 = k0_numeric(tables, m, tol);
      const bool eq = k0 && *k0 == bnd;
      equality = equality && eq;
      line += fmt(" d=%d k0=%s/%d%s", distance(m, la), k0 ? std::to_string(*k0).c_str() : "none", bnd, eq ? "" : "(x)");
    }
    info(line);
  }

  // conjecture: every structural zero for k <= 4, L <= 6 must be predicted
  long checked = 0;
  long predicted = 0;
  long contradictions = 0;
  for (int l = 2; l <= 6; ++l) {
    for (int sub = 1; sub < l; ++sub) {
      const auto spec = build_xxz(l, 1.0, 0.95, FieldMode::uniform, 0.2, 0.2);
      const auto bb = bipartition(spec, sub);
      SeriesEngine<Real> se(bb, 4);
      std::vector<SeriesCoefficient<Real>> cc;
      for (int k = 0; k <= 4; ++k) cc.push_back(se.coefficient(k));
      const double t = default_order_tolerance(cc);
      std::vector<PauliString> all;
      for (int n = 1; n <= sub; ++n) {
        auto e = enumerate_pauli(sub, n);
        all.insert(all.end(), e.begin(), e.end());
      }
      const auto h = dense<Real>(restrict_to_a(bb.h_a, sub));
      const auto terms = spec.strings();
      for (int k = 1; k <= 4; ++k) {
        const auto tab = series_deviation_table(cc[k], h, all, t);
        for (const auto& e : tab.entries) {
          ++checked;
          if (nonsplitting_tuple_exists(terms, e.op.with_chain_length(l), sub, k + 1)) continue;
          ++predicted;
          if (!e.below_floor) {
            ++contradictions;
            info(fmt("conjecture contradicted: L=%d L_A=%d k=%d %s c=%.3e", l, sub, k, e.op.to_string().c_str(), e.value));
          }
        }
      }
    }
  }
  info(fmt("conjecture: %ld (operator, k) pairs, %ld predicted zeros, %ld nonzero among them", checked, predicted,
           contradictions));
  return violations == 0 && equality && contradictions == 0;
}

bool large_beta() {
  ThermalEngine<Real> eng(fig2(0.95, 0.2, 7, 3));
  const auto ent = entanglement_hamiltonian(eng.spectrum(), 7, 3);
  info(fmt("ground-state degeneracy %d, reduced rank %d, eps %g", ent.gs_degeneracy, ent.reduced_rank,
           ent.regularization_eps));
  const std::vector<double> betas{10, 15, 20, 30, 40, 50, 70, 100};
  double prev = INFINITY;
  bool mono = true;
  std::string line = "distance:";
  double last = 0.0;
  for (double b : betas) {
    last = rescaled_distance(eng.compute(b), ent);
    mono = mono && last < prev;
    prev = last;
    line += fmt(" %g:%.2e", b, last);
  }
  info(line);
  info(fmt("monotone %s, distance at beta=100 %.2e (need < 1e-6)", mono ? "yes" : "no", last));
  return mono && last < 1e-6;
}

bool coupling_independence() {
  const int la = 4;
  const double beta = 0.1672;
  const auto pattern = op("X1 X2", la);
  std::vector<double> dcs;
  std::string line = "X1 X2 family d_c:";
  for (double j : {0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
    ThermalEngine<Real> eng(fig2(0.95, 0.2, 6, la, j));
    const auto t = deviation_table(eng, eng.compute(beta), family_members(pattern, la));
    dcs.push_back(skin_depth(fit_skin_depth(t, pattern)));
    line += fmt(" J_AB=%g:%.5f", j, dcs.back());
  }
  info(line);
  const auto [lo, hi] = std::minmax_element(dcs.begin(), dcs.end());
  double mean = 0.0;
  for (double d : dcs) mean += d;
  mean /= static_cast<double>(dcs.size());
  const double var = (*hi - *lo) / mean;
  info(fmt("spread (max-min)/mean = %.3f%% (need < 5%%)", 100.0 * var));
  return var < 0.05;
}

bool series_consistency() {
  const auto b = fig2();
  ThermalEngine<Real> eng(b);
  SeriesEngine<Real> s(b, 2);
  std::vector<SeriesCoefficient<Real>> cs;
  for (int k = 0; k <= 2; ++k) cs.push_back(s.coefficient(k));
  const auto betas = logspace(1e-4, 1e-2, 5);
  bool ok = true;
  for (int k = 0; k <= 2; ++k) {
    std::vector<double> x;
    std::vector<double> y;
    for (double beta : betas) {
      x.push_back(std::log(beta));
      y.push_back(std::log(truncation_error(eng, cs, beta, k)));
    }
    const auto f = ols(x, y);
    const bool hit = std::abs(f.slope - (k + 1)) <= 0.1;
    ok = ok && hit;
    info(fmt("K=%d: slope %.4f (want %d), r^2 %.6f", k, f.slope, k + 1, f.r_squared));
  }
  return ok;
}

}  // namespace

int main() {
  std::printf("hmf acceptance, P = %d bits (double-double), tolerance 2^(-P+30) = %.3e\n", kBits, kTol);
  criterion(1, "small-beta limit, first-order scaling of ||H*-H_A||", small_beta_limit);
  criterion(2, "first-order coefficient of a field-free boundary bond is +1.45125 * I", first_order_identity);
  criterion(3, "composition sum equals the closed forms for k = 0, 1, 2", oracle_equivalence);
  criterion(4, "small-beta exponents 2d+2-n and mixed 2-body exponents", exponents);
  criterion(5, "skin law 1/d_c = a - 2 ln beta", skin_law);
  criterion(6, "selection rules without fields", selection_rules);
  criterion(7, "series lower bound, equality and tuple conjecture", lower_bound);
  criterion(8, "large-beta limit approaches the entanglement Hamiltonian", large_beta);
  criterion(9, "skin depth independent of J_AB", coupling_independence);
  criterion(10, "truncation error scales as beta^(K+1)", series_consistency);
  std::printf("%d of 10 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
