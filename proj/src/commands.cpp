#include "hmflab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "hmflab/analysis.hpp"
#include "hmflab/csv.hpp"
#include "hmflab/perturbation.hpp"

namespace hmf {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) { return format_real(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

std::string precision_class(int bits) {
  if (bits <= 53) return "binary64 (53 bits)";
  if (bits <= 106) return "double-double (106 bits)";
  return "mpfr (" + std::to_string(bits) + " bits)";
}

// Jobs run on `threads` workers; results land in caller-owned slots by index,
// so the merge order never depends on scheduling.  The first failure by index
// is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, int bits, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::optional<num::MpfrPrecisionScope> scope;
    if (bits > 106) scope.emplace(bits);
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Re-raises the active exception with `ctx` prepended, keeping its type.
[[noreturn]] void rethrow_with(const std::string& ctx) {
  try {
    throw;
  } catch (const DomainError& e) {
    throw DomainError(ctx + ": " + e.what(), e.smallest_eigenvalue());
  } catch (const NumericalError& e) {
    throw NumericalError(ctx + ": " + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(ctx + ": " + e.what());
  }
}

std::vector<PauliString> all_ops(int la, int max_body) {
  std::vector<PauliString> out;
  for (int n = 1; n <= std::min(la, max_body); ++n) {
    auto e = enumerate_pauli(la, n);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

std::vector<PauliString> scan_ops(const RunConfig& cfg) {
  if (cfg.all_operators()) return all_ops(cfg.n_sites_a, cfg.max_body);
  std::vector<PauliString> out;
  std::set<PauliString> seen;
  for (const auto& p : cfg.family_patterns()) {
    for (auto& m : family_members(p, cfg.n_sites_a)) {
      if (seen.insert(m).second) out.push_back(m);
    }
  }
  return out;
}

std::vector<PauliString> require_patterns(const RunConfig& cfg) {
  if (cfg.all_operators()) throw UsageError("scan.families: this command needs explicit family patterns, not 'all'");
  return cfg.family_patterns();
}

std::string axis_class(const PauliString& op) {
  std::string s;
  for (const auto& f : op.factors()) s += axis_letter(f.axis);
  std::sort(s.begin(), s.end());
  return s;
}

struct FitRow {
  std::optional<FitResult> fit;
  std::string status = "ok";
};

template <class F>
FitRow try_fit(F&& f) {
  FitRow r;
  try {
    r.fit = f();
  } catch (const InsufficientDataError&) {
    r.status = "insufficient_data";
  }
  return r;
}

std::vector<std::string> fit_cells(const FitRow& r) {
  if (!r.fit) return {"nan", "nan", "nan", "0", "0"};
  const auto& f = *r.fit;
  return {fmt(f.slope), fmt(f.intercept), fmt(f.r_squared), std::to_string(f.points_used),
          std::to_string(f.excluded_below_floor)};
}

class Run {
 public:
  explicit Run(const RunConfig& cfg) : cfg_(cfg), meta_(provenance(cfg)), dir_(cfg.out_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw UsageError("output.dir: cannot create '" + cfg.out_dir + "': " + ec.message());
  }

  std::string path(const std::string& name) {
    const auto p = (dir_ / name).string();
    result.files.push_back(p);
    return p;
  }

  std::vector<std::string> meta(std::initializer_list<std::string> extra) const {
    auto m = meta_;
    m.insert(m.end(), extra);
    return m;
  }

  template <class F>
  void each(std::size_t n, F&& f) const {
    parallel_for(n, cfg_.threads, cfg_.precision, std::forward<F>(f));
  }

  const RunConfig& cfg() const { return cfg_; }

  CommandResult result;

 private:
  const RunConfig& cfg_;
  std::vector<std::string> meta_;
  fs::path dir_;
};

// ---------------------------------------------------------------------------

template <ExtendedReal T>
std::vector<CoefficientTable> beta_tables(Run& run, const ThermalEngine<T>& eng, const std::vector<PauliString>& ops) {
  const auto& betas = run.cfg().betas;
  std::vector<CoefficientTable> tables(betas.size());
  run.each(betas.size(), [&](std::size_t i) {
    try {
      tables[i] = deviation_table(eng, eng.compute(betas[i]), ops);
    } catch (...) {
      rethrow_with("beta=" + fmt(betas[i]));
    }
  });
  return tables;
}

template <ExtendedReal T>
void scan_beta(Run& run) {
  const auto& cfg = run.cfg();
  ThermalEngine<T> eng(cfg.split());
  const auto ops = scan_ops(cfg);
  const auto tables = beta_tables(run, eng, ops);
  CsvWriter w(run.path("scan_beta.csv"), run.meta({"floor = " + fmt(eng.floor())}),
              {"operator", "n_body", "distance", "beta", "coefficient", "below_floor"});
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> blocks;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& t : tables) {
      const auto& e = t.entries[j];
      w.row({e.op.to_string(), std::to_string(e.op.body_count()), std::to_string(distance(e.op, cfg.n_sites_a)),
             fmt(t.beta), fmt(e.value), flag(e.below_floor)});
      if (!e.below_floor) pts.emplace_back(t.beta, std::abs(e.value));
    }
    blocks.emplace_back(ops[j].to_string(), std::move(pts));
  }
  write_dat(run.path("scan_beta.dat"), run.meta({"columns: beta |c|"}), blocks);

  // exponent fits in the configured window, where there are enough points
  int fitted = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::vector<BetaSample> s;
    for (const auto& t : tables) s.push_back({t.beta, t.entries[j].value, t.entries[j].below_floor});
    const auto r = try_fit([&] { return fit_beta_exponent(s, cfg.window_lo, cfg.window_hi); });
    if (r.fit) ++fitted;
  }
  run.result.summary.push_back("scan-beta: " + std::to_string(ops.size()) + " operators x " +
                               std::to_string(cfg.betas.size()) + " betas; " + std::to_string(fitted) +
                               " operators have an exponent fit in the window (see `fit`)");
}

template <ExtendedReal T>
void scan_distance(Run& run) {
  const auto& cfg = run.cfg();
  const auto patterns = require_patterns(cfg);
  ThermalEngine<T> eng(cfg.split());
  const auto ops = scan_ops(cfg);
  const auto tables = beta_tables(run, eng, ops);

  CsvWriter w(run.path("scan_distance.csv"), run.meta({"floor = " + fmt(eng.floor())}),
              {"family", "operator", "n_body", "distance", "beta", "coefficient", "below_floor"});
  CsvWriter sd(run.path("skin_depth.csv"), run.meta({"fit: ln|c| = slope*d + intercept, d_c = -1/slope"}),
               {"family", "beta", "slope", "intercept", "r_squared", "points_used", "excluded_below_floor", "d_c",
                "status"});
  CsvWriter law(run.path("skin_law.csv"), run.meta({"fit: 1/d_c = slope*(-2 ln beta) + a"}),
                {"family", "slope", "a", "r_squared", "points_used", "status"});
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> dist_blocks;
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> law_blocks;

  for (const auto& p : patterns) {
    const std::string fam = p.to_string();
    std::vector<std::pair<double, double>> dc;
    for (const auto& t : tables) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& m : family_members(p, cfg.n_sites_a)) {
        const auto& e = t.at(m);
        w.row({fam, e.op.to_string(), std::to_string(e.op.body_count()), std::to_string(distance(e.op, cfg.n_sites_a)),
               fmt(t.beta), fmt(e.value), flag(e.below_floor)});
        if (!e.below_floor) pts.emplace_back(distance(e.op, cfg.n_sites_a), std::abs(e.value));
      }
      dist_blocks.emplace_back(fam + " beta=" + fmt(t.beta), std::move(pts));
      const auto r = try_fit([&] { return fit_skin_depth(t, p); });
      auto cells = std::vector<std::string>{fam, fmt(t.beta)};
      for (auto& c : fit_cells(r)) cells.push_back(c);
      cells.push_back(r.fit ? fmt(skin_depth(*r.fit)) : "nan");
      cells.push_back(r.status);
      sd.row(cells);
      if (r.fit) dc.emplace_back(t.beta, skin_depth(*r.fit));
    }
    const auto lr = try_fit([&] { return fit_skin_law(dc); });
    if (lr.fit) {
      law.row({fam, fmt(lr.fit->slope), fmt(lr.fit->intercept), fmt(lr.fit->r_squared),
               std::to_string(lr.fit->points_used), lr.status});
      run.result.summary.push_back("skin law " + fam + ": slope " + fmt(lr.fit->slope) + ", a " +
                                   fmt(lr.fit->intercept) + ", r^2 " + fmt(lr.fit->r_squared));
    } else {
      law.row({fam, "nan", "nan", "nan", "0", lr.status});
      run.result.summary.push_back("skin law " + fam + ": " + lr.status);
    }
    std::vector<std::pair<double, double>> lb;
    for (const auto& [b, d] : dc) lb.emplace_back(-2.0 * std::log(b), 1.0 / d);
    law_blocks.emplace_back(fam, std::move(lb));
  }
  write_dat(run.path("scan_distance.dat"), run.meta({"columns: d |c|"}), dist_blocks);
  write_dat(run.path("skin_law.dat"), run.meta({"columns: -2ln(beta) 1/d_c"}), law_blocks);
}

template <ExtendedReal T>
void series(Run& run) {
  const auto& cfg = run.cfg();
  const auto bip = cfg.split();
  const auto ops = scan_ops(cfg);
  SeriesEngine<T> eng(bip, cfg.k_max);
  std::vector<SeriesCoefficient<T>> coeffs(static_cast<std::size_t>(cfg.k_max + 1));
  run.each(coeffs.size(), [&](std::size_t k) { coeffs[k] = eng.coefficient(static_cast<int>(k)); });
  const double tol = default_order_tolerance(coeffs);
  const auto ha = dense<T>(restrict_to_a(bip.h_a, cfg.n_sites_a));
  std::vector<CoefficientTable> tables;
  for (const auto& c : coeffs) tables.push_back(series_deviation_table(c, ha, ops, tol));

  CsvWriter w(run.path("series.csv"), run.meta({"order_tolerance = " + fmt(tol)}),
              {"operator", "n_body", "distance", "order", "coefficient", "below_floor"});
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> blocks;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& t : tables) {
      const auto& e = t.entries[j];
      w.row({e.op.to_string(), std::to_string(e.op.body_count()), std::to_string(distance(e.op, cfg.n_sites_a)),
             std::to_string(t.order), fmt(e.value), flag(e.below_floor)});
      if (!e.below_floor) pts.emplace_back(t.order, std::abs(e.value));
    }
    blocks.emplace_back(ops[j].to_string(), std::move(pts));
  }
  write_dat(run.path("series.dat"), run.meta({"columns: k |c_k|"}), blocks);

  const std::vector<CoefficientTable> positive(tables.begin() + 1, tables.end());
  std::vector<PauliString> all_terms = cfg.model().strings();
  std::vector<std::optional<int>> conj(ops.size());
  if (cfg.conjecture_k_max >= 1) {
    run.each(ops.size(), [&](std::size_t j) {
      conj[j] = conjecture_k0(all_terms, ops[j].with_chain_length(cfg.n_sites), cfg.n_sites_a, cfg.conjecture_k_max);
    });
  }
  CsvWriter ord(run.path("orders.csv"),
                run.meta({"k0_numeric searched over k = 1.." + std::to_string(cfg.k_max),
                          "k0_conjecture searched over k = 1.." + std::to_string(cfg.conjecture_k_max),
                          "k0_bound = 2(d+1) - n"}),
                {"operator", "n_body", "distance", "k0_numeric", "k0_bound", "k0_conjecture"});
  int violations = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::optional<int> k0;
    if (cfg.k_max >= 1) k0 = k0_numeric(positive, ops[j], tol);
    const int bound = k0_lower_bound(ops[j], cfg.n_sites_a);
    if (k0 && *k0 < bound) ++violations;
    ord.row({ops[j].to_string(), std::to_string(ops[j].body_count()), std::to_string(distance(ops[j], cfg.n_sites_a)),
             k0 ? std::to_string(*k0) : "none", std::to_string(bound), conj[j] ? std::to_string(*conj[j]) : "none"});
  }

  // truncation error of the partial sums against the exact HMF
  ThermalEngine<T> thermal(bip);
  std::vector<std::vector<double>> err(cfg.betas.size());
  run.each(cfg.betas.size(), [&](std::size_t i) {
    const double beta = cfg.betas[i];
    try {
      auto d = thermal.compute(beta).hmf;
      T bk(1);
      for (int k = 0; k <= cfg.k_max; ++k) {
        d -= coeffs[static_cast<std::size_t>(k)].matrix * bk;
        bk = bk * T(beta);
        err[i].push_back(normalized_norm(d));
      }
    } catch (...) {
      rethrow_with("beta=" + fmt(beta));
    }
  });
  CsvWriter tr(run.path("truncation.csv"), run.meta({"error = ||H* - sum_{k<=K} beta^k H*_k||_F / 2^(L_A/2)"}),
               {"K", "beta", "error"});
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> tblocks;
  for (int k = 0; k <= cfg.k_max; ++k) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < cfg.betas.size(); ++i) {
      const double e = err[i][static_cast<std::size_t>(k)];
      tr.row({std::to_string(k), fmt(cfg.betas[i]), fmt(e)});
      pts.emplace_back(cfg.betas[i], e);
    }
    tblocks.emplace_back("K=" + std::to_string(k), std::move(pts));
  }
  write_dat(run.path("truncation.dat"), run.meta({"columns: beta error"}), tblocks);
  run.result.summary.push_back("series: k_max " + std::to_string(cfg.k_max) + ", " + std::to_string(ops.size()) +
                               " operators, " + std::to_string(violations) + " below the lower bound");
}

template <ExtendedReal T>
void selection_rules(Run& run) {
  const auto& cfg = run.cfg();
  const auto spec = cfg.model();
  const auto terms = spec.strings();
  const auto ops = all_ops(cfg.n_sites_a, cfg.max_body);
  ThermalEngine<T> eng(cfg.split());
  const auto tables = beta_tables(run, eng, ops);

  struct ClassInfo {
    int n_body = 0;
    std::optional<SignAssignment> witness;
    int operators = 0;
    bool all_below = true;
  };
  std::map<std::string, ClassInfo> classes;
  CsvWriter w(run.path("selection_rules.csv"), run.meta({"floor = " + fmt(eng.floor())}),
              {"operator", "n_body", "class", "excluded", "plus_axis", "max_abs_coefficient", "below_floor_all_betas",
               "consistent"});
  int inconsistent = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto witness = excluding_assignment(terms, ops[j].with_chain_length(cfg.n_sites));
    double mx = 0.0;
    bool below = true;
    for (const auto& t : tables) {
      mx = std::max(mx, std::abs(t.entries[j].value));
      below = below && t.entries[j].below_floor;
    }
    const bool consistent = !witness || below;
    if (!consistent) ++inconsistent;
    const auto cls = axis_class(ops[j]);
    auto& ci = classes[cls];
    ci.n_body = ops[j].body_count();
    ci.witness = witness;
    ++ci.operators;
    ci.all_below = ci.all_below && below;
    w.row({ops[j].to_string(), std::to_string(ops[j].body_count()), cls, flag(witness.has_value()),
           witness ? std::string(1, axis_letter(witness->plus_axis)) : "none", fmt(mx), flag(below), flag(consistent)});
  }
  CsvWriter c(run.path("selection_classes.csv"),
              run.meta({"a class is the multiset of axes; the sign homomorphism depends only on it"}),
              {"class", "n_body", "excluded", "plus_axis", "operators", "all_below_floor"});
  int excluded = 0;
  for (const auto& [cls, ci] : classes) {
    if (ci.witness) ++excluded;
    c.row({cls, std::to_string(ci.n_body), flag(ci.witness.has_value()),
           ci.witness ? std::string(1, axis_letter(ci.witness->plus_axis)) : "none", std::to_string(ci.operators),
           flag(ci.all_below)});
    if (ci.witness) {
      run.result.summary.push_back("excluded class " + cls + " (witness: +1 on " +
                                   std::string(1, axis_letter(ci.witness->plus_axis)) + ")");
    }
  }
  run.result.summary.push_back("selection-rules: " + std::to_string(excluded) + " excluded classes, " +
                               std::to_string(inconsistent) + " excluded operators above floor");
}

template <ExtendedReal T>
void ent_compare(Run& run) {
  const auto& cfg = run.cfg();
  ThermalEngine<T> eng(cfg.split());
  const auto ent = entanglement_hamiltonian(eng.spectrum(), cfg.n_sites, cfg.n_sites_a, cfg.gap_tol, cfg.eps);
  const T ha_norm = eng.h_a().frobenius_norm();
  std::vector<std::pair<double, double>> rows(cfg.betas.size());
  run.each(cfg.betas.size(), [&](std::size_t i) {
    const double beta = cfg.betas[i];
    try {
      const auto r = eng.compute(beta);
      const double rel = ha_norm > T(0) ? num::to_double((r.hmf - eng.h_a()).frobenius_norm() / ha_norm) : 0.0;
      rows[i] = {rescaled_distance(r, ent), rel};
    } catch (...) {
      rethrow_with("beta=" + fmt(beta));
    }
  });
  const auto meta = run.meta({"ground_energy = " + fmt(ent.ground_energy),
                              "ground_state_degeneracy = " + std::to_string(ent.gs_degeneracy),
                              "reduced_gs = tr_B(P_GS)/g over the degenerate ground space",
                              "reduced_gs_rank = " + std::to_string(ent.reduced_rank),
                              "regularization_eps = " + fmt(ent.regularization_eps),
                              "distance = ||beta*H* + ln Z* - H_E||_F / 2^(L_A/2)"});
  CsvWriter w(run.path("ent_compare.csv"), meta, {"beta", "distance", "hmf_minus_ha_rel"});
  std::vector<std::pair<double, double>> d1;
  std::vector<std::pair<double, double>> d2;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    w.row({fmt(cfg.betas[i]), fmt(rows[i].first), fmt(rows[i].second)});
    d1.emplace_back(cfg.betas[i], rows[i].first);
    d2.emplace_back(cfg.betas[i], rows[i].second);
  }
  write_dat(run.path("ent_compare.dat"), meta, {{"entanglement distance", d1}, {"||H*-H_A||/||H_A||", d2}});
  run.result.summary.push_back("ent-compare: ground-state degeneracy " + std::to_string(ent.gs_degeneracy) +
                               ", reduced rank " + std::to_string(ent.reduced_rank) + ", eps " +
                               fmt(ent.regularization_eps));
}

template <ExtendedReal T>
void scan_coupling(Run& run) {
  const auto& cfg = run.cfg();
  const auto patterns = require_patterns(cfg);
  const auto spec = cfg.model();
  const auto ops = scan_ops(cfg);
  const auto& js = cfg.j_ab_list;
  std::vector<CoefficientTable> tables(js.size());
  run.each(js.size(), [&](std::size_t i) {
    try {
      ThermalEngine<T> eng(bipartition(spec, cfg.n_sites_a, js[i]));
      tables[i] = deviation_table(eng, eng.compute(cfg.coupling_beta), ops);
    } catch (...) {
      rethrow_with("J_AB=" + fmt(js[i]) + " beta=" + fmt(cfg.coupling_beta));
    }
  });
  CsvWriter w(run.path("scan_coupling.csv"), run.meta({}),
              {"family", "J_AB", "beta", "slope", "intercept", "r_squared", "points_used", "excluded_below_floor", "d_c",
               "status"});
  CsvWriter s(run.path("coupling_summary.csv"), run.meta({"variation = (max - min) / mean of d_c over J_AB >= 0.1"}),
              {"family", "points", "d_c_min", "d_c_max", "variation"});
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> blocks;
  for (const auto& p : patterns) {
    const std::string fam = p.to_string();
    std::vector<std::pair<double, double>> pts;
    std::vector<double> strong;
    for (std::size_t i = 0; i < js.size(); ++i) {
      const auto r = try_fit([&] { return fit_skin_depth(tables[i], p); });
      auto cells = std::vector<std::string>{fam, fmt(js[i]), fmt(cfg.coupling_beta)};
      for (auto& c : fit_cells(r)) cells.push_back(c);
      cells.push_back(r.fit ? fmt(skin_depth(*r.fit)) : "nan");
      cells.push_back(r.status);
      w.row(cells);
      if (r.fit) {
        pts.emplace_back(js[i], skin_depth(*r.fit));
        if (js[i] >= 0.1) strong.push_back(skin_depth(*r.fit));
      }
    }
    blocks.emplace_back(fam, pts);
    if (strong.empty()) {
      s.row({fam, "0", "nan", "nan", "nan"});
      continue;
    }
    const auto [lo, hi] = std::minmax_element(strong.begin(), strong.end());
    double mean = 0.0;
    for (double v : strong) mean += v;
    mean /= static_cast<double>(strong.size());
    const double var = (*hi - *lo) / mean;
    s.row({fam, std::to_string(strong.size()), fmt(*lo), fmt(*hi), fmt(var)});
    run.result.summary.push_back("scan-coupling " + fam + ": d_c varies by " + fmt(100.0 * var) +
                                 "% over J_AB >= 0.1");
  }
  write_dat(run.path("scan_coupling.dat"), run.meta({"columns: J_AB d_c"}), blocks);
}

// ---------------------------------------------------------------------------
// fit: reads earlier CSVs

double cell_real(const CsvTable& t, const std::vector<std::string>& row, const std::string& col) {
  const auto& s = row[t.column(col)];
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw UsageError("csv: column '" + col + "' holds '" + s + "'");
  }
}

bool cell_bool(const CsvTable& t, const std::vector<std::string>& row, const std::string& col) {
  return row[t.column(col)] == "true";
}

void fit_inputs(Run& run) {
  const auto& cfg = run.cfg();
  if (cfg.fit_inputs.empty()) throw UsageError("fit.inputs: no input CSV files given");
  std::vector<std::string> meta_extra;
  for (const auto& in : cfg.fit_inputs) meta_extra.push_back("input = " + in);
  auto meta = run.meta({});
  meta.insert(meta.end(), meta_extra.begin(), meta_extra.end());
  CsvWriter w(run.path("fit_results.csv"), meta,
              {"source", "kind", "key", "window", "slope", "intercept", "r_squared", "points_used",
               "excluded_below_floor", "derived", "status"});
  const std::string window = fmt(cfg.window_lo) + ":" + fmt(cfg.window_hi);
  for (const auto& in : cfg.fit_inputs) {
    const auto t = read_csv(in);
    const std::string src = fs::path(in).filename().string();
    if (t.has_column("family") && t.has_column("distance") && t.has_column("coefficient")) {
      // scan-distance: skin depth per (family, beta), then the skin law per family
      std::map<std::string, std::map<double, std::vector<DistancePoint>>> groups;
      std::vector<std::string> order;
      for (const auto& row : t.rows) {
        const auto& fam = row[t.column("family")];
        if (!groups.count(fam)) order.push_back(fam);
        groups[fam][cell_real(t, row, "beta")].push_back(
            {static_cast<int>(cell_real(t, row, "distance")), cell_real(t, row, "coefficient"),
             cell_bool(t, row, "below_floor")});
      }
      for (const auto& fam : order) {
        std::vector<std::pair<double, double>> dc;
        for (const auto& [beta, pts] : groups[fam]) {
          const auto r = try_fit([&] { return fit_skin_depth(pts); });
          auto cells = std::vector<std::string>{src, "skin_depth", fam + " beta=" + fmt(beta), "all_d"};
          for (auto& c : fit_cells(r)) cells.push_back(c);
          cells.push_back(r.fit ? fmt(skin_depth(*r.fit)) : "nan");
          cells.push_back(r.status);
          w.row(cells);
          if (r.fit) dc.emplace_back(beta, skin_depth(*r.fit));
        }
        const auto r = try_fit([&] { return fit_skin_law(dc); });
        auto cells = std::vector<std::string>{src, "skin_law", fam, "all_beta"};
        for (auto& c : fit_cells(r)) cells.push_back(c);
        cells.push_back(r.fit ? fmt(r.fit->intercept) : "nan");
        cells.push_back(r.status);
        w.row(cells);
      }
    } else if (t.has_column("operator") && t.has_column("beta") && t.has_column("coefficient")) {
      // scan-beta: power-law exponent per operator inside the window
      std::map<std::string, std::vector<BetaSample>> groups;
      std::vector<std::string> order;
      for (const auto& row : t.rows) {
        const auto& op = row[t.column("operator")];
        if (!groups.count(op)) order.push_back(op);
        groups[op].push_back({cell_real(t, row, "beta"), cell_real(t, row, "coefficient"),
                              cell_bool(t, row, "below_floor")});
      }
      for (const auto& op : order) {
        const auto r = try_fit([&] { return fit_beta_exponent(groups[op], cfg.window_lo, cfg.window_hi); });
        auto cells = std::vector<std::string>{src, "beta_exponent", op, window};
        for (auto& c : fit_cells(r)) cells.push_back(c);
        cells.push_back(r.fit ? fmt(r.fit->slope) : "nan");
        cells.push_back(r.status);
        w.row(cells);
      }
    } else if (t.has_column("family") && t.has_column("beta") && t.has_column("d_c")) {
      // skin_depth.csv: skin law per family
      std::map<std::string, std::vector<std::pair<double, double>>> groups;
      std::vector<std::string> order;
      for (const auto& row : t.rows) {
        if (row[t.column("status")] != "ok") continue;
        const auto& fam = row[t.column("family")];
        if (!groups.count(fam)) order.push_back(fam);
        groups[fam].emplace_back(cell_real(t, row, "beta"), cell_real(t, row, "d_c"));
      }
      for (const auto& fam : order) {
        const auto r = try_fit([&] { return fit_skin_law(groups[fam]); });
        auto cells = std::vector<std::string>{src, "skin_law", fam, "all_beta"};
        for (auto& c : fit_cells(r)) cells.push_back(c);
        cells.push_back(r.fit ? fmt(r.fit->intercept) : "nan");
        cells.push_back(r.status);
        w.row(cells);
      }
    } else {
      throw UsageError("fit.inputs: '" + in + "' is not a scan-beta, scan-distance or skin_depth table");
    }
  }
  run.result.summary.push_back("fit: " + std::to_string(cfg.fit_inputs.size()) + " input file(s)");
}

template <ExtendedReal T>
void dispatch(Run& run) {
  const auto& c = run.cfg().command;
  if (c == "scan-beta") {
    scan_beta<T>(run);
  } else if (c == "scan-distance") {
    scan_distance<T>(run);
  } else if (c == "series") {
    series<T>(run);
  } else if (c == "selection-rules") {
    selection_rules<T>(run);
  } else if (c == "ent-compare") {
    ent_compare<T>(run);
  } else if (c == "scan-coupling") {
    scan_coupling<T>(run);
  } else if (c == "fit") {
    fit_inputs(run);
  } else {
    throw UsageError("output.command: unknown command '" + c + "'");
  }
}

}  // namespace

std::vector<std::string> provenance(const RunConfig& cfg) {
  std::vector<std::string> m{std::string("code_version = ") + kCodeVersion};
  for (auto& e : cfg.echo()) {
    // thread count and output location do not affect results
    if (e.rfind("numerics.threads", 0) == 0 || e.rfind("output.dir", 0) == 0) continue;
    m.push_back(e);
  }
  m.push_back("precision_class = " + precision_class(cfg.precision));
  if (cfg.field_mode == FieldMode::disordered) {
    const auto spec = cfg.model();
    m.push_back(std::string("disorder_rng = ") + kDisorderRng);
    std::string hx;
    std::string hz;
    for (std::size_t i = 0; i < spec.params.site_hx.size(); ++i) {
      hx += (i ? " " : "") + fmt(spec.params.site_hx[i]);
      hz += (i ? " " : "") + fmt(spec.params.site_hz[i]);
    }
    m.push_back("site_hx = " + hx);
    m.push_back("site_hz = " + hz);
  }
  return m;
}

CommandResult run_command(const RunConfig& cfg) {
  cfg.validate();
  if (std::find(command_names().begin(), command_names().end(), cfg.command) == command_names().end()) {
    throw UsageError("output.command: unknown command '" + cfg.command + "'");
  }
  Run run(cfg);
  with_precision(cfg.precision, [&]<class T>() { dispatch<T>(run); });
  return std::move(run.result);
}

}  // namespace hmf
