#include "hmflab/model.hpp"

#include <random>

namespace hmf {
namespace {

PauliString two_site(int n, int j, Axis a) { return PauliString(n, {{j, a}, {j + 1, a}}); }
PauliString one_site(int n, int j, Axis a) { return PauliString(n, {{j, a}}); }

double draw_symmetric(std::mt19937_64& rng, double h) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -h + 2.0 * h * u;
}

void append_fields(ModelSpec& s) {
  for (int j = 1; j <= s.n_sites; ++j) {
    const double hz = s.params.site_hz[static_cast<std::size_t>(j - 1)];
    const double hx = s.params.site_hx[static_cast<std::size_t>(j - 1)];
    if (hz != 0.0) s.terms.push_back({hz, one_site(s.n_sites, j, Axis::z)});
    if (hx != 0.0) s.terms.push_back({hx, one_site(s.n_sites, j, Axis::x)});
  }
}

}  // namespace

std::vector<PauliString> ModelSpec::strings() const {
  std::vector<PauliString> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.string);
  return out;
}

ModelSpec build_xxz(int n_sites, double J, double Delta, FieldMode mode, double hx, double hz,
                    std::uint64_t seed) {
  if (n_sites < 2) throw UsageError("build_xxz: need L >= 2, got " + std::to_string(n_sites));
  if (n_sites > 32) throw UsageError("build_xxz: L too large");
  ModelSpec s;
  s.n_sites = n_sites;
  s.params = {J, Delta, hx, hz, mode, seed, {}, {}};
  const auto n = static_cast<std::size_t>(n_sites);
  if (mode == FieldMode::uniform) {
    s.params.site_hx.assign(n, hx);
    s.params.site_hz.assign(n, hz);
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t j = 0; j < n; ++j) {
      s.params.site_hz.push_back(draw_symmetric(rng, hz));
      s.params.site_hx.push_back(draw_symmetric(rng, hx));
    }
  }
  for (int j = 1; j < n_sites; ++j) {
    s.terms.push_back({J, two_site(n_sites, j, Axis::x)});
    s.terms.push_back({J, two_site(n_sites, j, Axis::y)});
    s.terms.push_back({Delta, two_site(n_sites, j, Axis::z)});
  }
  append_fields(s);
  return s;
}

ModelSpec build_fields(int n_sites, const std::vector<double>& hx, const std::vector<double>& hz) {
  if (n_sites < 1 || hx.size() != static_cast<std::size_t>(n_sites) || hz.size() != hx.size()) {
    throw UsageError("build_fields: need one hx and one hz per site");
  }
  ModelSpec s;
  s.n_sites = n_sites;
  s.params.J = 0.0;
  s.params.Delta = 0.0;
  s.params.site_hx = hx;
  s.params.site_hz = hz;
  append_fields(s);
  return s;
}

Bipartition bipartition(const ModelSpec& spec, int n_sites_a, double j_ab_scale) {
  if (n_sites_a < 1 || n_sites_a >= spec.n_sites) {
    throw UsageError("bipartition: need 1 <= L_A < L, got L_A=" + std::to_string(n_sites_a) +
                     " L=" + std::to_string(spec.n_sites));
  }
  Bipartition b;
  b.n_sites = spec.n_sites;
  b.n_sites_a = n_sites_a;
  b.j_ab_scale = j_ab_scale;
  for (auto* part : {&b.h_a, &b.h_b, &b.h_ab}) {
    part->n_sites = spec.n_sites;
    part->params = spec.params;
  }
  b.h_ab.scale = spec.scale * j_ab_scale;
  b.h_a.scale = b.h_b.scale = spec.scale;
  for (const auto& t : spec.terms) {
    if (t.string.is_identity()) throw UsageError("bipartition: identity term in Hamiltonian");
    const int lo = t.string.min_site();
    const int hi = t.string.max_site();
    if (hi <= n_sites_a) {
      b.h_a.terms.push_back(t);
    } else if (lo > n_sites_a) {
      b.h_b.terms.push_back(t);
    } else if (j_ab_scale != 0.0) {
      b.h_ab.terms.push_back(t);
    }
  }
  return b;
}

ModelSpec restrict_to_a(const ModelSpec& spec, int n_sites_a) {
  ModelSpec s;
  s.n_sites = n_sites_a;
  s.params = spec.params;
  s.scale = spec.scale;
  for (const auto& t : spec.terms) {
    if (t.string.max_site() > n_sites_a) {
      throw UsageError("restrict_to_a: term " + t.string.to_string() + " leaves A");
    }
    s.terms.push_back({t.coefficient, t.string.with_chain_length(n_sites_a)});
  }
  return s;
}

ModelSpec shift_to_b(const ModelSpec& spec, int n_sites_a) {
  ModelSpec s;
  s.n_sites = spec.n_sites - n_sites_a;
  s.params = spec.params;
  s.scale = spec.scale;
  for (const auto& t : spec.terms) {
    if (t.string.min_site() <= n_sites_a) {
      throw UsageError("shift_to_b: term " + t.string.to_string() + " touches A");
    }
    s.terms.push_back({t.coefficient, t.string.shifted(-n_sites_a).with_chain_length(s.n_sites)});
  }
  return s;
}

}  // namespace hmf
