#include "hmflab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hmflab/errors.hpp"

namespace hmf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_real(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw UsageError(path + ": expected a number, got '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw UsageError(path + ": expected a number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw UsageError(path + ": expected an integer, got '" + text + "'");
  }
  if (used != t.size()) throw UsageError(path + ": expected an integer, got '" + text + "'");
  return v;
}

int parse_int(const std::string& path, const std::string& text) {
  const long long v = parse_integer(path, text);
  if (v < -1000000 || v > 1000000) throw UsageError(path + ": value out of range");
  return static_cast<int>(v);
}

// %.17g round-trips every double; trailing noise is acceptable in an echo.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.L", [](RunConfig& c, const std::string& p, const std::string& v) { c.n_sites = parse_int(p, v); }},
      {"model.L_A", [](RunConfig& c, const std::string& p, const std::string& v) { c.n_sites_a = parse_int(p, v); }},
      {"model.J", [](RunConfig& c, const std::string& p, const std::string& v) { c.J = parse_real(p, v); }},
      {"model.Delta", [](RunConfig& c, const std::string& p, const std::string& v) { c.Delta = parse_real(p, v); }},
      {"model.hx", [](RunConfig& c, const std::string& p, const std::string& v) { c.hx = parse_real(p, v); }},
      {"model.hz", [](RunConfig& c, const std::string& p, const std::string& v) { c.hz = parse_real(p, v); }},
      {"model.fields",
       [](RunConfig& c, const std::string& p, const std::string& v) {
         const auto t = trim(v);
         if (t == "uniform") {
           c.field_mode = FieldMode::uniform;
         } else if (t == "disordered") {
           c.field_mode = FieldMode::disordered;
         } else {
           throw UsageError(p + ": expected 'uniform' or 'disordered', got '" + v + "'");
         }
       }},
      {"model.seed",
       [](RunConfig& c, const std::string& p, const std::string& v) {
         const long long s = parse_integer(p, v);
         if (s < 0) throw UsageError(p + ": seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"model.J_AB", [](RunConfig& c, const std::string& p, const std::string& v) { c.j_ab = parse_real(p, v); }},
      {"numerics.precision",
       [](RunConfig& c, const std::string& p, const std::string& v) { c.precision = parse_int(p, v); }},
      {"numerics.threads", [](RunConfig& c, const std::string& p, const std::string& v) { c.threads = parse_int(p, v); }},
      {"numerics.gap_tol", [](RunConfig& c, const std::string& p, const std::string& v) { c.gap_tol = parse_real(p, v); }},
      {"numerics.eps",
       [](RunConfig& c, const std::string& p, const std::string& v) {
         if (trim(v) == "auto") {
           c.eps.reset();
         } else {
           c.eps = parse_real(p, v);
         }
       }},
      {"scan.betas", [](RunConfig& c, const std::string& p, const std::string& v) { c.betas = parse_real_list(p, v); }},
      {"scan.families", [](RunConfig& c, const std::string&, const std::string& v) { c.families = split(v, ','); }},
      {"scan.k_max", [](RunConfig& c, const std::string& p, const std::string& v) { c.k_max = parse_int(p, v); }},
      {"scan.conjecture_k_max",
       [](RunConfig& c, const std::string& p, const std::string& v) { c.conjecture_k_max = parse_int(p, v); }},
      {"scan.max_body", [](RunConfig& c, const std::string& p, const std::string& v) { c.max_body = parse_int(p, v); }},
      {"scan.J_AB_list",
       [](RunConfig& c, const std::string& p, const std::string& v) { c.j_ab_list = parse_real_list(p, v); }},
      {"scan.coupling_beta",
       [](RunConfig& c, const std::string& p, const std::string& v) { c.coupling_beta = parse_real(p, v); }},
      {"scan.window_lo", [](RunConfig& c, const std::string& p, const std::string& v) { c.window_lo = parse_real(p, v); }},
      {"scan.window_hi", [](RunConfig& c, const std::string& p, const std::string& v) { c.window_hi = parse_real(p, v); }},
      {"fit.inputs", [](RunConfig& c, const std::string&, const std::string& v) { c.fit_inputs = split(v, ','); }},
      {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }},
      {"output.command", [](RunConfig& c, const std::string&, const std::string& v) { c.command = trim(v); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& path, const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("logspace(", 0) == 0 && t.back() == ')') {
    const auto args = split(t.substr(9, t.size() - 10), ',');
    if (args.size() != 3) throw UsageError(path + ": logspace takes (lo, hi, n)");
    const double lo = parse_real(path, args[0]);
    const double hi = parse_real(path, args[1]);
    const int n = parse_int(path, args[2]);
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw UsageError(path + ": logspace needs 0 < lo < hi and n >= 2");
    std::vector<double> out;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) out.push_back(i == 0 ? lo : i == n - 1 ? hi : std::pow(10.0, a + (b - a) * i / (n - 1)));
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(t, ',')) out.push_back(parse_real(path, item));
  if (out.empty()) throw UsageError(path + ": empty list");
  return out;
}

void set_field(RunConfig& cfg, const std::string& path, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(path);
  if (it == table.end()) throw UsageError(path + ": unknown configuration key");
  it->second(cfg, path, value);
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError("config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw UsageError(section + ": keys must sit inside a [section]");
    for (const auto& [key, value] : body) set_field(base, section + "." + key, value.data());
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw UsageError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

ModelSpec RunConfig::model() const {
  return build_xxz(n_sites, J, Delta, field_mode, hx, hz, seed);
}

Bipartition RunConfig::split() const { return bipartition(model(), n_sites_a, j_ab); }

std::vector<PauliString> RunConfig::family_patterns() const {
  std::vector<PauliString> out;
  if (all_operators()) return out;
  for (const auto& f : families) {
    try {
      out.push_back(PauliString::parse(f, n_sites_a));
    } catch (const UsageError& e) {
      throw UsageError("scan.families: '" + f + "': " + e.what());
    }
  }
  return out;
}

void RunConfig::validate() const {
  if (n_sites < 2 || n_sites > 12) throw UsageError("model.L: must be in 2..12");
  if (n_sites_a < 1 || n_sites_a >= n_sites) throw UsageError("model.L_A: must be in 1..L-1");
  if (j_ab < 0.0) throw UsageError("model.J_AB: must be >= 0");
  if (precision < 24 || precision > 4096) throw UsageError("numerics.precision: must be in 24..4096");
  if (threads < 1 || threads > 256) throw UsageError("numerics.threads: must be in 1..256");
  if (!(gap_tol > 0.0)) throw UsageError("numerics.gap_tol: must be positive");
  if (eps && *eps < 0.0) throw UsageError("numerics.eps: must be >= 0 or 'auto'");
  for (double b : betas) {
    if (!(b > 0.0)) throw UsageError("scan.betas: every beta must be positive");
  }
  if (k_max < 0 || k_max > 16) throw UsageError("scan.k_max: must be in 0..16");
  if (conjecture_k_max < 0 || conjecture_k_max > 12) throw UsageError("scan.conjecture_k_max: must be in 0..12");
  if (families.empty()) throw UsageError("scan.families: empty list");
  if (max_body < 1 || max_body > n_sites_a) throw UsageError("scan.max_body: must be in 1..L_A");
  for (double j : j_ab_list) {
    if (j < 0.0) throw UsageError("scan.J_AB_list: entries must be >= 0");
  }
  if (!(coupling_beta > 0.0)) throw UsageError("scan.coupling_beta: must be positive");
  if (!(window_lo > 0.0) || !(window_hi > window_lo)) throw UsageError("scan.window_lo: need 0 < window_lo < window_hi");
  (void)family_patterns();
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> e;
  e.push_back("model.L = " + std::to_string(n_sites));
  e.push_back("model.L_A = " + std::to_string(n_sites_a));
  e.push_back("model.J = " + fmt(J));
  e.push_back("model.Delta = " + fmt(Delta));
  e.push_back("model.hx = " + fmt(hx));
  e.push_back("model.hz = " + fmt(hz));
  e.push_back(std::string("model.fields = ") + (field_mode == FieldMode::uniform ? "uniform" : "disordered"));
  e.push_back("model.seed = " + std::to_string(seed));
  e.push_back("model.J_AB = " + fmt(j_ab));
  e.push_back("numerics.precision = " + std::to_string(precision));
  e.push_back("numerics.threads = " + std::to_string(threads));
  e.push_back("numerics.gap_tol = " + fmt(gap_tol));
  e.push_back("numerics.eps = " + (eps ? fmt(*eps) : std::string("auto")));
  e.push_back("scan.betas = " + join(betas));
  e.push_back("scan.families = " + join(families, ", "));
  e.push_back("scan.k_max = " + std::to_string(k_max));
  e.push_back("scan.conjecture_k_max = " + std::to_string(conjecture_k_max));
  e.push_back("scan.max_body = " + std::to_string(max_body));
  e.push_back("scan.J_AB_list = " + join(j_ab_list));
  e.push_back("scan.coupling_beta = " + fmt(coupling_beta));
  e.push_back("scan.window_lo = " + fmt(window_lo));
  e.push_back("scan.window_hi = " + fmt(window_hi));
  e.push_back("fit.inputs = " + join(fit_inputs, ", "));
  e.push_back("output.dir = " + out_dir);
  e.push_back("output.command = " + command);
  return e;
}

}  // namespace hmf
