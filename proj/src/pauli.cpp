#include "hmflab/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <unordered_set>

#include "hmflab/errors.hpp"

namespace hmf {
namespace {

constexpr int kMaxSites = 32;

struct Bits {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  [[nodiscard]] std::uint64_t key() const { return x | (z << kMaxSites); }
  friend Bits operator^(Bits a, Bits b) { return {a.x ^ b.x, a.z ^ b.z}; }
};

Bits bits_of(const PauliString& s) { return {s.x_mask(), s.z_mask()}; }

bool anticommute(Bits a, Bits b) {
  return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) != 0;
}

std::uint64_t site_bit(int site) { return std::uint64_t{1} << (site - 1); }

std::vector<PauliString> distinct_terms(const std::vector<PauliString>& terms) {
  std::vector<PauliString> out;
  for (const auto& t : terms) {
    if (t.is_identity()) continue;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

}  // namespace

char axis_letter(Axis a) {
  switch (a) {
    case Axis::x:
      return 'X';
    case Axis::y:
      return 'Y';
    case Axis::z:
      return 'Z';
  }
  return '?';
}

PauliString::PauliString(int chain_length, std::vector<PauliFactor> factors)
    : chain_length_(chain_length), factors_(std::move(factors)) {
  if (chain_length < 0 || chain_length > kMaxSites) {
    throw UsageError("chain length must be in 0.." + std::to_string(kMaxSites));
  }
  std::sort(factors_.begin(), factors_.end());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const int site = factors_[i].site;
    if (site < 1 || site > chain_length) {
      throw UsageError("Pauli factor on site " + std::to_string(site) + " outside 1.." +
                       std::to_string(chain_length));
    }
    if (i > 0 && factors_[i - 1].site == site) {
      throw UsageError("Pauli string has two factors on site " + std::to_string(site));
    }
    if (factors_[i].axis != Axis::z) x_mask_ |= site_bit(site);
    if (factors_[i].axis != Axis::x) z_mask_ |= site_bit(site);
  }
}

PauliString PauliString::identity(int chain_length) { return PauliString(chain_length, {}); }

PauliString PauliString::from_masks(int chain_length, std::uint64_t x_mask, std::uint64_t z_mask) {
  std::vector<PauliFactor> f;
  for (int site = 1; site <= kMaxSites; ++site) {
    const bool x = (x_mask & site_bit(site)) != 0;
    const bool z = (z_mask & site_bit(site)) != 0;
    if (x && z) {
      f.push_back({site, Axis::y});
    } else if (x) {
      f.push_back({site, Axis::x});
    } else if (z) {
      f.push_back({site, Axis::z});
    }
  }
  return PauliString(chain_length, std::move(f));
}

PauliString PauliString::parse(std::string_view text, int chain_length) {
  std::vector<PauliFactor> f;
  std::size_t i = 0;
  bool saw_identity = false;
  while (i < text.size()) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
      ++i;
      continue;
    }
    Axis axis;
    if (c == 'X') {
      axis = Axis::x;
    } else if (c == 'Y') {
      axis = Axis::y;
    } else if (c == 'Z') {
      axis = Axis::z;
    } else if (c == 'I' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      saw_identity = true;
      ++i;
      continue;
    } else {
      throw UsageError("cannot parse Pauli string '" + std::string(text) + "'");
    }
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw UsageError("missing site index in Pauli string '" + std::string(text) + "'");
    f.push_back({std::stoi(std::string(text.substr(start, i - start))), axis});
  }
  if (saw_identity && !f.empty()) {
    throw UsageError("identity mixed with factors in '" + std::string(text) + "'");
  }
  if (!saw_identity && f.empty()) throw UsageError("empty Pauli string");
  return PauliString(chain_length, std::move(f));
}

int PauliString::min_site() const {
  if (factors_.empty()) throw UsageError("identity has no support");
  return factors_.front().site;
}

int PauliString::max_site() const {
  if (factors_.empty()) throw UsageError("identity has no support");
  return factors_.back().site;
}

int PauliString::y_count() const { return std::popcount(x_mask_ & z_mask_); }

std::optional<Axis> PauliString::axis_at(int site) const {
  for (const auto& f : factors_) {
    if (f.site == site) return f.axis;
  }
  return std::nullopt;
}

bool PauliString::commutes_with(const PauliString& other) const {
  return !anticommute(bits_of(*this), bits_of(other));
}

PauliString PauliString::shifted(int offset) const {
  std::vector<PauliFactor> f = factors_;
  for (auto& x : f) x.site += offset;
  return PauliString(chain_length_, std::move(f));
}

PauliString PauliString::with_chain_length(int chain_length) const {
  return PauliString(chain_length, factors_);
}

std::string PauliString::to_string() const {
  if (factors_.empty()) return "I";
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(axis_letter(f.axis));
    out += std::to_string(f.site);
  }
  return out;
}

std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
  if (auto c = a.factors_.size() <=> b.factors_.size(); c != 0) return c;
  if (auto c = a.factors_ <=> b.factors_; c != 0) return c;
  return a.chain_length_ <=> b.chain_length_;
}

std::string PhasedPauli::phase_text() const {
  static const char* const kText[] = {"+1", "+i", "-1", "-i"};
  return kText[((phase_quarters % 4) + 4) % 4];
}

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  if (a.string.chain_length() != b.string.chain_length()) {
    throw UsageError("multiply: chain lengths differ (" + std::to_string(a.string.chain_length()) +
                     " vs " + std::to_string(b.string.chain_length()) + ")");
  }
  // Each site is i^{xz} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{z1 x2}.
  const Bits p = bits_of(a.string);
  const Bits q = bits_of(b.string);
  const Bits r = p ^ q;
  int quarters = std::popcount(p.x & p.z) + std::popcount(q.x & q.z) +
                 2 * std::popcount(p.z & q.x) - std::popcount(r.x & r.z);
  quarters += a.phase_quarters + b.phase_quarters;
  return {((quarters % 4) + 4) % 4, PauliString::from_masks(a.string.chain_length(), r.x, r.z)};
}

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  return multiply(PhasedPauli{0, a}, PhasedPauli{0, b});
}

int distance(const PauliString& op, int n_sites_a) {
  if (op.is_identity()) throw UsageError("distance: identity has no distance");
  if (op.max_site() > n_sites_a) {
    throw UsageError("distance: " + op.to_string() + " has support outside 1.." +
                     std::to_string(n_sites_a));
  }
  return n_sites_a - op.min_site();
}

std::vector<PauliString> enumerate_pauli(int n_sites_a, int body_count) {
  if (body_count < 1 || body_count > n_sites_a) {
    throw UsageError("enumerate_pauli: need 1 <= n <= L_A");
  }
  std::vector<PauliString> out;
  std::vector<int> sites(static_cast<std::size_t>(body_count));
  for (int i = 0; i < body_count; ++i) sites[static_cast<std::size_t>(i)] = i + 1;
  const auto n = static_cast<std::size_t>(body_count);
  while (true) {
    int combos = 1;
    for (int i = 0; i < body_count; ++i) combos *= 3;
    for (int code = 0; code < combos; ++code) {
      std::vector<PauliFactor> f(n);
      int rest = code;
      for (std::size_t i = n; i-- > 0;) {
        f[i] = {sites[i], static_cast<Axis>(rest % 3)};
        rest /= 3;
      }
      out.emplace_back(n_sites_a, std::move(f));
    }
    // next combination
    std::size_t i = n;
    while (i > 0 && sites[i - 1] == n_sites_a - static_cast<int>(n - i)) --i;
    if (i == 0) break;
    ++sites[i - 1];
    for (std::size_t j = i; j < n; ++j) sites[j] = sites[j - 1] + 1;
  }
  return out;
}

std::vector<PauliString> family_members(const PauliString& pattern, int n_sites_a) {
  if (pattern.is_identity()) throw UsageError("family pattern must not be the identity");
  const int span = pattern.max_site() - pattern.min_site();
  std::vector<PauliString> out;
  std::vector<PauliFactor> base = pattern.factors();
  const int first = pattern.min_site();
  for (auto& f : base) f.site -= first - 1;
  for (int start = 1; start + span <= n_sites_a; ++start) {
    std::vector<PauliFactor> f = base;
    for (auto& x : f) x.site += start - 1;
    out.emplace_back(n_sites_a, std::move(f));
  }
  return out;
}

int SignAssignment::sign(const PauliString& s) const {
  int minus = 0;
  for (const auto& f : s.factors()) minus += f.axis != plus_axis ? 1 : 0;
  return (minus & 1) != 0 ? -1 : 1;
}

std::optional<SignAssignment> excluding_assignment(const std::vector<PauliString>& terms,
                                                   const PauliString& op) {
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const SignAssignment s{a};
    if (s.sign(op) != -1) continue;
    if (std::all_of(terms.begin(), terms.end(), [&](const PauliString& t) { return s.sign(t) == 1; })) {
      return s;
    }
  }
  return std::nullopt;
}

bool sign_excludes(const std::vector<PauliString>& terms, const PauliString& op) {
  return excluding_assignment(terms, op).has_value();
}

std::optional<int> minimal_product_length(const std::vector<PauliString>& terms,
                                          const PauliString& op, int k_max) {
  if (k_max < 1) throw UsageError("minimal_product_length: k_max must be >= 1");
  std::vector<Bits> gens;
  for (const auto& t : distinct_terms(terms)) gens.push_back(bits_of(t));
  const std::uint64_t target = bits_of(op).key();
  std::unordered_set<std::uint64_t> seen{Bits{}.key()};
  std::vector<Bits> frontier{Bits{}};
  for (int t = 1; t <= k_max && !frontier.empty(); ++t) {
    std::vector<Bits> next;
    for (const Bits& s : frontier) {
      for (const Bits& g : gens) {
        const Bits n = s ^ g;
        if (n.key() == target) return t;
        if (seen.insert(n.key()).second) next.push_back(n);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

bool tuple_splits(const std::vector<PauliString>& tuple, int n_sites_a) {
  const std::size_t m = tuple.size();
  if (m == 0) throw UsageError("tuple_splits: empty tuple");
  if (m > 24) throw UsageError("tuple_splits: tuple too long for exhaustive partitioning");
  std::vector<bool> inside_a(m);
  for (std::size_t i = 0; i < m; ++i) {
    inside_a[i] = tuple[i].is_identity() || tuple[i].max_site() <= n_sites_a;
  }
  for (std::uint32_t h1 = 1; h1 < (std::uint32_t{1} << m); ++h1) {
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if ((h1 >> i & 1U) == 0) continue;
      if (!inside_a[i]) ok = false;
      for (std::size_t j = 0; j < m && ok; ++j) {
        if ((h1 >> j & 1U) == 0 && !tuple[i].commutes_with(tuple[j])) ok = false;
      }
    }
    if (ok) return true;
  }
  return false;
}

namespace {

// Components of the anticommutation graph restricted to `members`; true iff
// every component contains a vertex flagged in `touches_b`.
bool every_component_touches_b(std::uint64_t members, const std::vector<std::uint64_t>& adjacency,
                               std::uint64_t touches_b) {
  std::uint64_t left = members;
  while (left != 0) {
    std::uint64_t comp = left & (~left + 1);
    std::uint64_t grow = comp;
    while (grow != 0) {
      std::uint64_t next = 0;
      for (std::uint64_t g = grow; g != 0; g &= g - 1) {
        next |= adjacency[static_cast<std::size_t>(std::countr_zero(g))];
      }
      next &= members & ~comp;
      comp |= next;
      grow = next;
    }
    if ((comp & touches_b) == 0) return false;
    left &= ~comp;
  }
  return true;
}

}  // namespace

bool tuple_splits_by_components(const std::vector<PauliString>& tuple, int n_sites_a) {
  if (tuple.empty()) throw UsageError("tuple_splits: empty tuple");
  if (tuple.size() > 64) throw UsageError("tuple_splits: tuple too long");
  const std::size_t m = tuple.size();
  std::vector<std::uint64_t> adj(m, 0);
  std::uint64_t touches_b = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!tuple[i].is_identity() && tuple[i].max_site() > n_sites_a) touches_b |= std::uint64_t{1} << i;
    for (std::size_t j = 0; j < m; ++j) {
      if (!tuple[i].commutes_with(tuple[j])) adj[i] |= std::uint64_t{1} << j;
    }
  }
  const std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  return !every_component_touches_b(all, adj, touches_b);
}

namespace {

// Search state for conjecture_k0.  A tuple is a multiset; whether it splits
// depends only on its set S of distinct terms, and its product (mod phase)
// only on the set P of terms used an odd number of times.  The shortest tuple
// for a given (S, P) has |P| + 2|S \ P| elements.
class ConjectureSearch {
 public:
  ConjectureSearch(const std::vector<PauliString>& terms, const PauliString& op, int n_sites_a)
      : terms_(distinct_terms(terms)), target_(bits_of(op)) {
    if (terms_.size() > 64) throw UsageError("conjecture_k0: at most 64 distinct terms supported");
    const std::size_t m = terms_.size();
    adjacency_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      vec_.push_back(bits_of(terms_[i]));
      if (terms_[i].max_site() > n_sites_a) touches_b_ |= std::uint64_t{1} << i;
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (anticommute(vec_[i], vec_[j])) adjacency_[i] |= std::uint64_t{1} << j;
      }
    }
  }

  /// True iff some tuple of exactly `length` terms has product ~ op and
  /// does not split.
  bool exists(int length) {
    length_ = length;
    chosen_.clear();
    return dfs(0);
  }

 private:
  bool dfs(std::size_t start) {
    if (!chosen_.empty() && feasible()) return true;
    if (static_cast<int>(chosen_.size()) >= length_) return false;
    for (std::size_t i = start; i < terms_.size(); ++i) {
      chosen_.push_back(i);
      if (dfs(i + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  // Does the current set S admit P with XOR(P) = target and a tuple of
  // length_ elements?  Such tuples have 2|S| - |P| + 2m elements, m >= 0.
  bool feasible() {
    const int s = static_cast<int>(chosen_.size());
    int lo = 2 * s - length_;
    if (lo > s) return false;
    if (lo < 0) lo = (length_ % 2 == 0) ? 0 : 1;
    std::uint64_t members = 0;
    for (std::size_t i : chosen_) members |= std::uint64_t{1} << i;
    if ((members & touches_b_) == 0) return false;
    if (!every_component_touches_b(members, adjacency_, touches_b_)) return false;
    for (int size = lo; size <= s; size += 2) {
      if (has_odd_subset_of_size(size)) return true;
    }
    return false;
  }

  bool has_odd_subset_of_size(int size) {
    // Gaussian elimination over GF(2) on the chosen vectors, tracking which
    // original columns combine into each pivot row.
    const std::size_t s = chosen_.size();
    struct Row {
      std::uint64_t v;
      std::uint64_t combo;
    };
    std::vector<Row> basis;
    std::vector<std::uint64_t> null_space;
    for (std::size_t c = 0; c < s; ++c) {
      Row r{vec_[chosen_[c]].key(), std::uint64_t{1} << c};
      for (const Row& b : basis) {
        if ((r.v ^ b.v) < r.v) {
          r.v ^= b.v;
          r.combo ^= b.combo;
        }
      }
      if (r.v == 0) {
        null_space.push_back(r.combo);
      } else {
        basis.push_back(r);
        std::sort(basis.begin(), basis.end(), [](const Row& a, const Row& b) { return a.v > b.v; });
      }
    }
    Row t{target_.key(), 0};
    for (const Row& b : basis) {
      if ((t.v ^ b.v) < t.v) {
        t.v ^= b.v;
        t.combo ^= b.combo;
      }
    }
    if (t.v != 0) return false;
    const std::size_t nn = null_space.size();
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << nn); ++pick) {
      std::uint64_t combo = t.combo;
      for (std::size_t k = 0; k < nn; ++k) {
        if ((pick >> k & 1U) != 0) combo ^= null_space[k];
      }
      if (std::popcount(combo) == size) return true;
    }
    return false;
  }

  std::vector<PauliString> terms_;
  Bits target_;
  std::vector<Bits> vec_;
  std::vector<std::uint64_t> adjacency_;
  std::uint64_t touches_b_ = 0;
  std::vector<std::size_t> chosen_;
  int length_ = 0;
};

}  // namespace

bool nonsplitting_tuple_exists(const std::vector<PauliString>& terms, const PauliString& op, int n_sites_a,
                               int length) {
  if (length < 1) throw UsageError("nonsplitting_tuple_exists: length must be >= 1");
  if (op.is_identity()) throw UsageError("nonsplitting_tuple_exists: operator must not be the identity");
  return ConjectureSearch(terms, op, n_sites_a).exists(length);
}

std::optional<int> conjecture_k0(const std::vector<PauliString>& terms, const PauliString& op,
                                 int n_sites_a, int k_max) {
  if (k_max < 1) throw UsageError("conjecture_k0: k_max must be >= 1");
  if (op.is_identity()) throw UsageError("conjecture_k0: operator must not be the identity");
  ConjectureSearch search(terms, op, n_sites_a);
  for (int k = 1; k <= k_max; ++k) {
    if (search.exists(k + 1)) return k;
  }
  return std::nullopt;
}

}  // namespace hmf
