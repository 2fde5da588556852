#pragma once

// Exact Pauli-string algebra on an open chain of spin-1/2 sites.  Sites are
// 1-based.  Besides the factor list, every string carries its symplectic
// bitmasks (bit j-1 for site j): x-bit set for X and Y, z-bit set for Z and Y.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hmf {

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

char axis_letter(Axis a);

struct PauliFactor {
  int site = 1;
  Axis axis = Axis::x;
  friend auto operator<=>(const PauliFactor&, const PauliFactor&) = default;
};

class PauliString {
 public:
  PauliString() = default;
  /// Factors may come in any order; sites must be distinct and in 1..chain_length.
  PauliString(int chain_length, std::vector<PauliFactor> factors);

  static PauliString identity(int chain_length);
  /// Parses "X1 Z3", "x1z3", or "I".
  static PauliString parse(std::string_view text, int chain_length);
  static PauliString from_masks(int chain_length, std::uint64_t x_mask, std::uint64_t z_mask);

  [[nodiscard]] int chain_length() const { return chain_length_; }
  [[nodiscard]] const std::vector<PauliFactor>& factors() const { return factors_; }
  [[nodiscard]] int body_count() const { return static_cast<int>(factors_.size()); }
  [[nodiscard]] bool is_identity() const { return factors_.empty(); }
  [[nodiscard]] int min_site() const;
  [[nodiscard]] int max_site() const;
  [[nodiscard]] std::uint64_t x_mask() const { return x_mask_; }
  [[nodiscard]] std::uint64_t z_mask() const { return z_mask_; }
  [[nodiscard]] std::uint64_t support_mask() const { return x_mask_ | z_mask_; }
  [[nodiscard]] int y_count() const;

  /// Axis on `site`, or nullopt for identity there.
  [[nodiscard]] std::optional<Axis> axis_at(int site) const;

  [[nodiscard]] bool commutes_with(const PauliString& other) const;

  /// Same operator translated by `offset` sites (chain length unchanged).
  [[nodiscard]] PauliString shifted(int offset) const;
  [[nodiscard]] PauliString with_chain_length(int chain_length) const;

  /// "X1 X2", "Z3 Z5"; identity is "I".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.chain_length_ == b.chain_length_ && a.factors_ == b.factors_;
  }
  /// Orders by body count, then by sites, then by axes.
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b);

 private:
  int chain_length_ = 0;
  std::vector<PauliFactor> factors_;  // strictly increasing sites
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
};

/// A Pauli string times i^phase_quarters.
struct PhasedPauli {
  int phase_quarters = 0;  // 0:+1, 1:+i, 2:-1, 3:-i
  PauliString string;

  [[nodiscard]] std::string phase_text() const;
  friend bool operator==(const PhasedPauli&, const PhasedPauli&) = default;
};

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b);
PhasedPauli multiply(const PauliString& a, const PauliString& b);

/// L_A - (smallest site of O).  O must be non-identity and inside 1..L_A.
int distance(const PauliString& op, int n_sites_a);

/// All n-body strings on sites 1..L_A: site sets in lexicographic order,
/// axes x < y < z with the leftmost site varying slowest.
std::vector<PauliString> enumerate_pauli(int n_sites_a, int body_count);

/// All translates of `pattern` that fit inside 1..L_A, ordered by decreasing
/// distance from the boundary.  The pattern's chain length is replaced by L_A.
std::vector<PauliString> family_members(const PauliString& pattern, int n_sites_a);

// ---------------------------------------------------------------------------
// Selection rules

/// Klein-group sign homomorphism: `plus_axis` maps to +1, the other two axes
/// to -1, identity to +1.
struct SignAssignment {
  Axis plus_axis = Axis::x;
  [[nodiscard]] int sign(const PauliString& s) const;
};

/// First assignment (in x, y, z order) under which every term has sign +1 and
/// `op` has sign -1.  Such an operator has a vanishing coefficient at every beta.
std::optional<SignAssignment> excluding_assignment(const std::vector<PauliString>& terms,
                                                   const PauliString& op);
bool sign_excludes(const std::vector<PauliString>& terms, const PauliString& op);

/// Smallest t <= k_max such that a product of t terms (with repetition) is
/// proportional to `op`; breadth-first search over Pauli strings mod phase.
std::optional<int> minimal_product_length(const std::vector<PauliString>& terms,
                                          const PauliString& op, int k_max);

/// True iff the tuple can be split into H1 (non-empty, no support beyond
/// L_A) and H2 with every element of H1 commuting with every element of H2.
/// Exhaustive over all 2^|tuple| partitions.
bool tuple_splits(const std::vector<PauliString>& tuple, int n_sites_a);

/// Same predicate via connected components of the anticommutation graph: the
/// tuple splits iff some component has no support beyond L_A.
bool tuple_splits_by_components(const std::vector<PauliString>& tuple, int n_sites_a);

/// True iff some tuple of exactly `length` terms (repetition allowed) with
/// product proportional to `op` does not split.  The conjecture predicts
/// c_k(op) = 0 whenever this is false for length k+1.
bool nonsplitting_tuple_exists(const std::vector<PauliString>& terms, const PauliString& op, int n_sites_a,
                               int length);

/// Smallest k <= k_max for which some tuple h_1..h_{k+1} of terms with
/// product proportional to `op` does not split.
std::optional<int> conjecture_k0(const std::vector<PauliString>& terms, const PauliString& op,
                                 int n_sites_a, int k_max);

}  // namespace hmf
