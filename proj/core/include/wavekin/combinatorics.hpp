#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wavekin/lattice.hpp"

namespace wavekin {

/// Rooted ternary tree stored as an arena; node 0 is the root.
struct TernaryTree {
  struct Node {
    int parent = -1;
    /// children (n1, n2, n3) or all -1 for a leaf
    int child[3] = {-1, -1, -1};
    bool leaf() const { return child[0] < 0; }
  };
  std::vector<Node> nodes;

  int order() const;
  std::vector<int> leaves() const;      ///< left to right
  std::vector<int> branching() const;   ///< preorder
  /// Product of the child signs (+, -, +) along the path from the root.
  int sign(int node) const;
  /// Throws std::logic_error when the arena is not a well-formed ternary tree.
  void validate() const;
  /// Canonical parenthesized form, e.g. "(..(...))".
  std::string shape() const;
};

/// All shape-distinct ternary trees with n branching nodes (n <= 4).
std::vector<TernaryTree> enumerate_trees(int n);

/// a_n = sum_{n1+n2+n3=n-1} a_n1 a_n2 a_n3
std::uint64_t tree_count(int n);

/// Number of perfect matchings of m points, (m - 1)!!.
std::uint64_t isserlis_pairings(int m);
/// Calls visit once per perfect matching of {0, ..., m-1}; m even and <= 16.
void for_each_pairing(int m, const std::function<void(const std::vector<std::pair<int, int>>&)>& visit);

struct LeafRef {
  int copy = 0;
  int node = 0;
  bool operator==(const LeafRef& o) const { return copy == o.copy && node == o.node; }
};

struct Pairing {
  std::vector<std::pair<LeafRef, LeafRef>> pairs;
};

/// Leaves of one copy pair with opposite signs; leaves of different copies with equal signs
/// (the second copy enters conjugated).
bool pairing_respects_signs(const std::vector<TernaryTree>& copies, const Pairing& p);

/// Every pairing of all leaves in `copies` that respects the sign rule.
std::vector<Pairing> sign_pairings(const std::vector<TernaryTree>& copies);

struct CountingProblem {
  /// one or two tree copies
  std::vector<TernaryTree> copies;
  Pairing pairing;
  /// pinned nodes (copy, node) -> value
  std::vector<std::pair<LeafRef, Wavevector>> red;
  /// sigma per copy per node (branching entries used); empty means all zero
  std::vector<std::vector<double>> sigma;
  TorusSpec spec;  ///< dim, L and zeta are used
  double T = 1.0;
  double theta = 0.0;
  std::uint64_t budget = 100000000ULL;
};

/// Decorations with k_n = k_n1 - k_n2 + k_n3 at branching nodes, |k_l| <= L^theta at leaves,
/// paired leaves equal, red nodes pinned and |Omega_n - sigma_n| <= 1/T. Depth-first search
/// over free leaves; throws std::runtime_error when more than `budget` partial assignments are visited.
std::uint64_t count_admissible(const CountingProblem& p);

/// Reference bound L^theta (L^d T^-1 rho)^{l - p - r}, exponent + 1 when the red set is exactly
/// the unpaired leaves plus the root (single copy).
double admissible_bound(const CountingProblem& p, bool generic_zeta = false);

/// |{(k1,k2,k3): k = k1-k2+k3, k not in {k1,k3}, |k_j| <= L^theta, |Omega| < 1/T,
///   |sum gamma_kj - gamma_k| <= alpha}| with gamma = |k|^2_zeta, d = 2.
std::uint64_t degenerate_set_count(const Wavevector& k, const TorusSpec& spec, double T, double alpha, double theta,
                                   std::uint64_t budget = 4000000000ULL);

/// L^{d theta} L^{2d} T^-1 (alpha + T^-1)^{(d-1)/2}
double degenerate_bound(int dim, double L, double T, double alpha, double theta);

}  // namespace wavekin
