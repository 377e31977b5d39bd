#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/hypergraph.hpp"
#include "sparsecert/subspace.hpp"

namespace sparsecert {

/// Both sides of dist(x, n V_i) <= (1 / (1 - xi(V))) sum_i dist(x, V_i).
std::pair<double, double> distance_to_intersection_sides(const std::vector<Subspace>& collection,
                                                         const Eigen::VectorXd& x,
                                                         double rank_tol = kDefaultRankTol);

struct Lemma3Report {
  int trials = 0;
  int violations = 0;
  double slack = 1e-8;
  double worst_excess = -1.0;  ///< max over samples of lhs - rhs
  double max_xi = 0.0;
};

/// Random collections of 2..max_subspaces subspaces of R^ambient_dim sharing
/// a random common part, each tested at several points (generic points,
/// points in the intersection, points near one member).
Lemma3Report check_lemma3(int trials, int ambient_dim, int max_subspaces, std::uint64_t seed,
                          double slack = 1e-8);

struct Lemma4Report {
  int m = 0;
  int m_bar = 0;
  int r = 0;
  std::uint64_t admissible_maps = 0;
  std::uint64_t counterexamples = 0;
  /// m_bar - r (m_bar - m) when (r - 1) m_bar < m r.
  std::optional<int> required_size;
  /// Smallest, over admissible maps, largest injective J found.
  std::optional<int> min_injective_size;
  /// Admissible maps whose largest J has exactly required_size elements.
  std::uint64_t maps_at_required_size = 0;
};

/// Enumerates every map pi from the edges of H to subsets of [m_bar] with
/// sum |pi(S)| >= sum |S| and |n pi(G)| <= |n G| for all G of r and r+1
/// edges, then checks m_bar >= m and, when (r-1) m_bar < m r, that
/// i -> n pi(star(i)) is injective into [m_bar] on some J of size
/// m_bar - r (m_bar - m). H must be r-regular with the SIP.
Lemma4Report check_lemma4(const Hypergraph& h, int m_bar,
                          std::uint64_t node_cap = 2'000'000'000ULL);

}  // namespace sparsecert
