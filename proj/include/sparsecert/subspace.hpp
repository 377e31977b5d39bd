#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sparsecert {

/// Relative tolerance used for numerical rank decisions unless overridden.
inline constexpr double kDefaultRankTol = 1e-9;

/// Orderings of a collection are enumerated, so keep collections small.
inline constexpr std::size_t kDefaultOrderingCap = 8;

/// Linear subspace of R^n held as an orthonormal basis (n x d, d may be 0).
class Subspace {
 public:
  /// Throws std::invalid_argument unless basis^T basis = I within 1e-10.
  explicit Subspace(Eigen::MatrixXd orthonormal_basis);

  static Subspace zero(int ambient_dim);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  /// Euclidean distance from x to the subspace.
  double distance_to(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd basis_;
};

/// Orthonormal basis of the column span of M. Numerical rank counts the
/// singular values above rank_tol times the largest one.
Subspace orthonormal_basis(const Eigen::MatrixXd& m, double rank_tol = kDefaultRankTol);

/// d(U, V) = max over unit u in U of dist(u, V), i.e. the largest singular
/// value of (I - P_V) basis(U). Zero when U is the zero subspace.
double subspace_distance(const Subspace& u, const Subspace& v);

/// Intersection of a collection: eigenvectors of sum_i (I - P_{V_i}) whose
/// eigenvalue is below rank_tol.
Subspace intersect(const std::vector<Subspace>& collection, double rank_tol = kDefaultRankTol);

/// Friedrichs angle between U and W in (0, pi/2]: the smallest principal
/// angle once the common part U n W is removed from both. pi/2 when either
/// remainder is trivial (in particular when U is contained in W).
double friedrichs_angle(const Subspace& u, const Subspace& w, double rank_tol = kDefaultRankTol);

/// Alternating-projection constant of a collection of subspaces:
///
///   xi^2 = 1 - max over orderings of prod_{i < l} sin^2 theta(V_i, n_{j > i} V_j)
///
/// and xi = 0 for a single subspace. The maximum over orderings is computed
/// exactly by dynamic programming over subsets (the product for an ordering
/// only depends on which subspace comes first and the ordering of the rest).
double xi(const std::vector<Subspace>& collection, double rank_tol = kDefaultRankTol,
          std::size_t ordering_cap = kDefaultOrderingCap);

}  // namespace sparsecert
