#include "sparsecert/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "sparsecert/errors.hpp"

namespace sparsecert {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw std::invalid_argument("ambient dimension mismatch: " +
                                std::to_string(a.ambient_dim()) + " vs " +
                                std::to_string(b.ambient_dim()));
  }
}

double largest_singular_value(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Angle between U and W once both have had `common` removed. `common` must
// be contained in both (up to round-off).
double angle_outside(const Subspace& u, const Subspace& w, const Subspace& common) {
  if (u.dim() == 0 || w.dim() == 0) return std::numbers::pi / 2;
  auto remainder = [&common](const Subspace& s) -> Eigen::MatrixXd {
    Eigen::MatrixXd r = s.basis() - common.basis() * (common.basis().transpose() * s.basis());
    if (r.cols() == 0) return r;
    // common lies inside s, so the singular values of r are 0 or 1 up to
    // round-off; split them at 1/2.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU);
    Eigen::Index rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()(rank) > 0.5) ++rank;
    return svd.matrixU().leftCols(rank);
  };
  const Eigen::MatrixXd ur = remainder(u);
  const Eigen::MatrixXd wr = remainder(w);
  if (ur.cols() == 0 || wr.cols() == 0) return std::numbers::pi / 2;
  const double c = std::clamp(largest_singular_value(ur.transpose() * wr), 0.0, 1.0);
  return std::acos(c);
}

}  // namespace

Subspace::Subspace(Eigen::MatrixXd orthonormal_basis) : basis_(std::move(orthonormal_basis)) {
  if (basis_.cols() > basis_.rows()) {
    throw std::invalid_argument("subspace basis has more columns than rows");
  }
  if (basis_.cols() > 0) {
    const Eigen::MatrixXd gram = basis_.transpose() * basis_;
    const double defect =
        (gram - Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10)) {
      throw std::invalid_argument("subspace basis is not orthonormal (defect " +
                                  std::to_string(defect) + ")");
    }
  }
}

Subspace Subspace::zero(int ambient_dim) { return Subspace(Eigen::MatrixXd(ambient_dim, 0)); }

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& x) const {
  if (x.size() != basis_.rows()) throw std::invalid_argument("vector/subspace size mismatch");
  if (basis_.cols() == 0) return Eigen::VectorXd::Zero(x.size());
  return basis_ * (basis_.transpose() * x);
}

double Subspace::distance_to(const Eigen::VectorXd& x) const { return (x - project(x)).norm(); }

Subspace orthonormal_basis(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("empty matrix");
  if (!(rank_tol > 0)) throw std::invalid_argument("rank_tol must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv(0) > 0) {
    while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
  }
  return Subspace(svd.matrixU().leftCols(rank));
}

double subspace_distance(const Subspace& u, const Subspace& v) {
  require_same_ambient(u, v);
  if (u.dim() == 0) return 0.0;
  // U meets the orthogonal complement of V whenever dim U > dim V
  if (u.dim() > v.dim()) return 1.0;
  Eigen::MatrixXd residual = u.basis();
  if (v.dim() > 0) residual -= v.basis() * (v.basis().transpose() * u.basis());
  return std::clamp(largest_singular_value(residual), 0.0, 1.0);
}

Subspace intersect(const std::vector<Subspace>& collection, double rank_tol) {
  if (collection.empty()) throw std::invalid_argument("intersect: empty collection");
  const int n = collection.front().ambient_dim();
  for (const auto& s : collection) require_same_ambient(collection.front(), s);
  if (collection.size() == 1) return collection.front();
  Eigen::MatrixXd gap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : collection) {
    gap += Eigen::MatrixXd::Identity(n, n) - s.projector();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gap);
  // eigenvalues ascend
  Eigen::Index d = 0;
  while (d < n && eig.eigenvalues()(d) < rank_tol) ++d;
  if (d == 0) return Subspace::zero(n);
  // re-orthonormalize to wash out eigen-solver round-off
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(eig.eigenvectors().leftCols(d));
  return Subspace(qr.householderQ() * Eigen::MatrixXd::Identity(n, d));
}

double friedrichs_angle(const Subspace& u, const Subspace& w, double rank_tol) {
  require_same_ambient(u, w);
  if (u.dim() == 0 && w.dim() == 0) {
    throw std::invalid_argument("friedrichs_angle: both subspaces are zero");
  }
  return angle_outside(u, w, intersect({u, w}, rank_tol));
}

double xi(const std::vector<Subspace>& collection, double rank_tol, std::size_t ordering_cap) {
  const std::size_t count = collection.size();
  if (count == 0) throw std::invalid_argument("xi: empty collection");
  if (count > ordering_cap) {
    throw CapExceeded("xi: collection of " + std::to_string(count) +
                      " subspaces exceeds ordering cap " + std::to_string(ordering_cap));
  }
  for (const auto& s : collection) require_same_ambient(collection.front(), s);
  if (count == 1) return 0.0;

  const std::size_t full = (std::size_t{1} << count) - 1;
  std::vector<std::optional<Subspace>> meet(full + 1);
  auto meet_of = [&](std::size_t mask) -> const Subspace& {
    if (!meet[mask]) {
      std::vector<Subspace> members;
      for (std::size_t i = 0; i < count; ++i) {
        if (mask & (std::size_t{1} << i)) members.push_back(collection[i]);
      }
      meet[mask] = intersect(members, rank_tol);
    }
    return *meet[mask];
  };

  // best[mask]: max over orderings of the members of mask of the sine product
  std::vector<double> best(full + 1, 1.0);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    double top = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if (!(mask & bit)) continue;
      const std::size_t rest = mask & ~bit;
      const Subspace& later = meet_of(rest);
      const Subspace common = intersect({collection[i], later}, rank_tol);
      const double s = std::sin(angle_outside(collection[i], later, common));
      top = std::max(top, s * s * best[rest]);
    }
    best[mask] = top;
  }
  return std::sqrt(std::clamp(1.0 - best[full], 0.0, 1.0));
}

}  // namespace sparsecert
