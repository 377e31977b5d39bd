#include "sparsecert/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sparsecert/errors.hpp"
#include "sparsecert/lower_bound.hpp"

namespace sparsecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using CostMatrix = std::vector<std::vector<double>>;

// Kuhn's augmenting paths; sources and targets are tried in index order.
class BipartiteMatcher {
 public:
  BipartiteMatcher(const CostMatrix& cost, double threshold)
      : cost_(cost), threshold_(threshold), owner_(cost.empty() ? 0 : cost[0].size(), -1) {}

  int run() {
    int size = 0;
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      visited_.assign(owner_.size(), false);
      if (augment(static_cast<int>(j))) ++size;
    }
    return size;
  }

 private:
  bool augment(int j) {
    for (std::size_t l = 0; l < owner_.size(); ++l) {
      if (visited_[l] || !(cost_[j][l] <= threshold_)) continue;
      visited_[l] = true;
      if (owner_[l] < 0 || augment(owner_[l])) {
        owner_[l] = j;
        return true;
      }
    }
    return false;
  }

  const CostMatrix& cost_;
  double threshold_;
  std::vector<int> owner_;
  std::vector<bool> visited_;
};

// Square min-cost assignment (Hungarian method with potentials). Returns
// the column assigned to each row.
std::vector<int> hungarian(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

std::optional<std::size_t> AlignmentResult::find_source(int j) const {
  const auto it = std::lower_bound(sources.begin(), sources.end(), j);
  if (it == sources.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - sources.begin());
}

double best_scale(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double bb = b.squaredNorm();
  return bb > 0.0 ? a.dot(b) / bb : 0.0;
}

double scaled_column_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - best_scale(a, b) * b).norm();
}

AlignmentResult align_dictionaries(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                   std::optional<int> match_count) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("align_dictionaries: row counts differ (" +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) +
                                ")");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("align_dictionaries: non-finite entries");
  }
  const auto m = static_cast<std::size_t>(a.cols());
  const auto m_bar = static_cast<std::size_t>(b.cols());

  CostMatrix cost(m, std::vector<double>(m_bar, kInf));
  std::size_t usable = 0;
  std::vector<double> levels;
  for (std::size_t l = 0; l < m_bar; ++l) {
    if (b.col(l).squaredNorm() == 0.0) continue;
    ++usable;
    for (std::size_t j = 0; j < m; ++j) {
      cost[j][l] = scaled_column_error(a.col(j), b.col(l));
      levels.push_back(cost[j][l]);
    }
  }
  if (usable == 0) throw std::invalid_argument("align_dictionaries: B has no nonzero column");

  std::size_t wanted = std::min(m, usable);
  if (match_count) {
    if (*match_count < 0) throw std::invalid_argument("align_dictionaries: negative match count");
    wanted = std::min(wanted, static_cast<std::size_t>(*match_count));
  }

  AlignmentResult out;
  if (wanted == 0 || m == 0) {
    for (std::size_t j = 0; j < m; ++j) out.unmatched_sources.push_back(static_cast<int>(j));
    for (std::size_t l = 0; l < m_bar; ++l) out.unmatched_targets.push_back(static_cast<int>(l));
    return out;
  }

  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (static_cast<std::size_t>(BipartiteMatcher(cost, levels[mid]).run()) >= wanted) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double bottleneck = levels[lo];

  // Among matchings inside the bottleneck: most pairs, then least total error.
  const std::size_t size = std::max(m, m_bar);
  double largest = 0.0;
  for (double c : levels) largest = std::max(largest, c);
  const double forbidden = (static_cast<double>(size) + 1.0) * (largest + 1.0);
  CostMatrix square(size, std::vector<double>(size, 0.0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < size; ++l) {
      square[j][l] = (l < m_bar && cost[j][l] <= bottleneck) ? cost[j][l] : forbidden;
    }
  }
  const std::vector<int> assignment = hungarian(square);

  std::vector<bool> target_used(m_bar, false);
  for (std::size_t j = 0; j < m; ++j) {
    const int l = assignment[j];
    if (l < 0 || static_cast<std::size_t>(l) >= m_bar || !(cost[j][l] <= bottleneck)) {
      out.unmatched_sources.push_back(static_cast<int>(j));
      continue;
    }
    target_used[l] = true;
    out.sources.push_back(static_cast<int>(j));
    out.targets.push_back(l);
    out.scales.push_back(best_scale(a.col(j), b.col(l)));
    out.column_errors.push_back(cost[j][l]);
    out.max_column_error = std::max(out.max_column_error, cost[j][l]);
  }
  for (std::size_t l = 0; l < m_bar; ++l) {
    if (!target_used[l]) out.unmatched_targets.push_back(static_cast<int>(l));
  }
  return out;
}

double code_alignment_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                            const AlignmentResult& alignment) {
  double total = 0.0;
  for (std::size_t t = 0; t < alignment.matched(); ++t) {
    const int j = alignment.sources[t];
    const int l = alignment.targets[t];
    if (j >= x.size() || l >= xbar.size()) {
      throw std::invalid_argument("code_alignment_error: code length does not fit alignment");
    }
    if (alignment.scales[t] == 0.0) {
      throw std::domain_error("code_alignment_error: zero scale for column " +
                              std::to_string(j + 1));
    }
    total += std::abs(x(j) - xbar(l) / alignment.scales[t]);
  }
  return total;
}

Theorem1Report verify_theorem1(const Eigen::MatrixXd& a, const SparseCodeSet& codes,
                               const Eigen::MatrixXd& b, const SparseCodeSet& codes_bar,
                               const StabilityCertificate& cert, double eps, double slack) {
  if (a.rows() != b.rows()) throw std::invalid_argument("verify_theorem1: A and B differ in n");
  if (codes.count() != codes_bar.count()) {
    throw std::invalid_argument("verify_theorem1: code counts differ");
  }
  if (a.cols() != codes.dimension() || b.cols() != codes_bar.dimension()) {
    throw std::invalid_argument("verify_theorem1: codes do not fit their dictionaries");
  }
  if (!cert.C1 || !cert.eps_max_dictionary || !cert.r) {
    throw HypothesisError("verify_theorem1: certificate does not cover dictionary recovery");
  }
  if (!(eps >= 0.0)) throw std::invalid_argument("verify_theorem1: eps must be >= 0");

  Theorem1Report rep;
  rep.eps = eps;
  rep.slack = slack;
  const Eigen::MatrixXd residual = a * codes.codes() - b * codes_bar.codes();
  for (Eigen::Index i = 0; i < residual.cols(); ++i) {
    rep.residuals.push_back(residual.col(i).norm());
    rep.max_residual = std::max(rep.max_residual, rep.residuals.back());
  }
  if (rep.max_residual > eps) {
    throw HypothesisError("verify_theorem1: residual " + std::to_string(rep.max_residual) +
                          " exceeds eps " + std::to_string(eps));
  }
  if (!(eps < *cert.eps_max_dictionary)) {
    throw ThresholdError("verify_theorem1: eps " + std::to_string(eps) +
                         " is not below L2/C1 = " + std::to_string(*cert.eps_max_dictionary));
  }

  const double c1 = *cert.C1;
  const int r = *cert.r;
  rep.m = static_cast<int>(a.cols());
  rep.m_bar = static_cast<int>(b.cols());
  rep.m_bar_ok = rep.m_bar >= rep.m;
  if (static_cast<long>(r - 1) * rep.m_bar < static_cast<long>(rep.m) * r) {
    rep.required_matched = rep.m_bar - r * (rep.m_bar - rep.m);
  }

  std::optional<int> match_count;
  if (rep.required_matched && rep.m_bar > rep.m) match_count = *rep.required_matched;
  rep.alignment = align_dictionaries(a, b, match_count);

  // J: the best-scoring matched columns, as many as the guarantee covers.
  std::vector<std::size_t> order(rep.alignment.matched());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rep.alignment.column_errors[x] < rep.alignment.column_errors[y];
  });
  std::size_t certified = order.size();
  if (rep.required_matched) {
    certified = std::min(certified, static_cast<std::size_t>(std::max(0, *rep.required_matched)));
  }
  order.resize(certified);
  std::sort(order.begin(), order.end());
  AlignmentResult on_j;
  for (std::size_t t : order) {
    on_j.sources.push_back(rep.alignment.sources[t]);
    on_j.targets.push_back(rep.alignment.targets[t]);
    on_j.scales.push_back(rep.alignment.scales[t]);
    on_j.column_errors.push_back(rep.alignment.column_errors[t]);
    on_j.max_column_error = std::max(on_j.max_column_error, rep.alignment.column_errors[t]);
  }
  rep.certified_sources = on_j.sources;
  rep.max_column_error = on_j.max_column_error;
  rep.column_bound = c1 * eps;
  const bool enough = !rep.required_matched ||
                      static_cast<int>(on_j.matched()) >= *rep.required_matched;
  rep.column_ok = enough && rep.max_column_error <= rep.column_bound + slack;

  if (cert.spark_ok && cert.eps_max_codes && eps < *cert.eps_max_codes && on_j.matched() > 0) {
    rep.codes_checked = true;
    const double gap = cert.L2k - c1 * eps;
    for (int i = 0; i < codes.count(); ++i) {
      const Eigen::VectorXd x = codes.codes().col(i);
      double l1_on_j = 0.0;
      for (int j : on_j.sources) l1_on_j += std::abs(x(j));
      const double err = code_alignment_error(x, codes_bar.codes().col(i), on_j);
      const double bound = (1.0 + c1 * l1_on_j) * eps / gap;
      rep.code_errors.push_back(err);
      rep.code_bounds.push_back(bound);
      rep.max_code_error = std::max(rep.max_code_error, err);
      rep.max_code_bound = std::max(rep.max_code_bound, bound);
      if (err > bound + slack) rep.codes_ok = false;
    }

    Eigen::MatrixXd bpd(b.rows(), static_cast<Eigen::Index>(on_j.matched()));
    for (std::size_t t = 0; t < on_j.matched(); ++t) {
      bpd.col(static_cast<Eigen::Index>(t)) = on_j.scales[t] * b.col(on_j.targets[t]);
    }
    const int width = std::min<int>(2 * cert.k, static_cast<int>(bpd.cols()));
    rep.lower_bound_after = lower_bound_k(bpd, width);
    rep.lower_bound_floor = gap;
    rep.lower_bound_ok = *rep.lower_bound_after >= gap - slack;
  }
  return rep;
}

}  // namespace sparsecert
