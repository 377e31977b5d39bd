#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/codes.hpp"
#include "sparsecert/constants.hpp"

namespace sparsecert {

/// Column correspondence between a reference dictionary A (n x m) and a
/// candidate B (n x m_bar): A_j ~ scales[t] * B_{targets[t]} for
/// j = sources[t]. Sources are listed in increasing order.
struct AlignmentResult {
  std::vector<int> sources;
  std::vector<int> targets;
  std::vector<double> scales;
  std::vector<double> column_errors;
  double max_column_error = 0.0;
  std::vector<int> unmatched_sources;
  std::vector<int> unmatched_targets;

  std::size_t matched() const { return sources.size(); }
  /// Index into the matched arrays for source column j, if matched.
  std::optional<std::size_t> find_source(int j) const;
};

/// Least-squares coefficient <a, b> / ||b||^2; zero for b = 0.
double best_scale(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// min over c of ||a - c b||.
double scaled_column_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Injective column map minimizing the largest per-column error
/// min_c ||A_j - c B_l||. The bottleneck value is found by binary search
/// over the distinct pair errors with a bipartite-matching feasibility test;
/// among matchings within the bottleneck the one with the smallest total
/// error is returned (Hungarian method). Zero columns of B never match.
///
/// By default min(m, #nonzero columns of B) sources are matched. With
/// match_count, the bottleneck is taken over matchings of that size and
/// every source that fits under it is reported.
AlignmentResult align_dictionaries(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                   std::optional<int> match_count = std::nullopt);

/// sum over matched j of |x_j - xbar_{pi(j)} / c_j|.
double code_alignment_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                            const AlignmentResult& alignment);

struct Theorem1Report {
  double eps = 0.0;
  double slack = 1e-9;
  std::vector<double> residuals;  ///< ||A x_i - B xbar_i||
  double max_residual = 0.0;

  int m = 0;
  int m_bar = 0;
  bool m_bar_ok = false;  ///< m_bar >= m
  /// m_bar - r (m_bar - m), present when (r-1) m_bar < m r.
  std::optional<int> required_matched;

  AlignmentResult alignment;
  std::vector<int> certified_sources;  ///< J used for the column bound
  double max_column_error = 0.0;
  double column_bound = 0.0;  ///< C1 eps
  bool column_ok = false;

  bool codes_checked = false;
  std::vector<double> code_errors;
  std::vector<double> code_bounds;
  double max_code_error = 0.0;
  double max_code_bound = 0.0;
  bool codes_ok = true;

  std::optional<double> lower_bound_after;  ///< L_2k(B P D) over J
  double lower_bound_floor = 0.0;           ///< L2k - C1 eps
  bool lower_bound_ok = true;

  bool passed() const { return m_bar_ok && column_ok && codes_ok && lower_bound_ok; }
};

/// Evaluates the recovery inequalities for a candidate (B, xbar) against a
/// certified (A, x). Throws HypothesisError when some ||A x_i - B xbar_i||
/// exceeds eps or the certificate has no C1, and ThresholdError when
/// eps >= L2 / C1. The code bound and the lower-bound persistence check are
/// evaluated only when the certificate has the spark condition and
/// eps < L2k / C1.
Theorem1Report verify_theorem1(const Eigen::MatrixXd& a, const SparseCodeSet& codes,
                               const Eigen::MatrixXd& b, const SparseCodeSet& codes_bar,
                               const StabilityCertificate& cert, double eps,
                               double slack = 1e-9);

}  // namespace sparsecert
