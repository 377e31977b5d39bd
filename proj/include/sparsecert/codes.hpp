#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/hypergraph.hpp"
#include "sparsecert/subspace.hpp"

namespace sparsecert {

/// m x N matrix of k-sparse codes with a declared support per column.
class SparseCodeSet {
 public:
  /// Throws std::invalid_argument if a column has nonzeros outside its
  /// declared support or a support is larger than k.
  SparseCodeSet(int k, Eigen::MatrixXd codes, std::vector<SupportSet> supports);

  /// Supports taken from each column's nonzero pattern.
  static SparseCodeSet from_matrix(int k, Eigen::MatrixXd codes);

  int sparsity() const { return k_; }
  int dimension() const { return static_cast<int>(codes_.rows()); }
  int count() const { return static_cast<int>(codes_.cols()); }
  const Eigen::MatrixXd& codes() const { return codes_; }
  const std::vector<SupportSet>& supports() const { return supports_; }

  /// Max over columns of the l1 norm.
  double max_l1() const;

  /// Columns listed in `columns`, in that order.
  SparseCodeSet subset(const std::vector<int>& columns) const;

  /// Columns of both sets side by side. Dimensions and sparsity must agree.
  static SparseCodeSet concat(const SparseCodeSet& a, const SparseCodeSet& b);

 private:
  int k_;
  Eigen::MatrixXd codes_;
  std::vector<SupportSet> supports_;
};

/// Nonzero pattern of a vector.
SupportSet nonzero_support(const Eigen::VectorXd& x);

/// `count` codes on support S in dimension m: column j (1-based) carries
/// gamma_i^j at the i-th index of S. Distinct positive gammas make every
/// |S| of the columns linearly independent; for mixed signs that can fail
/// for non-consecutive exponents.
SparseCodeSet vandermonde_codes(int m, const SupportSet& s, int count,
                                const std::vector<double>& gammas);

struct GeneralPositionOptions {
  double rank_tol = kDefaultRankTol;
  std::uint64_t cap = kDefaultEnumerationCap;
  /// Beyond the cap, test random k-subsets instead of throwing.
  bool sample_over_cap = false;
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 0;
};

struct GeneralPositionReport {
  bool in_general_position = true;
  bool exhaustive = true;
  std::uint64_t subsets_checked = 0;
  /// For sampled runs: 95% upper bound on the fraction of failing subsets
  /// given zero observed failures (3 / samples). Zero when exhaustive.
  double failure_fraction_bound = 0.0;
};

/// Any k of the columns of `vectors` are linearly independent. A subset is
/// independent when its smallest singular value exceeds rank_tol times its
/// largest. With fewer than k columns, all of them must be independent.
GeneralPositionReport check_general_position(const Eigen::MatrixXd& vectors, int k,
                                             const GeneralPositionOptions& options = {});

bool general_linear_position(const Eigen::MatrixXd& vectors, int k,
                             double rank_tol = kDefaultRankTol);

/// I(S) for each edge S of H: indices of the codes whose nonzero pattern is
/// contained in S.
std::map<SupportSet, std::vector<int>> support_index_sets(const SparseCodeSet& codes,
                                                          const Hypergraph& h);

enum class NoiseModel {
  uniform_ball,  ///< direction uniform on the sphere, radius eta * U^(1/n)
  sphere,        ///< radius exactly eta (worst case)
};

struct GroundTruth {
  Eigen::MatrixXd dictionary;
  SparseCodeSet codes;
  Eigen::MatrixXd noise;
  std::uint64_t seed = 0;
};

struct Dataset {
  Eigen::MatrixXd signals;
  double eta = 0.0;
  std::optional<GroundTruth> truth;
};

/// z_i = A x_i + n_i with ||z_i - A x_i||_2 <= eta holding as computed in
/// floating point. Deterministic for a given seed.
Dataset synthesize_dataset(const Eigen::MatrixXd& dictionary, const SparseCodeSet& codes,
                           double eta, std::uint64_t seed,
                           NoiseModel model = NoiseModel::uniform_ball);

struct GenerateOptions {
  double rank_tol = kDefaultRankTol;
  int max_attempts = 16;
  /// Vandermonde bases are drawn from [gamma_low, gamma_high] and rejected
  /// when closer than min_gamma_gap to an earlier draw.
  double gamma_low = 0.5;
  double gamma_high = 1.5;
  double min_gamma_gap = 1e-2;
};

struct Instance {
  Eigen::MatrixXd dictionary;
  SparseCodeSet codes;
  int attempts = 1;
};

/// Default codes per support: (k-1) C(m,k) + 1.
int default_per_support_count(int m, int k);

/// Gaussian dictionary plus per-edge Vandermonde codes. The output is
/// checked (SIP, regularity, L_{2H} > 0, spark condition, general position
/// and counts per support) and redrawn on failure, up to max_attempts;
/// afterwards HypothesisError is thrown.
Instance generate_instance(int m, int n, int k, const Hypergraph& h, int per_support_count,
                           std::uint64_t seed, const GenerateOptions& options = {});

}  // namespace sparsecert
