#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/codes.hpp"
#include "sparsecert/combinatorics.hpp"
#include "sparsecert/hypergraph.hpp"
#include "sparsecert/subspace.hpp"

namespace sparsecert {

struct ConstantsOptions {
  double rank_tol = kDefaultRankTol;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::size_t ordering_cap = kDefaultOrderingCap;
  /// compute_C1 rejects a denominator at or below this value.
  double denominator_tol = 1e-12;
};

/// C2(A, H) = (r + 1) max_j ||A_j|| / (1 - max_G xi({span A_S : S in G}))
/// with G ranging over the r- and (r+1)-subsets of H, the groups the
/// recovery argument applies the distance-to-intersection bound to.
///
/// Requires H r-regular with the SIP and L_{2H}(A) > 0; throws
/// HypothesisError otherwise, or when the denominator is not positive.
/// Groups larger than |H| are skipped; single subspaces have xi = 0.
double compute_C2(const Eigen::MatrixXd& a, const Hypergraph& h,
                  const ConstantsOptions& options = {});

/// min over S in H of L_k(A X_{I(S)}), the denominator of C1.
double c1_denominator(const Eigen::MatrixXd& a, const SparseCodeSet& codes, const Hypergraph& h,
                      const ConstantsOptions& options = {});

/// C1 = C2(A, H) / min_{S in H} L_k(A X_{I(S)}).
double compute_C1(const Eigen::MatrixXd& a, const SparseCodeSet& codes, const Hypergraph& h,
                  const ConstantsOptions& options = {});

/// epsilon(d1, d2) = min(d1 / C1, d2 L_2k / (1 + C1 (d2 + max_i ||x_i||_1))).
double epsilon_for(double delta1, double delta2, double c1, double l2k, double max_l1);

/// |H| ((k-1) C(m,k) + 1).
BigInt sample_size_cor1(int m, int k, const Hypergraph& h);

struct SampleSize {
  BigInt per_support;
  BigInt total;
};

/// Per support: (k-1) (C(m_bar,k) + |H| k C(m_bar,k-1)) + 1; total = |H| times that.
SampleSize sample_size_thm2(int m_bar, int k, std::size_t edge_count);

struct SupportCount {
  SupportSet support;
  int count = 0;
  bool general_position = false;
};

struct StabilityCertificate {
  int m = 0;
  int n = 0;
  int k = 0;
  std::optional<int> m_bar;
  std::optional<int> r;
  std::size_t edge_count = 0;
  std::size_t code_count = 0;

  double L2 = 0.0;
  double L2k = 0.0;
  double L2H = 0.0;
  double max_column_norm = 0.0;
  double max_code_l1 = 0.0;
  std::optional<double> max_xi;
  std::optional<double> C2;
  std::optional<double> C1;
  std::optional<double> eps_max_dictionary;  ///< L2 / C1
  std::optional<double> eps_max_codes;       ///< L2k / C1, only with the spark condition

  std::vector<SupportCount> supports;
  int required_per_support = 0;  ///< (k-1) C(m,k) + 1

  bool sip_ok = false;
  bool regular_ok = false;
  bool l2h_ok = false;
  bool glp_ok = false;
  bool spark_ok = false;
  bool counts_ok = false;

  std::vector<std::string> notes;

  /// Everything the dictionary-recovery conclusion needs. The spark
  /// condition only gates the code-recovery conclusion.
  bool dictionary_certified() const {
    return sip_ok && regular_ok && l2h_ok && glp_ok && counts_ok && C1.has_value();
  }
};

/// Runs every hypothesis check on (A, codes, H) and computes the constants
/// the checks permit. Never throws on a failed hypothesis; failures are
/// recorded in the flags and notes.
StabilityCertificate certify(const Eigen::MatrixXd& a, const SparseCodeSet& codes,
                             const Hypergraph& h, const ConstantsOptions& options = {});

/// epsilon(d1, d2) using the certificate's C1, L2k and max code l1 norm.
/// Throws HypothesisError unless the certificate carries eps_max_codes.
double epsilon_for(const StabilityCertificate& cert, double delta1, double delta2);

}  // namespace sparsecert
