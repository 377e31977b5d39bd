#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "sparsecert/hypergraph.hpp"
#include "sparsecert/subspace.hpp"

namespace sparsecert {

/// Columns of m indexed by s.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const SupportSet& s);

/// Smallest singular value of m, taken as 0 when m has more columns than rows.
double smallest_singular_value(const Eigen::MatrixXd& m);

/// Hypergraph-restricted lower bound
///
///   L_H(M) = min over S in H of sigma_min(M_S) / sqrt(|S|).
///
/// For a k-uniform H this is the usual 1/sqrt(k) prefactor; for mixed edge
/// sizes each edge carries its own 1/sqrt(|S|).
double restricted_lower_bound(const Eigen::MatrixXd& m, const Hypergraph& h);

/// L_k(M): restricted lower bound over all k-subsets of the columns.
double lower_bound_k(const Eigen::MatrixXd& m, int k,
                     std::uint64_t cap = kDefaultEnumerationCap);

/// Level that L_s(M) must exceed for every s-subset of columns to count as
/// linearly independent: rank_tol * ||M||_2 / sqrt(s).
double spark_threshold(const Eigen::MatrixXd& m, int s, double rank_tol = kDefaultRankTol);

/// Every min(2k, m) columns of M are linearly independent, i.e.
/// L_{min(2k,m)}(M) > spark_threshold(M, min(2k,m), rank_tol).
bool spark_condition(const Eigen::MatrixXd& m, int k, double rank_tol = kDefaultRankTol,
                     std::uint64_t cap = kDefaultEnumerationCap);

/// Value of the product over 2k-column subsets S of the sum over 2k-row
/// subsets S' of det(M_{S',S})^2, evaluated in exact rational arithmetic
/// from the binary values of the entries.
struct SparkPolynomial {
  double value = 0.0;    ///< nearest double (may underflow to 0 for tiny values)
  bool nonzero = false;  ///< exact zero test
};

/// Minor enumeration is capped at `cap` determinants.
SparkPolynomial spark_polynomial(const Eigen::MatrixXd& m, int k,
                                 std::uint64_t cap = 100'000);

}  // namespace sparsecert
