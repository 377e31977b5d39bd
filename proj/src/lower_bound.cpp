#include "sparsecert/lower_bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "sparsecert/combinatorics.hpp"
#include "sparsecert/errors.hpp"

namespace sparsecert {

namespace {

using Rational = boost::multiprecision::cpp_rational;

Rational exact(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite matrix entry");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double frac = std::frexp(x, &e);  // x = frac * 2^e, 0.5 <= |frac| < 1
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(frac, 53));
  e -= 53;
  Rational r(mantissa);
  if (e > 0) {
    r *= BigInt(1) << e;
  } else if (e < 0) {
    r /= BigInt(1) << -e;
  }
  return r;
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
    }
  }
  return det;
}

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

}  // namespace

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const SupportSet& s) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const int c = s.indices[j];
    if (c < 0 || c >= m.cols()) {
      throw std::out_of_range("column " + std::to_string(c + 1) + " outside [1, " +
                              std::to_string(m.cols()) + "]");
    }
    out.col(static_cast<Eigen::Index>(j)) = m.col(c);
  }
  return out;
}

double smallest_singular_value(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) throw std::invalid_argument("smallest_singular_value: no columns");
  if (m.cols() > m.rows()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double restricted_lower_bound(const Eigen::MatrixXd& m, const Hypergraph& h) {
  require_finite(m);
  if (h.edge_count() == 0) throw std::invalid_argument("restricted_lower_bound: empty hypergraph");
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : h.edges()) {
    if (s.empty()) throw std::invalid_argument("restricted_lower_bound: empty edge");
    const double v =
        smallest_singular_value(select_columns(m, s)) / std::sqrt(static_cast<double>(s.size()));
    lowest = std::min(lowest, v);
  }
  return lowest;
}

double lower_bound_k(const Eigen::MatrixXd& m, int k, std::uint64_t cap) {
  require_finite(m);
  const auto cols = static_cast<int>(m.cols());
  if (k < 1 || k > cols) {
    throw std::invalid_argument("lower_bound_k: need 1 <= k <= " + std::to_string(cols));
  }
  require_combinations_within(cols, k, cap, "lower_bound_k");
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  double lowest = std::numeric_limits<double>::infinity();
  if (k > m.rows()) return 0.0;
  Eigen::MatrixXd sub(m.rows(), k);
  for_each_combination(cols, k, [&](const std::vector<int>& c) {
    for (int j = 0; j < k; ++j) sub.col(j) = m.col(c[j]);
    lowest = std::min(lowest, smallest_singular_value(sub) * scale);
    return true;
  });
  return lowest;
}

double spark_threshold(const Eigen::MatrixXd& m, int s, double rank_tol) {
  if (s < 1) throw std::invalid_argument("spark_threshold: s must be positive");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return rank_tol * svd.singularValues()(0) / std::sqrt(static_cast<double>(s));
}

bool spark_condition(const Eigen::MatrixXd& m, int k, double rank_tol, std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("spark_condition: k must be positive");
  const int s = std::min<int>(2 * k, static_cast<int>(m.cols()));
  const double threshold = spark_threshold(m, s, rank_tol);
  if (threshold == 0.0) return false;  // zero matrix
  return lower_bound_k(m, s, cap) > threshold;
}

SparkPolynomial spark_polynomial(const Eigen::MatrixXd& m, int k, std::uint64_t cap) {
  require_finite(m);
  const auto rows = static_cast<std::uint64_t>(m.rows());
  const auto cols = static_cast<std::uint64_t>(m.cols());
  const std::uint64_t size = 2 * static_cast<std::uint64_t>(k);
  if (k < 1 || size > std::min(rows, cols)) {
    throw std::invalid_argument("spark_polynomial: need 1 <= 2k <= min(n, m)");
  }
  if (binomial(cols, size) * binomial(rows, size) > cap) {
    throw CapExceeded("spark_polynomial: minor count exceeds cap " + std::to_string(cap));
  }

  std::vector<std::vector<Rational>> entries(rows, std::vector<Rational>(cols));
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) entries[i][j] = exact(m(i, j));
  }

  Rational product = 1;
  for_each_combination(cols, size, [&](const std::vector<int>& col_set) {
    Rational sum = 0;
    for_each_combination(rows, size, [&](const std::vector<int>& row_set) {
      std::vector<std::vector<Rational>> minor(size, std::vector<Rational>(size));
      for (std::size_t a = 0; a < size; ++a) {
        for (std::size_t b = 0; b < size; ++b) minor[a][b] = entries[row_set[a]][col_set[b]];
      }
      const Rational d = determinant(std::move(minor));
      sum += d * d;
      return true;
    });
    product *= sum;
    return product != 0;  // once a factor vanishes the product is zero
  });

  SparkPolynomial out;
  out.nonzero = product != 0;
  out.value = out.nonzero ? product.convert_to<double>() : 0.0;
  return out;
}

}  // namespace sparsecert
