#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sparsecert/hypergraph.hpp"
#include "sparsecert/subspace.hpp"

namespace testutil {

inline Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

inline sparsecert::Subspace random_subspace(int n, int d, std::mt19937_64& rng) {
  if (d == 0) return sparsecert::Subspace::zero(n);
  return sparsecert::orthonormal_basis(gaussian(n, d, rng));
}

inline Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

/// Subspace spanned by coordinate vectors (0-based indices).
inline sparsecert::Subspace coordinate_span(int n, const std::vector<int>& idx) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, static_cast<int>(idx.size()));
  for (std::size_t t = 0; t < idx.size(); ++t) b(idx[t], static_cast<int>(t)) = 1.0;
  return sparsecert::Subspace(b);
}

inline sparsecert::Hypergraph edges(int m, std::vector<std::vector<int>> one_based) {
  std::vector<sparsecert::SupportSet> out;
  for (auto& e : one_based) {
    for (int& v : e) --v;
    out.emplace_back(e);
  }
  return sparsecert::Hypergraph(m, std::move(out));
}

}  // namespace testutil
