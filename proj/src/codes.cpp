#include "sparsecert/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "sparsecert/combinatorics.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/lower_bound.hpp"

namespace sparsecert {

SparseCodeSet::SparseCodeSet(int k, Eigen::MatrixXd codes, std::vector<SupportSet> supports)
    : k_(k), codes_(std::move(codes)), supports_(std::move(supports)) {
  if (k_ < 1) throw std::invalid_argument("sparsity k must be positive");
  if (static_cast<Eigen::Index>(supports_.size()) != codes_.cols()) {
    throw std::invalid_argument("one support per code column required");
  }
  if (!codes_.allFinite()) throw std::invalid_argument("codes have non-finite entries");
  for (Eigen::Index i = 0; i < codes_.cols(); ++i) {
    const auto& s = supports_[i];
    if (static_cast<int>(s.size()) > k_) {
      throw std::invalid_argument("support of code " + std::to_string(i + 1) +
                                  " is larger than k = " + std::to_string(k_));
    }
    for (int v : s.indices) {
      if (v < 0 || v >= codes_.rows()) {
        throw std::out_of_range("support index outside code dimension");
      }
    }
    if (!nonzero_support(codes_.col(i)).is_subset_of(s)) {
      throw std::invalid_argument("code " + std::to_string(i + 1) +
                                  " has nonzeros outside its declared support");
    }
  }
}

SparseCodeSet SparseCodeSet::from_matrix(int k, Eigen::MatrixXd codes) {
  std::vector<SupportSet> supports;
  for (Eigen::Index i = 0; i < codes.cols(); ++i) supports.push_back(nonzero_support(codes.col(i)));
  return SparseCodeSet(k, std::move(codes), std::move(supports));
}

double SparseCodeSet::max_l1() const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < codes_.cols(); ++i) {
    best = std::max(best, codes_.col(i).lpNorm<1>());
  }
  return best;
}

SparseCodeSet SparseCodeSet::subset(const std::vector<int>& columns) const {
  Eigen::MatrixXd sub(codes_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<SupportSet> sup;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    sub.col(static_cast<Eigen::Index>(j)) = codes_.col(columns[j]);
    sup.push_back(supports_.at(columns[j]));
  }
  return SparseCodeSet(k_, std::move(sub), std::move(sup));
}

SparseCodeSet SparseCodeSet::concat(const SparseCodeSet& a, const SparseCodeSet& b) {
  if (a.dimension() != b.dimension() || a.sparsity() != b.sparsity()) {
    throw std::invalid_argument("concat: code sets disagree on dimension or sparsity");
  }
  Eigen::MatrixXd joined(a.dimension(), a.count() + b.count());
  joined << a.codes(), b.codes();
  std::vector<SupportSet> sup = a.supports();
  sup.insert(sup.end(), b.supports().begin(), b.supports().end());
  return SparseCodeSet(a.sparsity(), std::move(joined), std::move(sup));
}

SupportSet nonzero_support(const Eigen::VectorXd& x) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) idx.push_back(static_cast<int>(i));
  }
  return SupportSet(std::move(idx));
}

SparseCodeSet vandermonde_codes(int m, const SupportSet& s, int count,
                                const std::vector<double>& gammas) {
  if (count < 1) throw std::invalid_argument("vandermonde_codes: count must be positive");
  if (s.empty()) throw std::invalid_argument("vandermonde_codes: empty support");
  if (gammas.size() != s.size()) {
    throw std::invalid_argument("vandermonde_codes: need one gamma per support index");
  }
  for (int v : s.indices) {
    if (v < 0 || v >= m) throw std::out_of_range("vandermonde_codes: support outside [1, m]");
  }
  std::set<double> seen;
  for (double g : gammas) {
    if (!std::isfinite(g) || g == 0.0) {
      throw std::invalid_argument("vandermonde_codes: gammas must be finite and nonzero");
    }
    if (!seen.insert(g).second) {
      throw std::invalid_argument("vandermonde_codes: gammas must be distinct");
    }
    const double log_mag = count * std::log10(std::abs(g));
    if (log_mag > 300.0 || log_mag < -300.0) {
      throw std::range_error("vandermonde_codes: gamma^count leaves [1e-300, 1e300]");
    }
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, count);
  for (int j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      x(s.indices[i], j) = std::pow(gammas[i], j + 1);
    }
  }
  return SparseCodeSet(static_cast<int>(s.size()), std::move(x),
                       std::vector<SupportSet>(count, s));
}

namespace {

bool columns_independent(const Eigen::MatrixXd& sub, double rank_tol) {
  if (sub.cols() > sub.rows()) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  const auto& sv = svd.singularValues();
  return sv(0) > 0 && sv(sv.size() - 1) > rank_tol * sv(0);
}

}  // namespace

GeneralPositionReport check_general_position(const Eigen::MatrixXd& vectors, int k,
                                             const GeneralPositionOptions& options) {
  if (k < 1) throw std::invalid_argument("general position: k must be positive");
  GeneralPositionReport report;
  const auto n = static_cast<std::uint64_t>(vectors.cols());
  if (n == 0) return report;
  if (n < static_cast<std::uint64_t>(k)) {
    report.subsets_checked = 1;
    report.in_general_position = columns_independent(vectors, options.rank_tol);
    return report;
  }

  Eigen::MatrixXd sub(vectors.rows(), k);
  if (binomial(n, k) <= options.cap) {
    for_each_combination(n, k, [&](const std::vector<int>& c) {
      for (int j = 0; j < k; ++j) sub.col(j) = vectors.col(c[j]);
      ++report.subsets_checked;
      report.in_general_position = columns_independent(sub, options.rank_tol);
      return report.in_general_position;
    });
    return report;
  }
  if (!options.sample_over_cap) {
    throw CapExceeded("general position: C(" + std::to_string(n) + ", " + std::to_string(k) +
                      ") exceeds cap and sampling is disabled");
  }

  report.exhaustive = false;
  std::mt19937_64 rng(options.seed);
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::uint64_t t = 0; t < options.samples; ++t) {
    // partial Fisher-Yates for a uniform k-subset
    for (int j = 0; j < k; ++j) {
      std::uniform_int_distribution<std::uint64_t> pick(j, n - 1);
      std::swap(pool[j], pool[pick(rng)]);
      sub.col(j) = vectors.col(pool[j]);
    }
    ++report.subsets_checked;
    if (!columns_independent(sub, options.rank_tol)) {
      report.in_general_position = false;
      return report;
    }
  }
  report.failure_fraction_bound = 3.0 / static_cast<double>(report.subsets_checked);
  return report;
}

bool general_linear_position(const Eigen::MatrixXd& vectors, int k, double rank_tol) {
  GeneralPositionOptions options;
  options.rank_tol = rank_tol;
  return check_general_position(vectors, k, options).in_general_position;
}

std::map<SupportSet, std::vector<int>> support_index_sets(const SparseCodeSet& codes,
                                                          const Hypergraph& h) {
  std::vector<SupportSet> actual;
  for (int i = 0; i < codes.count(); ++i) actual.push_back(nonzero_support(codes.codes().col(i)));
  std::map<SupportSet, std::vector<int>> out;
  for (const auto& s : h.edges()) {
    auto& members = out[s];
    for (int i = 0; i < codes.count(); ++i) {
      if (actual[i].is_subset_of(s)) members.push_back(i);
    }
  }
  return out;
}

Dataset synthesize_dataset(const Eigen::MatrixXd& dictionary, const SparseCodeSet& codes,
                           double eta, std::uint64_t seed, NoiseModel model) {
  if (dictionary.cols() != codes.dimension()) {
    throw std::invalid_argument("synthesize_dataset: dictionary has " +
                                std::to_string(dictionary.cols()) + " columns, codes live in R^" +
                                std::to_string(codes.dimension()));
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("synthesize_dataset: eta must be finite and >= 0");
  }
  const Eigen::Index n = dictionary.rows();
  const Eigen::MatrixXd clean = dictionary * codes.codes();
  Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(n, codes.count());
  Eigen::MatrixXd signals = clean;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  for (int i = 0; i < codes.count() && eta > 0.0 && n > 0; ++i) {
    Eigen::VectorXd dir(n);
    do {
      for (Eigen::Index r = 0; r < n; ++r) dir(r) = normal(rng);
    } while (dir.norm() == 0.0);
    dir /= dir.norm();
    double radius = eta;
    if (model == NoiseModel::uniform_ball) {
      radius *= std::pow(uniform(rng), 1.0 / static_cast<double>(n));
    }
    Eigen::VectorXd ni = radius * dir;
    Eigen::VectorXd z = clean.col(i) + ni;
    // Rounding in z can push the recomputed residual past eta; rescale
    // toward eta with a margin that doubles until the bound holds.
    double margin = 4.0 * std::numeric_limits<double>::epsilon();
    for (double r = (z - clean.col(i)).norm(); r > eta; r = (z - clean.col(i)).norm()) {
      ni *= std::min(1.0, eta / r) * (1.0 - margin);
      margin = std::min(1.0, 2.0 * margin);
      z = clean.col(i) + ni;
    }
    noise.col(i) = ni;
    signals.col(i) = z;
  }

  Dataset out;
  out.signals = std::move(signals);
  out.eta = eta;
  out.truth = GroundTruth{dictionary, codes, std::move(noise), seed};
  return out;
}

int default_per_support_count(int m, int k) {
  const BigInt value = BigInt(k - 1) * binomial(m, k) + 1;
  if (value > std::numeric_limits<int>::max()) {
    throw CapExceeded("default per-support count overflows");
  }
  return value.convert_to<int>();
}

namespace {

std::vector<double> draw_gammas(std::size_t count, std::mt19937_64& rng,
                                const GenerateOptions& options) {
  std::uniform_real_distribution<double> uniform(options.gamma_low, options.gamma_high);
  std::vector<double> gammas;
  while (gammas.size() < count) {
    const double g = uniform(rng);
    const bool close = std::any_of(gammas.begin(), gammas.end(), [&](double o) {
      return std::abs(o - g) < options.min_gamma_gap;
    });
    if (!close && g != 0.0) gammas.push_back(g);
  }
  return gammas;
}

bool instance_ok(const Eigen::MatrixXd& a, const SparseCodeSet& codes, const Hypergraph& h,
                 int k, int per_support_count, const GenerateOptions& options) {
  if (!has_sip(h) || !regularity(h)) return false;
  const double l2h = restricted_lower_bound(a, pairwise_unions(h));
  if (!(l2h > spark_threshold(a, 2 * k, options.rank_tol))) return false;
  if (!spark_condition(a, k, options.rank_tol)) return false;
  for (const auto& [s, members] : support_index_sets(codes, h)) {
    if (static_cast<int>(members.size()) < per_support_count) return false;
    Eigen::MatrixXd block(codes.dimension(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) {
      block.col(static_cast<Eigen::Index>(j)) = codes.codes().col(members[j]);
    }
    if (!general_linear_position(block, k, options.rank_tol)) return false;
  }
  return true;
}

}  // namespace

Instance generate_instance(int m, int n, int k, const Hypergraph& h, int per_support_count,
                           std::uint64_t seed, const GenerateOptions& options) {
  if (k < 1 || k >= m) throw std::invalid_argument("generate_instance: need 1 <= k < m");
  if (n < std::min(2 * k, m)) {
    throw std::invalid_argument("generate_instance: need n >= min(2k, m)");
  }
  if (per_support_count < 1) {
    throw std::invalid_argument("generate_instance: per_support_count must be positive");
  }
  if (h.vertex_count() != m || h.uniform_size() != k) {
    throw std::invalid_argument("generate_instance: hypergraph must be k-uniform on [m]");
  }
  if (h.edge_count() == 0) throw std::invalid_argument("generate_instance: empty hypergraph");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    Eigen::MatrixXd a(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) a(i, j) = normal(rng);
    }
    std::optional<SparseCodeSet> codes;
    for (const auto& s : h.edges()) {
      auto block = vandermonde_codes(m, s, per_support_count, draw_gammas(s.size(), rng, options));
      codes = codes ? SparseCodeSet::concat(*codes, block) : std::move(block);
    }
    if (instance_ok(a, *codes, h, k, per_support_count, options)) {
      return Instance{std::move(a), std::move(*codes), attempt};
    }
  }
  throw HypothesisError("generate_instance: no instance passed verification after " +
                        std::to_string(options.max_attempts) + " attempts");
}

}  // namespace sparsecert
