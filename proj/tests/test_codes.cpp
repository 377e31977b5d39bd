#include <gtest/gtest.h>

#include <cmath>

#include "sparsecert/codes.hpp"
#include "sparsecert/combinatorics.hpp"
#include "sparsecert/constants.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/lower_bound.hpp"
#include "test_util.hpp"

using namespace sparsecert;

namespace {

// Rank by full-pivot LU, independent of the SVD route in the library.
bool independent_by_lu(const Eigen::MatrixXd& cols) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(cols);
  lu.setThreshold(1e-12);
  return lu.rank() == cols.cols();
}

}  // namespace

TEST(SparseCodeSet, ValidatesSupports) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  x(0, 0) = 1.0;
  x(2, 0) = 1.0;
  EXPECT_THROW(SparseCodeSet(2, x, {SupportSet({0, 1})}), std::invalid_argument);
  EXPECT_THROW(SparseCodeSet(1, x, {SupportSet({0, 2})}), std::invalid_argument);
  EXPECT_NO_THROW(SparseCodeSet(2, x, {SupportSet({0, 2})}));
  const SparseCodeSet from = SparseCodeSet::from_matrix(2, x);
  EXPECT_EQ(from.supports()[0], SupportSet({0, 2}));
  EXPECT_DOUBLE_EQ(from.max_l1(), 2.0);
}

TEST(SparseCodeSet, SubsetAndConcat) {
  const SparseCodeSet a = vandermonde_codes(4, SupportSet({0, 1}), 3, {1.0, 2.0});
  const SparseCodeSet b = vandermonde_codes(4, SupportSet({2, 3}), 2, {0.5, 3.0});
  const SparseCodeSet c = SparseCodeSet::concat(a, b);
  EXPECT_EQ(c.count(), 5);
  EXPECT_EQ(c.supports()[4], SupportSet({2, 3}));
  const SparseCodeSet s = c.subset({4, 0});
  EXPECT_EQ(s.count(), 2);
  EXPECT_EQ(s.codes().col(1), a.codes().col(0));
  const SparseCodeSet other = vandermonde_codes(5, SupportSet({0}), 1, {1.0});
  EXPECT_THROW(SparseCodeSet::concat(a, other), std::invalid_argument);
}

TEST(Vandermonde, Examples) {
  const SparseCodeSet v = vandermonde_codes(3, SupportSet({0, 1}), 3, {1.0, 2.0});
  Eigen::MatrixXd want(3, 3);
  want << 1, 1, 1, 2, 4, 8, 0, 0, 0;
  EXPECT_EQ(v.codes(), want);
  for (const auto& s : v.supports()) EXPECT_EQ(s, SupportSet({0, 1}));

  const SparseCodeSet w = vandermonde_codes(2, SupportSet({1}), 4, {3.0});
  EXPECT_EQ(w.codes().row(1), (Eigen::RowVectorXd(4) << 3, 9, 27, 81).finished());
  EXPECT_EQ(w.sparsity(), 1);
}

TEST(Vandermonde, RejectsBadBases) {
  EXPECT_THROW(vandermonde_codes(3, SupportSet({0, 1}), 3, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(vandermonde_codes(3, SupportSet({0, 1}), 3, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(vandermonde_codes(3, SupportSet({0, 1}), 3, {1.0}), std::invalid_argument);
  EXPECT_THROW(vandermonde_codes(3, SupportSet({0, 3}), 3, {1.0, 2.0}), std::out_of_range);
  EXPECT_THROW(vandermonde_codes(3, SupportSet({0}), 400, {10.0}), std::range_error);
}

TEST(Vandermonde, AlwaysInGeneralPosition) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> g(0.5, 1.5);
  for (int t = 0; t < 40; ++t) {
    const int k = 1 + t % 4;
    const int count = k + static_cast<int>(rng() % (13 - k));
    std::vector<int> idx;
    std::vector<double> gammas;
    for (int i = 0; i < k; ++i) {
      idx.push_back(2 * i);
      double v;
      do {
        v = g(rng);
      } while (std::any_of(gammas.begin(), gammas.end(),
                           [&](double o) { return std::abs(o - v) < 0.05; }));
      gammas.push_back(v);
    }
    const SparseCodeSet codes = vandermonde_codes(2 * k, SupportSet(idx), count, gammas);
    EXPECT_TRUE(general_linear_position(codes.codes(), k)) << t;
    // Independent check on every k-subset.
    for_each_combination(count, k, [&](const std::vector<int>& c) {
      Eigen::MatrixXd sub(k, k);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) sub(a, b) = codes.codes()(idx[a], c[b]);
      }
      EXPECT_TRUE(independent_by_lu(sub));
      return true;
    });
  }
}

TEST(GeneralPosition, Examples) {
  EXPECT_TRUE(general_linear_position(Eigen::MatrixXd::Identity(2, 2), 2));
  Eigen::MatrixXd par(3, 2);
  par << 1, 2, 1, 2, 0, 0;
  EXPECT_FALSE(general_linear_position(par, 2));
  EXPECT_TRUE(general_linear_position(par, 1));
  EXPECT_FALSE(general_linear_position(Eigen::MatrixXd::Zero(3, 2), 1));
}

TEST(GeneralPosition, FewerVectorsThanK) {
  Eigen::MatrixXd one(3, 1);
  one << 1, 2, 3;
  EXPECT_TRUE(general_linear_position(one, 2));
  EXPECT_FALSE(general_linear_position(Eigen::MatrixXd::Zero(3, 1), 2));
}

TEST(GeneralPosition, SamplingBeyondCap) {
  std::mt19937_64 rng(42);
  const Eigen::MatrixXd v = testutil::gaussian(4, 30, rng);
  GeneralPositionOptions opt;
  opt.cap = 100;
  EXPECT_THROW(check_general_position(v, 4, opt), CapExceeded);
  opt.sample_over_cap = true;
  opt.samples = 500;
  const auto rep = check_general_position(v, 4, opt);
  EXPECT_TRUE(rep.in_general_position);
  EXPECT_FALSE(rep.exhaustive);
  EXPECT_EQ(rep.subsets_checked, 500u);
  EXPECT_NEAR(rep.failure_fraction_bound, 3.0 / 500, 1e-15);
  const auto full = check_general_position(v, 2);
  EXPECT_TRUE(full.exhaustive);
  EXPECT_EQ(full.subsets_checked, 435u);
}

TEST(SupportIndexSets, Examples) {
  const Hypergraph h = build_cyclic(4, 2);
  const SparseCodeSet all12 = vandermonde_codes(4, SupportSet({0, 1}), 3, {1.0, 2.0});
  const auto sets = support_index_sets(all12, h);
  EXPECT_EQ(sets.at(SupportSet({0, 1})), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(sets.at(SupportSet({1, 2})).empty());

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  x(1, 0) = 1.0;
  const auto shared = support_index_sets(SparseCodeSet::from_matrix(1, x),
                                         testutil::edges(3, {{1, 2}, {2, 3}}));
  EXPECT_EQ(shared.at(SupportSet({0, 1})), std::vector<int>{0});
  EXPECT_EQ(shared.at(SupportSet({1, 2})), std::vector<int>{0});
}

TEST(SupportIndexSets, BalancedGenerationHasExactCounts) {
  const Hypergraph h = build_cyclic(5, 2);
  const Instance inst = generate_instance(5, 5, 2, h, 11, 3);
  for (const auto& [edge, idx] : support_index_sets(inst.codes, h)) {
    EXPECT_EQ(idx.size(), 11u);
  }
}

TEST(Synthesize, NoiselessIsExact) {
  std::mt19937_64 rng(43);
  const Eigen::MatrixXd a = testutil::gaussian(4, 4, rng);
  const SparseCodeSet codes = vandermonde_codes(4, SupportSet({0, 1}), 5, {0.7, 1.3});
  const Dataset d = synthesize_dataset(a, codes, 0.0, 9);
  EXPECT_EQ(d.signals, a * codes.codes());
  ASSERT_TRUE(d.truth.has_value());
  EXPECT_EQ(d.truth->noise, Eigen::MatrixXd::Zero(4, 5));
}

TEST(Synthesize, NoiseRespectsBoundExactly) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd a = testutil::gaussian(5, 4, rng);
    const SparseCodeSet codes = vandermonde_codes(4, SupportSet({1, 3}), 20, {0.6, 1.4});
    const double eta = std::pow(10.0, -1.0 - t % 15);
    const NoiseModel model = t % 2 ? NoiseModel::sphere : NoiseModel::uniform_ball;
    const Dataset d = synthesize_dataset(a, codes, eta, 100 + t, model);
    const Eigen::MatrixXd clean = a * codes.codes();
    for (int i = 0; i < codes.count(); ++i) {
      const double r = (d.signals.col(i) - clean.col(i)).norm();
      EXPECT_LE(r, eta);
      if (model == NoiseModel::sphere && eta >= 1e-9) EXPECT_GT(r, 0.999 * eta);
    }
  }
}

TEST(Synthesize, DeterministicPerSeed) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const SparseCodeSet codes = vandermonde_codes(3, SupportSet({0, 2}), 4, {0.8, 1.2});
  EXPECT_EQ(synthesize_dataset(a, codes, 0.1, 5).signals,
            synthesize_dataset(a, codes, 0.1, 5).signals);
  EXPECT_NE(synthesize_dataset(a, codes, 0.1, 5).signals,
            synthesize_dataset(a, codes, 0.1, 6).signals);
  EXPECT_THROW(synthesize_dataset(a, codes, -1.0, 5), std::invalid_argument);
}

TEST(Generate, DefaultCounts) {
  EXPECT_EQ(default_per_support_count(4, 2), 7);
  EXPECT_EQ(default_per_support_count(5, 2), 11);
  EXPECT_EQ(default_per_support_count(6, 1), 1);
}

TEST(Generate, InstancePassesEveryCheck) {
  const Hypergraph h = build_cyclic(4, 2);
  const Instance inst = generate_instance(4, 4, 2, h, 7, 12345);
  const auto cert = certify(inst.dictionary, inst.codes, h);
  EXPECT_TRUE(cert.sip_ok && cert.regular_ok && cert.l2h_ok && cert.glp_ok && cert.spark_ok &&
              cert.counts_ok);
  EXPECT_EQ(inst.codes.count(), 28);
}

TEST(Generate, SeedsDifferAndBothPass) {
  const Hypergraph h = build_cyclic(4, 2);
  const Instance a = generate_instance(4, 4, 2, h, 7, 1);
  const Instance b = generate_instance(4, 4, 2, h, 7, 2);
  EXPECT_NE(a.dictionary, b.dictionary);
  EXPECT_TRUE(certify(a.dictionary, a.codes, h).dictionary_certified());
  EXPECT_TRUE(certify(b.dictionary, b.codes, h).dictionary_certified());
  const Instance again = generate_instance(4, 4, 2, h, 7, 1);
  EXPECT_EQ(a.dictionary, again.dictionary);
  EXPECT_EQ(a.codes.codes(), again.codes.codes());
}

TEST(Generate, ManySeedsOtherShapes) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Hypergraph h = seed % 3 == 0   ? build_grid(4)
                         : seed % 3 == 1 ? build_cyclic(5, 2)
                                         : build_complete(4, 2);
    const int m = h.vertex_count();
    const Instance inst = generate_instance(m, m, 2, h, default_per_support_count(m, 2), seed);
    const auto cert = certify(inst.dictionary, inst.codes, h);
    EXPECT_TRUE(cert.dictionary_certified()) << seed;
    EXPECT_TRUE(cert.spark_ok) << seed;
  }
}

TEST(Generate, RejectsBadShapes) {
  const Hypergraph h = build_cyclic(4, 2);
  EXPECT_THROW(generate_instance(4, 3, 2, h, 7, 1), std::invalid_argument);
  EXPECT_THROW(generate_instance(4, 4, 3, h, 7, 1), std::invalid_argument);
  EXPECT_THROW(generate_instance(4, 4, 2, h, 0, 1), std::invalid_argument);
}
