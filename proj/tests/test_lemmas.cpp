#include <gtest/gtest.h>

#include <bit>
#include <set>

#include "sparsecert/combinatorics.hpp"
#include "sparsecert/errors.hpp"
#include "sparsecert/lemmas.hpp"
#include "test_util.hpp"

using namespace sparsecert;
using testutil::coordinate_span;

namespace {

struct BruteLemma4 {
  std::uint64_t admissible = 0;
  int min_injective = 1 << 20;
};

// Plain enumeration of all maps edge -> subset of [m_bar], no pruning.
BruteLemma4 brute_lemma4(const Hypergraph& h, int m_bar, int r) {
  const int e = static_cast<int>(h.edge_count());
  const std::uint32_t per_edge = 1u << m_bar;
  std::uint64_t total = 1;
  for (int i = 0; i < e; ++i) total *= per_edge;
  int needed = 0;
  for (const auto& s : h.edges()) needed += static_cast<int>(s.size());

  std::vector<std::vector<int>> groups;
  for (int size : {r, r + 1}) {
    if (size > e) continue;
    for_each_combination(e, size, [&](const std::vector<int>& g) {
      groups.push_back(g);
      return true;
    });
  }
  BruteLemma4 out;
  std::vector<std::uint32_t> img(e);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    int sum = 0;
    for (int i = 0; i < e; ++i) {
      img[i] = static_cast<std::uint32_t>(c % per_edge);
      c /= per_edge;
      sum += std::popcount(img[i]);
    }
    if (sum < needed) continue;
    bool ok = true;
    for (const auto& g : groups) {
      std::uint32_t meet = ~0u;
      SupportSet common = h.edges()[g[0]];
      for (int idx : g) {
        meet &= img[idx];
        common = set_intersection(common, h.edges()[idx]);
      }
      if (std::popcount(meet) > static_cast<int>(common.size())) ok = false;
    }
    if (!ok) continue;
    ++out.admissible;
    std::set<std::uint32_t> singles;
    for (int v = 0; v < h.vertex_count(); ++v) {
      std::uint32_t meet = ~0u;
      for (const auto& s : star(h, v)) {
        for (int idx = 0; idx < e; ++idx) {
          if (h.edges()[idx] == s) meet &= img[idx];
        }
      }
      if (std::popcount(meet) == 1) singles.insert(meet);
    }
    out.min_injective = std::min(out.min_injective, static_cast<int>(singles.size()));
  }
  return out;
}

}  // namespace

TEST(Lemma3, PointInIntersectionHasZeroLeftSide) {
  const std::vector<Subspace> vs{coordinate_span(3, {0, 1}), coordinate_span(3, {1, 2})};
  const auto [lhs, rhs] = distance_to_intersection_sides(vs, Eigen::VectorXd::Unit(3, 1));
  EXPECT_NEAR(lhs, 0.0, 1e-14);
  EXPECT_NEAR(rhs, 0.0, 1e-14);
}

TEST(Lemma3, IdenticalSubspaces) {
  std::mt19937_64 rng(71);
  const Subspace v = testutil::random_subspace(5, 2, rng);
  const Eigen::VectorXd x = testutil::gaussian(5, 1, rng);
  const auto [lhs, rhs] = distance_to_intersection_sides({v, v}, x);
  EXPECT_NEAR(lhs, v.distance_to(x), 1e-12);
  EXPECT_NEAR(rhs, 2.0 * v.distance_to(x), 1e-12);
}

TEST(Lemma3, KnownAngle) {
  // Two lines at 45 degrees: xi = 1/sqrt(2), intersection {0}.
  const Subspace diag = orthonormal_basis(Eigen::Vector2d(1.0, 1.0).eval());
  const std::vector<Subspace> vs{coordinate_span(2, {0}), diag};
  const Eigen::Vector2d x(0.3, -1.1);
  const auto [lhs, rhs] = distance_to_intersection_sides(vs, x);
  EXPECT_NEAR(lhs, x.norm(), 1e-14);
  const double sum = coordinate_span(2, {0}).distance_to(x) + diag.distance_to(x);
  EXPECT_NEAR(rhs, sum / (1.0 - std::sqrt(0.5)), 1e-12);
  EXPECT_LE(lhs, rhs);
}

TEST(Lemma3, RandomCollectionsHaveNoViolations) {
  const Lemma3Report rep = check_lemma3(200, 6, 4, 72);
  EXPECT_EQ(rep.trials, 200);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_LE(rep.worst_excess, rep.slack);
  EXPECT_GT(rep.max_xi, 0.0);
  EXPECT_LT(rep.max_xi, 1.0);
}

TEST(Lemma4, IdentityCaseIsInjectiveEverywhere) {
  const Lemma4Report rep = check_lemma4(build_cyclic(4, 2), 4);
  EXPECT_EQ(rep.counterexamples, 0u);
  EXPECT_GT(rep.admissible_maps, 0u);
  EXPECT_EQ(rep.required_size, 4);
  EXPECT_EQ(rep.min_injective_size, 4);
}

TEST(Lemma4, OneExtraColumn) {
  const Lemma4Report rep = check_lemma4(build_cyclic(4, 2), 5);
  EXPECT_EQ(rep.counterexamples, 0u);
  EXPECT_EQ(rep.required_size, 3);
  ASSERT_TRUE(rep.min_injective_size.has_value());
  EXPECT_GE(*rep.min_injective_size, 3);
}

TEST(Lemma4, MatchesUnprunedEnumeration) {
  for (int m_bar : {3, 4}) {
    const Hypergraph h = build_cyclic(3, 2);
    const Lemma4Report rep = check_lemma4(h, m_bar);
    const BruteLemma4 want = brute_lemma4(h, m_bar, 2);
    EXPECT_EQ(rep.admissible_maps, want.admissible) << m_bar;
    ASSERT_TRUE(rep.min_injective_size.has_value());
    EXPECT_EQ(*rep.min_injective_size, want.min_injective);
  }
  const Hypergraph h4 = build_cyclic(4, 2);
  const BruteLemma4 want = brute_lemma4(h4, 4, 2);
  EXPECT_EQ(check_lemma4(h4, 4).admissible_maps, want.admissible);
}

TEST(Lemma4, IntersectionConditionFiltersMaps) {
  // Without the cardinality filter every map with enough total size would
  // count; the filter must remove some of them.
  const Hypergraph h = build_cyclic(3, 2);
  std::uint64_t large_enough = 0;
  for (std::uint32_t a = 0; a < 8; ++a) {
    for (std::uint32_t b = 0; b < 8; ++b) {
      for (std::uint32_t c = 0; c < 8; ++c) {
        if (std::popcount(a) + std::popcount(b) + std::popcount(c) >= 6) ++large_enough;
      }
    }
  }
  EXPECT_LT(check_lemma4(h, 3).admissible_maps, large_enough);
}

TEST(Lemma4, GuardsInputs) {
  EXPECT_THROW(check_lemma4(testutil::edges(3, {{1, 2}, {2, 3}}), 3), std::invalid_argument);
  EXPECT_THROW(check_lemma4(build_cyclic(7, 2), 7), CapExceeded);
  EXPECT_THROW(check_lemma4(build_cyclic(4, 2), 7), CapExceeded);
  EXPECT_THROW(check_lemma4(build_cyclic(5, 2), 6, 1000), CapExceeded);
}
