#include "sparsecert/lemmas.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "sparsecert/combinatorics.hpp"
#include "sparsecert/errors.hpp"

namespace sparsecert {

std::pair<double, double> distance_to_intersection_sides(const std::vector<Subspace>& collection,
                                                         const Eigen::VectorXd& x,
                                                         double rank_tol) {
  const Subspace meet = intersect(collection, rank_tol);
  double spread = 0.0;
  for (const auto& v : collection) spread += v.distance_to(x);
  return {meet.distance_to(x), spread / (1.0 - xi(collection, rank_tol))};
}

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Lemma3Report check_lemma3(int trials, int ambient_dim, int max_subspaces, std::uint64_t seed,
                          double slack) {
  if (ambient_dim < 2) throw std::invalid_argument("lemma 3 check: ambient_dim must be >= 2");
  if (max_subspaces < 2) throw std::invalid_argument("lemma 3 check: need >= 2 subspaces");
  if (static_cast<std::size_t>(max_subspaces) > kDefaultOrderingCap) {
    throw CapExceeded("lemma 3 check: subspace count exceeds ordering cap");
  }
  Lemma3Report report;
  report.slack = slack;
  std::mt19937_64 rng(seed);
  const int n = ambient_dim;
  for (int t = 0; t < trials; ++t) {
    const int count = uniform_int(rng, 2, max_subspaces);
    const int common = uniform_int(rng, 0, n / 2);
    const Eigen::MatrixXd shared = gaussian(n, common, rng);
    std::vector<Subspace> collection;
    for (int i = 0; i < count; ++i) {
      if (i > 0 && uniform_int(rng, 0, 9) == 0) {
        collection.push_back(collection[uniform_int(rng, 0, i - 1)]);  // repeated member
        continue;
      }
      const int extra = uniform_int(rng, 0, n - common - 1);
      Eigen::MatrixXd gen(n, common + extra);
      gen << shared, gaussian(n, extra, rng);
      collection.push_back(gen.cols() == 0 ? Subspace::zero(n) : orthonormal_basis(gen));
    }
    const Subspace meet = intersect(collection);
    const double spread_xi = xi(collection);
    report.max_xi = std::max(report.max_xi, spread_xi);

    std::vector<Eigen::VectorXd> points;
    points.push_back(gaussian(n, 1, rng).col(0));
    points.push_back(meet.project(gaussian(n, 1, rng).col(0)));
    const Subspace& near = collection[uniform_int(rng, 0, count - 1)];
    points.push_back(near.project(gaussian(n, 1, rng).col(0)) + 1e-3 * gaussian(n, 1, rng).col(0));
    for (const auto& x : points) {
      double spread = 0.0;
      for (const auto& v : collection) spread += v.distance_to(x);
      const double lhs = meet.distance_to(x);
      const double rhs = spread / (1.0 - spread_xi);
      report.worst_excess = std::max(report.worst_excess, lhs - rhs);
      if (lhs > rhs + slack) ++report.violations;
    }
    ++report.trials;
  }
  return report;
}

namespace {

using Mask = std::uint32_t;

class Lemma4Search {
 public:
  Lemma4Search(const Hypergraph& h, int m_bar, int r, std::uint64_t node_cap)
      : h_(h), m_bar_(m_bar), r_(r), node_cap_(node_cap), images_(h.edge_count(), 0) {
    const std::size_t e = h.edge_count();
    for (const auto& s : h.edges()) needed_ += static_cast<int>(s.size());
    checks_.resize(e);
    for (int size : {r, r + 1}) {
      if (static_cast<std::size_t>(size) > e || size < 1) continue;
      for_each_combination(e, size, [&](const std::vector<int>& g) {
        SupportSet meet = h.edges()[g[0]];
        for (std::size_t t = 1; t < g.size(); ++t) meet = set_intersection(meet, h.edges()[g[t]]);
        checks_[g.back()].push_back({g, static_cast<int>(meet.size())});
        return true;
      });
    }
    for (int i = 0; i < h.vertex_count(); ++i) {
      std::vector<int> members;
      for (std::size_t s = 0; s < e; ++s) {
        if (h.edges()[s].contains(i)) members.push_back(static_cast<int>(s));
      }
      stars_.push_back(std::move(members));
    }
    if (static_cast<long>(r - 1) * m_bar < static_cast<long>(h.vertex_count()) * r) {
      required_ = m_bar - r * (m_bar - h.vertex_count());
    }
  }

  Lemma4Report run() {
    descend(0, 0);
    Lemma4Report rep;
    rep.m = h_.vertex_count();
    rep.m_bar = m_bar_;
    rep.r = r_;
    rep.admissible_maps = admissible_;
    rep.counterexamples = counterexamples_;
    rep.required_size = required_;
    rep.min_injective_size = min_injective_;
    rep.maps_at_required_size = at_required_;
    return rep;
  }

 private:
  struct Check {
    std::vector<int> group;
    int bound;
  };

  void descend(std::size_t edge, int total) {
    if (++nodes_ > node_cap_) throw CapExceeded("lemma 4 check: search node cap exceeded");
    const std::size_t e = h_.edge_count();
    if (edge == e) {
      if (total >= needed_) evaluate();
      return;
    }
    if (total + static_cast<int>(e - edge) * m_bar_ < needed_) return;
    const Mask limit = Mask{1} << m_bar_;
    for (Mask image = 0; image < limit; ++image) {
      images_[edge] = image;
      if (!consistent(edge)) continue;
      descend(edge + 1, total + std::popcount(image));
    }
  }

  bool consistent(std::size_t edge) const {
    for (const auto& c : checks_[edge]) {
      Mask meet = ~Mask{0};
      for (int g : c.group) meet &= images_[g];
      if (std::popcount(meet) > c.bound) return false;
    }
    return true;
  }

  void evaluate() {
    ++admissible_;
    if (m_bar_ < h_.vertex_count()) {
      ++counterexamples_;
      return;
    }
    if (!required_) return;
    std::set<Mask> singletons;
    for (const auto& members : stars_) {
      Mask meet = ~Mask{0};
      for (int s : members) meet &= images_[s];
      if (members.empty()) meet = 0;
      if (std::popcount(meet) == 1) singletons.insert(meet);
    }
    const int injective = static_cast<int>(singletons.size());
    min_injective_ = min_injective_ ? std::min(*min_injective_, injective) : injective;
    if (injective < *required_) ++counterexamples_;
    if (injective == *required_) ++at_required_;
  }

  const Hypergraph& h_;
  int m_bar_;
  int r_;
  std::uint64_t node_cap_;
  std::vector<Mask> images_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::vector<int>> stars_;
  int needed_ = 0;
  std::optional<int> required_;
  std::uint64_t nodes_ = 0;
  std::uint64_t admissible_ = 0;
  std::uint64_t counterexamples_ = 0;
  std::uint64_t at_required_ = 0;
  std::optional<int> min_injective_;
};

}  // namespace

Lemma4Report check_lemma4(const Hypergraph& h, int m_bar, std::uint64_t node_cap) {
  const auto r = regularity(h);
  if (!r || !has_sip(h)) {
    throw std::invalid_argument("lemma 4 check: hypergraph must be regular with the SIP");
  }
  if (h.vertex_count() > 6 || m_bar < 1 || m_bar > h.vertex_count() + 2) {
    throw CapExceeded("lemma 4 check: sizes above desk scale (m <= 6, m_bar <= m + 2)");
  }
  return Lemma4Search(h, m_bar, *r, node_cap).run();
}

}  // namespace sparsecert
