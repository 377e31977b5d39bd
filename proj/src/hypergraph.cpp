#include "sparsecert/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "sparsecert/combinatorics.hpp"
#include "sparsecert/errors.hpp"

namespace sparsecert {

SupportSet::SupportSet(std::vector<int> idx) : indices(std::move(idx)) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
}

bool SupportSet::contains(int v) const {
  return std::binary_search(indices.begin(), indices.end(), v);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return std::includes(other.indices.begin(), other.indices.end(), indices.begin(),
                       indices.end());
}

SupportSet set_union(const SupportSet& a, const SupportSet& b) {
  SupportSet out;
  std::set_union(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                 std::back_inserter(out.indices));
  return out;
}

SupportSet set_intersection(const SupportSet& a, const SupportSet& b) {
  SupportSet out;
  std::set_intersection(a.indices.begin(), a.indices.end(), b.indices.begin(),
                        b.indices.end(), std::back_inserter(out.indices));
  return out;
}

Hypergraph::Hypergraph(int vertex_count, std::vector<SupportSet> edges) : m_(vertex_count) {
  if (m_ < 1) throw std::invalid_argument("hypergraph needs at least one vertex");
  std::set<SupportSet> seen;
  for (auto& e : edges) {
    SupportSet canon(std::move(e.indices));
    for (int v : canon.indices) {
      if (v < 0 || v >= m_) {
        throw std::out_of_range("edge vertex " + std::to_string(v + 1) +
                                " outside [1, " + std::to_string(m_) + "]");
      }
    }
    if (seen.insert(canon).second) edges_.push_back(std::move(canon));
  }
  if (!edges_.empty()) {
    const auto k = static_cast<int>(edges_.front().size());
    const bool uniform = std::all_of(edges_.begin(), edges_.end(), [k](const SupportSet& s) {
      return static_cast<int>(s.size()) == k;
    });
    if (uniform) k_ = k;
  }
}

Hypergraph build_cyclic(int m, int k) {
  if (k < 1 || k >= m) {
    throw std::invalid_argument("cyclic hypergraph requires 1 <= k < m");
  }
  std::vector<SupportSet> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::vector<int> e;
    for (int j = 0; j < k; ++j) e.push_back((i + j) % m);
    edges.emplace_back(std::move(e));
  }
  return Hypergraph(m, std::move(edges));
}

Hypergraph build_complete(int m, int k, std::uint64_t cap) {
  if (k < 1 || k > m) {
    throw std::invalid_argument("complete hypergraph requires 1 <= k <= m");
  }
  require_combinations_within(m, k, cap, "build_complete");
  std::vector<SupportSet> edges;
  for_each_combination(m, k, [&](const std::vector<int>& c) {
    edges.emplace_back(c);
    return true;
  });
  return Hypergraph(m, std::move(edges));
}

Hypergraph build_grid(int m) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  if (m < 4 || side * side != m) {
    throw std::invalid_argument("grid hypergraph requires m = k^2 with k >= 2, got " +
                                std::to_string(m));
  }
  std::vector<SupportSet> edges;
  for (int row = 0; row < side; ++row) {
    std::vector<int> e;
    for (int col = 0; col < side; ++col) e.push_back(row * side + col);
    edges.emplace_back(std::move(e));
  }
  for (int col = 0; col < side; ++col) {
    std::vector<int> e;
    for (int row = 0; row < side; ++row) e.push_back(row * side + col);
    edges.emplace_back(std::move(e));
  }
  return Hypergraph(m, std::move(edges));
}

std::vector<SupportSet> star(const Hypergraph& h, int i) {
  if (i < 0 || i >= h.vertex_count()) {
    throw std::out_of_range("vertex " + std::to_string(i + 1) + " outside [1, " +
                            std::to_string(h.vertex_count()) + "]");
  }
  std::vector<SupportSet> out;
  for (const auto& e : h.edges()) {
    if (e.contains(i)) out.push_back(e);
  }
  return out;
}

int degree(const Hypergraph& h, int i) { return static_cast<int>(star(h, i).size()); }

std::optional<int> regularity(const Hypergraph& h) {
  const int r = degree(h, 0);
  if (r == 0) return std::nullopt;
  for (int i = 1; i < h.vertex_count(); ++i) {
    if (degree(h, i) != r) return std::nullopt;
  }
  return r;
}

bool has_sip(const Hypergraph& h) {
  for (int i = 0; i < h.vertex_count(); ++i) {
    const auto s = star(h, i);
    if (s.empty()) return false;
    SupportSet meet = s.front();
    for (std::size_t j = 1; j < s.size(); ++j) meet = set_intersection(meet, s[j]);
    if (meet.indices != std::vector<int>{i}) return false;
  }
  return true;
}

Hypergraph pairwise_unions(const Hypergraph& h, std::uint64_t cap) {
  const std::uint64_t e = h.edge_count();
  if (e * (e + 1) / 2 > cap) {
    throw CapExceeded("pairwise_unions: " + std::to_string(e * (e + 1) / 2) +
                      " unions exceed enumeration cap " + std::to_string(cap));
  }
  std::vector<SupportSet> unions;
  const auto& edges = h.edges();
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a; b < edges.size(); ++b) {
      unions.push_back(set_union(edges[a], edges[b]));
    }
  }
  return Hypergraph(h.vertex_count(), std::move(unions));
}

bool covers_vertices(const Hypergraph& h) {
  std::vector<bool> hit(h.vertex_count(), false);
  for (const auto& e : h.edges()) {
    for (int v : e.indices) hit[v] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace sparsecert
