#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace sparsecert {

/// Default guardrail for combinatorial enumerations.
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// A strictly increasing set of vertex indices. Internally vertices are
/// 0-based; external formats shift to 1-based.
struct SupportSet {
  std::vector<int> indices;

  SupportSet() = default;
  /// Sorts and deduplicates.
  explicit SupportSet(std::vector<int> idx);

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(int v) const;
  bool is_subset_of(const SupportSet& other) const;

  auto operator<=>(const SupportSet&) const = default;
  bool operator==(const SupportSet&) const = default;
};

SupportSet set_union(const SupportSet& a, const SupportSet& b);
SupportSet set_intersection(const SupportSet& a, const SupportSet& b);

/// Hypergraph on vertices {0, ..., m-1}. Edges are canonicalized at
/// construction: each edge sorted, duplicate edges dropped (first
/// occurrence kept).
class Hypergraph {
 public:
  Hypergraph(int vertex_count, std::vector<SupportSet> edges);

  int vertex_count() const { return m_; }
  const std::vector<SupportSet>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Common edge size when every edge has the same size.
  std::optional<int> uniform_size() const { return k_; }

 private:
  int m_;
  std::vector<SupportSet> edges_;
  std::optional<int> k_;
};

/// The m consecutive length-k intervals of the cyclic order on [m].
Hypergraph build_cyclic(int m, int k);

/// All k-subsets of [m].
Hypergraph build_complete(int m, int k, std::uint64_t cap = kDefaultEnumerationCap);

/// Rows and columns of [m] laid out as a sqrt(m) x sqrt(m) grid (row-major).
Hypergraph build_grid(int m);

/// Edges containing vertex i (0-based).
std::vector<SupportSet> star(const Hypergraph& h, int i);

int degree(const Hypergraph& h, int i);

/// r when every vertex has degree r; empty otherwise. An edgeless
/// hypergraph, or one with isolated vertices, is never regular.
std::optional<int> regularity(const Hypergraph& h);

/// Singleton intersection property: the intersection of each vertex's star
/// is exactly that vertex. Vertices with an empty star fail.
bool has_sip(const Hypergraph& h);

/// { S u S' : S, S' in H }, deduplicated.
Hypergraph pairwise_unions(const Hypergraph& h, std::uint64_t cap = kDefaultEnumerationCap);

/// True when every vertex lies in some edge.
bool covers_vertices(const Hypergraph& h);

}  // namespace sparsecert
