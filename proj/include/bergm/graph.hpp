#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bergm {

/// Vertex index, 0-based. Files use 1-based ids; the loaders convert.
using Vertex = int;

/**
 * Undirected simple graph on a fixed vertex set.
 *
 * Adjacency is kept as one bit row per vertex, with both (i,j) and (j,i)
 * written by the single mutator, so symmetry holds by construction and
 * common-neighbour counts reduce to popcounts. Degrees and an edge list
 * (with O(1) removal) are maintained alongside, which the tie-no-tie
 * sampler needs to draw a uniform existing edge.
 */
class Graph {
 public:
  explicit Graph(int n);

  int n() const noexcept { return n_; }
  long edge_count() const noexcept { return static_cast<long>(edges_.size()); }
  long dyad_count() const noexcept { return static_cast<long>(n_) * (n_ - 1) / 2; }

  bool has_edge(Vertex i, Vertex j) const noexcept {
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }
  int degree(Vertex i) const noexcept { return degree_[i]; }
  std::span<const int> degrees() const noexcept { return degree_; }

  /// Number of vertices adjacent to both i and j.
  int common_neighbors(Vertex i, Vertex j) const noexcept;

  /// Flip dyad {i,j}. Throws DomainError on i == j or out-of-range ids.
  void toggle(Vertex i, Vertex j);
  void set_edge(Vertex i, Vertex j, bool present);

  /// k-th edge in internal order, as (min, max). Order changes under toggle.
  std::pair<Vertex, Vertex> edge_at(long k) const noexcept { return edges_[k]; }

  /// All edges as (i < j), sorted lexicographically.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  bool operator==(const Graph& other) const noexcept {
    return n_ == other.n_ && bits_ == other.bits_;
  }

  static Graph complete(int n);

 private:
  const std::uint64_t* row(Vertex i) const noexcept { return bits_.data() + static_cast<std::size_t>(i) * words_; }
  std::uint64_t* row(Vertex i) noexcept { return bits_.data() + static_cast<std::size_t>(i) * words_; }
  void check_dyad(Vertex i, Vertex j) const;
  void toggle_unchecked(Vertex i, Vertex j);

  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
  std::vector<int> degree_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  // Position of edge {i,j} (i<j) in edges_, indexed i*n+j; -1 when absent.
  std::vector<int> edge_pos_;
};

enum class StatisticKind { Edges, TwoStars, Triangles };

/// Parses `edges`, `twostars`, `triangles`. Unknown names throw DomainError.
StatisticKind parse_statistic(std::string_view name);
std::string_view statistic_name(StatisticKind kind) noexcept;
/// Parses a comma-separated list of statistic names.
std::vector<StatisticKind> parse_statistic_list(std::string_view csv);

using StatVector = std::vector<double>;

/// Fraction of the n(n-1)/2 dyads that are edges. Requires n >= 2.
double density(const Graph& g);

StatVector sufficient_stats(const Graph& g, std::span<const StatisticKind> kinds);
/// Degree of every vertex.
std::vector<double> degree_stats(const Graph& g);

/// s(g with {i,j} present) - s(g with {i,j} absent), by local inspection.
StatVector change_stats(const Graph& g, Vertex i, Vertex j, std::span<const StatisticKind> kinds);
double change_stat(const Graph& g, Vertex i, Vertex j, StatisticKind kind) noexcept;

/// Copy of g with dyad {i,j} flipped.
Graph toggle_edge(Graph g, Vertex i, Vertex j);

/// Edge-list text: `n=<count>` header, then one `i j` pair (1-based) per line.
/// `#` starts a comment; blank lines are ignored; duplicate pairs collapse.
Graph parse_edge_list(std::string_view text);
std::string format_edge_list(const Graph& g);

/// n lines of n comma-separated 0/1 entries; zero diagonal, symmetric.
Graph parse_adjacency_csv(std::string_view text);

/// Loads by extension: `.csv` as adjacency matrix, anything else as an edge list.
Graph load_graph(const std::string& path);

}  // namespace bergm
