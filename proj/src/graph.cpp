#include "bergm/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bergm/error.hpp"

namespace bergm {

Graph::Graph(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 1) throw DomainError("graph must have at least one vertex");
  bits_.assign(static_cast<std::size_t>(n) * words_, 0);
  degree_.assign(n, 0);
  edge_pos_.assign(static_cast<std::size_t>(n) * n, -1);
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) g.toggle_unchecked(i, j);
  return g;
}

int Graph::common_neighbors(Vertex i, Vertex j) const noexcept {
  const std::uint64_t* a = row(i);
  const std::uint64_t* b = row(j);
  int count = 0;
  for (int w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
  return count;
}

void Graph::check_dyad(Vertex i, Vertex j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("vertex id out of range");
  if (i == j) throw DomainError("self-loops are not allowed (i == j)");
}

void Graph::toggle(Vertex i, Vertex j) {
  check_dyad(i, j);
  toggle_unchecked(i, j);
}

void Graph::set_edge(Vertex i, Vertex j, bool present) {
  check_dyad(i, j);
  if (has_edge(i, j) != present) toggle_unchecked(i, j);
}

void Graph::toggle_unchecked(Vertex i, Vertex j) {
  if (i > j) std::swap(i, j);
  const std::uint64_t mask_j = std::uint64_t{1} << (j & 63);
  const std::uint64_t mask_i = std::uint64_t{1} << (i & 63);
  row(i)[j >> 6] ^= mask_j;
  row(j)[i >> 6] ^= mask_i;
  const std::size_t key = static_cast<std::size_t>(i) * n_ + j;
  if (edge_pos_[key] < 0) {
    edge_pos_[key] = static_cast<int>(edges_.size());
    edges_.emplace_back(i, j);
    ++degree_[i];
    ++degree_[j];
  } else {
    const int pos = edge_pos_[key];
    const auto last = edges_.back();
    edges_[pos] = last;
    edge_pos_[static_cast<std::size_t>(last.first) * n_ + last.second] = pos;
    edges_.pop_back();
    edge_pos_[key] = -1;
    --degree_[i];
    --degree_[j];
  }
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  auto out = edges_;
  std::sort(out.begin(), out.end());
  return out;
}

StatisticKind parse_statistic(std::string_view name) {
  if (name == "edges") return StatisticKind::Edges;
  if (name == "twostars" || name == "2stars" || name == "kstar2") return StatisticKind::TwoStars;
  if (name == "triangles" || name == "triangle") return StatisticKind::Triangles;
  throw DomainError("unknown statistic '" + std::string(name) +
                    "' (expected edges, twostars, triangles)");
}

std::string_view statistic_name(StatisticKind kind) noexcept {
  switch (kind) {
    case StatisticKind::Edges: return "edges";
    case StatisticKind::TwoStars: return "twostars";
    case StatisticKind::Triangles: return "triangles";
  }
  return "?";
}

std::vector<StatisticKind> parse_statistic_list(std::string_view csv) {
  std::vector<StatisticKind> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string_view::npos) end = csv.size();
    auto token = csv.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty()) {
      if (csv.find_first_not_of(' ') != std::string_view::npos) throw DomainError("empty statistic name in list");
    } else {
      const auto kind = parse_statistic(token);
      if (std::find(out.begin(), out.end(), kind) != out.end())
        throw DomainError("statistic '" + std::string(token) + "' listed twice");
      out.push_back(kind);
    }
    start = end + 1;
  }
  return out;
}

double density(const Graph& g) {
  if (g.n() < 2) throw DomainError("density needs at least two vertices");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.dyad_count());
}

namespace {

double count_two_stars(const Graph& g) {
  double total = 0;
  for (int d : g.degrees()) total += 0.5 * d * (d - 1.0);
  return total;
}

double count_triangles(const Graph& g) {
  // Each triangle is seen once per edge, three times in total.
  double total = 0;
  for (long k = 0; k < g.edge_count(); ++k) {
    const auto [i, j] = g.edge_at(k);
    total += g.common_neighbors(i, j);
  }
  return total / 3.0;
}

}  // namespace

StatVector sufficient_stats(const Graph& g, std::span<const StatisticKind> kinds) {
  StatVector out;
  out.reserve(kinds.size());
  for (auto kind : kinds) {
    switch (kind) {
      case StatisticKind::Edges: out.push_back(static_cast<double>(g.edge_count())); break;
      case StatisticKind::TwoStars: out.push_back(count_two_stars(g)); break;
      case StatisticKind::Triangles: out.push_back(count_triangles(g)); break;
    }
  }
  return out;
}

std::vector<double> degree_stats(const Graph& g) {
  return std::vector<double>(g.degrees().begin(), g.degrees().end());
}

double change_stat(const Graph& g, Vertex i, Vertex j, StatisticKind kind) noexcept {
  switch (kind) {
    case StatisticKind::Edges: return 1.0;
    case StatisticKind::TwoStars: {
      const int present = g.has_edge(i, j) ? 1 : 0;
      return static_cast<double>(g.degree(i) + g.degree(j) - 2 * present);
    }
    case StatisticKind::Triangles: return static_cast<double>(g.common_neighbors(i, j));
  }
  return 0.0;
}

StatVector change_stats(const Graph& g, Vertex i, Vertex j, std::span<const StatisticKind> kinds) {
  if (i == j) throw DomainError("change statistics need i != j");
  if (i < 0 || j < 0 || i >= g.n() || j >= g.n()) throw DomainError("vertex id out of range");
  StatVector out;
  out.reserve(kinds.size());
  for (auto kind : kinds) out.push_back(change_stat(g, i, j, kind));
  return out;
}

Graph toggle_edge(Graph g, Vertex i, Vertex j) {
  g.toggle(i, j);
  return g;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, long& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    fn(++line_no, text.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  long n = -1;
  std::vector<std::pair<long, long>> pairs;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;
    if (line.starts_with("n=") || line.starts_with("n =")) {
      if (n >= 0) throw ParseError(line_no, "duplicate n= header");
      if (!parse_int(line.substr(line.find('=') + 1), n) || n < 1)
        throw ParseError(line_no, "malformed vertex count header");
      return;
    }
    const auto sep = line.find_first_of(" \t,");
    long a = 0, b = 0;
    if (sep == std::string_view::npos || !parse_int(line.substr(0, sep), a) ||
        !parse_int(line.substr(sep + 1), b))
      throw ParseError(line_no, "expected two integer vertex ids");
    if (n < 0) throw ParseError(line_no, "edge before the n=<count> header");
    if (a < 1 || b < 1 || a > n || b > n)
      throw ParseError(line_no, "vertex id out of range 1.." + std::to_string(n));
    if (a == b) throw ParseError(line_no, "self-loop");
    pairs.emplace_back(a, b);
  });
  if (n < 0) throw ParseError(1, "missing n=<count> header");
  Graph g(static_cast<int>(n));
  for (const auto& [a, b] : pairs) g.set_edge(static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1), true);
  return g;
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "n=" << g.n() << '\n';
  for (const auto& [i, j] : g.edges()) os << (i + 1) << ' ' << (j + 1) << '\n';
  return os.str();
}

Graph parse_adjacency_csv(std::string_view text) {
  std::vector<std::vector<int>> rows;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    std::vector<int> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string_view::npos) end = line.size();
      long v = 0;
      if (!parse_int(line.substr(start, end - start), v) || (v != 0 && v != 1))
        throw ParseError(line_no, "adjacency entries must be 0 or 1");
      row.push_back(static_cast<int>(v));
      start = end + 1;
    }
    rows.push_back(std::move(row));
  });
  const std::size_t n = rows.size();
  if (n == 0) throw ParseError(1, "empty adjacency matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ParseError(i + 1, "row has " + std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(n));
    if (rows[i][i] != 0) throw ParseError(i + 1, "nonzero diagonal entry");
  }
  Graph g(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) throw ParseError(j + 1, "adjacency matrix is not symmetric");
      if (rows[i][j]) g.set_edge(static_cast<Vertex>(i), static_cast<Vertex>(j), true);
    }
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open network file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return parse_adjacency_csv(text);
  return parse_edge_list(text);
}

}  // namespace bergm
