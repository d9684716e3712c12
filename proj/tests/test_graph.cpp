#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"

#include "bergm/error.hpp"
#include "bergm/graph.hpp"
#include "bergm/rng.hpp"
#include "oracles.hpp"

using namespace bergm;

namespace {

const std::vector<StatisticKind> kAll{StatisticKind::Edges, StatisticKind::TwoStars, StatisticKind::Triangles};

Graph random_graph(int n, double p, Rng& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.toggle(i, j);
  return g;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  Graph h(g.n());
  for (auto [i, j] : g.edges()) h.toggle(perm[i], perm[j]);
  return h;
}

std::string karate_path() { return std::string(BERGM_DATA_DIR) + "/karate.edges"; }

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("edge list readback") {
    const Graph g = parse_edge_list("n=3\n1 2\n2 3");
    CHECK(g.n() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));

    const Graph empty = parse_edge_list("n=2\n");
    CHECK(empty.n() == 2);
    CHECK(empty.edge_count() == 0);
  }

  TEST_CASE("edge list: duplicates collapse, comments and blanks skipped") {
    const Graph g = parse_edge_list("# header comment\nn=4\n\n1 2\n2 1\n1 2 # again\n3 4\n");
    CHECK(g.edge_count() == 2);
  }

  TEST_CASE("edge list errors name the line") {
    auto line_of = [](const char* text) -> long {
      try {
        parse_edge_list(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return -1;
    };
    CHECK(line_of("n=3\n1 2\n1 x\n") == 3);
    CHECK(line_of("n=3\n1 4\n") == 2);
    CHECK(line_of("n=3\n0 1\n") == 2);
    CHECK(line_of("n=3\n2 2\n") == 2);
    CHECK(line_of("n=3\n1 2 3\n") == 2);
    CHECK_THROWS_AS(parse_edge_list("1 2\n"), ParseError);
    CHECK_THROWS_WITH(parse_edge_list("n=3\n1 2\n3 3\n"), doctest::Contains("line 3"));
  }

  TEST_CASE("edge list round trip") {
    Rng rng(5);
    const Graph g = random_graph(9, 0.4, rng);
    CHECK(parse_edge_list(format_edge_list(g)) == g);
  }

  TEST_CASE("adjacency csv") {
    const Graph g = parse_adjacency_csv("0,1,0\n1,0,1\n0,1,0\n");
    CHECK(g == parse_edge_list("n=3\n1 2\n2 3\n"));
    CHECK_THROWS_AS(parse_adjacency_csv("0,1\n0,0\n"), DomainError);      // asymmetric
    CHECK_THROWS_AS(parse_adjacency_csv("1,0\n0,0\n"), DomainError);      // diagonal
    CHECK_THROWS_AS(parse_adjacency_csv("0,2\n2,0\n"), DomainError);      // not 0/1
    CHECK_THROWS_AS(parse_adjacency_csv("0,1,0\n1,0\n0,0,0\n"), DomainError);  // ragged
  }

  TEST_CASE("bundled karate network") {
    // Independent count of distinct unordered pairs straight from the file.
    std::ifstream in(karate_path());
    REQUIRE(in);
    std::set<std::pair<int, int>> pairs;
    int n = 0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      if (line.rfind("n=", 0) == 0) {
        n = std::stoi(line.substr(2));
        continue;
      }
      std::istringstream ls(line);
      int a = 0, b = 0;
      ls >> a >> b;
      pairs.emplace(std::min(a, b), std::max(a, b));
    }
    const Graph g = load_graph(karate_path());
    CHECK(n == 34);
    CHECK(g.n() == 34);
    CHECK(g.edge_count() == static_cast<long>(pairs.size()));
    CHECK(g.edge_count() == 78);

    const auto a = oracle::adjacency(g);
    const auto s = sufficient_stats(g, kAll);
    CHECK(s[0] == oracle::edges(a));
    CHECK(s[1] == oracle::two_paths(a));
    CHECK(s[2] == oracle::triangles(a));
    CHECK(s[2] == 45);
  }

  TEST_CASE("density") {
    CHECK(density(Graph(10)) == 0.0);
    CHECK(density(Graph::complete(4)) == 1.0);
    CHECK(density(parse_edge_list("n=4\n1 2\n3 4\n")) == doctest::Approx(2.0 / 6.0));
    CHECK_THROWS_AS(density(Graph(1)), DomainError);
  }

  TEST_CASE("sufficient statistics on small graphs") {
    CHECK(sufficient_stats(Graph::complete(4), kAll) == StatVector{6, 12, 4});
    CHECK(sufficient_stats(Graph(5), kAll) == StatVector{0, 0, 0});
    CHECK(sufficient_stats(Graph::complete(4), std::vector{StatisticKind::Triangles}) == StatVector{4});
  }

  TEST_CASE("degree statistics") {
    CHECK(degree_stats(Graph::complete(4)) == std::vector<double>{3, 3, 3, 3});
    CHECK(degree_stats(Graph(3)) == std::vector<double>{0, 0, 0});
    const Graph star = parse_edge_list("n=5\n1 2\n1 3\n1 4\n1 5\n");
    CHECK(degree_stats(star) == std::vector<double>{4, 1, 1, 1, 1});
  }

  TEST_CASE("change statistics examples") {
    Rng rng(3);
    const Graph g = random_graph(6, 0.5, rng);
    CHECK(change_stats(g, 0, 3, std::vector{StatisticKind::Edges}) == StatVector{1});
    const Graph path = parse_edge_list("n=3\n1 2\n2 3\n");
    CHECK(change_stats(path, 0, 2, std::vector{StatisticKind::Triangles}) == StatVector{1});
    CHECK_THROWS_AS(change_stats(path, 1, 1, kAll), DomainError);
  }

  TEST_CASE("change statistics equal full recount differences") {
    Rng rng(11);
    for (int rep = 0; rep < 100; ++rep) {
      const Graph g = random_graph(7, rng.uniform(), rng);
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
          if (i == j) continue;
          Graph on = g, off = g;
          on.set_edge(i, j, true);
          off.set_edge(i, j, false);
          const auto a_on = oracle::adjacency(on), a_off = oracle::adjacency(off);
          const StatVector expected{oracle::edges(a_on) - oracle::edges(a_off),
                                    oracle::two_paths(a_on) - oracle::two_paths(a_off),
                                    oracle::triangles(a_on) - oracle::triangles(a_off)};
          REQUIRE(change_stats(g, i, j, kAll) == expected);
        }
    }
  }

  TEST_CASE("toggle") {
    Graph g(2);
    const Graph once = toggle_edge(g, 0, 1);
    CHECK(once.edge_count() == 1);
    CHECK(toggle_edge(once, 1, 0) == g);
    CHECK_THROWS_AS(toggle_edge(g, 1, 1), DomainError);
    CHECK_THROWS_AS(g.toggle(0, 2), DomainError);

    Rng rng(8);
    Graph h = random_graph(8, 0.3, rng);
    for (int k = 0; k < 200; ++k) {
      const int i = static_cast<int>(rng.below(8));
      int j = static_cast<int>(rng.below(7));
      if (j >= i) ++j;
      const long before = h.edge_count();
      const Graph t = toggle_edge(h, i, j);
      CHECK(std::abs(t.edge_count() - before) == 1);
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
          if (u != v && !((u == i && v == j) || (u == j && v == i))) REQUIRE(t.has_edge(u, v) == h.has_edge(u, v));
      h = t;
    }
  }

  TEST_CASE("edges() matches has_edge after many toggles") {
    Rng rng(21);
    Graph g(70);  // spans more than one bit word per row
    for (int k = 0; k < 5000; ++k) {
      const int i = static_cast<int>(rng.below(70));
      int j = static_cast<int>(rng.below(69));
      if (j >= i) ++j;
      g.toggle(i, j);
    }
    long count = 0;
    for (int i = 0; i < 70; ++i)
      for (int j = i + 1; j < 70; ++j) count += g.has_edge(i, j);
    CHECK(count == g.edge_count());
    for (auto [i, j] : g.edges()) CHECK(g.has_edge(i, j));
    for (int i = 0; i < 70; ++i) {
      int d = 0;
      for (int j = 0; j < 70; ++j) d += (i != j && g.has_edge(i, j));
      REQUIRE(d == g.degree(i));
      REQUIRE_FALSE(g.has_edge(i, i));
    }
  }

  TEST_CASE("statistics are invariant under relabeling") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
      const Graph g = random_graph(9, 0.4, rng);
      std::vector<int> perm(9);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(sufficient_stats(relabel(g, perm), kAll) == sufficient_stats(g, kAll));
    }
  }

  TEST_CASE("handshake identity and two-star cross-check") {
    Rng rng(9);
    for (int rep = 0; rep < 30; ++rep) {
      const int n = 2 + static_cast<int>(rng.below(7));
      const Graph g = random_graph(n, rng.uniform(), rng);
      const auto t = degree_stats(g);
      const auto s = sufficient_stats(g, kAll);
      CHECK(std::accumulate(t.begin(), t.end(), 0.0) == 2 * s[0]);
      CHECK(s[1] == oracle::two_paths(oracle::adjacency(g)));
    }
  }

  TEST_CASE("statistic names") {
    CHECK(parse_statistic("edges") == StatisticKind::Edges);
    CHECK(parse_statistic("twostars") == StatisticKind::TwoStars);
    CHECK(parse_statistic("triangles") == StatisticKind::Triangles);
    CHECK_THROWS_AS(parse_statistic("gwesp"), DomainError);
    CHECK(parse_statistic_list("edges,triangles") ==
          std::vector{StatisticKind::Edges, StatisticKind::Triangles});
    CHECK_THROWS_AS(parse_statistic_list("edges,edges"), DomainError);
    CHECK_THROWS_AS(parse_statistic_list("edges,,triangles"), DomainError);
  }
}
