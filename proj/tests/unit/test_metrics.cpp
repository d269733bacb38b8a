#include <algorithm>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "htnet/metrics.hpp"
#include "htnet/rng.hpp"

using namespace htnet;

namespace {

UndirectedGraph from_edges(std::size_t n, const std::vector<std::pair<int, int>>& e) {
  UndirectedGraph g(n);
  for (auto [a, b] : e) g.add_edge(a, b);
  return g;
}

UndirectedGraph complete(std::size_t n) {
  UndirectedGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

UndirectedGraph path3() { return from_edges(3, {{0, 1}, {1, 2}}); }

UndirectedGraph k5_minus_edge() {
  UndirectedGraph g(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (!(i == 0 && j == 1)) g.add_edge(i, j);
  return g;
}

/// Betweenness by listing every shortest path explicitly.
std::vector<double> brute_betweenness(const UndirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      std::vector<std::vector<std::size_t>> paths;
      // Iterative deepening over simple paths; the first depth with any
      // s-t path holds exactly the shortest ones.
      for (std::size_t len = 1; len < n && paths.empty(); ++len) {
        std::vector<std::size_t> cur{s};
        std::function<void()> go = [&] {
          if (cur.size() == len + 1) {
            if (cur.back() == t) paths.push_back(cur);
            return;
          }
          for (std::size_t w : g.neighbors(cur.back())) {
            if (std::find(cur.begin(), cur.end(), w) != cur.end()) continue;
            cur.push_back(w);
            go();
            cur.pop_back();
          }
        };
        go();
      }
      for (const auto& p : paths)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) out[p[i]] += 1.0 / paths.size();
    }
  return out;
}

UndirectedGraph random_graph(std::size_t n, double p, Rng& rng) {
  UndirectedGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.add_edge(i, j);
  return g;
}

bool connected(const UndirectedGraph& g) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

TEST_CASE("reported operation structures") {
  auto p = centrality_report(path3());
  CHECK(p.arc_density == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(p.degree_centralization == doctest::Approx(0.3333).epsilon(1e-4));
  CHECK(p.betweenness_centralization == doctest::Approx(1.0).epsilon(1e-4));

  auto k = centrality_report(k5_minus_edge());
  CHECK(std::abs(k.arc_density - 0.9) <= 1e-4);
  CHECK(std::abs(k.degree_centralization - 0.1) <= 1e-4);
  CHECK(std::abs(k.betweenness_centralization - 0.0278) <= 1e-4);

  auto c = centrality_report(complete(3));
  CHECK(c.arc_density == 1.0);
  CHECK(c.degree_centralization == 0.0);
  CHECK(c.betweenness_centralization == 0.0);
}

TEST_CASE("regular graphs have zero degree centralization") {
  CHECK(degree_centralization(complete(6)) == 0.0);
  CHECK(degree_centralization(from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})) == 0.0);
}

TEST_CASE("undefined sizes") {
  CHECK_THROWS_AS(arc_density(UndirectedGraph(1)), MetricError);
  CHECK_THROWS_AS(centrality_report(UndirectedGraph(1)), MetricError);
  CHECK_THROWS_AS(degree_centralization(UndirectedGraph(2)), MetricError);
  CHECK_THROWS_AS(betweenness_centralization(UndirectedGraph(2)), MetricError);
  auto two = centrality_report(from_edges(2, {{0, 1}}));
  CHECK(two.arc_density == 1.0);
  CHECK_FALSE(two.centralization_defined);
}

TEST_CASE("disconnected pairs contribute nothing") {
  UndirectedGraph g = from_edges(5, {{0, 1}, {1, 2}});
  auto b = betweenness(g);
  CHECK(b[1] == 1.0);
  CHECK(b[3] == 0.0);
  CHECK(arc_density(g) == doctest::Approx(0.2));
}

TEST_CASE("betweenness agrees with path enumeration on small graphs") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.index(5);
    UndirectedGraph g = random_graph(n, 0.2 + 0.6 * rng.uniform(), rng);
    auto fast = betweenness(g);
    auto slow = brute_betweenness(g);
    for (std::size_t i = 0; i < n; ++i) CHECK(fast[i] == doctest::Approx(slow[i]));
  }
}

TEST_CASE("the star maximizes both centralizations among connected graphs") {
  for (std::size_t n : {4u, 5u}) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<std::pair<int, int>> star_edges;
    for (std::size_t i = 1; i < n; ++i) star_edges.emplace_back(0, i);
    UndirectedGraph star = from_edges(n, star_edges);
    const double sd = degree_centralization(star), sb = betweenness_centralization(star);
    CHECK(sb == doctest::Approx(1.0));
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      UndirectedGraph g(n);
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (mask >> k & 1) g.add_edge(pairs[k].first, pairs[k].second);
      if (!connected(g)) continue;
      CHECK(degree_centralization(g) <= sd + 1e-12);
      CHECK(betweenness_centralization(g) <= sb + 1e-12);
    }
  }
}

TEST_CASE("metrics are invariant under relabeling") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.index(6);
    UndirectedGraph g = random_graph(n, 0.5, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    UndirectedGraph h(n);
    for (std::size_t v = 0; v < n; ++v)
      for (auto w : g.neighbors(v)) h.add_edge(perm[v], perm[w]);
    auto a = centrality_report(g), b = centrality_report(h);
    CHECK(a.arc_density == doctest::Approx(b.arc_density));
    CHECK(a.degree_centralization == doctest::Approx(b.degree_centralization));
    CHECK(a.betweenness_centralization == doctest::Approx(b.betweenness_centralization));
  }
}
