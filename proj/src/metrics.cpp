#include "htnet/metrics.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace htnet {

namespace {

void require_size(const UndirectedGraph& g, std::size_t min_n, const char* metric) {
  if (g.size() < min_n)
    throw MetricError(std::string(metric) + " needs at least " + std::to_string(min_n) + " nodes");
}

}  // namespace

double arc_density(const UndirectedGraph& g) {
  require_size(g, 2, "arc density");
  const double n = static_cast<double>(g.size());
  return static_cast<double>(g.edge_count()) / (n * (n - 1.0) / 2.0);
}

double degree_centralization(const UndirectedGraph& g) {
  require_size(g, 3, "degree centralization");
  std::size_t dmax = 0;
  for (std::size_t v = 0; v < g.size(); ++v) dmax = std::max(dmax, g.degree(v));
  double sum = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) sum += static_cast<double>(dmax - g.degree(v));
  const double n = static_cast<double>(g.size());
  return sum / (n * (n - 1.0));
}

std::vector<double> betweenness(const UndirectedGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order;
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  // Every unordered pair was counted from both ends.
  for (auto& c : cb) c /= 2.0;
  return cb;
}

double betweenness_centralization(const UndirectedGraph& g) {
  require_size(g, 3, "betweenness centralization");
  const double n = static_cast<double>(g.size());
  const double pairs = (n - 1.0) * (n - 2.0) / 2.0;
  auto raw = betweenness(g);
  double bmax = 0.0;
  for (auto& b : raw) {
    b /= pairs;
    bmax = std::max(bmax, b);
  }
  double sum = 0.0;
  for (auto b : raw) sum += bmax - b;
  return sum / (n - 1.0);
}

CentralityReport centrality_report(const UndirectedGraph& g) {
  CentralityReport r;
  r.n = g.size();
  r.arc_density = arc_density(g);
  if (g.size() >= 3) {
    r.centralization_defined = true;
    r.degree_centralization = degree_centralization(g);
    r.betweenness_centralization = betweenness_centralization(g);
  }
  return r;
}

}  // namespace htnet
