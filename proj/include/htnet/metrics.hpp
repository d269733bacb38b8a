#pragma once

#include <stdexcept>

#include "htnet/core.hpp"

namespace htnet {

/// Raised when a metric is undefined for the graph size.
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CentralityReport {
  std::size_t n = 0;
  double arc_density = 0.0;
  double degree_centralization = 0.0;
  double betweenness_centralization = 0.0;
  /// False when n < 3 and the centralization fields are meaningless.
  bool centralization_defined = false;
};

/// m / C(n,2). Requires n >= 2.
double arc_density(const UndirectedGraph& g);

/// Sum over vertices of (d_max - d_i), divided by n(n-1). Requires n >= 3.
double degree_centralization(const UndirectedGraph& g);

/// Raw shortest-path betweenness (Brandes), unnormalized: each unordered pair
/// contributes once; unreachable pairs contribute nothing.
std::vector<double> betweenness(const UndirectedGraph& g);

/// With B_i = betweenness / ((n-1)(n-2)/2): sum of (B_max - B_i) over n-1.
/// Requires n >= 3.
double betweenness_centralization(const UndirectedGraph& g);

/// All three metrics; centralizations are flagged undefined for n < 3.
/// Throws MetricError when n < 2.
CentralityReport centrality_report(const UndirectedGraph& g);

}  // namespace htnet
