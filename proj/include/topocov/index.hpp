#pragma once

#include <cstddef>
#include <vector>

#include "graph.hpp"
#include "vertex_function.hpp"

namespace topocov {

struct IndexValue {
  double value = 0.0;      // T_X
  std::size_t edge_count = 0; // T_1
};

namespace detail {

// f(0..max_degree), evaluated once per distinct degree.
inline std::vector<double> degree_values(const Graph& g, const VertexFunction& f) {
  std::size_t max_degree = 0;
  for (auto d : g.degrees())
    max_degree = std::max<std::size_t>(max_degree, d);
  std::vector<double> table(max_degree + 1);
  for (std::size_t d = 0; d <= max_degree; ++d)
    table[d] = f.eval(d);
  return table;
}

} // namespace detail

// T_X = sum over unordered edges {u,v} of f(deg u) f(deg v).
inline IndexValue topo_index(const Graph& g, const VertexFunction& f) {
  const auto fd = detail::degree_values(g, f);
  const auto deg = g.degrees();
  double sum = 0.0;
  for (const auto& e : g.edges())
    sum += fd[deg[e.u]] * fd[deg[e.v]];
  return {sum, g.edge_count()};
}

// Same index written as half the sum over ordered adjacent pairs (u, v), walking the
// neighbour lists. Kept as an independent route to topo_index.
inline double topo_index_sum_form(const Graph& g, const VertexFunction& f) {
  double sum = 0.0;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    const double xu = f.eval(g.degree(u));
    for (Vertex v : g.neighbors(u))
      sum += xu * f.eval(g.degree(v));
  }
  return 0.5 * sum;
}

} // namespace topocov
