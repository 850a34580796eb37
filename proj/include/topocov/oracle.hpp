#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "index.hpp"
#include "parallel.hpp"
#include "vertex_function.hpp"

namespace topocov {

// Exhaustive enumeration of all 2^C(n,2) labeled graphs on n <= 7 vertices under G(n, p).
// p is free in [0, 1] here; it is not tied to alpha / n.
struct EnumerationBudget {
  static constexpr std::size_t max_vertices = 7;

  std::size_t n;
  double p;

  EnumerationBudget(std::size_t n_, double p_) : n(n_), p(p_) {
    if (n == 0)
      throw ParameterError("enumeration needs n >= 1");
    if (n > max_vertices)
      throw BudgetError("exhaustive enumeration is limited to n <= 7 (2^21 graphs), got n=" + std::to_string(n));
    if (!(p >= 0.0 && p <= 1.0))
      throw ParameterError("edge probability must lie in [0, 1]");
  }

  std::size_t pair_count() const noexcept { return n * (n - 1) / 2; }
  std::uint64_t graph_count() const noexcept { return std::uint64_t{1} << pair_count(); }
};

// Bit i of a mask is the i-th pair in lexicographic order (0,1), (0,2), ..., (n-2,n-1).
inline std::vector<Edge> pair_order(std::size_t n) {
  std::vector<Edge> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      pairs.push_back({u, v});
  return pairs;
}

inline Graph graph_from_mask(std::size_t n, std::span<const Edge> pairs, std::uint64_t mask) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (mask >> i & 1U)
      edges.push_back(pairs[i]);
  return Graph::from_sorted_unchecked(n, std::move(edges));
}

// Sums fn(graph, weight, acc) over every graph whose mask contains `required`, with
// acc a slot of `width` accumulators. Masks are split into a fixed number of contiguous chunks
// summed in mask order and merged in chunk order, so the result does not depend on `workers`.
template <typename Fn>
std::vector<double> enumerate_weighted(const EnumerationBudget& budget, std::size_t width, Fn&& fn,
                                       std::uint64_t required = 0, std::size_t workers = 1) {
  const auto pairs = pair_order(budget.n);
  const std::size_t m = pairs.size();
  std::vector<double> weight_by_edges(m + 1);
  for (std::size_t e = 0; e <= m; ++e)
    weight_by_edges[e] = std::pow(budget.p, static_cast<double>(e)) * std::pow(1.0 - budget.p, static_cast<double>(m - e));

  const std::uint64_t total = budget.graph_count();
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(64, total));
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(width, 0.0));
  for_each_chunk(total, chunks, workers, [&](Chunk c) {
    auto& acc = partial[c.index];
    for (std::uint64_t mask = c.begin; mask < c.end; ++mask) {
      if ((mask & required) != required)
        continue;
      const double w = weight_by_edges[static_cast<std::size_t>(std::popcount(mask))];
      fn(graph_from_mask(budget.n, pairs, mask), w, std::span<double>(acc));
    }
  });

  std::vector<double> sum(width, 0.0);
  for (const auto& acc : partial)
    for (std::size_t i = 0; i < width; ++i)
      sum[i] += acc[i];
  return sum;
}

// E[statistic(G)] for G ~ G(n, p), exact up to rounding.
template <typename Stat>
double oracle_expectation(const EnumerationBudget& budget, Stat&& statistic, std::size_t workers = 1) {
  return enumerate_weighted(
      budget, 1, [&](const Graph& g, double w, std::span<double> acc) { acc[0] += w * statistic(g); }, 0,
      workers)[0];
}

inline double oracle_total_weight(const EnumerationBudget& budget) {
  return oracle_expectation(budget, [](const Graph&) { return 1.0; });
}

// Cov(T_X, T_1) by enumeration.
inline double oracle_cov(const EnumerationBudget& budget, const VertexFunction& f, std::size_t workers = 1) {
  const auto s = enumerate_weighted(
      budget, 3,
      [&](const Graph& g, double w, std::span<double> acc) {
        const auto t = topo_index(g, f);
        const auto t1 = static_cast<double>(t.edge_count);
        acc[0] += w * t.value * t1;
        acc[1] += w * t.value;
        acc[2] += w * t1;
      },
      0, workers);
  return s[0] - s[1] * s[2];
}

// E[f(deg 0) | edges {0,1}, ..., {0,k} present], by filtering to graphs that contain them.
inline double oracle_dfk(const EnumerationBudget& budget, const VertexFunction& f, std::size_t k) {
  if (k < 1 || k + 1 > budget.n)
    throw ParameterError("d_f(k) needs 1 <= k <= n-1");
  if (!(budget.p > 0.0))
    throw ParameterError("conditioning on present edges needs p > 0");
  // Pairs (0,1), ..., (0,k) are the first k bits.
  const std::uint64_t required = (std::uint64_t{1} << k) - 1;
  const auto s = enumerate_weighted(
      budget, 2,
      [&](const Graph& g, double w, std::span<double> acc) {
        acc[0] += w;
        acc[1] += w * f.eval(g.degree(0));
      },
      required);
  return s[1] / s[0];
}

enum class Conditioning { on_edge, none };

// Max |P(deg 0 = a, deg 1 = b) - P(deg 0 = a) P(deg 1 = b)| over the law of G(n, p), either
// conditioned on the edge {0,1} being present or unconditioned (control).
inline double independence_check(const EnumerationBudget& budget, Conditioning mode = Conditioning::on_edge) {
  if (budget.n > 6)
    throw BudgetError("independence check is limited to n <= 6");
  if (budget.n < 2)
    throw ParameterError("independence check needs n >= 2");
  if (mode == Conditioning::on_edge && !(budget.p > 0.0))
    throw ParameterError("conditioning on an edge needs p > 0");
  const std::size_t side = budget.n; // degrees 0..n-1
  const std::uint64_t required = mode == Conditioning::on_edge ? 1 : 0;
  auto joint = enumerate_weighted(
      budget, side * side,
      [&](const Graph& g, double w, std::span<double> acc) { acc[g.degree(0) * side + g.degree(1)] += w; },
      required);

  double mass = 0.0;
  for (double x : joint)
    mass += x;
  std::vector<double> m0(side, 0.0), m1(side, 0.0);
  for (std::size_t a = 0; a < side; ++a)
    for (std::size_t b = 0; b < side; ++b) {
      joint[a * side + b] /= mass;
      m0[a] += joint[a * side + b];
      m1[b] += joint[a * side + b];
    }
  double dev = 0.0;
  for (std::size_t a = 0; a < side; ++a)
    for (std::size_t b = 0; b < side; ++b)
      dev = std::max(dev, std::abs(joint[a * side + b] - m0[a] * m1[b]));
  return dev;
}

} // namespace topocov
