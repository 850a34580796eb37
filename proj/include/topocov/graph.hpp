#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace topocov {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected labeled graph on vertices 0..n-1. Immutable after construction.
// Edges are stored normalised (u < v) and sorted; degrees and a CSR neighbour table are
// built once so degree() and neighbors() are O(1).
class Graph {
public:
  Graph() = default;

  // Validating constructor. Throws ParameterError on self-loops, duplicates or endpoints >= n.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ == 0)
      throw ParameterError("graph must have at least one vertex");
    for (auto& e : edges_) {
      if (e.u == e.v)
        throw ParameterError("self-loop at vertex " + std::to_string(e.u));
      if (e.u >= n_ || e.v >= n_)
        throw ParameterError("edge endpoint out of range for n=" + std::to_string(n_));
      if (e.u > e.v)
        std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw ParameterError("duplicate edge");
    build_adjacency();
  }

  static Graph empty(std::size_t n) { return Graph(n, {}); }

  static Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        edges.push_back({u, v});
    return from_sorted_unchecked(n, std::move(edges));
  }

  // Caller guarantees edges are normalised, sorted, unique and in range.
  static Graph from_sorted_unchecked(std::size_t n, std::vector<Edge> edges) {
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::size_t degree(Vertex v) const noexcept { return degree_[v]; }
  std::span<const std::uint32_t> degrees() const noexcept { return degree_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree_[v]};
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (u > v)
      std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
  void build_adjacency() {
    degree_.assign(n_, 0);
    for (const auto& e : edges_) {
      ++degree_[e.u];
      ++degree_[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    std::partial_sum(degree_.begin(), degree_.end(), offsets_.begin() + 1);
    neighbors_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      neighbors_[fill[e.u]++] = e.v;
      neighbors_[fill[e.v]++] = e.u;
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

// Law G(n, p). Constructed either from p directly or from alpha with p = alpha / n.
class ModelParams {
public:
  static ModelParams from_p(std::size_t n, double p) { return ModelParams(n, p * static_cast<double>(n), p); }

  static ModelParams from_alpha(std::size_t n, double alpha) {
    if (n == 0)
      throw ParameterError("n must be positive");
    return ModelParams(n, alpha, alpha / static_cast<double>(n));
  }

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  double alpha() const noexcept { return alpha_; }

  double pair_count() const noexcept {
    const auto n = static_cast<double>(n_);
    return n * (n - 1.0) / 2.0;
  }

  double expected_edges() const noexcept { return pair_count() * p_; }

private:
  ModelParams(std::size_t n, double alpha, double p) : n_(n), alpha_(alpha), p_(p) {
    if (n_ == 0)
      throw ParameterError("n must be positive");
    if (!(p_ >= 0.0 && p_ <= 1.0))
      throw ParameterError("edge probability must lie in [0, 1], got " + std::to_string(p_));
  }

  std::size_t n_;
  double alpha_;
  double p_;
};

// Draws G(n, p). Row u uses its own counter-based stream seeded by (seed, u) and places the
// edges {u, v}, v > u, by geometric skipping, so the result is a pure function of (params, seed)
// and costs O(n + |E|).
inline Graph sample_gnp(const ModelParams& params, std::uint64_t seed) {
  const std::size_t n = params.n();
  const double p = params.p();
  std::vector<Edge> edges;
  if (p <= 0.0 || n < 2)
    return Graph::from_sorted_unchecked(n, std::move(edges));
  if (p >= 1.0)
    return Graph::complete(n);

  edges.reserve(static_cast<std::size_t>(params.expected_edges() * 1.2) + 16);
  const double log_q = std::log1p(-p);
  const double limit = static_cast<double>(n);
  for (std::size_t u = 0; u + 1 < n; ++u) {
    SplitMix64 row(derive_seed(seed, u));
    double v = static_cast<double>(u);
    for (;;) {
      v += 1.0 + std::floor(std::log1p(-row.uniform()) / log_q);
      if (v >= limit)
        break;
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
  }
  return Graph::from_sorted_unchecked(n, std::move(edges));
}

inline std::vector<std::size_t> degrees(const Graph& g) {
  const auto d = g.degrees();
  return {d.begin(), d.end()};
}

// π(g): vertex v becomes perm[v].
inline Graph relabel(const Graph& g, std::span<const Vertex> perm) {
  if (perm.size() != g.vertex_count())
    throw ParameterError("permutation size does not match vertex count");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges())
    edges.push_back({perm[e.u], perm[e.v]});
  return Graph(g.vertex_count(), std::move(edges));
}

// Edge-list text format:
//   n=<int>
//   <u> <v>        (0-indexed, one undirected edge per line)
// Lines whose first non-blank character is '#' and blank lines are ignored.
inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;

    std::istringstream fields(line.substr(first));
    if (!have_header) {
      std::string tok;
      fields >> tok;
      std::string rest;
      if (tok.rfind("n=", 0) != 0 || (fields >> rest))
        throw ParseError(lineno, "expected header 'n=<int>'");
      const auto digits = tok.substr(2);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(lineno, "vertex count is not a nonnegative integer");
      n = std::stoull(digits);
      if (n == 0)
        throw ParseError(lineno, "vertex count must be positive");
      have_header = true;
      continue;
    }

    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError(lineno, "expected '<u> <v>'");
    auto parse_vertex = [&](const std::string& s) -> std::size_t {
      if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 10)
        throw ParseError(lineno, "vertex '" + s + "' is not a nonnegative integer");
      const auto x = std::stoull(s);
      if (x >= n)
        throw ParseError(lineno, "vertex " + s + " out of range for n=" + std::to_string(n));
      return x;
    };
    const auto u = parse_vertex(a);
    const auto v = parse_vertex(b);
    if (u == v)
      throw ParseError(lineno, "self-loop at vertex " + a);
    edges.push_back({static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v))});
    edge_line.push_back(lineno);
  }
  if (!have_header)
    throw ParseError(lineno, "missing header 'n=<int>'");

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return edges[i] < edges[j]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]])
      throw ParseError(edge_line[order[i]], "duplicate edge " + std::to_string(edges[order[i]].u) + " " +
                                                std::to_string(edges[order[i]].v));
  return Graph(n, std::move(edges));
}

inline Graph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

inline std::string write_edge_list(const Graph& g) {
  std::string out = "n=" + std::to_string(g.vertex_count()) + "\n";
  for (const auto& e : g.edges())
    out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

} // namespace topocov
