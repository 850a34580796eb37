// Closed-form Cov(T_X, T_1) for the Randić index against a Monte Carlo estimate, for growing n
// at fixed alpha.

#include <cstdio>

#include "topocov/topocov.hpp"

int main() {
  using namespace topocov;
  const auto f = VertexFunction::randic();
  const double alpha = 2.0;
  const auto limit = covariance_asymptotic_coeff(f, alpha);
  std::printf("limit bracket (alpha=%g): %.6f\n", alpha, limit.value);
  std::printf("%8s %14s %14s %14s\n", "n", "exact/E|E|", "mc/E|E|", "stderr");
  for (std::size_t n : {50, 100, 200, 400}) {
    const auto params = ModelParams::from_alpha(n, alpha);
    const double edges = params.expected_edges();
    const auto mc = run(MCConfig{params, f, 20'000, 7, 1});
    std::printf("%8zu %14.6f %14.6f %14.6f\n", n, covariance_exact(f, params) / edges, mc.cov_tx_t1 / edges,
                mc.stderr_cov / edges);
  }
}
