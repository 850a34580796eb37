// Shift a vertex function by d_f(1) so its index is uncorrelated with the edge count, and check
// the result by exhaustive enumeration.

#include <cstdio>

#include "topocov/topocov.hpp"

int main() {
  using namespace topocov;
  const auto params = ModelParams::from_p(6, 0.4);
  for (const char* spec : {"id", "randic", "table:1,4,2,8"}) {
    const auto f = parse_function(spec);
    const auto g = shift(f, dfk_exact(f, params, 1));
    const EnumerationBudget budget(params.n(), params.p());
    std::printf("%-16s cov %10.6f -> %10.3g (oracle %10.3g)  %s\n", spec, covariance_exact(f, params),
                covariance_exact(g, params), oracle_cov(budget, g), g.to_spec().c_str());
  }
}
