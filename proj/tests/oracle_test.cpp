#include <gtest/gtest.h>

#include "test_support.hpp"
#include "topocov/moments.hpp"
#include "topocov/oracle.hpp"

using namespace topocov;
using test::rel_err;

namespace {

const auto id = VertexFunction::identity();
const auto one = VertexFunction::constant(1.0);

double tx(const Graph& g, const VertexFunction& f) { return topo_index(g, f).value; }

} // namespace

TEST(EnumerationBudget, Limits) {
  EXPECT_THROW(EnumerationBudget(8, 0.5), BudgetError);
  EXPECT_THROW(EnumerationBudget(0, 0.5), ParameterError);
  EXPECT_THROW(EnumerationBudget(4, 1.5), ParameterError);
  EXPECT_EQ(EnumerationBudget(7, 0.5).graph_count(), 1u << 21);
}

TEST(OracleExpectation, Examples) {
  const EnumerationBudget b(4, 0.5);
  EXPECT_NEAR(oracle_expectation(b, [](const Graph& g) { return double(g.edge_count()); }), 3.0, 1e-14);
  EXPECT_NEAR(oracle_expectation(b, [&](const Graph& g) { return tx(g, id); }), 12.0, 1e-12);
  EXPECT_NEAR(oracle_total_weight(b), 1.0, 1e-14);
}

TEST(OracleExpectation, WeightsNormalised) {
  for (std::size_t n = 1; n <= 7; ++n)
    for (double p : {0.0, 0.1, 0.5, 0.93, 1.0})
      EXPECT_NEAR(oracle_total_weight(EnumerationBudget(n, p)), 1.0, 1e-12) << n << " " << p;
}

TEST(OracleExpectation, WorkerCountDoesNotChangeResult) {
  const EnumerationBudget b(6, 0.35);
  const auto f = VertexFunction::randic();
  const double serial = oracle_expectation(b, [&](const Graph& g) { return tx(g, f); }, 1);
  for (std::size_t w : {2, 3, 8})
    EXPECT_EQ(oracle_expectation(b, [&](const Graph& g) { return tx(g, f); }, w), serial);
  EXPECT_EQ(oracle_cov(b, f, 4), oracle_cov(b, f, 1));
}

TEST(OracleCov, Examples) {
  EXPECT_NEAR(oracle_cov(EnumerationBudget(4, 0.5), one), 1.5, 1e-12);
  EXPECT_NEAR(oracle_cov(EnumerationBudget(3, 0.5), id), 2.8125, 1e-12);
  const double d1 = dfk_exact(id, ModelParams::from_p(3, 0.5), 1);
  EXPECT_NEAR(oracle_cov(EnumerationBudget(3, 0.5), shift(id, d1)), 0.0, 1e-12);
}

TEST(OracleDfk, Examples) {
  for (std::size_t k = 1; k <= 4; ++k)
    EXPECT_NEAR(oracle_dfk(EnumerationBudget(5, 0.5), one, k), 1.0, 1e-14);
  // k + (n-k-1) p
  EXPECT_NEAR(oracle_dfk(EnumerationBudget(5, 0.5), id, 1), 2.5, 1e-12);
  EXPECT_NEAR(oracle_dfk(EnumerationBudget(5, 0.5), id, 2), 3.0, 1e-12);
  EXPECT_THROW(oracle_dfk(EnumerationBudget(5, 0.5), id, 5), ParameterError);
  EXPECT_THROW(oracle_dfk(EnumerationBudget(5, 0.0), id, 1), ParameterError);
}

// Every closed form against enumeration, for each builtin f, n in 2..6, p in {0.2, 0.5, 0.8}.
TEST(OracleEquivalence, ClosedFormsMatchEnumeration) {
  for (const auto& spec : test::builtin_specs()) {
    const auto f = parse_function(spec);
    for (std::size_t n = 2; n <= 6; ++n)
      for (double p : {0.2, 0.5, 0.8}) {
        const EnumerationBudget b(n, p);
        const auto params = ModelParams::from_p(n, p);
        const double e_tx = oracle_expectation(b, [&](const Graph& g) { return tx(g, f); });
        const double e_prod = oracle_expectation(b, [&](const Graph& g) { return tx(g, f) * g.edge_count(); });
        EXPECT_LT(rel_err(e_tx, expected_index(f, params)), 1e-9) << spec << " n=" << n << " p=" << p;
        EXPECT_LT(rel_err(e_prod, expected_product(f, params)), 1e-9) << spec << " n=" << n << " p=" << p;
        EXPECT_LT(rel_err(oracle_cov(b, f), covariance_exact(f, params)), 1e-9) << spec << " n=" << n << " p=" << p;
        for (std::size_t k = 1; k < n; ++k)
          EXPECT_LT(rel_err(oracle_dfk(b, f, k), dfk_exact(f, params, k)), 1e-9) << spec << " n=" << n << " k=" << k;
      }
  }
}

TEST(IndependenceCheck, ConditionedFactorises) {
  EXPECT_LT(independence_check(EnumerationBudget(4, 0.5)), 1e-12);
  EXPECT_LT(independence_check(EnumerationBudget(5, 0.3)), 1e-12);
  for (std::size_t n = 2; n <= 6; ++n)
    for (double p : {0.2, 0.5, 0.8})
      EXPECT_LT(independence_check(EnumerationBudget(n, p)), 1e-12) << n << " " << p;
}

TEST(IndependenceCheck, UnconditionedControlDoesNot) {
  EXPECT_GT(independence_check(EnumerationBudget(4, 0.5), Conditioning::none), 1e-3);
  EXPECT_GT(independence_check(EnumerationBudget(5, 0.3), Conditioning::none), 1e-3);
}

TEST(IndependenceCheck, Limits) {
  EXPECT_THROW(independence_check(EnumerationBudget(7, 0.5)), BudgetError);
  EXPECT_THROW(independence_check(EnumerationBudget(1, 0.5)), ParameterError);
  EXPECT_THROW(independence_check(EnumerationBudget(4, 0.0)), ParameterError);
}
