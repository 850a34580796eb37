#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "vertex_function.hpp"

namespace topocov {

// Truncation control for the Poisson-limit series.
struct SeriesControl {
  static constexpr std::size_t default_max_terms = 10'000;
  // The series stops once its bounded tail is this fraction of tol.
  static constexpr double tol_margin = 1e-3;

  double tol = 1e-12;
  // Unset means the default cap, which is only allowed for linearly bounded f.
  std::optional<std::size_t> max_terms;

  void validate() const {
    if (!(tol > 0.0))
      throw ParameterError("series tolerance must be positive");
    if (max_terms && *max_terms == 0)
      throw ParameterError("series term cap must be at least 1");
  }
};

// E[g(B)] for B ~ Binomial(trials, p).
//
// Weights are taken relative to the mode (weight 1) and extended outward with the exact pmf
// ratio until they underflow, then normalised by their own sum. This needs no factorials, so
// it is overflow-free at any trial count, and a constant g returns that constant exactly.
template <typename G>
double binomial_expectation(std::size_t trials, double p, G&& g) {
  if (trials == 0 || p <= 0.0)
    return g(std::size_t{0});
  if (p >= 1.0)
    return g(trials);

  const double m = static_cast<double>(trials);
  const auto mode = static_cast<std::size_t>(std::min(m, std::floor((m + 1.0) * p)));
  const double odds = p / (1.0 - p);

  std::vector<double> below; // weights at mode-1, mode-2, ...
  for (std::size_t j = mode; j > 0; --j) {
    const double w = (below.empty() ? 1.0 : below.back()) * static_cast<double>(j) /
                     ((m - static_cast<double>(j) + 1.0) * odds);
    if (!(w > 0.0))
      break;
    below.push_back(w);
  }
  std::vector<double> above{1.0}; // weights at mode, mode+1, ...
  for (std::size_t j = mode; j < trials; ++j) {
    const double w = above.back() * (m - static_cast<double>(j)) / static_cast<double>(j + 1) * odds;
    if (!(w > 0.0))
      break;
    above.push_back(w);
  }

  double total = 0.0;
  double acc = 0.0;
  for (std::size_t i = below.size(); i-- > 0;) {
    const double w = below[i];
    total += w;
    acc += w * g(mode - i - 1);
  }
  for (std::size_t i = 0; i < above.size(); ++i) {
    total += above[i];
    acc += above[i] * g(mode + i);
  }
  return acc / total;
}

// d_f(k) = E[f(deg 1) | edges {1,2},...,{1,k+1} present] = E[f(k + Binomial(n-k-1, p))].
inline double dfk_exact(const VertexFunction& f, const ModelParams& params, std::size_t k) {
  const std::size_t n = params.n();
  if (k < 1 || k + 1 > n)
    throw ParameterError("d_f(k) needs 1 <= k <= n-1 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  if (const auto* sh = std::get_if<VertexFunction::Shifted>(&f.kind()))
    return dfk_exact(*sh->base, params, k) - sh->c;
  return binomial_expectation(n - k - 1, params.p(), [&](std::size_t j) { return f.eval(k + j); });
}

// lim_{n->inf} d_f(k) = E[f(k + Poisson(alpha))] = sum_j f(k+j) alpha^j e^-alpha / j!.
//
// For f with |f(d)| <= C d the partial sum stops at the first j with j+1 > 2 alpha whose
// remaining tail, bounded by C (k+j+1) w_{j+1} / (1-q) with q < 1 the geometric ratio of
// (k+i) w_i, is at most tol_margin * tol (1 + |partial sum|). Functions without that bound need an explicit
// ctl.max_terms and stop on the raw term magnitude instead.
inline double dfk_poisson(const VertexFunction& f, double alpha, std::size_t k, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ParameterError("alpha must be a positive finite number");
  if (k < 1)
    throw ParameterError("d_f(k) needs k >= 1");
  const auto growth = f.growth_bound();
  if (!growth && !ctl.max_terms)
    throw SeriesRefusedError("function '" + f.to_spec() +
                             "' is not O(d); the Poisson series needs an explicit term cap");
  if (const auto* sh = std::get_if<VertexFunction::Shifted>(&f.kind()))
    return dfk_poisson(*sh->base, alpha, k, ctl) - sh->c;
  const std::size_t cap = ctl.max_terms.value_or(SeriesControl::default_max_terms);
  const double target = SeriesControl::tol_margin * ctl.tol;
  const double log_alpha = std::log(alpha);
  const double kd = static_cast<double>(k);

  double sum = 0.0;
  double last = 0.0;
  for (std::size_t j = 0; j < cap; ++j) {
    const double jd = static_cast<double>(j);
    const double w = std::exp(jd * log_alpha - alpha - std::lgamma(jd + 1.0));
    last = f.eval(k + j) * w;
    sum += last;
    if (growth) {
      if (jd + 1.0 > 2.0 * alpha) {
        const double w_next = w * alpha / (jd + 1.0);
        const double q = alpha / (jd + 2.0) * (kd + jd + 2.0) / (kd + jd + 1.0);
        const double tail = *growth * (kd + jd + 1.0) * w_next / (1.0 - q);
        if (tail <= target * (1.0 + std::abs(sum)))
          return sum;
      }
    } else if (jd > alpha && std::abs(last) < target * (1.0 + std::abs(sum))) {
      return sum;
    }
  }
  throw SeriesTruncationError("Poisson series for '" + f.to_spec() + "' did not converge within " +
                                  std::to_string(cap) + " terms (last term " + std::to_string(std::abs(last)) + ")",
                              std::abs(last));
}

// Ordered pairs of vertex pairs grouped by overlap: |S_0| (disjoint), |S_1| (one shared vertex),
// |S_2| (identical).
struct PairOverlapCounts {
  std::uint64_t s0 = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
};

inline PairOverlapCounts s_counts(std::size_t n) {
  if (n < 2)
    throw ParameterError("pair counts need n >= 2");
  if (n > 90'000)
    throw ParameterError("pair counts overflow 64 bits for n > 90000");
  const std::uint64_t m = n;
  auto choose2 = [](std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; };
  return {choose2(m) * choose2(m - 2), m * (m - 1) * (m - 2), choose2(m)};
}

namespace detail {

inline void require_pairs(const ModelParams& params) {
  if (params.n() < 2)
    throw ParameterError("index moments need n >= 2");
}

// d_f(2), or NaN when n = 2 (no second neighbour exists; every use carries a factor n-2).
inline double d2_or_nan(const VertexFunction& f, const ModelParams& params) {
  return params.n() >= 3 ? dfk_exact(f, params, 2) : std::numeric_limits<double>::quiet_NaN();
}

} // namespace detail

// E[T_X] = d_f(1)^2 E[|E|].
inline double expected_index(const VertexFunction& f, const ModelParams& params) {
  detail::require_pairs(params);
  const double d1 = dfk_exact(f, params, 1);
  return d1 * d1 * params.expected_edges();
}

// E[T_X T_1] = [d1^2 C(n-2,2) p + 2 d1 d2 (n-2) p + d1^2] E[|E|].
inline double expected_product(const VertexFunction& f, const ModelParams& params) {
  detail::require_pairs(params);
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double d1 = dfk_exact(f, params, 1);
  const double c_n2 = (n - 2.0) * (n - 3.0) / 2.0; // 0 for n = 2, 3
  double bracket = d1 * d1 * c_n2 * p + d1 * d1;
  if (params.n() >= 3)
    bracket += 2.0 * d1 * dfk_exact(f, params, 2) * (n - 2.0) * p;
  return bracket * params.expected_edges();
}

// Cov(T_X, T_1) at finite n: [d1^2 (1 + (3-2n) p) + 2 d1 d2 (n-2) p] E[|E|], evaluated as
// d1^2 + d1 p (2 (n-2)(d2 - d1) - d1) so the O(np) terms do not cancel in floating point.
// Every term carries d1, so d1 = 0 gives exactly 0.
inline double covariance_exact(const VertexFunction& f, const ModelParams& params) {
  detail::require_pairs(params);
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double d1 = dfk_exact(f, params, 1);
  const double spread = params.n() >= 3 ? 2.0 * (n - 2.0) * (dfk_exact(f, params, 2) - d1) : 0.0;
  return (d1 * d1 + d1 * p * (spread - d1)) * params.expected_edges();
}

// Limit of Cov(T_X, T_1) / E[|E|] for p = alpha / n: d1^2 (1 + 2 alpha (d2/d1 - 1)) with the
// Poisson-limit d1, d2, written as d1^2 + 2 alpha d1 (d2 - d1). zero_branch is set (and value
// is 0) when |d1| <= tol.
struct AsymptoticCoeff {
  bool zero_branch = false;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline AsymptoticCoeff covariance_asymptotic_coeff(const VertexFunction& f, double alpha,
                                                   const SeriesControl& ctl = {}) {
  AsymptoticCoeff out;
  out.d1 = dfk_poisson(f, alpha, 1, ctl);
  out.d2 = dfk_poisson(f, alpha, 2, ctl);
  if (std::abs(out.d1) <= ctl.tol) {
    out.zero_branch = true;
    out.value = 0.0;
  } else {
    out.value = out.d1 * out.d1 + 2.0 * alpha * out.d1 * (out.d2 - out.d1);
  }
  return out;
}

struct ZeroCovResult {
  bool zero = false;
  double d1 = 0.0; // witness: Poisson-limit d_f(1)
};

// Finite-tolerance form of: Cov(T_X, T_1) -> 0 iff lim d_f(1) = 0.
inline ZeroCovResult zero_cov_test(const VertexFunction& f, double alpha, const SeriesControl& ctl = {}) {
  const double d1 = dfk_poisson(f, alpha, 1, ctl);
  return {std::abs(d1) <= ctl.tol, d1};
}

// Power-series coefficients whose simultaneous vanishing forces f = 0:
// c_0 = f(1)/2, c_j = f(1+j)(1 + 1/(2j)) - f(j) for 1 <= j <= j_max.
inline std::vector<double> cov0_coefficients(const VertexFunction& f, std::size_t j_max) {
  std::vector<double> c(j_max + 1);
  c[0] = 0.5 * f.eval(1);
  for (std::size_t j = 1; j <= j_max; ++j)
    c[j] = f.eval(1 + j) * (1.0 + 1.0 / (2.0 * static_cast<double>(j))) - f.eval(j);
  return c;
}

struct MomentReport {
  double d1 = 0.0;
  double d2 = 0.0; // NaN at n = 2
  double expected_edges = 0.0;
  double e_tx = 0.0;
  double e_txt1 = 0.0;
  double cov_exact = 0.0;
  // Poisson-limit quantities at alpha = n p; empty when the series was refused or truncated.
  std::optional<AsymptoticCoeff> asymptotic;
  std::string asymptotic_error;
};

inline MomentReport moment_report(const VertexFunction& f, const ModelParams& params, const SeriesControl& ctl = {}) {
  detail::require_pairs(params);
  MomentReport r;
  r.d1 = dfk_exact(f, params, 1);
  r.d2 = detail::d2_or_nan(f, params);
  r.expected_edges = params.expected_edges();
  r.e_tx = expected_index(f, params);
  r.e_txt1 = expected_product(f, params);
  r.cov_exact = covariance_exact(f, params);
  if (params.p() > 0.0) {
    try {
      r.asymptotic = covariance_asymptotic_coeff(f, params.alpha(), ctl);
    } catch (const SeriesRefusedError& e) {
      r.asymptotic_error = e.what();
    } catch (const SeriesTruncationError& e) {
      r.asymptotic_error = e.what();
    }
  } else {
    r.asymptotic_error = "alpha = 0";
  }
  return r;
}

} // namespace topocov
