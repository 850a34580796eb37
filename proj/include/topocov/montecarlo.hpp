#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "index.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "vertex_function.hpp"

namespace topocov {

// One-pass co-moments of (x, y) with Welford updates and pairwise merging. Observations are
// taken relative to the first one seen, so a large common offset does not cost precision.
struct CoMoments {
  std::size_t count = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double shifted_mean_x = 0.0; // mean of x - origin_x
  double shifted_mean_y = 0.0;
  double m2_x = 0.0;
  double m2_y = 0.0;
  double c_xy = 0.0;

  void add(double x, double y) {
    if (count == 0) {
      origin_x = x;
      origin_y = y;
    }
    ++count;
    const double n = static_cast<double>(count);
    const double dx = (x - origin_x) - shifted_mean_x;
    shifted_mean_x += dx / n;
    const double dy = (y - origin_y) - shifted_mean_y;
    shifted_mean_y += dy / n;
    m2_x += dx * ((x - origin_x) - shifted_mean_x);
    m2_y += dy * ((y - origin_y) - shifted_mean_y);
    c_xy += dx * ((y - origin_y) - shifted_mean_y);
  }

  void merge(const CoMoments& o) {
    if (o.count == 0)
      return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double n = na + nb;
    const double dx = (o.origin_x - origin_x) + (o.shifted_mean_x - shifted_mean_x);
    const double dy = (o.origin_y - origin_y) + (o.shifted_mean_y - shifted_mean_y);
    shifted_mean_x += dx * nb / n;
    shifted_mean_y += dy * nb / n;
    m2_x += o.m2_x + dx * dx * na * nb / n;
    m2_y += o.m2_y + dy * dy * na * nb / n;
    c_xy += o.c_xy + dx * dy * na * nb / n;
    count += o.count;
  }

  double mean_x() const { return origin_x + shifted_mean_x; }
  double mean_y() const { return origin_y + shifted_mean_y; }

  // Unbiased (count - 1) estimators; 0 below two observations.
  double var_x() const { return count > 1 ? m2_x / static_cast<double>(count - 1) : 0.0; }
  double var_y() const { return count > 1 ? m2_y / static_cast<double>(count - 1) : 0.0; }
  double cov() const { return count > 1 ? c_xy / static_cast<double>(count - 1) : 0.0; }
};

struct MCConfig {
  ModelParams params;
  VertexFunction f;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  void validate() const {
    if (samples < 2)
      throw ParameterError("Monte Carlo needs at least 2 samples for a covariance");
    if (workers < 1)
      throw ParameterError("workers must be at least 1");
  }
};

struct MCResult {
  double mean_tx = 0.0;
  double mean_t1 = 0.0;
  double cov_tx_t1 = 0.0;
  double var_tx = 0.0;
  double var_t1 = 0.0;
  double stderr_mean_tx = 0.0;
  double stderr_mean_t1 = 0.0;
  double stderr_cov = 0.0; // delete-a-group jackknife
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Sample i uses the graph seed derive_seed(seed, i).
inline std::uint64_t sample_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, i); }

// Contiguous sample groups for the jackknife; fixed by the sample count alone.
inline constexpr std::size_t jackknife_groups = 100;

inline MCResult run(const MCConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.samples;
  std::vector<std::pair<double, double>> values(n);
  for_each_chunk(n, std::min<std::size_t>(n, 256), cfg.workers, [&](Chunk c) {
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const auto t = topo_index(sample_gnp(cfg.params, sample_seed(cfg.seed, i)), cfg.f);
      values[i] = {t.value, static_cast<double>(t.edge_count)};
    }
  });

  const std::size_t groups = std::min(n, jackknife_groups);
  std::vector<CoMoments> group(groups);
  for (std::size_t b = 0; b < groups; ++b) {
    const auto c = chunk_bounds(n, groups, b);
    for (std::size_t i = c.begin; i < c.end; ++i)
      group[b].add(values[i].first, values[i].second);
  }
  // prefix[b] merges groups [0, b), suffix[b] merges [b, groups).
  std::vector<CoMoments> prefix(groups + 1), suffix(groups + 1);
  for (std::size_t b = 0; b < groups; ++b) {
    prefix[b + 1] = prefix[b];
    prefix[b + 1].merge(group[b]);
  }
  for (std::size_t b = groups; b-- > 0;) {
    suffix[b] = group[b];
    suffix[b].merge(suffix[b + 1]);
  }
  const CoMoments& all = prefix[groups];

  std::vector<double> replicate(groups);
  double replicate_mean = 0.0;
  for (std::size_t b = 0; b < groups; ++b) {
    CoMoments loo = prefix[b];
    loo.merge(suffix[b + 1]);
    replicate[b] = loo.cov();
    replicate_mean += replicate[b];
  }
  replicate_mean /= static_cast<double>(groups);
  double spread = 0.0;
  for (double r : replicate)
    spread += (r - replicate_mean) * (r - replicate_mean);
  const double g = static_cast<double>(groups);

  MCResult out;
  out.mean_tx = all.mean_x();
  out.mean_t1 = all.mean_y();
  out.cov_tx_t1 = all.cov();
  out.var_tx = all.var_x();
  out.var_t1 = all.var_y();
  out.stderr_mean_tx = std::sqrt(out.var_tx / static_cast<double>(n));
  out.stderr_mean_t1 = std::sqrt(out.var_t1 / static_cast<double>(n));
  out.stderr_cov = std::sqrt((g - 1.0) / g * spread);
  out.samples = n;
  out.seed = cfg.seed;
  return out;
}

struct GridCell {
  std::size_t n;
  double alpha;
};

struct SweepRow {
  GridCell cell;
  double p = 0.0;
  std::uint64_t cell_seed = 0;
  MomentReport moments;
  MCResult mc;
};

inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index) {
  return derive_seed(derive_seed(seed, 0x5EEDCE11ULL), cell_index);
}

// One closed-form report and one Monte Carlo run per (n, alpha) cell.
inline std::vector<SweepRow> sweep(const std::vector<GridCell>& grid, const VertexFunction& f, std::size_t samples,
                                   std::uint64_t seed, std::size_t workers = 1, const SeriesControl& ctl = {}) {
  if (grid.empty())
    throw ParameterError("sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto params = ModelParams::from_alpha(grid[i].n, grid[i].alpha);
    SweepRow row{grid[i], params.p(), cell_seed(seed, i), moment_report(f, params, ctl), {}};
    row.mc = run(MCConfig{params, f, samples, row.cell_seed, workers});
    rows.push_back(std::move(row));
  }
  return rows;
}

// CSV with a mandatory header and a fixed column order. Numbers use the shortest round-trip
// decimal form, so equal results give equal bytes.
inline const char* sweep_csv_header() {
  return "n,alpha,p,d1_exact,d2_exact,d1_poisson,d2_poisson,e_tx_closed,cov_exact,cov_asym_coeff,"
         "mc_mean_tx,mc_cov,mc_stderr_cov,samples,seed";
}

inline std::string csv_number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return VertexFunction::format_number(x);
}

inline std::string sweep_csv_row(const SweepRow& r) {
  const double nan = std::nan("");
  const auto& m = r.moments;
  const auto& a = m.asymptotic;
  std::string s;
  auto put = [&](const std::string& field) {
    if (!s.empty())
      s += ',';
    s += field;
  };
  put(std::to_string(r.cell.n));
  put(csv_number(r.cell.alpha));
  put(csv_number(r.p));
  put(csv_number(m.d1));
  put(csv_number(m.d2));
  put(csv_number(a ? a->d1 : nan));
  put(csv_number(a ? a->d2 : nan));
  put(csv_number(m.e_tx));
  put(csv_number(m.cov_exact));
  put(csv_number(a ? a->value : nan));
  put(csv_number(r.mc.mean_tx));
  put(csv_number(r.mc.cov_tx_t1));
  put(csv_number(r.mc.stderr_cov));
  put(std::to_string(r.mc.samples));
  put(std::to_string(r.mc.seed));
  return s;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows)
    out << sweep_csv_row(r) << '\n';
}

} // namespace topocov
