#pragma once

// Command-line front end. run() is the whole program minus process setup, so tests can drive
// every subcommand in-process.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topocov/topocov.hpp"

namespace topocov::cli {

enum ExitCode : int { ok = 0, runtime_error = 1, input_error = 2, verification_failure = 3 };

inline constexpr double oracle_tolerance = 1e-9;

namespace detail {

using Json = nlohmann::json;

inline std::string num(double x) { return csv_number(x); }

struct ModelOptions {
  std::size_t n = 0;
  std::optional<double> p;
  std::optional<double> alpha;

  ModelParams params() const {
    if (p && alpha)
      throw ParameterError("give either --p or --alpha, not both");
    if (p)
      return ModelParams::from_p(n, *p);
    if (alpha)
      return ModelParams::from_alpha(n, *alpha);
    throw ParameterError("one of --p or --alpha is required");
  }
};

inline void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("-n,--n", m.n, "vertex count")->required();
  auto* p = cmd->add_option("-p,--p", m.p, "edge probability");
  auto* a = cmd->add_option("-a,--alpha", m.alpha, "edge probability times n");
  p->excludes(a);
  a->excludes(p);
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline void print_report(std::ostream& out, const MomentReport& r) {
  out << "d1 = " << num(r.d1) << '\n'
      << "d2 = " << num(r.d2) << '\n'
      << "expected_edges = " << num(r.expected_edges) << '\n'
      << "e_tx = " << num(r.e_tx) << '\n'
      << "e_txt1 = " << num(r.e_txt1) << '\n'
      << "cov_exact = " << num(r.cov_exact) << '\n';
  if (r.asymptotic) {
    out << "d1_poisson = " << num(r.asymptotic->d1) << '\n' << "d2_poisson = " << num(r.asymptotic->d2) << '\n';
    if (r.asymptotic->zero_branch)
      out << "cov_asymptotic_coeff = 0 (d1 = 0 branch)\n";
    else
      out << "cov_asymptotic_coeff = " << num(r.asymptotic->value) << '\n';
  } else {
    out << "cov_asymptotic_coeff = n/a (" << r.asymptotic_error << ")\n";
  }
}

// Settings shared by simulate and sweep; this is what a manifest records.
struct RunSettings {
  std::string subcommand;
  std::vector<std::size_t> n;
  std::vector<double> alpha;
  std::optional<double> p;
  std::string f = "id";
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double tol = 1e-12;

  Json to_json() const {
    Json params{{"n", n}, {"f", f}, {"samples", samples}, {"seed", seed}, {"workers", workers}, {"tol", tol}};
    if (p)
      params["p"] = *p;
    else
      params["alpha"] = alpha;
    return Json{{"subcommand", subcommand}, {"params", params}, {"version", version}, {"timestamp", utc_timestamp()}};
  }

  static RunSettings from_json(const Json& j) {
    RunSettings s;
    s.subcommand = j.at("subcommand").get<std::string>();
    const auto& params = j.at("params");
    s.n = params.at("n").get<std::vector<std::size_t>>();
    if (params.contains("p"))
      s.p = params.at("p").get<double>();
    else
      s.alpha = params.at("alpha").get<std::vector<double>>();
    s.f = params.at("f").get<std::string>();
    s.samples = params.at("samples").get<std::size_t>();
    s.seed = params.at("seed").get<std::uint64_t>();
    s.workers = params.at("workers").get<std::size_t>();
    s.tol = params.at("tol").get<double>();
    return s;
  }
};

inline std::vector<SweepRow> execute(const RunSettings& s) {
  const auto f = parse_function(s.f);
  SeriesControl ctl;
  ctl.tol = s.tol;
  if (s.n.empty())
    throw ParameterError("--n is required");
  if (s.p && !s.alpha.empty())
    throw ParameterError("give either --p or --alpha, not both");

  if (s.subcommand == "simulate") {
    if (s.n.size() != 1 || (!s.p && s.alpha.size() != 1))
      throw ParameterError("simulate takes a single --n and a single --p or --alpha");
    const auto params = s.p ? ModelParams::from_p(s.n[0], *s.p) : ModelParams::from_alpha(s.n[0], s.alpha[0]);
    SweepRow row{{params.n(), params.alpha()}, params.p(), s.seed, moment_report(f, params, ctl), {}};
    row.mc = run(MCConfig{params, f, s.samples, s.seed, s.workers});
    return {row};
  }
  if (s.p)
    throw ParameterError("sweep grids are given in --alpha");
  if (s.alpha.empty())
    throw ParameterError("--alpha is required");
  std::vector<GridCell> grid;
  for (auto n : s.n)
    for (auto a : s.alpha)
      grid.push_back({n, a});
  return sweep(grid, f, s.samples, s.seed, s.workers, ctl);
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;

  CLI::App app{"Degree-based topological indices on G(n, p): closed forms, exhaustive oracle, Monte Carlo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  std::string f_spec = "id";
  double tol = 1e-12;
  std::size_t workers = 1;

  // index
  auto* index_cmd = app.add_subcommand("index", "evaluate T_X and T_1 on an edge-list file");
  std::string graph_path;
  index_cmd->add_option("graph", graph_path, "edge-list file")->required();
  index_cmd->add_option("-f,--f", f_spec, "vertex function");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "closed-form moments");
  ModelOptions exact_model;
  add_model_options(exact_cmd, exact_model);
  exact_cmd->add_option("-f,--f", f_spec, "vertex function");
  exact_cmd->add_option("--tol", tol, "series tolerance");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive enumeration next to the closed forms");
  ModelOptions oracle_model;
  add_model_options(oracle_cmd, oracle_model);
  oracle_cmd->add_option("-f,--f", f_spec, "vertex function");
  oracle_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  // simulate / sweep
  RunSettings sim;
  sim.subcommand = "simulate";
  RunSettings swp;
  swp.subcommand = "sweep";
  std::string out_path, manifest_path, from_manifest;
  auto add_run_options = [&](CLI::App* cmd, RunSettings& s, bool grid) {
    if (grid) {
      cmd->add_option("-n,--n", s.n, "vertex counts")->delimiter(',');
      cmd->add_option("-a,--alpha", s.alpha, "alpha values")->delimiter(',');
    } else {
      cmd->add_option("-n,--n", s.n, "vertex count")->expected(1);
      auto* p = cmd->add_option("-p,--p", s.p, "edge probability");
      auto* a = cmd->add_option("-a,--alpha", s.alpha, "alpha")->expected(1);
      p->excludes(a);
      a->excludes(p);
    }
    cmd->add_option("-f,--f", s.f, "vertex function");
    cmd->add_option("--samples", s.samples, "Monte Carlo samples");
    cmd->add_option("--seed", s.seed, "master seed");
    cmd->add_option("--workers", s.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", s.tol, "series tolerance");
    cmd->add_option("-o,--out", out_path, "CSV output file (default stdout)");
    cmd->add_option("--manifest", manifest_path, "manifest output (default <out>.manifest.json)");
    cmd->add_option("--from-manifest", from_manifest, "replay the settings of a manifest");
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "one Monte Carlo run as CSV");
  add_run_options(simulate_cmd, sim, false);
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo and closed forms over an (n, alpha) grid as CSV");
  add_run_options(sweep_cmd, swp, true);

  // dfk
  auto* dfk_cmd = app.add_subcommand("dfk", "d_f(k) at finite n and in the Poisson limit");
  ModelOptions dfk_model;
  add_model_options(dfk_cmd, dfk_model);
  std::size_t k = 1;
  dfk_cmd->add_option("-f,--f", f_spec, "vertex function");
  dfk_cmd->add_option("-k,--k", k, "number of fixed incident edges");
  dfk_cmd->add_option("--tol", tol, "series tolerance");
  std::optional<std::size_t> max_terms;
  dfk_cmd->add_option("--max-terms", max_terms, "explicit series cap (needed for non-O(d) f)");

  // decorrelate
  auto* decor_cmd = app.add_subcommand("decorrelate", "shift f by d_f(1) and compare covariances");
  ModelOptions decor_model;
  add_model_options(decor_cmd, decor_model);
  decor_cmd->add_option("-f,--f", f_spec, "vertex function");
  decor_cmd->add_option("--tol", tol, "zero-branch tolerance");

  // cov0
  auto* cov0_cmd = app.add_subcommand("cov0", "zero-covariance test and power-series coefficients");
  double cov0_alpha = 0.0;
  std::size_t jmax = 20;
  cov0_cmd->add_option("-a,--alpha", cov0_alpha, "alpha")->required();
  cov0_cmd->add_option("-f,--f", f_spec, "vertex function");
  cov0_cmd->add_option("--jmax", jmax, "last coefficient index");
  cov0_cmd->add_option("--tol", tol, "zero tolerance");
  cov0_cmd->add_option("--max-terms", max_terms, "explicit series cap");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << version << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    SeriesControl ctl;
    ctl.tol = tol;
    ctl.max_terms = max_terms;

    if (index_cmd->parsed()) {
      std::ifstream in(graph_path);
      if (!in)
        throw ParseError(0, "cannot open '" + graph_path + "'");
      const auto g = [&] {
        try {
          return read_edge_list(in);
        } catch (const ParseError& e) {
          throw ParseError(0, graph_path + ": " + e.what());
        }
      }();
      const auto f = parse_function(f_spec);
      const auto t = topo_index(g, f);
      out << "T_X = " << num(t.value) << '\n' << "T_1 = " << t.edge_count << '\n' << "degree histogram:\n";
      std::map<std::size_t, std::size_t> hist;
      for (auto d : g.degrees())
        ++hist[d];
      for (auto [d, c] : hist)
        out << "  " << d << ": " << c << '\n';
      return ok;
    }

    if (exact_cmd->parsed()) {
      print_report(out, moment_report(parse_function(f_spec), exact_model.params(), ctl));
      return ok;
    }

    if (oracle_cmd->parsed()) {
      const auto params = oracle_model.params();
      const EnumerationBudget budget(params.n(), params.p());
      if (params.n() < 2)
        throw ParameterError("oracle needs n >= 2");
      const auto f = parse_function(f_spec);
      bool pass = true;
      out << std::left << std::setw(16) << "quantity" << std::setw(26) << "oracle" << std::setw(26) << "closed_form"
          << std::setw(14) << "delta" << "status\n";
      auto row = [&](const std::string& name, double oracle, double closed) {
        const double delta = std::abs(oracle - closed);
        const bool good = delta / std::max(1.0, std::abs(closed)) < oracle_tolerance;
        pass = pass && good;
        std::ostringstream d;
        d << std::setprecision(3) << delta;
        out << std::setw(16) << name << std::setw(26) << num(oracle) << std::setw(26) << num(closed) << std::setw(14)
            << d.str() << (good ? "ok" : "FAIL") << '\n';
      };
      row("weight_sum", oracle_total_weight(budget), 1.0);
      row("E[T_X]", oracle_expectation(budget, [&](const Graph& g) { return topo_index(g, f).value; }, workers),
          expected_index(f, params));
      row("E[T_X T_1]",
          oracle_expectation(
              budget,
              [&](const Graph& g) {
                const auto t = topo_index(g, f);
                return t.value * static_cast<double>(t.edge_count);
              },
              workers),
          expected_product(f, params));
      row("Cov(T_X,T_1)", oracle_cov(budget, f, workers), covariance_exact(f, params));
      if (params.p() > 0.0) {
        row("d_f(1)", oracle_dfk(budget, f, 1), dfk_exact(f, params, 1));
        if (params.n() >= 3)
          row("d_f(2)", oracle_dfk(budget, f, 2), dfk_exact(f, params, 2));
        if (params.n() <= 6)
          row("independence", independence_check(budget), 0.0);
      }
      out << (pass ? "PASS" : "FAIL") << '\n';
      return pass ? ok : verification_failure;
    }

    if (simulate_cmd->parsed() || sweep_cmd->parsed()) {
      RunSettings s = simulate_cmd->parsed() ? sim : swp;
      if (!from_manifest.empty()) {
        std::ifstream in(from_manifest);
        if (!in)
          throw ParseError(0, "cannot open manifest '" + from_manifest + "'");
        Json j;
        try {
          j = Json::parse(in);
          s = RunSettings::from_json(j);
        } catch (const Json::exception& e) {
          throw ParseError(0, "bad manifest '" + from_manifest + "': " + e.what());
        }
        if (s.subcommand != (simulate_cmd->parsed() ? "simulate" : "sweep"))
          throw ParameterError("manifest was written by '" + s.subcommand + "'");
      }
      const auto rows = execute(s);
      if (out_path.empty()) {
        write_sweep_csv(out, rows);
      } else {
        std::ofstream csv(out_path, std::ios::binary);
        if (!csv)
          throw std::runtime_error("cannot write '" + out_path + "'");
        write_sweep_csv(csv, rows);
      }
      std::string mpath = manifest_path;
      if (mpath.empty() && !out_path.empty())
        mpath = out_path + ".manifest.json";
      if (!mpath.empty()) {
        std::ofstream m(mpath);
        if (!m)
          throw std::runtime_error("cannot write '" + mpath + "'");
        m << s.to_json().dump(2) << '\n';
      }
      return ok;
    }

    if (dfk_cmd->parsed()) {
      const auto params = dfk_model.params();
      const auto f = parse_function(f_spec);
      const double exact = dfk_exact(f, params, k);
      const double limit = dfk_poisson(f, params.alpha(), k, ctl);
      out << "dfk_exact = " << num(exact) << '\n'
          << "dfk_poisson = " << num(limit) << '\n'
          << "gap = " << num(std::abs(exact - limit)) << '\n';
      return ok;
    }

    if (decor_cmd->parsed()) {
      const auto params = decor_model.params();
      const auto f = parse_function(f_spec);
      const double d1 = dfk_exact(f, params, 1);
      const auto g = d1 == 0.0 ? f : shift(f, d1);
      const double d1_after = dfk_exact(g, params, 1);
      const double after = covariance_exact(g, params);
      out << "d1 = " << num(d1) << '\n'
          << "shifted = " << g.to_spec() << '\n'
          << "cov_before = " << num(covariance_exact(f, params)) << '\n'
          << "cov_after = " << (std::abs(d1_after) <= tol ? std::string("0") : num(after)) << '\n'
          << "cov_after_residual = " << num(after) << '\n';
      return ok;
    }

    if (cov0_cmd->parsed()) {
      const auto f = parse_function(f_spec);
      const auto z = zero_cov_test(f, cov0_alpha, ctl);
      out << "zero_covariance = " << (z.zero ? "true" : "false") << '\n' << "d1_poisson = " << num(z.d1) << '\n';
      const auto c = cov0_coefficients(f, jmax);
      for (std::size_t j = 0; j < c.size(); ++j)
        out << "c_" << j << " = " << num(c[j]) << '\n';
      return ok;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const SeriesRefusedError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
  return runtime_error;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace topocov::cli
