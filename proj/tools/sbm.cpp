// sbm: command-line front end for fitting, simulating and analysing sparse beta-models.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbm/analysis.hpp"
#include "sbm/errors.hpp"
#include "sbm/graph.hpp"
#include "sbm/harness.hpp"
#include "sbm/inference.hpp"
#include "sbm/parallel.hpp"
#include "sbm/path.hpp"
#include "sbm/report.hpp"
#include "sbm/solver.hpp"

namespace fs = std::filesystem;
using namespace sbm;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& level, const std::string& msg) { std::cerr << "sbm: " << level << ": " << msg << '\n'; }

// Machine output goes to `path` or stdout, and only once the command has succeeded.
void emit(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content << std::flush;
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + *path + "'");
  out << content;
  if (!out) throw DataError("write to '" + *path + "' failed");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (std::uint64_t{rd()} << 32) ^ rd();
  log("info", "seed=" + std::to_string(s));
  return s;
}

FitConfig fit_config(double m1, double m2) {
  FitConfig cfg;
  cfg.m1 = m1;
  cfg.m2 = m2;
  return cfg;
}

std::size_t default_max_size(const Graph& g, const std::optional<std::size_t>& max_size) {
  return max_size ? *max_size : std::max<std::size_t>(1, g.n() / 2);
}

void require_converged(const FitResult& fit, const std::string& what) {
  if (!fit.converged) {
    throw ConvergenceError(what + " did not converge (projected gradient " + std::to_string(fit.kkt_residual) + ")",
                           fit.kkt_residual);
  }
}

PathEntry fit_fixed_level(const Graph& g, std::size_t s, const FitConfig& cfg) {
  const auto part = degree_partition(g);
  Support support;
  if (s > 0) {
    std::size_t k = 0;
    while (k < part.cumulative.size() && part.cumulative[k] < s) ++k;
    if (k == part.cumulative.size() || part.cumulative[k] != s) {
      std::string levels = "0";
      for (auto c : part.cumulative) levels += ", " + std::to_string(c);
      throw DataError("s=" + std::to_string(s) + " is not an admissible sparsity level (admissible: " + levels + ")");
    }
    support = part.top_groups(k + 1);
  }
  PathEntry e;
  e.s = s;
  e.support = support;
  e.fit = fit_support(g, support, cfg);
  e.bic = information_criterion(e.fit, g.n(), static_cast<std::int64_t>(g.d_plus()), Criterion::bic);
  if (g.d_plus() > 0) {
    e.bic_star = information_criterion(e.fit, g.n(), static_cast<std::int64_t>(g.d_plus()), Criterion::bic_star);
  }
  return e;
}

Criterion criterion_arg(const std::string& name) {
  try {
    return parse_criterion(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse beta-model estimation, simulation and analysis"};
  app.require_subcommand(1);

  double m1 = 30.0, m2 = 30.0;
  app.add_option("--m1", m1, "Bound on |mu|")->check(CLI::PositiveNumber);
  app.add_option("--m2", m2, "Bound on beta_i")->check(CLI::PositiveNumber);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit at a fixed sparsity level or select one by BIC");
  std::string fit_input;
  std::optional<std::size_t> fit_s, fit_max;
  std::optional<std::string> fit_select, fit_out;
  bool fit_null = false;
  fit_cmd->add_option("--input", fit_input, "Edge list")->required();
  auto* s_opt = fit_cmd->add_option("--s", fit_s, "Sparsity level (must be 0 or a cumulative degree-group size)");
  auto* sel_opt = fit_cmd->add_option("--select", fit_select, "bic or bic_star");
  s_opt->excludes(sel_opt);
  fit_cmd->add_flag("--include-null", fit_null, "Let the s=0 fit compete in selection");
  fit_cmd->add_option("--max-size", fit_max, "Largest level on the path (default floor(n/2))");
  fit_cmd->add_option("--out", fit_out, "Output JSON (default stdout)");

  // path
  auto* path_cmd = app.add_subcommand("path", "Solution path with BIC values");
  std::string path_input;
  std::optional<std::size_t> path_max;
  std::optional<std::string> path_out;
  path_cmd->add_option("--input", path_input, "Edge list")->required();
  path_cmd->add_option("--max-size", path_max, "Largest level (default floor(n/2))");
  path_cmd->add_option("--out", path_out, "Output JSON (default stdout)");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Sample a graph with beta on the first s0 nodes");
  std::size_t gen_n = 0, gen_s0 = 0;
  double gen_mu = 0.0, gen_beta = 0.0;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::string> gen_out;
  gen_cmd->add_option("--n", gen_n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--mu", gen_mu, "Global parameter")->required();
  gen_cmd->add_option("--s0", gen_s0, "Support size")->required();
  gen_cmd->add_option("--beta", gen_beta, "Value of the nonzero beta")->required();
  gen_cmd->add_option("--seed", gen_seed, "Random seed");
  gen_cmd->add_option("--out", gen_out, "Output edge list (default stdout)");

  // er
  auto* er_cmd = app.add_subcommand("er", "Erdos-Renyi fit with standard errors");
  std::string er_input;
  std::optional<double> er_gamma;
  std::optional<std::string> er_out;
  er_cmd->add_option("--input", er_input, "Edge list")->required();
  er_cmd->add_option("--gamma", er_gamma, "Sparsity exponent for the asymptotic standard errors");
  er_cmd->add_option("--out", er_out, "Output JSON (default stdout)");

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo study");
  std::string mc_config;
  std::optional<std::string> mc_out, mc_records;
  std::optional<std::uint64_t> mc_seed;
  unsigned mc_threads = 0;
  mc_cmd->add_option("--config", mc_config, "key=value configuration file")->required();
  mc_cmd->add_option("--out", mc_out, "Summary CSV (default stdout)");
  mc_cmd->add_option("--records", mc_records, "Per-replication CSV");
  mc_cmd->add_option("--seed", mc_seed, "Overrides the configured seed");
  mc_cmd->add_option("--threads", mc_threads, "Worker threads (default: available parallelism)");

  // degree-dist
  auto* dd_cmd = app.add_subcommand("degree-dist", "Empirical degree distribution");
  std::string dd_input;
  std::optional<std::string> dd_out;
  dd_cmd->add_option("--input", dd_input, "Edge list")->required();
  dd_cmd->add_option("--out", dd_out, "Output CSV (default stdout)");

  // overlay
  auto* ov_cmd = app.add_subcommand("overlay", "Observed vs fitted vs Poisson degree distributions");
  std::string ov_input, ov_select = "bic";
  std::optional<std::size_t> ov_max;
  std::size_t ov_reps = 100;
  std::optional<std::uint64_t> ov_seed;
  std::optional<std::string> ov_out;
  bool ov_null = false;
  ov_cmd->add_option("--input", ov_input, "Edge list")->required();
  ov_cmd->add_option("--select", ov_select, "bic or bic_star");
  ov_cmd->add_flag("--include-null", ov_null, "Let the s=0 fit compete in selection");
  ov_cmd->add_option("--max-size", ov_max, "Largest level (default floor(n/2))");
  ov_cmd->add_option("--reps", ov_reps, "Simulated graphs")->check(CLI::PositiveNumber);
  ov_cmd->add_option("--seed", ov_seed, "Random seed");
  ov_cmd->add_option("--out", ov_out, "Output CSV (default stdout)");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "Per-group fits and take-up regressions");
  std::string an_dir, an_outcomes, an_select = "bic";
  std::optional<std::string> an_out, an_nodes;
  double an_cap = 0.5;
  unsigned an_threads = 0;
  an_cmd->add_option("--edges-dir", an_dir, "Directory of <group>.tsv edge lists")->required();
  an_cmd->add_option("--outcomes", an_outcomes, "CSV node_id,group_id,takeup")->required();
  an_cmd->add_option("--out", an_out, "Regression table CSV (default stdout)");
  an_cmd->add_option("--nodes-out", an_nodes, "Per-node covariate CSV");
  an_cmd->add_option("--cap-fraction", an_cap, "Largest level as a fraction of group size")
      ->check(CLI::Range(0.0, 1.0));
  an_cmd->add_option("--select", an_select, "bic or bic_star");
  an_cmd->add_option("--threads", an_threads, "Worker threads (default: available parallelism)");

  // convert
  auto* cv_cmd = app.add_subcommand("convert", "Adjacency-matrix CSVs to edge lists and an outcome file");
  std::vector<std::string> cv_adj, cv_takeup;
  std::string cv_dir;
  cv_cmd->add_option("--adjacency", cv_adj, "Adjacency CSV per group; the file stem is the group id")->required();
  cv_cmd->add_option("--takeup", cv_takeup, "Take-up column per group, in the same order");
  cv_cmd->add_option("--out-dir", cv_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const auto cfg = fit_config(m1, m2);

    if (*fit_cmd) {
      const auto g = load_edge_list(fit_input);
      PathEntry entry;
      if (fit_s) {
        if (fit_null) throw UsageError("--include-null applies only with --select");
        entry = fit_fixed_level(g, *fit_s, cfg);
      } else {
        const auto crit = criterion_arg(fit_select.value_or("bic"));
        const auto path = solution_path(g, default_max_size(g, fit_max), cfg);
        for (const auto& w : path.warnings) log("warning", w);
        entry = select(path, crit, fit_null);
      }
      if (!entry.fit.existence_ok) log("warning", "existence condition fails; estimates may sit on the box boundary");
      require_converged(entry.fit, "fit at s=" + std::to_string(entry.s));
      emit(fit_out, fit_to_json(entry, g.n()).dump(2) + "\n");
    } else if (*path_cmd) {
      const auto g = load_edge_list(path_input);
      const auto path = solution_path(g, default_max_size(g, path_max), cfg);
      for (const auto& w : path.warnings) log("warning", w);
      for (const auto& e : path.entries) require_converged(e.fit, "fit at s=" + std::to_string(e.s));
      emit(path_out, path_to_json(path).dump(2) + "\n");
    } else if (*gen_cmd) {
      if (gen_s0 >= gen_n) throw DataError("s0 must be at most n - 1");
      SbmParams params;
      try {
        params = SbmParams::planted(gen_n, gen_mu, gen_s0, gen_beta);
      } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
      }
      const auto g = sample_sbm(params, resolve_seed(gen_seed));
      std::ostringstream out;
      write_edge_list(g, out);
      emit(gen_out, out.str());
    } else if (*er_cmd) {
      const auto g = load_edge_list(er_input);
      ErFit fit;
      try {
        fit = er_mle(g, er_gamma);
      } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
      }
      if (fit.boundary) log("warning", "p_hat is 0 or 1; standard errors are undefined");
      emit(er_out, er_to_json(fit).dump(2) + "\n");
    } else if (*mc_cmd) {
      auto mc = load_mc_config(mc_config);
      if (mc_seed) mc.seed = *mc_seed;
      const auto run = run_monte_carlo(mc, mc_threads);
      if (run.summary.failures > 0) log("warning", std::to_string(run.summary.failures) + " replications failed");
      std::ostringstream summary;
      write_summary_csv(mc, run.summary, summary);
      std::optional<std::string> records;
      if (mc_records) {
        std::ostringstream rec;
        write_records_csv(run.records, rec);
        records = rec.str();
      }
      emit(mc_out, summary.str());
      if (records) emit(mc_records, *records);
    } else if (*dd_cmd) {
      const auto g = load_edge_list(dd_input);
      std::ostringstream out;
      write_degree_distribution_csv(degree_distribution(g), out);
      emit(dd_out, out.str());
    } else if (*ov_cmd) {
      const auto g = load_edge_list(ov_input);
      const auto crit = criterion_arg(ov_select);
      const auto path = solution_path(g, default_max_size(g, ov_max), cfg);
      for (const auto& w : path.warnings) log("warning", w);
      const auto& entry = select(path, crit, ov_null);
      require_converged(entry.fit, "fit at s=" + std::to_string(entry.s));
      std::ostringstream out;
      write_overlay_csv(model_fit_overlay(g, entry.fit, ov_reps, resolve_seed(ov_seed)), out);
      emit(ov_out, out.str());
    } else if (*an_cmd) {
      const auto crit = criterion_arg(an_select);
      const auto groups = load_groups(an_dir);
      const auto outcomes = read_outcomes_csv(an_outcomes);
      const auto fits = fit_by_group(groups, cfg, an_cap, crit, an_threads);
      for (const auto& w : fits.warnings) log("warning", w);
      for (const auto& [id, f] : fits.fits) require_converged(f.selected.fit, "group " + id);
      const auto table = build_node_table(fits, groups, outcomes);
      for (const auto& w : table.warnings) log("warning", w);
      const auto models = run_takeup_models(table);
      if (!models.empty()) {
        const auto dropped = table.rows.size() - models.front().observations;
        if (dropped > 0) log("info", std::to_string(dropped) + " nodes without an outcome left out of the regressions");
      }
      for (const auto& m : models) {
        if (m.fit.separation_flag) log("warning", "model " + std::to_string(m.index) + ": separation detected");
      }
      std::ostringstream tables;
      write_takeup_tables_csv(models, tables);
      std::optional<std::string> nodes;
      if (an_nodes) {
        std::ostringstream out;
        write_node_table_csv(table, out);
        nodes = out.str();
      }
      emit(an_out, tables.str());
      if (nodes) emit(an_nodes, *nodes);
    } else if (*cv_cmd) {
      if (!cv_takeup.empty() && cv_takeup.size() != cv_adj.size()) {
        throw UsageError("--takeup must be given once per --adjacency file");
      }
      std::vector<std::pair<std::string, std::string>> files;
      std::ostringstream outcomes;
      outcomes << "node_id,group_id,takeup\n";
      for (std::size_t k = 0; k < cv_adj.size(); ++k) {
        const auto id = fs::path(cv_adj[k]).stem().string();
        const auto g = read_adjacency_csv(cv_adj[k]);
        std::ostringstream edges;
        write_edge_list(g, edges);
        files.emplace_back((fs::path(cv_dir) / (id + ".tsv")).string(), edges.str());
        if (!cv_takeup.empty()) {
          const auto takeup = read_takeup_column(cv_takeup[k]);
          if (takeup.size() != g.n()) {
            throw DataError(cv_takeup[k] + ": " + std::to_string(takeup.size()) + " rows, adjacency has " +
                            std::to_string(g.n()));
          }
          for (std::size_t i = 0; i < takeup.size(); ++i) {
            outcomes << i << ',' << id << ',';
            if (takeup[i]) outcomes << *takeup[i];
            else outcomes << "NA";
            outcomes << '\n';
          }
        }
      }
      fs::create_directories(cv_dir);
      for (const auto& [path, content] : files) emit(path, content);
      if (!cv_takeup.empty()) emit((fs::path(cv_dir) / "outcomes.csv").string(), outcomes.str());
    }
  } catch (const UsageError& e) {
    log("error", e.what());
    return 1;
  } catch (const DataError& e) {
    log("error", e.what());
    return 2;
  } catch (const ConvergenceError& e) {
    log("error", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    log("error", e.what());
    return 2;
  } catch (const std::exception& e) {
    log("error", e.what());
    return 2;
  }
  return 0;
}
