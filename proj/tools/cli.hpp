#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asprt/asprt.hpp"

namespace asprt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct PairFlags {
  std::vector<double> normal;
  std::vector<double> poisson;
  std::vector<double> al;
  double variance = 1.0;

  void attach(CLI::App& cmd) {
    auto* n = cmd.add_option("--normal", normal, "Normal means THETA0 THETA1")
                  ->expected(2);
    auto* p = cmd.add_option("--poisson", poisson, "Poisson rates LAMBDA0 LAMBDA1")
                  ->expected(2);
    auto* a = cmd.add_option("--al", al,
                             "Asymmetric Laplace M0 LAMBDA0 KAPPA0 M1 LAMBDA1 KAPPA1")
                  ->expected(6);
    n->excludes(p)->excludes(a);
    p->excludes(a);
    cmd.add_option("--variance", variance, "Common Normal variance")
        ->default_val(1.0)
        ->check(CLI::PositiveNumber);
  }

  bool given() const { return !normal.empty() || !poisson.empty() || !al.empty(); }

  HypothesisPair pair() const {
    HypothesisPair p;
    if (!normal.empty()) {
      p = {Normal{normal[0], variance}, Normal{normal[1], variance}};
    } else if (!poisson.empty()) {
      p = {Poisson{poisson[0]}, Poisson{poisson[1]}};
    } else if (!al.empty()) {
      p = {AsymmetricLaplace{al[0], al[1], al[2]}, AsymmetricLaplace{al[3], al[4], al[5]}};
    } else {
      throw CLI::RequiredError("one of --normal, --poisson, --al");
    }
    validate(p);
    return p;
  }
};

struct RunFlags {
  double alpha = 1e-3;
  double beta = -1.0;
  std::int64_t replications = 1000;
  std::uint64_t seed = 1;
  std::string truth = "H0";
  std::int64_t cap = kDefaultCap;
  unsigned threads = 0;
  std::string config;
  bool json = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--alpha", alpha, "Type I error")->default_val(1e-3);
    cmd.add_option("--beta", beta, "Type II error (defaults to alpha)");
    cmd.add_option("--replications,-r", replications, "Monte Carlo replications")
        ->default_val(1000)
        ->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "Master seed")->default_val(1);
    cmd.add_option("--truth", truth, "H0, H1 or random")
        ->check(CLI::IsMember({"H0", "H1", "random"}));
    cmd.add_option("--cap", cap, "Per-trial step cap")->check(CLI::Range(2LL, (1LL << 62)));
    cmd.add_option("--threads", threads, "Worker threads (default: ASPRT_THREADS or all cores)");
    cmd.add_option("--config", config, "JSON configuration document");
    cmd.add_flag("--json", json, "Print the summary as JSON");
  }

  unsigned thread_count() const { return threads > 0 ? threads : default_thread_count(); }

  TruthMode truth_mode() const {
    if (truth == "H1") return TruthMode::H1;
    if (truth == "random") return TruthMode::Random;
    return TruthMode::H0;
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void print_summary(std::ostream& out, const ExperimentConfig& cfg,
                          const ExperimentSummary& s, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["procedure"] = to_string(cfg.procedure);
    j["f0"] = describe(cfg.pair.f0);
    j["f1"] = describe(cfg.pair.f1);
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["replications"] = s.replications;
    j["master_seed"] = cfg.master_seed;
    j["pcs"] = s.pcs;
    j["se_pcs"] = s.se_pcs;
    j["pcs_selection"] = s.pcs_selection;
    j["se_pcs_selection"] = s.se_pcs_selection;
    j["e_n1"] = s.mean_n_inferior;
    j["se_n1"] = s.se_n_inferior;
    j["asn"] = s.asn;
    j["se_asn"] = s.se_asn;
    j["total_draws"] = s.mean_total_draws;
    j["n1_star_closed"] = s.n1_star_closed;
    j["n1_star_series"] = s.n1_star_series;
    j["asn_wald_k0"] = s.asn_wald_k0;
    out << j.dump(2) << "\n";
    return;
  }
  const bool classical = cfg.procedure == Procedure::Classical;
  char line[160];
  auto row = [&](const char* name, double v, double se) {
    std::snprintf(line, sizeof line, "%-16s %12.4f  (se %.4f)\n", name, v, se);
    out << line;
  };
  out << "procedure        " << to_string(cfg.procedure) << "\n"
      << "f0               " << describe(cfg.pair.f0) << "\n"
      << "f1               " << describe(cfg.pair.f1) << "\n"
      << "alpha, beta      " << cfg.alpha << ", " << cfg.beta << "\n"
      << "replications     " << s.replications << " (seed " << cfg.master_seed << ")\n";
  row("pcs", s.pcs, s.se_pcs);
  row("pcs_selection", s.pcs_selection, s.se_pcs_selection);
  row("e_n1", s.mean_n_inferior, s.se_n_inferior);
  row(classical ? "rounds" : "asn", s.asn, s.se_asn);
  row("total_draws", s.mean_total_draws, s.se_total_draws);
  std::snprintf(line, sizeof line, "%-16s %12.4f\n%-16s %12.4f\n%-16s %12.4f\n",
                "n1_star_closed", s.n1_star_closed, "n1_star_series",
                s.n1_star_series, "asn_wald_k0", s.asn_wald_k0);
  out << line;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Adaptive SPRT with likelihood-ratio allocation"};
  app.require_subcommand(1);

  detail::PairFlags pair_flags;
  detail::RunFlags run_flags;
  double eps = 1e-12;
  double quad_tol = 1e-10;

  auto* moments = app.add_subcommand("moments", "Mean and variance of the LLR under f0 and f1");
  pair_flags.attach(*moments);
  moments->add_option("--tol", quad_tol, "Quadrature tolerance (asymmetric Laplace)");

  auto* n1star = app.add_subcommand("n1star", "Expected inferior allocations N1*");
  pair_flags.attach(*n1star);
  n1star->add_option("--eps", eps, "Series truncation threshold");

  double t_alpha = 1e-3, t_beta = 1e-3;
  auto* thresholds = app.add_subcommand("thresholds", "Wald boundaries a and b");
  thresholds->add_option("--alpha", t_alpha)->required();
  thresholds->add_option("--beta", t_beta)->required();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo of the adaptive procedure");
  pair_flags.attach(*simulate);
  run_flags.attach(*simulate);

  auto* classical = app.add_subcommand("classical", "Monte Carlo of the alternating SPRT");
  pair_flags.attach(*classical);
  run_flags.attach(*classical);

  std::string preset_name, table_config, format, output;
  std::optional<std::uint64_t> table_seed;
  std::optional<std::int64_t> table_reps;
  unsigned table_threads = 0;
  auto* table = app.add_subcommand("table", "Regenerate a table of simulation results");
  auto* preset_opt = table->add_option("--preset", preset_name, "table1..table4");
  auto* config_opt = table->add_option("--config", table_config, "JSON configuration document");
  preset_opt->excludes(config_opt);
  table->add_option("--seed", table_seed, "Override every scenario's master seed");
  table->add_option("--replications,-r", table_reps, "Override replications")
      ->check(CLI::PositiveNumber);
  table->add_option("--format", format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  table->add_option("--output,-o", output, "Output file (default: stdout)");
  table->add_option("--threads", table_threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*moments) {
      const auto pair = pair_flags.pair();
      const auto m = std::holds_alternative<AsymmetricLaplace>(pair.f0)
                         ? llr_moments_numeric(pair, quad_tol)
                         : llr_moments_analytic(pair);
      out.precision(10);
      out << "eta_x    " << m.eta_x << "\nsigma2_x " << m.sigma2_x << "\neta_y    "
          << m.eta_y << "\nsigma2_y " << m.sigma2_y << "\n";
    } else if (*n1star) {
      const auto m = llr_moments(pair_flags.pair());
      out.precision(10);
      out << "closed " << n1_star_closed_form(m) << "\nseries "
          << n1_star_series(m, eps) << "\n";
    } else if (*thresholds) {
      const auto t = wald_thresholds(t_alpha, t_beta);
      out.precision(10);
      out << "a " << t.a << "\nb " << t.b << "\n";
    } else if (*simulate || *classical) {
      const Procedure procedure = *classical ? Procedure::Classical : Procedure::Adaptive;
      std::vector<ExperimentConfig> cfgs;
      if (!run_flags.config.empty()) {
        cfgs = parse_config(detail::read_file(run_flags.config)).experiments;
        for (auto& c : cfgs) {
          c.procedure = procedure;
          if (app.get_subcommand(*simulate ? "simulate" : "classical")->count("--seed")) {
            c.master_seed = run_flags.seed;
          }
        }
      } else {
        ExperimentConfig c;
        c.pair = pair_flags.pair();
        c.alpha = run_flags.alpha;
        c.beta = run_flags.beta > 0.0 ? run_flags.beta : run_flags.alpha;
        c.replications = run_flags.replications;
        c.master_seed = run_flags.seed;
        c.truth = run_flags.truth_mode();
        c.cap = run_flags.cap;
        c.procedure = procedure;
        cfgs.push_back(c);
      }
      for (const auto& c : cfgs) {
        detail::print_summary(out, c, run_experiment(c, run_flags.thread_count()),
                              run_flags.json);
      }
    } else if (*table) {
      TableSpec spec;
      if (!preset_name.empty()) {
        spec = preset(preset_name);
      } else if (!table_config.empty()) {
        spec = parse_config(detail::read_file(table_config)).table;
      } else {
        err << "table: one of --preset or --config is required\n" << table->help();
        return kExitUsage;
      }
      for (auto& sc : spec.scenarios) {
        if (table_seed) sc.seed = *table_seed;
        if (table_reps) sc.replications = *table_reps;
      }
      if (format == "markdown") spec.format = OutputFormat::Markdown;
      if (format == "csv") spec.format = OutputFormat::Csv;
      if (!output.empty()) spec.output_path = output;
      const auto rows = run_table(spec, table_threads > 0 ? table_threads : default_thread_count());
      if (spec.output_path.empty()) {
        emit_table(rows, spec, out);
      } else {
        emit_table(rows, spec);
      }
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace asprt::cli
