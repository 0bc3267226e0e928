// ggame: command-line front end for Gaussian global coordination games.
//
// Subcommands:
//   solve      NE / oracle / CE thresholds for one parameter point
//   sweep      CSV sweep of thresholds, utilities, efficiencies and the Fano bound
//   br-curve   CSV of the best-response map over a threshold grid
//   simulate   seeded Monte Carlo estimate of efficiency and utility
//
// Exit codes: 0 success, 2 argument/domain error, 3 I/O error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gg/analysis.hpp"
#include "gg/equilibrium.hpp"
#include "gg/game.hpp"
#include "gg/montecarlo.hpp"
#include "gg/numerics.hpp"
#include "gg/sweep.hpp"

namespace {

double parse_double_strict(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument("not a valid number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split_list(s)) out.push_back(parse_double_strict(tok));
  return out;
}

std::vector<double> parse_linspace(const std::string& s) {
  const std::vector<double> parts = parse_double_list(s);
  if (parts.size() != 3) {
    throw std::invalid_argument("linspace expects 'start,stop,count', got '" + s + "'");
  }
  const double start = parts[0], stop = parts[1];
  const long long count = std::llround(parts[2]);
  if (count < 1) throw std::invalid_argument("linspace count must be >= 1");
  if (count == 1) return {start};
  if (!(stop > start)) throw std::invalid_argument("linspace needs stop > start");
  std::vector<double> grid(count);
  for (long long i = 0; i < count; ++i) {
    grid[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  grid.back() = stop;
  return grid;
}

// Model settings after applying precedence: flags > config file > defaults.
struct Settings {
  bool n_infinite = false;
  int n_value = 10;
  double lambda = 1.0;
  double sigma_x_sq = 1.0;
  double sigma_z_sq = 1.0;
  int quad_nodes = 96;
  long long mc_samples = 1'000'000;
  int mc_agents = 10'000;
  std::uint64_t seed = 1;

  gg::GameParams params() const {
    const gg::AgentCount n =
        n_infinite ? gg::AgentCount::infinite() : gg::AgentCount(n_value);
    return gg::GameParams(n, lambda, sigma_x_sq, sigma_z_sq);
  }
  gg::QuadratureSpec quadrature() const {
    return gg::QuadratureSpec(quad_nodes, gg::QuadratureKind::gauss_hermite);
  }
};

struct ModelFlags {
  std::string n_agents;
  double lambda = 0.0;
  double sigma_x_sq = 0.0;
  double sigma_z_sq = 0.0;
  int quad_nodes = 0;
  std::string config_path;

  CLI::Option* n_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* sx_opt = nullptr;
  CLI::Option* sz_opt = nullptr;
  CLI::Option* quad_opt = nullptr;

  void attach(CLI::App* cmd) {
    n_opt = cmd->add_option("--n", n_agents, "number of agents: integer >= 2 or 'inf'");
    lambda_opt = cmd->add_option("--lambda", lambda, "benefit slope lambda (> 0)");
    sx_opt = cmd->add_option("--sigma-x-sq", sigma_x_sq, "prior variance of the state (> 0)");
    sz_opt = cmd->add_option("--sigma-z-sq", sigma_z_sq, "channel noise variance (>= 0)");
    quad_opt = cmd->add_option("--quad-nodes", quad_nodes, "Gauss-Hermite node count (default 96)");
    cmd->add_option("--config", config_path, "JSON config file (flags take precedence)");
  }
};

void apply_agent_string(Settings& s, const std::string& str) {
  if (str == "inf") {
    s.n_infinite = true;
    return;
  }
  int v = 0;
  const auto res = std::from_chars(str.data(), str.data() + str.size(), v);
  if (res.ec != std::errc{} || res.ptr != str.data() + str.size()) {
    throw std::invalid_argument("--n expects an integer or 'inf', got '" + str + "'");
  }
  s.n_infinite = false;
  s.n_value = v;
}

void apply_config(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("n_agents")) {
    if (j["n_agents"].is_string()) {
      apply_agent_string(s, j["n_agents"].get<std::string>());
    } else {
      s.n_infinite = false;
      s.n_value = j["n_agents"].get<int>();
    }
  }
  if (j.contains("lambda")) s.lambda = j["lambda"].get<double>();
  if (j.contains("sigma_x_sq")) s.sigma_x_sq = j["sigma_x_sq"].get<double>();
  if (j.contains("sigma_z_sq")) s.sigma_z_sq = j["sigma_z_sq"].get<double>();
  if (j.contains("quadrature_nodes")) s.quad_nodes = j["quadrature_nodes"].get<int>();
  if (j.contains("mc_samples")) s.mc_samples = j["mc_samples"].get<long long>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
}

Settings resolve_settings(const ModelFlags& f) {
  Settings s;
  if (!f.config_path.empty()) apply_config(s, f.config_path);
  if (f.n_opt->count() > 0) apply_agent_string(s, f.n_agents);
  if (f.lambda_opt->count() > 0) s.lambda = f.lambda;
  if (f.sx_opt->count() > 0) s.sigma_x_sq = f.sigma_x_sq;
  if (f.sz_opt->count() > 0) s.sigma_z_sq = f.sigma_z_sq;
  if (f.quad_opt->count() > 0) s.quad_nodes = f.quad_nodes;
  return s;
}

int run_solve(const Settings& s) {
  const gg::GameParams params = s.params();
  const gg::NeSolution ne = gg::ne_threshold(params, s.quadrature());
  std::cout << "ne_tau " << gg::format_float(ne.tau_star) << '\n'
            << "residual " << gg::format_float(ne.residual) << '\n'
            << "method " << (ne.method == gg::NeMethod::direct_root ? "direct_root" : "br_iteration")
            << '\n'
            << "br_iteration_tau " << gg::format_float(ne.br_tau) << '\n'
            << "br_iteration_converged " << (ne.br_converged ? "true" : "false") << '\n'
            << "methods_agree " << (ne.methods_agree ? "true" : "false") << '\n'
            << "oracle_tau " << gg::format_float(gg::oracle_threshold(params)) << '\n'
            << "ce_tau " << gg::format_float(gg::ce_threshold(params)) << '\n';
  return 0;
}

int run_sweep(const Settings& s, const std::string& var, const std::vector<double>& grid,
              const std::string& outputs_csv, const std::string& out_path) {
  std::vector<gg::SweepOutput> outputs;
  if (outputs_csv.empty()) {
    for (int i = 0; i <= static_cast<int>(gg::SweepOutput::fano_bound); ++i) {
      outputs.push_back(static_cast<gg::SweepOutput>(i));
    }
  } else {
    for (const std::string& tok : split_list(outputs_csv)) {
      outputs.push_back(gg::parse_sweep_output(tok));
    }
  }
  const gg::SweepSpec spec(s.params(), gg::parse_sweep_variable(var), grid, outputs);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << '\n';
    return 3;
  }
  gg::write_sweep_csv(gg::run_sweep(spec, s.quadrature()), out);
  out.flush();
  if (!out) {
    std::cerr << "error: failed writing output file: " << out_path << '\n';
    return 3;
  }
  return 0;
}

int run_br_curve(const Settings& s, const std::vector<double>& tau_grid,
                 const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << out_path << '\n';
    return 3;
  }
  gg::write_br_curve_csv(gg::compute_br_curve(s.params(), tau_grid, s.quadrature()), out);
  out.flush();
  if (!out) {
    std::cerr << "error: failed writing output file: " << out_path << '\n';
    return 3;
  }
  return 0;
}

int run_simulate(const Settings& s, std::optional<double> tau, std::optional<double> tau_oracle) {
  const gg::GameParams params = s.params();
  const double tau_eff = tau ? *tau : gg::ne_threshold(params, s.quadrature()).tau_star;
  const double oracle_eff = tau_oracle ? *tau_oracle : gg::oracle_threshold(params);
  gg::SimConfig cfg;
  cfg.n_samples = s.mc_samples;
  cfg.n_agents_effective = s.mc_agents;
  cfg.seed = s.seed;
  const gg::SimReport report = gg::simulate(tau_eff, oracle_eff, params, cfg);
  std::cout << "tau " << gg::format_float(tau_eff) << '\n'
            << "tau_oracle " << gg::format_float(oracle_eff) << '\n'
            << "empirical_rho " << gg::format_float(report.empirical_rho) << '\n'
            << "rho_std_error " << gg::format_float(report.rho_std_error) << '\n'
            << "empirical_utility " << gg::format_float(report.empirical_utility) << '\n'
            << "utility_std_error " << gg::format_float(report.utility_std_error) << '\n'
            << "n_samples " << report.n_samples << '\n'
            << "seed " << s.seed << '\n'
            << "rng " << report.rng_algorithm << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian global coordination games: equilibrium thresholds, coordination "
               "efficiency, and the Fano efficiency bound"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "compute NE, oracle and CE thresholds");
  ModelFlags solve_flags;
  solve_flags.attach(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "write a CSV parameter sweep");
  ModelFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::string sweep_var;
  std::string sweep_grid_csv;
  std::string sweep_linspace;
  std::string sweep_outputs;
  std::string sweep_out_path;
  sweep->add_option("--var", sweep_var,
                    "sweep variable: sigma_z_sq, sigma_x_sq, lambda, n_agents")
      ->required();
  CLI::Option* grid_opt = sweep->add_option("--grid", sweep_grid_csv, "comma-separated grid values");
  CLI::Option* lin_opt =
      sweep->add_option("--linspace", sweep_linspace, "uniform grid as 'start,stop,count'");
  grid_opt->excludes(lin_opt);
  sweep->add_option("--outputs", sweep_outputs,
                    "comma-separated subset of ne_tau,ce_tau,oracle_tau,utility_ne,utility_ce,"
                    "rho_ne,rho_ce,fano_bound (default: all)");
  sweep->add_option("--out", sweep_out_path, "output CSV path")->required();

  CLI::App* br_curve = app.add_subcommand("br-curve", "write a CSV best-response curve");
  ModelFlags br_flags;
  br_flags.attach(br_curve);
  std::string br_grid_csv;
  std::string br_linspace;
  std::string br_out_path;
  CLI::Option* br_grid_opt =
      br_curve->add_option("--tau-grid", br_grid_csv, "comma-separated thresholds");
  CLI::Option* br_lin_opt =
      br_curve->add_option("--tau-linspace", br_linspace, "uniform grid as 'start,stop,count'");
  br_grid_opt->excludes(br_lin_opt);
  br_curve->add_option("--out", br_out_path, "output CSV path")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo simulation");
  ModelFlags sim_flags;
  sim_flags.attach(simulate);
  double sim_tau = 0.0;
  double sim_tau_oracle = 0.0;
  long long sim_samples = 0;
  int sim_agents = 0;
  std::uint64_t sim_seed = 0;
  CLI::Option* tau_opt =
      simulate->add_option("--tau", sim_tau, "homogeneous threshold (default: NE threshold)");
  CLI::Option* tau_oracle_opt = simulate->add_option(
      "--tau-oracle", sim_tau_oracle, "oracle threshold (default: lambda/2 (1-1/N))");
  CLI::Option* samples_opt =
      simulate->add_option("--samples", sim_samples, "number of state draws");
  CLI::Option* agents_opt = simulate->add_option(
      "--agents", sim_agents, "effective agent count when --n inf (default 10000)");
  CLI::Option* seed_opt = simulate->add_option("--seed", sim_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      return run_solve(resolve_settings(solve_flags));
    }
    if (sweep->parsed()) {
      std::vector<double> grid;
      if (grid_opt->count() > 0) {
        grid = parse_double_list(sweep_grid_csv);
      } else if (lin_opt->count() > 0) {
        grid = parse_linspace(sweep_linspace);
      } else {
        throw std::invalid_argument("sweep requires --grid or --linspace");
      }
      return run_sweep(resolve_settings(sweep_flags), sweep_var, grid, sweep_outputs,
                       sweep_out_path);
    }
    if (br_curve->parsed()) {
      std::vector<double> grid;
      if (br_grid_opt->count() > 0) {
        grid = parse_double_list(br_grid_csv);
      } else if (br_lin_opt->count() > 0) {
        grid = parse_linspace(br_linspace);
      } else {
        throw std::invalid_argument("br-curve requires --tau-grid or --tau-linspace");
      }
      return run_br_curve(resolve_settings(br_flags), grid, br_out_path);
    }
    if (simulate->parsed()) {
      Settings s = resolve_settings(sim_flags);
      if (samples_opt->count() > 0) s.mc_samples = sim_samples;
      if (agents_opt->count() > 0) s.mc_agents = sim_agents;
      if (seed_opt->count() > 0) s.seed = sim_seed;
      std::optional<double> tau;
      std::optional<double> tau_oracle;
      if (tau_opt->count() > 0) tau = sim_tau;
      if (tau_oracle_opt->count() > 0) tau_oracle = sim_tau_oracle;
      return run_simulate(s, tau, tau_oracle);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
