#pragma once

// Parameter sweeps and CSV emission for the command-line front end. Output is
// byte-deterministic: floats are printed with 12 significant digits through
// std::to_chars (locale-independent) and rows end with '\n'.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gg/analysis.hpp"
#include "gg/equilibrium.hpp"
#include "gg/game.hpp"

namespace gg {

// printf %.12g equivalent, independent of the global locale
inline std::string format_float(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 12);
  if (res.ec != std::errc{}) throw std::runtime_error("format_float: conversion failed");
  return std::string(buf.data(), res.ptr);
}

enum class SweepVariable { sigma_z_sq, sigma_x_sq, lambda, n_agents };

enum class SweepOutput : int {
  ne_tau = 0,
  ce_tau,
  oracle_tau,
  utility_ne,
  utility_ce,
  rho_ne,
  rho_ce,
  fano_bound,
};

inline const char* to_string(SweepOutput o) {
  switch (o) {
    case SweepOutput::ne_tau: return "ne_tau";
    case SweepOutput::ce_tau: return "ce_tau";
    case SweepOutput::oracle_tau: return "oracle_tau";
    case SweepOutput::utility_ne: return "utility_ne";
    case SweepOutput::utility_ce: return "utility_ce";
    case SweepOutput::rho_ne: return "rho_ne";
    case SweepOutput::rho_ce: return "rho_ce";
    case SweepOutput::fano_bound: return "fano_bound";
  }
  throw std::logic_error("to_string: unknown SweepOutput");
}

inline SweepOutput parse_sweep_output(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(SweepOutput::fano_bound); ++i) {
    const auto o = static_cast<SweepOutput>(i);
    if (s == to_string(o)) return o;
  }
  throw std::invalid_argument("unknown sweep output: " + s);
}

inline SweepVariable parse_sweep_variable(const std::string& s) {
  if (s == "sigma_z_sq") return SweepVariable::sigma_z_sq;
  if (s == "sigma_x_sq") return SweepVariable::sigma_x_sq;
  if (s == "lambda") return SweepVariable::lambda;
  if (s == "n_agents") return SweepVariable::n_agents;
  throw std::invalid_argument("unknown sweep variable: " + s);
}

struct SweepSpec {
  GameParams base;
  SweepVariable variable;
  std::vector<double> grid;           // strictly increasing, positive
  std::vector<SweepOutput> outputs;   // canonical column order, deduplicated

  SweepSpec(GameParams base_params, SweepVariable var, std::vector<double> grid_values,
            std::vector<SweepOutput> outs)
      : base(base_params), variable(var), grid(std::move(grid_values)) {
    if (grid.empty()) throw std::invalid_argument("SweepSpec: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
        throw std::invalid_argument("SweepSpec: grid values must be positive reals");
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
      }
    }
    if (outs.empty()) throw std::invalid_argument("SweepSpec: outputs must be nonempty");
    bool present[8] = {};
    for (SweepOutput o : outs) present[static_cast<int>(o)] = true;
    for (int i = 0; i < 8; ++i) {
      if (present[i]) outputs.push_back(static_cast<SweepOutput>(i));
    }
  }
};

struct SweepResult {
  std::vector<SweepOutput> columns;
  std::vector<double> sweep_values;
  std::vector<std::vector<double>> rows;  // rows[i][j] pairs with columns[j]
};

inline GameParams substitute_sweep_value(const GameParams& base, SweepVariable var, double v) {
  switch (var) {
    case SweepVariable::sigma_z_sq:
      return GameParams(base.n_agents(), base.lambda(), base.sigma_x_sq(), v);
    case SweepVariable::sigma_x_sq:
      return GameParams(base.n_agents(), base.lambda(), v, base.sigma_z_sq());
    case SweepVariable::lambda:
      return GameParams(base.n_agents(), v, base.sigma_x_sq(), base.sigma_z_sq());
    case SweepVariable::n_agents:
      return GameParams(AgentCount(static_cast<int>(std::llround(v))), base.lambda(),
                        base.sigma_x_sq(), base.sigma_z_sq());
  }
  throw std::logic_error("substitute_sweep_value: unknown variable");
}

inline SweepResult run_sweep(const SweepSpec& spec, const QuadratureSpec& quad = {}) {
  auto wants = [&](SweepOutput o) {
    for (SweepOutput c : spec.outputs) {
      if (c == o) return true;
    }
    return false;
  };
  const bool need_ne = wants(SweepOutput::ne_tau) || wants(SweepOutput::utility_ne) ||
                       wants(SweepOutput::rho_ne);
  const bool need_ce = wants(SweepOutput::ce_tau) || wants(SweepOutput::utility_ce) ||
                       wants(SweepOutput::rho_ce);

  SweepResult result;
  result.columns = spec.outputs;
  for (double v : spec.grid) {
    const GameParams pt = substitute_sweep_value(spec.base, spec.variable, v);
    const double tau_oracle = oracle_threshold(pt);
    const double tau_ne = need_ne ? ne_threshold(pt, quad).tau_star : 0.0;
    const double tau_ce = need_ce ? ce_threshold(pt) : 0.0;
    std::vector<double> row;
    row.reserve(spec.outputs.size());
    for (SweepOutput o : spec.outputs) {
      switch (o) {
        case SweepOutput::ne_tau: row.push_back(tau_ne); break;
        case SweepOutput::ce_tau: row.push_back(tau_ce); break;
        case SweepOutput::oracle_tau: row.push_back(tau_oracle); break;
        case SweepOutput::utility_ne: row.push_back(expected_utility(tau_ne, pt)); break;
        case SweepOutput::utility_ce: row.push_back(expected_utility(tau_ce, pt)); break;
        case SweepOutput::rho_ne:
          row.push_back(coordination_efficiency(tau_ne, tau_oracle, pt).rho);
          break;
        case SweepOutput::rho_ce:
          row.push_back(coordination_efficiency(tau_ce, tau_oracle, pt).rho);
          break;
        case SweepOutput::fano_bound:
          row.push_back(fano_bound(tau_oracle, pt).rho_upper_bound);
          break;
      }
    }
    result.sweep_values.push_back(v);
    result.rows.push_back(std::move(row));
  }
  return result;
}

inline std::string sweep_csv_header(const std::vector<SweepOutput>& columns) {
  std::string header = "sweep_value";
  for (SweepOutput o : columns) {
    header += ',';
    header += to_string(o);
  }
  return header;
}

inline void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << sweep_csv_header(result.columns) << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    os << format_float(result.sweep_values[i]);
    for (double v : result.rows[i]) os << ',' << format_float(v);
    os << '\n';
  }
}

struct BrCurve {
  std::vector<double> taus;
  std::vector<double> br_taus;
  double ne_tau = 0.0;
};

inline BrCurve compute_br_curve(const GameParams& params, const std::vector<double>& tau_grid,
                                const QuadratureSpec& quad = {}) {
  if (tau_grid.empty()) throw std::invalid_argument("compute_br_curve: empty tau grid");
  BrCurve curve;
  curve.taus = tau_grid;
  curve.br_taus.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    curve.br_taus.push_back(best_response_threshold(tau, params, quad));
  }
  curve.ne_tau = ne_threshold(params, quad).tau_star;
  return curve;
}

inline void write_br_curve_csv(const BrCurve& curve, std::ostream& os) {
  os << "tau,br_tau" << '\n';
  for (std::size_t i = 0; i < curve.taus.size(); ++i) {
    os << format_float(curve.taus[i]) << ',' << format_float(curve.br_taus[i]) << '\n';
  }
  os << "# ne_tau = " << format_float(curve.ne_tau) << '\n';
}

}  // namespace gg
