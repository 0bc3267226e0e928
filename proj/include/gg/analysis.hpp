#pragma once

// Coordination-efficiency evaluation, expected utility of homogeneous
// threshold profiles, and the information-theoretic (Fano) upper bound on
// coordination efficiency.
//
// State/signal integrals run on [-8, 8] combined standard deviations with a
// 4001-node composite rule; truncated mass is below 1e-15.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gg/equilibrium.hpp"
#include "gg/game.hpp"
#include "gg/numerics.hpp"

namespace gg {

enum class EfficiencyMethod { quadrature, monte_carlo };

struct EfficiencyReport {
  double rho = 0.0;                      // coordination efficiency
  double miscoordination_integral = 0.0; // P(agent action != oracle action)
  double oracle_tau = 0.0;
  double policy_tau = 0.0;
  EfficiencyMethod method = EfficiencyMethod::quadrature;
  double std_error = 0.0;                // 0 for quadrature
};

// P(E_i = 1 | X = x) for an agent using threshold tau against the oracle rule
// 1(x <= tau_oracle):
//   (1 - Phi((tau-x)/sigma_z)) 1(x <= tau_oracle) + Phi((tau-x)/sigma_z) 1(x > tau_oracle)
inline double miscoordination_prob_given_x(double x, double tau, double tau_oracle,
                                           const GameParams& params) {
  detail::require_noisy(params, "miscoordination_prob_given_x");
  const double engage = std_normal_cdf((tau - x) / params.sigma_z());
  return x <= tau_oracle ? 1.0 - engage : engage;
}

namespace detail {
inline int odd_at_least_3(int n) {
  n = std::max(3, n);
  return (n % 2 == 0) ? n + 1 : n;
}
}  // namespace detail

// rho = 1 - integral of P(E_i=1 | X=x) f_X(x) dx over [-8 sigma_x, 8 sigma_x].
// The grid is split at x = tau_oracle so the indicator discontinuity falls on
// a panel boundary; each smooth panel uses composite Simpson, 4001 nodes total.
inline EfficiencyReport coordination_efficiency(double tau, double tau_oracle,
                                                const GameParams& params) {
  detail::require_noisy(params, "coordination_efficiency");
  const double sx = params.sigma_x();
  const double sz = params.sigma_z();
  const double sx2 = params.sigma_x_sq();
  const double lo = -8.0 * sx;
  const double hi = 8.0 * sx;
  const int total_nodes = 4001;

  auto below = [&](double x) {
    return (1.0 - std_normal_cdf((tau - x) / sz)) * normal_pdf(x, 0.0, sx2);
  };
  auto above = [&](double x) {
    return std_normal_cdf((tau - x) / sz) * normal_pdf(x, 0.0, sx2);
  };

  double integral = 0.0;
  if (tau_oracle >= hi) {
    integral = integrate_simpson(below, lo, hi, total_nodes);
  } else if (tau_oracle <= lo) {
    integral = integrate_simpson(above, lo, hi, total_nodes);
  } else {
    const double frac = (tau_oracle - lo) / (hi - lo);
    const int n_left = detail::odd_at_least_3(static_cast<int>(std::lround(total_nodes * frac)));
    const int n_right = detail::odd_at_least_3(total_nodes + 1 - n_left);
    integral = integrate_simpson(below, lo, tau_oracle, n_left) +
               integrate_simpson(above, tau_oracle, hi, n_right);
  }
  integral = std::clamp(integral, 0.0, 1.0);

  EfficiencyReport report;
  report.rho = 1.0 - integral;
  report.miscoordination_integral = integral;
  report.oracle_tau = tau_oracle;
  report.policy_tau = tau;
  report.method = EfficiencyMethod::quadrature;
  report.std_error = 0.0;
  return report;
}

// Expected per-agent utility of the homogeneous profile with threshold tau:
//   J = integral of [br_coeff p(x)^2 - x p(x)] f_X(x) dx,  p(x) = Phi((tau-x)/sigma_z).
// Uses the conditional independence of actions given X; for the mean-field
// limit br_coeff reduces to lambda.
inline double expected_utility(double tau, const GameParams& params) {
  detail::require_noisy(params, "expected_utility");
  const double br = params.br_coeff();
  const double sx = params.sigma_x();
  const double sz = params.sigma_z();
  const double sx2 = params.sigma_x_sq();
  auto f = [&](double x) {
    const double p = std_normal_cdf((tau - x) / sz);
    return (br * p * p - x * p) * normal_pdf(x, 0.0, sx2);
  };
  return integrate_simpson(f, -8.0 * sx, 8.0 * sx, 4001);
}

enum class StateSide { below, above };

// f_{Y | X <= tau_oracle}(y) (or the "above" counterpart): the posterior-tail
// closed form f_Y(y) Phi(+-(tau_oracle - alpha y)/sigma_tilde) / P(side),
// equivalent to the convolution-ratio definition since X | Y=y is
// N(alpha y, sigma_tilde^2).
inline double cond_density_y_given_side(double y, StateSide side, double tau_oracle,
                                        const GameParams& params) {
  detail::require_noisy(params, "cond_density_y_given_side");
  const double alpha = params.alpha();
  const double st = std::sqrt(params.sigma_tilde_sq());
  const double var_y = params.sigma_x_sq() + params.sigma_z_sq();
  const double f_y = normal_pdf(y, 0.0, var_y);
  const double z = (tau_oracle - alpha * y) / st;
  const double z0 = tau_oracle / params.sigma_x();
  if (side == StateSide::below) {
    return f_y * std_normal_cdf(z) / std_normal_cdf(z0);
  }
  return f_y * std_normal_cdf(-z) / std_normal_cdf(-z0);
}

struct FanoReport {
  double h_astar = 0.0;              // H(A*), binary entropy of p_astar_one
  double h_y = 0.0;                  // differential entropy of the signal Y
  double h_y_given_astar = 0.0;      // p1 H(Y|below) + (1-p1) H(Y|above)
  double h_astar_given_y = 0.0;      // decomposition value clamped to [0, h_astar]
  double h_astar_given_y_raw = 0.0;  // unclamped decomposition value
  double rho_upper_bound = 0.0;      // 1 - h^{-1}(h_astar_given_y)
  double p_astar_one = 0.0;          // P(X <= tau_oracle)
};

// Fano upper bound on coordination efficiency via the decomposition
//   H(A*|Y) = H(A*) - H(Y) + H(Y|A*).
// Quadrature noise can push the decomposition slightly outside [0, H(A*)];
// the clamped value feeds the bound and the raw value is reported alongside.
inline FanoReport fano_bound(double tau_oracle, const GameParams& params) {
  detail::require_noisy(params, "fano_bound");
  const double var_y = params.sigma_x_sq() + params.sigma_z_sq();
  const double sy = std::sqrt(var_y);

  FanoReport report;
  report.p_astar_one = std_normal_cdf(tau_oracle / params.sigma_x());
  report.h_astar = binary_entropy(report.p_astar_one);
  report.h_y = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * var_y);

  const int nodes = 4001;
  const double half_width = 8.0 * sy;
  const double h_below = differential_entropy(
      [&](double y) { return cond_density_y_given_side(y, StateSide::below, tau_oracle, params); },
      -half_width, half_width, nodes);
  const double h_above = differential_entropy(
      [&](double y) { return cond_density_y_given_side(y, StateSide::above, tau_oracle, params); },
      -half_width, half_width, nodes);
  report.h_y_given_astar =
      report.p_astar_one * h_below + (1.0 - report.p_astar_one) * h_above;

  report.h_astar_given_y_raw = report.h_astar - report.h_y + report.h_y_given_astar;
  report.h_astar_given_y = std::clamp(report.h_astar_given_y_raw, 0.0, report.h_astar);
  report.rho_upper_bound = 1.0 - inverse_binary_entropy(report.h_astar_given_y);
  return report;
}

}  // namespace gg
