#pragma once

// Beliefs, best responses, and Nash-equilibrium thresholds for the
// linear-benefit global game, plus the oracle and certainty-equivalent
// benchmark policies.
//
// All belief expectations require sigma_z_sq > 0; the noiseless limit is
// served by oracle_threshold alone.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gg/game.hpp"
#include "gg/numerics.hpp"

namespace gg {

// Posterior mean of X given Y = y: alpha * y.
inline double mmse_estimate(double y, const GameParams& params) {
  return params.alpha() * y;
}

namespace detail {
inline void require_noisy(const GameParams& params, const char* who) {
  if (!(params.sigma_z_sq() > 0.0)) {
    throw std::domain_error(std::string(who) +
                            ": sigma_z_sq must be positive (noiseless channel is degenerate)");
  }
}
}  // namespace detail

// pi(xi; tau) = E[ Phi((tau - sigma_tilde W - alpha xi) / sigma_z) ], W ~ N(0,1).
// Strictly decreasing in xi, strictly increasing in tau.
inline double belief_pi(double xi, double tau, const GameParams& params,
                        const QuadratureSpec& quad = {}) {
  detail::require_noisy(params, "belief_pi");
  const double alpha = params.alpha();
  const double st = std::sqrt(params.sigma_tilde_sq());
  const double sz = params.sigma_z();
  const double v = gaussian_expectation(
      [&](double w) { return std_normal_cdf((tau - st * w - alpha * xi) / sz); }, quad);
  return std::clamp(v, 0.0, 1.0);
}

// pi_ij(tau_j, y_i) = P(Y_j <= tau_j | Y_i = y_i), the expectation over the
// auxiliary V = sigma_tilde W. Same integral as belief_pi with (xi, tau)
// swapped into (y_i, tau_j).
inline double belief_pair(double tau_j, double y_i, const GameParams& params,
                          const QuadratureSpec& quad = {}) {
  detail::require_noisy(params, "belief_pair");
  const double alpha = params.alpha();
  const double st = std::sqrt(params.sigma_tilde_sq());
  const double sz = params.sigma_z();
  const double v = gaussian_expectation(
      [&](double w) { return std_normal_cdf((tau_j - st * w - alpha * y_i) / sz); }, quad);
  return std::clamp(v, 0.0, 1.0);
}

namespace detail {
// Root tolerance for threshold equations; tightened relative to the bracket
// so the fixed-point residual stays below 1e-9 * max(1, lambda).
inline double root_tol(double upper) { return 1e-13 * std::max(1.0, upper); }
}  // namespace detail

// Best response to a homogeneous profile with threshold tau: the unique
// xi* solving br_coeff * pi(xi*; tau) = alpha * xi*. The bracket
// [0, br_coeff/alpha] is valid because pi is clamped to [0,1] and the
// difference is strictly decreasing in xi.
inline double best_response_threshold(double tau, const GameParams& params,
                                      const QuadratureSpec& quad = {}) {
  detail::require_noisy(params, "best_response_threshold");
  const double br = params.br_coeff();
  const double alpha = params.alpha();
  const double upper = br / alpha;
  auto f = [&](double xi) { return br * belief_pi(xi, tau, params, quad) - alpha * xi; };
  try {
    return find_root_bracketed(f, 0.0, upper, detail::root_tol(upper));
  } catch (const BracketError& e) {
    throw std::runtime_error(
        "best_response_threshold: bracket failed unexpectedly (f_lo=" + std::to_string(e.f_lo) +
        ", f_hi=" + std::to_string(e.f_hi) + ", tau=" + std::to_string(tau) + ")");
  }
}

enum class NeMethod { direct_root, br_iteration };

struct NeSolution {
  double tau_star = 0.0;      // NE threshold from the direct root
  int iterations = 0;         // bisection steps of the direct root
  double residual = 0.0;      // |br_coeff * pi(tau*, tau*) - alpha tau*|
  NeMethod method = NeMethod::direct_root;
  double br_tau = 0.0;        // best-response iteration estimate
  int br_iterations = 0;
  bool br_converged = false;  // false flags non-convergence after 1e4 steps
  bool methods_agree = false; // |tau_star - br_tau| <= 1e-6
};

// Solves the fixed-point equation br_coeff * pi(tau; tau) = alpha * tau.
// Direct bisection on [0, br_coeff/alpha] is the primary method (the bracket
// has a guaranteed sign change); best-response iteration from the lower
// Lemma-type bound br_coeff/(2 alpha) runs as a cross-check.
inline NeSolution ne_threshold(const GameParams& params, const QuadratureSpec& quad = {}) {
  detail::require_noisy(params, "ne_threshold");
  const double br = params.br_coeff();
  const double alpha = params.alpha();
  const double upper = br / alpha;
  auto g = [&](double t) { return br * belief_pi(t, t, params, quad) - alpha * t; };

  NeSolution sol;
  sol.method = NeMethod::direct_root;
  sol.tau_star = find_root_bracketed(g, 0.0, upper, detail::root_tol(upper), &sol.iterations);
  sol.residual = std::abs(g(sol.tau_star));

  double t = br / (2.0 * alpha);
  while (sol.br_iterations < 10000) {
    const double next = best_response_threshold(t, params, quad);
    ++sol.br_iterations;
    const bool done = std::abs(next - t) <= 1e-10;
    t = next;
    if (done) {
      sol.br_converged = true;
      break;
    }
  }
  sol.br_tau = t;
  sol.methods_agree = std::abs(sol.tau_star - sol.br_tau) <= 1e-6;
  return sol;
}

// Componentwise best response to a heterogeneous threshold profile:
// component i is the root of (lambda/N) sum_{j != i} pi_ij(tau_j, xi) = alpha xi.
inline PolicyProfile br_map_heterogeneous(const PolicyProfile& taus, const GameParams& params,
                                          const QuadratureSpec& quad = {}) {
  detail::require_noisy(params, "br_map_heterogeneous");
  const int n = params.n_agents().value();
  if (taus.size() != n) {
    throw std::invalid_argument("br_map_heterogeneous: profile length must equal n_agents");
  }
  const double alpha = params.alpha();
  const double lam_over_n = params.lambda() / n;
  const double upper = params.br_coeff() / alpha;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    auto f = [&](double xi) {
      double belief_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        belief_sum += belief_pair(taus[j], xi, params, quad);
      }
      return lam_over_n * belief_sum - alpha * xi;
    };
    try {
      out[i] = find_root_bracketed(f, 0.0, upper, detail::root_tol(upper));
    } catch (const BracketError& e) {
      throw std::runtime_error("br_map_heterogeneous: bracket failed unexpectedly (f_lo=" +
                               std::to_string(e.f_lo) + ", f_hi=" + std::to_string(e.f_hi) + ")");
    }
  }
  return PolicyProfile(std::move(out));
}

// Diffuse-prior limit of the NE threshold, lambda/2 (1 - 1/N); the
// perfect-information benchmark policy is 1(x <= oracle_threshold).
inline double oracle_threshold(const GameParams& params) {
  return 0.5 * params.lambda() * params.n_agents().ratio_others();
}

// Certainty-equivalent signal threshold: the oracle rule applied to the MMSE
// estimate, i.e. 1(y <= (1 + sigma_z^2/sigma_x^2) lambda/2 (1 - 1/N)).
inline double ce_threshold(const GameParams& params) {
  return (1.0 + params.sigma_z_sq() / params.sigma_x_sq()) * 0.5 * params.lambda() *
         params.n_agents().ratio_others();
}

}  // namespace gg
