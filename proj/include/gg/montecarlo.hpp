#pragma once

// Seeded forward simulation of the game: the independent oracle used to
// validate the quadrature-based quantities and to estimate efficiency and
// utility for arbitrary threshold profiles.
//
// Randomness is counter-based: draw k of sample substream i depends only on
// (seed, i, k), so reports are bit-identical for identical configurations and
// independent of any batching of the sample loop.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gg/game.hpp"

namespace gg {

// SplitMix64 finalizer (Steele, Lea & Flood, public domain).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Counter-based substream: value k of stream i is
//   splitmix64_mix(splitmix64_mix(seed + gamma*(i+1)) + gamma*(k+1)).
// Gaussian deviates come from Box-Muller on consecutive uniforms.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(splitmix64_mix(seed + kGoldenGamma * (stream + 1))) {}

  // uniform on (0,1), 53-bit resolution, never exactly 0 or 1
  double uniform01() {
    const std::uint64_t bits = splitmix64_mix(base_ + kGoldenGamma * (++counter_));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SimConfig {
  long long n_samples = 1'000'000;
  int n_agents_effective = 10'000;  // finite proxy when N is infinite
  std::uint64_t seed = 0;
};

struct SimReport {
  double empirical_rho = 0.0;
  double rho_std_error = 0.0;
  double empirical_utility = 0.0;
  double utility_std_error = 0.0;
  long long n_samples = 0;
  std::string rng_algorithm;
};

namespace detail {

struct Welford {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / (n - 1) / n);
  }
};

}  // namespace detail

// Simulates n_samples independent rounds: draw X ~ N(0, sigma_x^2), give each
// of the d agents the signal Y_j = X + Z_j, apply the thresholds, and record
// agent 1's utility and its agreement with the oracle action 1(X <= tau_oracle).
inline SimReport simulate(const PolicyProfile& profile, double tau_oracle,
                          const GameParams& params, const SimConfig& cfg) {
  if (!(params.sigma_z_sq() > 0.0)) {
    throw std::domain_error("simulate: sigma_z_sq must be positive");
  }
  if (cfg.n_samples < 1) throw std::invalid_argument("simulate: n_samples must be >= 1");
  if (cfg.n_agents_effective < 2) {
    throw std::invalid_argument("simulate: n_agents_effective must be >= 2");
  }
  const int d = params.n_agents().is_infinite() ? cfg.n_agents_effective
                                                : params.n_agents().value();
  if (profile.size() != d) {
    throw std::invalid_argument("simulate: profile length must equal the effective agent count");
  }
  // Finite proxy parameters so the exact finite-N utility applies also in the
  // mean-field case.
  const GameParams eff(AgentCount(d), params.lambda(), params.sigma_x_sq(), params.sigma_z_sq());
  const BenefitSpec benefit = BenefitSpec::linear(params.lambda(), d);
  const double sx = params.sigma_x();
  const double sz = params.sigma_z();

  detail::Welford rho_acc;
  detail::Welford util_acc;
  for (long long i = 0; i < cfg.n_samples; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    const double x = sx * rng.normal();
    int a1 = 0;
    int engaged_others = 0;
    for (int j = 0; j < d; ++j) {
      const double y = x + sz * rng.normal();
      const int a = y <= profile[j] ? 1 : 0;
      if (j == 0) {
        a1 = a;
      } else {
        engaged_others += a;
      }
    }
    const double g1 = static_cast<double>(engaged_others) / (d - 1);
    MassVector others({1.0 - g1, g1}, d - 1);
    util_acc.add(utility(a1, others, x, benefit, eff));
    const int a_star = x <= tau_oracle ? 1 : 0;
    rho_acc.add(a1 == a_star ? 1.0 : 0.0);
  }

  SimReport report;
  report.empirical_rho = rho_acc.mean;
  report.rho_std_error = rho_acc.std_error();
  report.empirical_utility = util_acc.mean;
  report.utility_std_error = util_acc.std_error();
  report.n_samples = cfg.n_samples;
  report.rng_algorithm =
      "splitmix64 counter-based + Box-Muller; substream i: mix(seed + 0x9E3779B97F4A7C15*(i+1))";
  return report;
}

inline SimReport simulate(double tau, double tau_oracle, const GameParams& params,
                          const SimConfig& cfg) {
  const int d = params.n_agents().is_infinite() ? cfg.n_agents_effective
                                                : params.n_agents().value();
  return simulate(PolicyProfile::homogeneous(tau, d), tau_oracle, params, cfg);
}

}  // namespace gg
