#pragma once

// Domain types of the homogeneous coordination game: model parameters,
// benefit functions, empirical action masses, threshold policy profiles, and
// the exact finite-N utility / coordination structure.
//
// Actions are encoded 0 = safe, 1 = risky. All types are immutable after
// construction and every operation is a pure function.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gg/numerics.hpp"

namespace gg {

// Number of players; either a finite N >= 2 or the symbolic mean-field limit.
class AgentCount {
 public:
  explicit AgentCount(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("AgentCount: n_agents must be >= 2");
  }
  static AgentCount infinite() { return AgentCount(kInfiniteTag{}); }

  bool is_infinite() const { return n_ == 0; }
  int value() const {
    if (is_infinite()) {
      throw std::logic_error("AgentCount: finite value requested for infinite count");
    }
    return n_;
  }
  // (N-1)/N, taken as 1 in the mean-field limit.
  double ratio_others() const {
    return is_infinite() ? 1.0 : (n_ - 1.0) / n_;
  }
  friend bool operator==(const AgentCount&, const AgentCount&) = default;

 private:
  struct kInfiniteTag {};
  explicit AgentCount(kInfiniteTag) : n_(0) {}
  int n_;
};

class GameParams {
 public:
  GameParams(AgentCount n_agents, double lambda, double sigma_x_sq, double sigma_z_sq)
      : n_(n_agents), lambda_(lambda), sigma_x_sq_(sigma_x_sq), sigma_z_sq_(sigma_z_sq) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("GameParams: lambda must be a positive real");
    }
    if (!(sigma_x_sq > 0.0) || !std::isfinite(sigma_x_sq)) {
      throw std::invalid_argument("GameParams: sigma_x_sq must be a positive real");
    }
    if (!(sigma_z_sq >= 0.0) || !std::isfinite(sigma_z_sq)) {
      throw std::invalid_argument("GameParams: sigma_z_sq must be a nonnegative real");
    }
  }

  const AgentCount& n_agents() const { return n_; }
  double lambda() const { return lambda_; }
  double sigma_x_sq() const { return sigma_x_sq_; }
  double sigma_z_sq() const { return sigma_z_sq_; }

  double sigma_x() const { return std::sqrt(sigma_x_sq_); }
  double sigma_z() const { return std::sqrt(sigma_z_sq_); }

  // alpha = sigma_x^2 / (sigma_x^2 + sigma_z^2), in (0,1]
  double alpha() const { return sigma_x_sq_ / (sigma_x_sq_ + sigma_z_sq_); }
  // sigma_tilde^2 = alpha * sigma_z^2 (variance of the auxiliary V)
  double sigma_tilde_sq() const { return alpha() * sigma_z_sq_; }
  // lambda (N-1)/N, the coefficient of the homogeneous best-response equation
  double br_coeff() const { return lambda_ * n_.ratio_others(); }

 private:
  AgentCount n_;
  double lambda_;
  double sigma_x_sq_;
  double sigma_z_sq_;
};

// Benefit function b : [0, N-1] -> R+, linear by default. Custom functions
// must be nonnegative and strictly increasing; this is validated on a
// 1000-point grid (steps below 1e-12 count as flat and are rejected).
class BenefitSpec {
 public:
  static BenefitSpec linear(double lambda, int n_agents) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("BenefitSpec: lambda must be a positive real");
    }
    if (n_agents < 2) throw std::invalid_argument("BenefitSpec: n_agents must be >= 2");
    return BenefitSpec(lambda, n_agents);
  }

  static BenefitSpec custom(std::function<double(double)> b, int n_agents) {
    if (n_agents < 2) throw std::invalid_argument("BenefitSpec: n_agents must be >= 2");
    if (!b) throw std::invalid_argument("BenefitSpec: empty benefit function");
    const int grid = 1000;
    const double top = n_agents - 1.0;
    double prev = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double x = top * i / (grid - 1);
      const double v = b(x);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("BenefitSpec: benefit function must be finite and nonnegative");
      }
      if (i > 0 && v - prev <= 1e-12) {
        throw std::invalid_argument("BenefitSpec: benefit function must be strictly increasing");
      }
      prev = v;
    }
    return BenefitSpec(std::move(b), n_agents);
  }

  double operator()(double xi) const {
    return linear_ ? lambda_ * xi / n_agents_ : fn_(xi);
  }
  bool is_linear() const { return linear_; }
  int n_agents() const { return n_agents_; }
  double domain_max() const { return n_agents_ - 1.0; }

 private:
  BenefitSpec(double lambda, int n) : linear_(true), lambda_(lambda), n_agents_(n) {}
  BenefitSpec(std::function<double(double)> f, int n)
      : linear_(false), n_agents_(n), fn_(std::move(f)) {}

  bool linear_;
  double lambda_ = 0.0;
  int n_agents_;
  std::function<double(double)> fn_;
};

// Empirical mass of a finite action profile: masses[l] is the proportion of
// the d underlying agents playing action l.
class MassVector {
 public:
  MassVector(std::vector<double> masses, int agent_count)
      : masses_(std::move(masses)), agent_count_(agent_count) {
    if (masses_.empty()) throw std::invalid_argument("MassVector: empty mass vector");
    if (agent_count_ < 1) throw std::invalid_argument("MassVector: agent_count must be >= 1");
    double sum = 0.0;
    for (double m : masses_) {
      if (!(m >= 0.0)) throw std::invalid_argument("MassVector: masses must be nonnegative");
      const double scaled = m * agent_count_;
      if (std::abs(scaled - std::round(scaled)) > 1e-9) {
        throw std::invalid_argument("MassVector: each mass must be a multiple of 1/agent_count");
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("MassVector: masses must sum to 1");
    }
  }

  int action_count() const { return static_cast<int>(masses_.size()); }
  int agent_count() const { return agent_count_; }
  double operator[](int a) const { return masses_.at(a); }
  const std::vector<double>& masses() const { return masses_; }

 private:
  std::vector<double> masses_;
  int agent_count_;
};

inline MassVector empirical_mass(const std::vector<int>& actions, int action_count) {
  if (actions.empty()) throw std::invalid_argument("empirical_mass: empty action vector");
  if (action_count < 1) throw std::invalid_argument("empirical_mass: action_count must be >= 1");
  std::vector<double> counts(action_count, 0.0);
  for (int a : actions) {
    if (a < 0 || a >= action_count) {
      throw std::invalid_argument("empirical_mass: action out of range");
    }
    counts[a] += 1.0;
  }
  const double d = static_cast<double>(actions.size());
  for (double& c : counts) c /= d;
  return MassVector(std::move(counts), static_cast<int>(actions.size()));
}

// Per-agent threshold vector (units of the state X).
class PolicyProfile {
 public:
  explicit PolicyProfile(std::vector<double> thresholds) : taus_(std::move(thresholds)) {
    if (taus_.empty()) throw std::invalid_argument("PolicyProfile: empty threshold vector");
    for (double t : taus_) {
      if (!std::isfinite(t)) throw std::invalid_argument("PolicyProfile: thresholds must be finite");
    }
  }
  static PolicyProfile homogeneous(double tau, int n_agents) {
    if (n_agents < 1) throw std::invalid_argument("PolicyProfile: n_agents must be >= 1");
    return PolicyProfile(std::vector<double>(n_agents, tau));
  }

  int size() const { return static_cast<int>(taus_.size()); }
  double operator[](int i) const { return taus_.at(i); }
  const std::vector<double>& thresholds() const { return taus_; }

 private:
  std::vector<double> taus_;
};

// u(a_i, g, x) = a_i (b((N-1) g_1) - x), evaluated through the empirical mass
// of the N-1 opponents.
inline double utility(int a_i, const MassVector& mass_minus_i, double x, const BenefitSpec& b,
                      const GameParams& params) {
  if (a_i != 0 && a_i != 1) throw std::invalid_argument("utility: action must be 0 or 1");
  if (mass_minus_i.action_count() != 2) {
    throw std::invalid_argument("utility: mass vector must be binary (M = 2)");
  }
  const int n = params.n_agents().value();
  if (mass_minus_i.agent_count() != n - 1) {
    throw std::invalid_argument("utility: mass vector must describe the N-1 opponents");
  }
  if (b.n_agents() != n) {
    throw std::invalid_argument("utility: benefit function and params disagree on N");
  }
  if (a_i == 0) return 0.0;
  return b((n - 1.0) * mass_minus_i[1]) - x;
}

struct CoordinatingAction {
  int action;     // 0 = safe, 1 = risky
  double cutoff;  // minimal majority share c*(x)
};

// The coordinating action(s) for state x together with their majority
// cutoffs. Outside (b(0), b(N-1)) a single action coordinates with cutoff 0;
// inside the band both do, with cutoffs located by bisection:
//   c1* = min{ q : b(q (N-1)) >= x },  c0* = max{ q : b((1-q)(N-1)) >= x }.
inline std::vector<CoordinatingAction> coordinating_action_set(double x, const BenefitSpec& b,
                                                               const GameParams& params) {
  if (!std::isfinite(x)) throw std::invalid_argument("coordinating_action_set: x must be finite");
  const int n = params.n_agents().value();
  if (b.n_agents() != n) {
    throw std::invalid_argument("coordinating_action_set: benefit and params disagree on N");
  }
  const double d = n - 1.0;
  const double b_lo = b(0.0);
  const double b_hi = b(d);
  if (x <= b_lo) return {{1, 0.0}};
  if (x >= b_hi) return {{0, 0.0}};
  const double c1 =
      find_root_bracketed([&](double q) { return b(q * d) - x; }, 0.0, 1.0, 1e-10);
  const double c0 =
      find_root_bracketed([&](double q) { return b((1.0 - q) * d) - x; }, 0.0, 1.0, 1e-10);
  return {{1, std::clamp(c1, 0.0, 1.0)}, {0, std::clamp(c0, 0.0, 1.0)}};
}

struct CoordinationCounterexample {
  double x;
  int best_action;
  double cutoff;
  std::vector<int> opponent_actions;
  double u_best;
  double u_other;
};

struct CoordinationCheckReport {
  bool passed = true;
  long long profiles_checked = 0;
  std::optional<CoordinationCounterexample> counterexample;
};

// Exhaustively checks the coordination condition: for every x on the grid and
// every coordinating (a*, c*), any opponent profile whose mass puts a* in the
// majority with share >= c* must make a* a best reply. Enumerates all 2^(N-1)
// opponent profiles, so N is capped at 12.
inline CoordinationCheckReport verify_coordination_property(const BenefitSpec& b,
                                                            const GameParams& params,
                                                            const std::vector<double>& x_grid) {
  const int n = params.n_agents().value();
  if (n > 12) {
    throw std::invalid_argument(
        "verify_coordination_property: exhaustive enumeration capped at N <= 12");
  }
  const int d = n - 1;
  CoordinationCheckReport report;
  for (double x : x_grid) {
    for (const CoordinatingAction& ca : coordinating_action_set(x, b, params)) {
      for (std::uint32_t profile = 0; profile < (1u << d); ++profile) {
        const int k = std::popcount(profile);
        const double g1 = static_cast<double>(k) / d;
        const double g_star = ca.action == 1 ? g1 : 1.0 - g1;
        if (g_star < 0.5 || g_star < ca.cutoff) continue;
        MassVector mass({1.0 - g1, g1}, d);
        const double u_best = utility(ca.action, mass, x, b, params);
        const double u_other = utility(1 - ca.action, mass, x, b, params);
        ++report.profiles_checked;
        if (u_best < u_other - 1e-9) {
          std::vector<int> actions(d);
          for (int j = 0; j < d; ++j) actions[j] = (profile >> j) & 1u;
          report.passed = false;
          report.counterexample =
              CoordinationCounterexample{x, ca.action, ca.cutoff, std::move(actions), u_best, u_other};
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace gg
