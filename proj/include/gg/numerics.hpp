#pragma once

// Scalar numerics shared by the game-theoretic modules: Gaussian distribution
// functions, Gauss-Hermite / truncated-trapezoid expectations, binary and
// differential entropy, and bracketed bisection.
//
// Everything here is a pure function of its inputs and safe to call from any
// number of threads. The Gauss-Hermite rule cache is guarded by a mutex and
// grows monotonically.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gg {

// Thrown by find_root_bracketed when f(lo) and f(hi) have the same sign.
// Carries both endpoint values so callers can report the failed bracket.
struct BracketError : std::runtime_error {
  BracketError(const std::string& msg, double flo, double fhi)
      : std::runtime_error(msg), f_lo(flo), f_hi(fhi) {}
  double f_lo;
  double f_hi;
};

// Standard Gaussian CDF via the complementary error function.
// Absolute error is a few ulp, far below the 1e-12 contract.
inline double std_normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("std_normal_cdf: input must be finite");
  }
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
}

inline double normal_pdf(double x, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("normal_pdf: variance must be positive");
  }
  const double s = std::sqrt(variance);
  return std_normal_pdf((x - mean) / s) / s;
}

enum class QuadratureKind { gauss_hermite, trapezoid_truncated };

struct QuadratureSpec {
  int node_count = 96;
  QuadratureKind kind = QuadratureKind::gauss_hermite;
  double truncation_sigmas = 8.0;  // half-width for trapezoid grids

  QuadratureSpec() = default;
  QuadratureSpec(int nodes, QuadratureKind k, double trunc = 8.0)
      : node_count(nodes), kind(k), truncation_sigmas(trunc) {
    if (node_count < 2) {
      throw std::invalid_argument("QuadratureSpec: node_count must be >= 2");
    }
    if (!(truncation_sigmas >= 4.0)) {
      throw std::invalid_argument("QuadratureSpec: truncation_sigmas must be >= 4");
    }
  }
};

struct GaussHermiteRule {
  std::vector<double> nodes;    // roots of H_n, ascending
  std::vector<double> weights;  // for integral of exp(-t^2) f(t) dt
};

// Newton iteration on the orthonormal Hermite recurrence (weight exp(-t^2)).
// The orthonormal form keeps intermediates bounded for large n.
inline GaussHermiteRule compute_gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  std::vector<double> roots(m, 0.0);   // descending nonnegative roots
  std::vector<double> wts(m, 0.0);

  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("gauss_hermite: Newton iteration failed to converge");
    }
    roots[i] = z;
    wts[i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) roots[m - 1] = 0.0;  // middle root is exact by symmetry

  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = -roots[i];
    rule.nodes[n - 1 - i] = roots[i];
    rule.weights[i] = wts[i];
    rule.weights[n - 1 - i] = wts[i];
  }
  return rule;
}

inline const GaussHermiteRule& gauss_hermite_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, compute_gauss_hermite(n)).first;
  }
  return it->second;
}

// E[f(W)] for W ~ N(0,1). Gauss-Hermite by default; integrands of the form
// Phi(a*w + b) are entire, so convergence is spectral.
template <class F>
double gaussian_expectation(F&& f, const QuadratureSpec& spec = {}) {
  if (spec.node_count < 2) {
    throw std::invalid_argument("gaussian_expectation: node_count must be >= 2");
  }
  double acc = 0.0;
  if (spec.kind == QuadratureKind::gauss_hermite) {
    const GaussHermiteRule& rule = gauss_hermite_rule(spec.node_count);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = std::numbers::sqrt2 * rule.nodes[i];
      const double v = f(w);
      if (!std::isfinite(v)) {
        throw std::domain_error("gaussian_expectation: integrand non-finite at node " +
                                std::to_string(w));
      }
      acc += rule.weights[i] * v;
    }
    return acc * std::numbers::inv_sqrtpi;
  }
  // Truncated trapezoid on [-T, T]; mass outside is below 1e-4 for T >= 4
  // and below 1e-15 at the default T = 8.
  const int n = spec.node_count;
  const double t = spec.truncation_sigmas;
  const double h = 2.0 * t / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double w = -t + h * i;
    const double v = f(w);
    if (!std::isfinite(v)) {
      throw std::domain_error("gaussian_expectation: integrand non-finite at node " +
                              std::to_string(w));
    }
    const double trap = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += trap * v * std_normal_pdf(w);
  }
  return acc * h;
}

// h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binary_entropy: p must lie in [0,1]");
  }
  double acc = 0.0;
  if (p > 0.0) acc -= p * std::log2(p);
  if (p < 1.0) acc -= (1.0 - p) * std::log2(1.0 - p);
  return acc;
}

// Inverse of h on [0, 1/2], where it is strictly increasing. Plain bisection.
inline double inverse_binary_entropy(double hval) {
  if (!(hval >= 0.0 && hval <= 1.0)) {
    throw std::invalid_argument("inverse_binary_entropy: value must lie in [0,1]");
  }
  if (hval == 0.0) return 0.0;
  if (hval == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < hval) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Bisection on a sign-change bracket. Deterministic; tolerance is on the
// bracket width. Accepts an optional iteration counter.
template <class F>
double find_root_bracketed(F&& f, double lo, double hi, double tol, int* iterations = nullptr) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("find_root_bracketed: need finite lo < hi");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("find_root_bracketed: tol must be positive");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (iterations) *iterations = 0;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root_bracketed: f(lo) and f(hi) have the same sign (f_lo=" +
                           std::to_string(flo) + ", f_hi=" + std::to_string(fhi) + ")",
                       flo, fhi);
  }
  int count = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    const double fm = f(mid);
    ++count;
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  if (iterations) *iterations = count;
  return 0.5 * (lo + hi);
}

// -int density log2 density over [lo,hi] by composite trapezoid.
// Densities below 1e-300 contribute nothing (x log x -> 0); values below
// -1e-12 are rejected as invalid.
template <class F>
double differential_entropy(F&& density, double lo, double hi, int node_count) {
  if (!(lo < hi)) throw std::invalid_argument("differential_entropy: need lo < hi");
  if (node_count < 2) {
    throw std::invalid_argument("differential_entropy: node_count must be >= 2");
  }
  const double h = (hi - lo) / (node_count - 1);
  double acc = 0.0;
  for (int i = 0; i < node_count; ++i) {
    const double x = lo + h * i;
    const double d = density(x);
    if (d < -1e-12) {
      throw std::domain_error("differential_entropy: negative density at x = " +
                              std::to_string(x));
    }
    if (d < 1e-300) continue;
    const double trap = (i == 0 || i == node_count - 1) ? 0.5 : 1.0;
    acc += trap * (-d * std::log2(d));
  }
  return acc * h;
}

// Composite Simpson over [a,b]; node_count is rounded up to the next odd
// value >= 3.
template <class F>
double integrate_simpson(F&& f, double a, double b, int node_count) {
  if (!(a < b)) throw std::invalid_argument("integrate_simpson: need a < b");
  int n = std::max(3, node_count);
  if (n % 2 == 0) ++n;
  const double h = (b - a) / (n - 1);
  double acc = f(a) + f(b);
  for (int i = 1; i < n - 1; ++i) {
    acc += f(a + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

}  // namespace gg
