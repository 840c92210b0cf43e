#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "aec/errors.hpp"
#include "aec/palette.hpp"

namespace aec {

/// Parameters shared by the generating-function machinery. q = 1 - e^(-1/gamma)
/// is the base of the tree weights; 0 < q < 1 for every positive gamma.
struct BoundParams {
  double gamma = 0.0;
  int delta = 0;
  int n_colors = 0;
  int quota = 0;
  double q = 0.0;
};

inline BoundParams make_bound_params(double gamma, int delta) {
  BoundParams p;
  p.gamma = gamma;
  p.delta = delta;
  p.n_colors = num_colors(gamma, delta);
  p.quota = quota(gamma, delta);
  p.q = 1.0 - std::exp(-1.0 / gamma);
  return p;
}

/// Tree weight w_k = (1/gamma)(1 - e^(-1/gamma))^(2k-3) for an internal
/// vertex whose cycle has 2k edges.
inline double weight_wk(double gamma, int k) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (k < 3) throw input_error("weights are defined for k >= 3");
  const double q = 1.0 - std::exp(-1.0 / gamma);
  return (1.0 / gamma) * std::pow(q, 2 * k - 3);
}

/// phi_E(x) = sum_{k>=3} w_k (1+x)^(2k-2), in closed form
/// (1/gamma) q^3 (1+x)^4 / (1 - q^2 (1+x)^2). Defined for x >= 0 with
/// q(1+x) < 1 (the series' radius of convergence).
inline double phi_e(double gamma, double x) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (x < 0) throw input_error("phi_E needs x >= 0");
  const double q = 1.0 - std::exp(-1.0 / gamma);
  const double y = 1.0 + x;
  if (q * y >= 1.0)
    throw input_error("phi_E domain violation: q(1+x) = " +
                      std::to_string(q * y) + " >= 1");
  return (1.0 / gamma) * q * q * q * y * y * y * y /
         (1.0 - q * q * y * y);
}

/// Truncated-series evaluation of phi_E, for cross-checking the closed form.
/// Terms are accumulated multiplicatively (ratio q^2 (1+x)^2 < 1), which
/// avoids the 0 * inf that separate pow calls produce at large k.
inline double phi_e_series(double gamma, double x, int terms) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  const double q = 1.0 - std::exp(-1.0 / gamma);
  const double y = 1.0 + x;
  double term = weight_wk(gamma, 3) * y * y * y * y;  // k = 3
  const double ratio = q * q * y * y;
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= ratio;
  }
  return sum;
}

struct RhoResult {
  double rho = 0.0;
  double xstar = 0.0;
};

/// rho_gamma = min_{x>0} phi_E(x)/x over the domain 0 < x < 1/q - 1. The
/// objective diverges at both ends, so an interior minimum exists; a
/// 1000-point grid scan locates the basin (guarding against
/// non-unimodality) and golden-section refines it to 1e-10 on x.
inline RhoResult rho(double gamma) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  const double q = 1.0 - std::exp(-1.0 / gamma);
  const double hi = 1.0 / q - 1.0;
  auto objective = [&](double x) { return phi_e(gamma, x) / x; };

  const int grid = 1000;
  int best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid; ++i) {
    const double x = hi * i / (grid + 1);
    const double v = objective(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = hi * (best - 1) / (grid + 1);
  double b = hi * (best + 1) / (grid + 1);
  if (a <= 0.0) a = hi / (grid + 1) * 1e-6;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;  // 1/golden ratio
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double xstar = (a + b) / 2.0;
  return {objective(xstar), xstar};
}

/// Smallest gamma on the bisection grid over [1.0, 3.0] with rho(gamma) < 1,
/// to bracket width tol. Nested bisection: shrinking tol never increases the
/// result.
inline double gamma_threshold(double tol) {
  if (!(tol > 0)) throw input_error("tolerance must be positive");
  double lo = 1.0, hi = 3.0;
  if (rho(lo).rho < 1.0 || rho(hi).rho >= 1.0)
    throw input_error(
        "threshold bracket failure: rho is not above 1 at gamma=1 and below "
        "1 at gamma=3");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid).rho < 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace detail {

/// c = a * b on truncated power series (index = degree), degree <= nmax.
inline std::vector<double> series_mul(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      int nmax) {
  std::vector<double> out(nmax + 1, 0.0);
  for (int i = 0; i <= nmax; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= nmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// phi_E(W) as a truncated series in z, for W a series with W[0] = 0:
/// (1/gamma) q^3 (1+W)^4 / (1 - q^2 (1+W)^2), expanded by series division.
inline std::vector<double> series_phi_of(const std::vector<double>& w,
                                         double gamma, double q, int nmax) {
  std::vector<double> one_plus = w;
  one_plus[0] = 1.0;
  const auto sq = series_mul(one_plus, one_plus, nmax);
  const auto quad = series_mul(sq, sq, nmax);
  std::vector<double> denom(nmax + 1, 0.0);
  for (int i = 0; i <= nmax; ++i) denom[i] = -q * q * sq[i];
  denom[0] += 1.0;
  // invert denom (constant term 1 - q^2 > 0), then multiply
  std::vector<double> inv(nmax + 1, 0.0);
  inv[0] = 1.0 / denom[0];
  for (int n = 1; n <= nmax; ++n) {
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) acc += denom[i] * inv[n - i];
    inv[n] = -acc / denom[0];
  }
  auto out = series_mul(quad, inv, nmax);
  const double scale = (1.0 / gamma) * q * q * q;
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace detail

/// Coefficients Q_0..Q_nmax of the weighted-tree counting sequence, i.e. of
/// W(z) = z * phi_E(W(z)) with Q_0 = 1. Fixed-point iteration on truncated
/// series: the degree-n coefficient depends only on lower degrees, so it
/// stabilizes after n rounds and the iteration stops when nothing changes.
inline std::vector<double> q_sequence(double gamma, int nmax) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (nmax < 0) throw input_error("nmax must be nonnegative");
  const double q = 1.0 - std::exp(-1.0 / gamma);
  std::vector<double> w(nmax + 1, 0.0);
  for (int round = 0; round <= nmax + 1; ++round) {
    const auto phi = detail::series_phi_of(w, gamma, q, nmax);
    std::vector<double> next(nmax + 1, 0.0);
    for (int n = 1; n <= nmax; ++n) next[n] = phi[n - 1];
    if (next == w) break;
    w = std::move(next);
  }
  for (double v : w)
    if (!std::isfinite(v))
      throw std::overflow_error(
          "Q_n overflowed; rho(gamma) is likely >= 1 for this gamma and nmax "
          "is too large");
  w[0] = 1.0;  // Q_0
  return w;
}

/// rho, its minimizer, and the Q_n prefix in one bundle. When rho < 1 the
/// probability of an m-edge run lasting n steps is at most (n+1)^m rho^n
/// (an m-fold convolution of the Q sequence); that consequence stays
/// documentation, nothing samples it exactly.
struct SeriesBound {
  std::vector<double> qn;
  double rho = 0.0;
  double xstar = 0.0;
};

inline SeriesBound series_bound(double gamma, int nmax) {
  SeriesBound sb;
  const auto r = rho(gamma);
  sb.rho = r.rho;
  sb.xstar = r.xstar;
  sb.qn = q_sequence(gamma, nmax);
  return sb;
}

}  // namespace aec
