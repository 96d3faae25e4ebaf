#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skewmc/diffeo.hpp"
#include "skewmc/rng.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Generalized leapfrog: m blocks of
///   p_half = p + h*M_i(x),  x' = x + h*p_half,  p' = p_half + h*N_i(x'),
/// with arbitrary C^1 drift maps M_i, N_i in place of gradient kicks.
/// lipschitz_L is a user-declared common Lipschitz constant for all maps;
/// it gates the step bound and the fixed-point inversion and can be refuted
/// (never certified) by empirical_lipschitz below.
struct LeapfrogSpec {
  int dim = 0;
  int m = 0;
  double h = 0.0;
  std::vector<MapFn> drift_m;  // M_1..M_m
  std::vector<MapFn> drift_n;  // N_1..N_m
  std::optional<double> lipschitz_L;

  void validate() const {
    if (dim <= 0 || m <= 0 || h <= 0.0) throw std::invalid_argument("invalid leapfrog spec");
    if (static_cast<int>(drift_m.size()) != m || static_cast<int>(drift_n.size()) != m)
      throw std::invalid_argument("leapfrog spec needs m maps of each kind");
    if (lipschitz_L && *lipschitz_L < 0.0)
      throw std::invalid_argument("negative Lipschitz constant");
  }
};

/// One block F_i (i is 1-based). The block is volume preserving: its
/// log-Jacobian is identically 0.
inline std::pair<Vec, Vec> leapfrog_step(const LeapfrogSpec& spec, int i, const Vec& x,
                                         const Vec& p) {
  if (i < 1 || i > spec.m) throw std::invalid_argument("block index out of range");
  Vec p_half = p;
  axpy(spec.h, spec.drift_m[i - 1](x), p_half);
  Vec x_next = x;
  axpy(spec.h, p_half, x_next);
  Vec p_next = std::move(p_half);
  axpy(spec.h, spec.drift_n[i - 1](x_next), p_next);
  if (!all_finite(x_next) || !all_finite(p_next)) throw std::runtime_error("map diverged");
  return {std::move(x_next), std::move(p_next)};
}

inline std::pair<Vec, Vec> leapfrog_forward(const LeapfrogSpec& spec, Vec x, Vec p) {
  for (int i = 1; i <= spec.m; ++i) {
    auto [xn, pn] = leapfrog_step(spec, i, x, p);
    x = std::move(xn);
    p = std::move(pn);
  }
  return {std::move(x), std::move(p)};
}

/// Analytic block reversal: each F_i inverts in closed form.
inline std::pair<Vec, Vec> leapfrog_inverse(const LeapfrogSpec& spec, Vec x, Vec p) {
  for (int i = spec.m; i >= 1; --i) {
    Vec p_half = p;
    axpy(-spec.h, spec.drift_n[i - 1](x), p_half);
    Vec x_prev = x;
    axpy(-spec.h, p_half, x_prev);
    Vec p_prev = std::move(p_half);
    axpy(-spec.h, spec.drift_m[i - 1](x_prev), p_prev);
    x = std::move(x_prev);
    p = std::move(p_prev);
  }
  return {std::move(x), std::move(p)};
}

/// Pointwise NICE1 probe: N_{m+1-i} = M_i on sampled positions. A true
/// result is evidence, not proof; a false result is a certified violation.
inline bool nice1_holds(const LeapfrogSpec& spec, int n_samples = 8, double box = 2.0,
                        double tol = 1e-12) {
  Rng rng(0x5a17c0de);
  for (int s = 0; s < n_samples; ++s) {
    Vec x(static_cast<std::size_t>(spec.dim));
    for (auto& c : x) c = box * (2.0 * rng.uniform() - 1.0);
    for (int i = 1; i <= spec.m; ++i) {
      const Vec a = spec.drift_m[i - 1](x);
      const Vec b = spec.drift_n[spec.m - i](x);
      if (max_abs_diff(a, b) > tol) return false;
    }
  }
  return true;
}

/// Phi = F_m . ... . F_1 packaged as a Diffeo on R^{2d} (layout x ++ p).
/// Volume preservation is structural, so log_jac is the constant 0. When
/// the NICE1 probe passes, the inverse runs as s . Phi . s with s the
/// momentum flip; otherwise blocks are reversed analytically.
inline Diffeo leapfrog_compose(const LeapfrogSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  const bool nice1 = nice1_holds(spec);
  Diffeo out;
  out.dim = 2 * d;
  out.forward = [spec, d](const Vec& z) {
    Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
    auto [y, q] = leapfrog_forward(spec, std::move(x), std::move(p));
    return concat(y, q);
  };
  if (nice1) {
    out.inverse = [spec, d](const Vec& z) {
      Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
      auto [y, q] = leapfrog_forward(spec, std::move(x), -std::move(p));
      return concat(y, -q);
    };
  } else {
    out.inverse = [spec, d](const Vec& z) {
      Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
      auto [y, q] = leapfrog_inverse(spec, std::move(x), std::move(p));
      return concat(y, q);
    };
  }
  out.log_jac_forward = [](const Vec&) { return 0.0; };
  return out;
}

/// theta1(s) = 2 + s + s^2, the polynomial of the contraction estimate.
inline double theta1(double s) { return 2.0 + s + s * s; }

/// The unique root of exp(c*theta1(c)) = 2, i.e. c*(2 + c + c^2) = ln 2,
/// by bisection on [0, 1] to 1e-10.
inline double compute_c0() {
  const double target = std::log(2.0);
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (mid * theta1(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Step-size certificate h <= c0 / (sqrt(L) * m). L = 0 passes for any h.
inline bool step_bound_ok(double L, int m, double h) {
  if (L < 0.0 || m < 1 || h < 0.0) throw std::invalid_argument("negative step-bound input");
  if (L == 0.0) return true;
  return h <= compute_c0() / (std::sqrt(L) * m);
}

/// Lipschitz bound for p -> Theta_m(x, p):
/// (m/h) * {(1 + h sqrt(L) theta1(h sqrt(L)))^m - 1}. The contraction
/// constant of the fixed-point inversion is kappa = (h/m) * theta_bound.
inline double theta_bound(double L, double h, int m) {
  if (L < 0.0 || h < 0.0 || m < 1) throw std::invalid_argument("negative theta-bound input");
  if (L == 0.0) return 0.0;
  const double s = h * std::sqrt(L);
  return (m / h) * (std::pow(1.0 + s * theta1(s), m) - 1.0);
}

/// Theta_m(x1, p1) = sum_{i=1}^{m} (m+1-i) M_i(x_i) + sum_{i=1}^{m-1} (m-i)
/// N_i(x_{i+1}), accumulated along the leapfrog recursion. Satisfies
/// G_x(p) = x + m h p + h^2 Theta_m(x, p).
inline Vec theta_m(const LeapfrogSpec& spec, const Vec& x1, const Vec& p1) {
  Vec acc(x1.size(), 0.0);
  Vec x = x1, p = p1;
  for (int i = 1; i <= spec.m; ++i) {
    axpy(static_cast<double>(spec.m + 1 - i), spec.drift_m[i - 1](x), acc);
    auto [xn, pn] = leapfrog_step(spec, i, x, p);
    x = std::move(xn);
    p = std::move(pn);
    if (i <= spec.m - 1) axpy(static_cast<double>(spec.m - i), spec.drift_n[i - 1](x), acc);
  }
  return acc;
}

/// G_x(p) = proj_1 . Phi(x, p).
inline Vec g_forward(const LeapfrogSpec& spec, const Vec& x, const Vec& p) {
  return leapfrog_forward(spec, x, p).first;
}

/// Solves G_x(p) = y by the contraction
///   p <- (y - x)/(m h) - (h/m) Theta_m(x, p),
/// started from the zero-map solution p0 = (y - x)/(m h). Requires the
/// NICE2 certificate (declared L and step bound), which guarantees the
/// iteration is a contraction.
inline Vec g_inverse_fixed_point(const LeapfrogSpec& spec, const Vec& x, const Vec& y, double tol,
                                 int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (!spec.lipschitz_L || !step_bound_ok(*spec.lipschitz_L, spec.m, spec.h))
    throw std::runtime_error("step bound violated");
  const double mh = spec.m * spec.h;
  Vec p(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (y[i] - x[i]) / mh;
  for (int it = 0; it < max_iter; ++it) {
    const Vec residual = g_forward(spec, x, p) - y;
    if (norm(residual) <= tol) return p;
    const Vec theta = theta_m(spec, x, p);
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = (y[i] - x[i]) / mh - (spec.h / spec.m) * theta[i];
  }
  if (norm(g_forward(spec, x, p) - y) <= tol) return p;
  throw std::runtime_error("no convergence");
}

/// Empirical Lipschitz probe: max slope over random pairs in [-box, box]^d.
/// Can only refute a declared constant (returns the observed max).
inline double empirical_lipschitz(const MapFn& f, int dim, double box, int n_pairs, Rng& rng) {
  double worst = 0.0;
  for (int k = 0; k < n_pairs; ++k) {
    Vec u(static_cast<std::size_t>(dim)), w(static_cast<std::size_t>(dim));
    for (auto& c : u) c = box * (2.0 * rng.uniform() - 1.0);
    for (auto& c : w) c = box * (2.0 * rng.uniform() - 1.0);
    const double du = norm(u - w);
    if (du == 0.0) continue;
    worst = std::max(worst, norm(f(u) - f(w)) / du);
  }
  return worst;
}

}  // namespace skewmc
