#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "skewmc/rng.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Unnormalized target on R^dim. log_density returns -inf exactly where the
/// density vanishes, never NaN. The gradient is optional and, when present,
/// must match finite differences of log_density (the verify module has the
/// checker).
struct TargetDensity {
  int dim = 0;
  std::function<double(const Vec&)> log_density;
  std::function<Vec(const Vec&)> gradient;  // empty when unavailable

  bool has_gradient() const { return static_cast<bool>(gradient); }

  double log_at(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("dimension mismatch");
    return log_density(x);
  }

  Vec grad_at(const Vec& x) const {
    if (!has_gradient()) throw std::invalid_argument("target has no gradient");
    return gradient(x);
  }
};

/// Auxiliary momentum density phi. The symmetric flag asserts
/// phi(p) = phi(-p); samplers that rely on it check the flag at
/// construction. is_standard_normal gates the AR(1) partial refresh, which
/// preserves only the Gaussian.
struct MomentumDensity {
  int dim = 0;
  std::function<double(const Vec&)> log_density;
  std::function<Vec(Rng&)> sample;
  bool symmetric = false;
  bool is_standard_normal = false;

  static MomentumDensity standard_normal(int dim) {
    MomentumDensity phi;
    phi.dim = dim;
    phi.log_density = [](const Vec& p) { return -0.5 * dot(p, p); };
    phi.sample = [dim](Rng& rng) { return rng.normal_vec(dim); };
    phi.symmetric = true;
    phi.is_standard_normal = true;
    return phi;
  }
};

/// A point of the extended space: position, optional momentum, optional
/// direction in {-1, +1}.
struct ExtendedState {
  Vec x;
  std::optional<Vec> p;
  std::optional<int> v;

  ExtendedState() = default;
  explicit ExtendedState(Vec pos) : x(std::move(pos)) {}
  ExtendedState(Vec pos, Vec mom) : x(std::move(pos)), p(std::move(mom)) {}
  ExtendedState(Vec pos, Vec mom, int dir) : x(std::move(pos)), p(std::move(mom)), v(dir) {}
};

inline ExtendedState momentum_flip(const ExtendedState& z) {
  if (!z.p) throw std::invalid_argument("state has no momentum");
  ExtendedState out = z;
  for (auto& c : *out.p) c = -c;
  return out;
}

inline ExtendedState direction_flip(const ExtendedState& z) {
  if (!z.v) throw std::invalid_argument("state has no direction");
  ExtendedState out = z;
  out.v = -*z.v;
  return out;
}

/// log of the extended density mu(x, p) = pi0(x) * phi(p); -inf absorbs.
inline double log_mu(const TargetDensity& target, const MomentumDensity& phi, const Vec& x,
                     const Vec& p) {
  if (static_cast<int>(x.size()) != target.dim || static_cast<int>(p.size()) != phi.dim)
    throw std::invalid_argument("dimension mismatch");
  const double lx = target.log_density(x);
  if (lx == kNegInf) return kNegInf;
  const double lp = phi.log_density(p);
  if (lp == kNegInf) return kNegInf;
  return lx + lp;
}

enum class AcceptanceKind { metropolis, barker, custom };

/// Acceptance function a : R+ -> [0,1] with a(0) = 0 and t*a(1/t) = a(t).
/// Metropolis min(1,t) and Barker t/(1+t) ship; other solutions of the
/// identity go through the custom hook (the identity is then the caller's
/// responsibility, checkable with the verify module).
struct AcceptanceFunction {
  AcceptanceKind kind = AcceptanceKind::metropolis;
  std::function<double(double)> custom_fn;

  static AcceptanceFunction metropolis() { return {AcceptanceKind::metropolis, {}}; }
  static AcceptanceFunction barker() { return {AcceptanceKind::barker, {}}; }
  static AcceptanceFunction custom(std::function<double(double)> fn) {
    return {AcceptanceKind::custom, std::move(fn)};
  }
};

/// a(t) for a nonnegative ratio t. NaN is rejected; t = +inf maps to the
/// limit value 1 for both built-in kinds.
inline double acceptance_value(const AcceptanceFunction& fn, double t) {
  if (std::isnan(t) || t < 0.0) throw std::invalid_argument("invalid ratio");
  switch (fn.kind) {
    case AcceptanceKind::metropolis:
      return std::min(1.0, t);
    case AcceptanceKind::barker:
      if (std::isinf(t)) return 1.0;
      return t / (1.0 + t);
    case AcceptanceKind::custom:
      return std::min(1.0, std::max(0.0, fn.custom_fn(t)));
  }
  return 0.0;
}

/// a(exp(log_t)) computed without leaving log space until the final clamp,
/// so Eq.-(9)/(13)-style ratios cannot overflow.
inline double acceptance_value_log(const AcceptanceFunction& fn, double log_t) {
  if (std::isnan(log_t)) throw std::invalid_argument("invalid ratio");
  switch (fn.kind) {
    case AcceptanceKind::metropolis:
      return std::exp(std::min(0.0, log_t));
    case AcceptanceKind::barker:
      // t/(1+t) = 1/(1 + exp(-log t))
      if (log_t == kNegInf) return 0.0;
      if (log_t == kInf) return 1.0;
      return 1.0 / (1.0 + std::exp(-log_t));
    case AcceptanceKind::custom:
      return acceptance_value(fn, std::exp(log_t));
  }
  return 0.0;
}

enum class InvolutionKind { identity, momentum_flip, direction_flip, custom };

/// The involution s with s(s(z)) = z. Built-ins only negate components, so
/// they are exact self-inverses; custom involutions carry the caller's
/// assertion of the property (the verify module can test it; per-call
/// re-verification would double every map evaluation).
struct Involution {
  InvolutionKind kind = InvolutionKind::identity;
  std::function<ExtendedState(const ExtendedState&)> custom_apply;

  ExtendedState operator()(const ExtendedState& z) const {
    switch (kind) {
      case InvolutionKind::identity:
        return z;
      case InvolutionKind::momentum_flip:
        return skewmc::momentum_flip(z);
      case InvolutionKind::direction_flip:
        return skewmc::direction_flip(z);
      case InvolutionKind::custom:
        return custom_apply(z);
    }
    return z;
  }

  static Involution identity() { return {InvolutionKind::identity, {}}; }
  static Involution momentum_flip() { return {InvolutionKind::momentum_flip, {}}; }
  static Involution direction_flip() { return {InvolutionKind::direction_flip, {}}; }
  static Involution custom(std::function<ExtendedState(const ExtendedState&)> fn) {
    return {InvolutionKind::custom, std::move(fn)};
  }
};

}  // namespace skewmc
