#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/coupling.hpp"
#include "skewmc/l2hmc.hpp"
#include "skewmc/leapfrog.hpp"
#include "skewmc/rng.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Bounded smooth stand-in for a neural transform: u -> scale * tanh(W u + b)
/// componentwise. Its Lipschitz constant is bounded by scale * ||W||_F
/// (tanh' <= 1 and the spectral norm is below the Frobenius norm), so
/// specs built from these maps carry a provable NICE2 certificate.
struct TanhMap {
  Mat w;
  Vec bias;
  double scale = 1.0;

  Vec operator()(const Vec& u) const {
    Vec out(static_cast<std::size_t>(w.rows));
    for (int i = 0; i < w.rows; ++i) {
      double s = bias[static_cast<std::size_t>(i)];
      for (int j = 0; j < w.cols; ++j) s += w(i, j) * u[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = scale * std::tanh(s);
    }
    return out;
  }

  double lipschitz_bound() const {
    double frob = 0.0;
    for (double v : w.a) frob += v * v;
    return scale * std::sqrt(frob);
  }
};

inline TanhMap random_tanh_map(int out_dim, int in_dim, double scale, Rng& rng) {
  TanhMap map;
  map.w = Mat(out_dim, in_dim);
  const double entry_scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (auto& v : map.w.a) v = entry_scale * rng.normal();
  map.bias.assign(static_cast<std::size_t>(out_dim), 0.0);
  for (auto& v : map.bias) v = 0.3 * rng.normal();
  map.scale = scale;
  return map;
}

/// NICE1 spec with random tanh drifts: N_{m+1-i} shares the map object of
/// M_i, so the structural condition holds exactly. h is set to h_factor
/// times the certified maximum c0 / (sqrt(L) m).
inline LeapfrogSpec random_nice_spec(int dim, int m, double h_factor, double scale,
                                     std::uint64_t seed) {
  Rng rng(seed);
  LeapfrogSpec spec;
  spec.dim = dim;
  spec.m = m;
  std::vector<TanhMap> maps;
  double worst_l = 0.0;
  for (int i = 0; i < m; ++i) {
    maps.push_back(random_tanh_map(dim, dim, scale, rng));
    worst_l = std::max(worst_l, maps.back().lipschitz_bound());
  }
  for (int i = 0; i < m; ++i) spec.drift_m.push_back(maps[static_cast<std::size_t>(i)]);
  for (int i = 0; i < m; ++i) spec.drift_n.push_back(maps[static_cast<std::size_t>(m - 1 - i)]);
  spec.lipschitz_L = worst_l;
  spec.h = h_factor * compute_c0() / (std::sqrt(std::max(worst_l, 1e-12)) * m);
  return spec;
}

/// A spec with independent random drifts on both sides; violates NICE1 with
/// probability one. Counterexample generator for the discrimination tests.
inline LeapfrogSpec random_non_nice_spec(int dim, int m, double h, double scale,
                                         std::uint64_t seed) {
  Rng rng(seed);
  LeapfrogSpec spec;
  spec.dim = dim;
  spec.m = m;
  double worst_l = 0.0;
  for (int i = 0; i < 2 * m; ++i) {
    TanhMap map = random_tanh_map(dim, dim, scale, rng);
    worst_l = std::max(worst_l, map.lipschitz_bound());
    (i < m ? spec.drift_m : spec.drift_n).push_back(std::move(map));
  }
  spec.lipschitz_L = worst_l;
  spec.h = h;
  return spec;
}

/// M = N = -x/2, the half-gradient of the standard normal. L = 1/2.
inline LeapfrogSpec harmonic_spec(int dim, int m, double h) {
  LeapfrogSpec spec;
  spec.dim = dim;
  spec.m = m;
  const MapFn half_pull = [](const Vec& x) { return -0.5 * x; };
  for (int i = 0; i < m; ++i) {
    spec.drift_m.push_back(half_pull);
    spec.drift_n.push_back(half_pull);
  }
  spec.h = h;
  spec.lipschitz_L = 0.5;
  return spec;
}

/// M = N = (1/2) grad log pi0: the composite Phi is the classical leapfrog
/// integrator for pi0. lipschitz_L stays unset unless the caller declares
/// one for the target at hand.
inline LeapfrogSpec gradient_spec(const TargetDensity& target, int m, double h) {
  if (!target.has_gradient()) throw std::invalid_argument("gradient_spec needs a gradient");
  LeapfrogSpec spec;
  spec.dim = target.dim;
  spec.m = m;
  const MapFn half_grad = [target](const Vec& x) { return 0.5 * target.gradient(x); };
  for (int i = 0; i < m; ++i) {
    spec.drift_m.push_back(half_grad);
    spec.drift_n.push_back(half_grad);
  }
  spec.h = h;
  return spec;
}

inline LeapfrogSpec zero_spec(int dim, int m, double h) {
  LeapfrogSpec spec;
  spec.dim = dim;
  spec.m = m;
  const MapFn zero = [dim](const Vec&) { return Vec(static_cast<std::size_t>(dim), 0.0); };
  for (int i = 0; i < m; ++i) {
    spec.drift_m.push_back(zero);
    spec.drift_n.push_back(zero);
  }
  spec.h = h;
  spec.lipschitz_L = 0.0;
  return spec;
}

namespace detail {

inline CouplingFn tanh_coupling_fn(int out_dim, int in_dim, double scale, Rng& rng) {
  auto map = std::make_shared<TanhMap>(random_tanh_map(out_dim, in_dim, scale, rng));
  return [map](const Vec& a, const Vec& b) { return (*map)(concat(a, b)); };
}

inline CouplingFn zero_coupling_fn(int out_dim) {
  return [out_dim](const Vec&, const Vec&) { return Vec(static_cast<std::size_t>(out_dim), 0.0); };
}

}  // namespace detail

/// K-block conditional coupling with random tanh scale/shift nets. The
/// conditioning position enters every net; splits alternate halves.
/// cond_dim is the dimension of the conditioning variable (usually the
/// position the momentum coupling is conditioned on).
inline CouplingSpec random_coupling_spec(int dim, int K, int cond_dim, double scale,
                                         std::uint64_t seed) {
  Rng rng(seed);
  CouplingSpec spec;
  spec.dim = dim;
  for (int b = 0; b < K; ++b) {
    CouplingBlock block;
    block.part1 = default_split(dim, b);
    const int d1 = static_cast<int>(block.part1.size());
    const int d2 = dim - d1;
    block.r1 = detail::tanh_coupling_fn(d1, d2 + cond_dim, scale, rng);
    block.m1 = detail::tanh_coupling_fn(d1, d2 + cond_dim, scale, rng);
    block.r2 = d2 > 0 ? detail::tanh_coupling_fn(d2, d1 + cond_dim, scale, rng)
                      : detail::zero_coupling_fn(0);
    block.m2 = d2 > 0 ? detail::tanh_coupling_fn(d2, d1 + cond_dim, scale, rng)
                      : detail::zero_coupling_fn(0);
    spec.blocks.push_back(std::move(block));
  }
  return spec;
}

/// K-block L2HMC transform with random tanh nets in all six slots.
inline L2hmcSpec random_l2hmc_spec(const TargetDensity& target, int K, double delta, double scale,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const int d = target.dim;
  L2hmcSpec spec;
  spec.dim = d;
  spec.delta = delta;
  spec.target = target;
  for (int b = 0; b < K; ++b) {
    L2hmcBlock block;
    const auto h_fn = [&](void) -> L2hmcHFn {
      auto map = std::make_shared<TanhMap>(random_tanh_map(d, d, scale, rng));
      return [map](const Vec& x) { return (*map)(x); };
    };
    block.r_h_pre = h_fn();
    block.m_h_pre = h_fn();
    block.r_h_post = h_fn();
    block.m_h_post = h_fn();
    block.part1 = default_split(d, b);
    const int d1 = static_cast<int>(block.part1.size());
    const int d2 = d - d1;
    block.r_f1 = detail::tanh_coupling_fn(d1, d2 + d, scale, rng);
    block.m_f1 = detail::tanh_coupling_fn(d1, d2 + d, scale, rng);
    block.r_f2 = d2 > 0 ? detail::tanh_coupling_fn(d2, d1 + d, scale, rng)
                        : detail::zero_coupling_fn(0);
    block.m_f2 = d2 > 0 ? detail::tanh_coupling_fn(d2, d1 + d, scale, rng)
                        : detail::zero_coupling_fn(0);
    spec.blocks.push_back(std::move(block));
  }
  return spec;
}

/// L2HMC spec with zero learnable nets: the R and M^H slots vanish and the
/// position shift is the plain drift M^F(., p) = 2 p restricted to the
/// split. With delta = h/2 each block is exactly one classical leapfrog
/// step of size h, so K blocks reproduce the size-h, K-step integrator.
inline L2hmcSpec l2hmc_leapfrog_spec(const TargetDensity& target, int K, double h) {
  const int d = target.dim;
  L2hmcSpec spec;
  spec.dim = d;
  spec.delta = 0.5 * h;
  spec.target = target;
  const L2hmcHFn zero_h = [d](const Vec&) { return Vec(static_cast<std::size_t>(d), 0.0); };
  for (int b = 0; b < K; ++b) {
    L2hmcBlock block;
    block.r_h_pre = zero_h;
    block.m_h_pre = zero_h;
    block.r_h_post = zero_h;
    block.m_h_post = zero_h;
    block.part1 = default_split(d, b);
    const std::vector<int> part1 = block.part1;
    const std::vector<int> part2 = detail::complement_of(part1, d);
    const int d1 = static_cast<int>(part1.size());
    const int d2 = d - d1;
    block.r_f1 = detail::zero_coupling_fn(d1);
    block.r_f2 = detail::zero_coupling_fn(d2);
    block.m_f1 = [part1](const Vec&, const Vec& p) {
      Vec out = detail::gather(p, part1);
      for (auto& c : out) c *= 2.0;
      return out;
    };
    block.m_f2 = [part2](const Vec&, const Vec& p) {
      Vec out = detail::gather(p, part2);
      for (auto& c : out) c *= 2.0;
      return out;
    };
    spec.blocks.push_back(std::move(block));
  }
  return spec;
}

}  // namespace skewmc
