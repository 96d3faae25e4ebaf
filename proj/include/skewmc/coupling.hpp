#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Map of (complementary split, conditioning position) -> split-sized vector.
using CouplingFn = std::function<Vec(const Vec&, const Vec&)>;

/// One affine coupling block acting on p given x:
///   p'_1 = p_1 . exp(R_1(p_2, x)) + M_1(p_2, x)
///   p'_2 = p_2 . exp(R_2(p'_1, x)) + M_2(p'_1, x)
/// part1 lists the coordinates of the first split; the complement is the
/// second. Empty second splits (d = 1) make the second half-update a no-op.
struct CouplingBlock {
  std::vector<int> part1;
  CouplingFn r1, m1;  // (p_2, x) -> R^{|part1|}
  CouplingFn r2, m2;  // (p'_1, x) -> R^{d - |part1|}
};

/// K-block conditional invertible transform G_x on R^dim. The default split
/// is ceil(d/2) with alternating halves across blocks, so every coordinate
/// is transformed.
struct CouplingSpec {
  int dim = 0;
  std::vector<CouplingBlock> blocks;
};

/// Alternating-half index sets: even blocks take the first ceil(d/2)
/// coordinates as part 1, odd blocks the rest. d = 1 always splits (1, 0)
/// so the second half-update is a no-op rather than an error path.
inline std::vector<int> default_split(int dim, int block_index) {
  const int d1 = (dim + 1) / 2;
  std::vector<int> part1;
  if (dim == 1 || block_index % 2 == 0)
    for (int i = 0; i < d1; ++i) part1.push_back(i);
  else
    for (int i = d1; i < dim; ++i) part1.push_back(i);
  return part1;
}

namespace detail {

inline std::vector<int> complement_of(const std::vector<int>& part1, int dim) {
  std::vector<char> in(static_cast<std::size_t>(dim), 0);
  for (int i : part1) {
    if (i < 0 || i >= dim) throw std::invalid_argument("split index out of range");
    in[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<int> part2;
  for (int i = 0; i < dim; ++i)
    if (!in[static_cast<std::size_t>(i)]) part2.push_back(i);
  return part2;
}

inline Vec gather(const Vec& v, const std::vector<int>& idx) {
  Vec out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = v[static_cast<std::size_t>(idx[k])];
  return out;
}

inline void scatter(Vec& v, const std::vector<int>& idx, const Vec& vals) {
  for (std::size_t k = 0; k < idx.size(); ++k) v[static_cast<std::size_t>(idx[k])] = vals[k];
}

}  // namespace detail

/// Applies all K blocks; the returned log-Jacobian is the sum of every R
/// output over both half-updates of every block.
inline std::pair<Vec, double> coupling_forward(const CouplingSpec& spec, const Vec& x, Vec p) {
  double log_jac = 0.0;
  for (const auto& block : spec.blocks) {
    const auto part2 = detail::complement_of(block.part1, spec.dim);
    Vec p1 = detail::gather(p, block.part1);
    Vec p2 = detail::gather(p, part2);
    if (!block.part1.empty()) {
      const Vec r = block.r1(p2, x);
      const Vec m = block.m1(p2, x);
      for (std::size_t k = 0; k < p1.size(); ++k) {
        p1[k] = p1[k] * std::exp(r[k]) + m[k];
        log_jac += r[k];
      }
    }
    if (!part2.empty()) {
      const Vec r = block.r2(p1, x);
      const Vec m = block.m2(p1, x);
      for (std::size_t k = 0; k < p2.size(); ++k) {
        p2[k] = p2[k] * std::exp(r[k]) + m[k];
        log_jac += r[k];
      }
    }
    detail::scatter(p, block.part1, p1);
    detail::scatter(p, part2, p2);
  }
  if (!all_finite(p) || !std::isfinite(log_jac)) throw std::runtime_error("map diverged");
  return {std::move(p), log_jac};
}

/// Inverts blocks in reverse order; each split inverts analytically by
/// subtracting M and dividing by exp(R).
inline Vec coupling_inverse(const CouplingSpec& spec, const Vec& x, Vec p_out) {
  for (auto it = spec.blocks.rbegin(); it != spec.blocks.rend(); ++it) {
    const auto& block = *it;
    const auto part2 = detail::complement_of(block.part1, spec.dim);
    Vec p1 = detail::gather(p_out, block.part1);
    Vec p2 = detail::gather(p_out, part2);
    if (!part2.empty()) {
      const Vec r = block.r2(p1, x);
      const Vec m = block.m2(p1, x);
      for (std::size_t k = 0; k < p2.size(); ++k) p2[k] = (p2[k] - m[k]) * std::exp(-r[k]);
    }
    if (!block.part1.empty()) {
      const Vec r = block.r1(p2, x);
      const Vec m = block.m1(p2, x);
      for (std::size_t k = 0; k < p1.size(); ++k) p1[k] = (p1[k] - m[k]) * std::exp(-r[k]);
    }
    detail::scatter(p_out, block.part1, p1);
    detail::scatter(p_out, part2, p2);
  }
  if (!all_finite(p_out)) throw std::runtime_error("map diverged");
  return p_out;
}

/// A family of diffeomorphisms p -> G_x(p) indexed by the position x; the
/// proposal-building block of the lifted samplers.
struct ConditionalMap {
  int dim = 0;
  std::function<Vec(const Vec& x, const Vec& p)> forward;
  std::function<Vec(const Vec& x, const Vec& y)> inverse;
  std::function<double(const Vec& x, const Vec& p)> log_jac_forward;
};

/// The MALA proposal map G_{1,x}: p -> x + gamma grad log pi(x) + sqrt(2
/// gamma) p, inverted by y -> (y - x - gamma grad log pi(x)) / sqrt(2
/// gamma); log-Jacobian (d/2) log(2 gamma).
inline ConditionalMap mala_map(const TargetDensity& target, double gamma) {
  if (!target.has_gradient()) throw std::invalid_argument("mala_map requires a gradient");
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  const double scale = std::sqrt(2.0 * gamma);
  const double lj = 0.5 * target.dim * std::log(2.0 * gamma);
  ConditionalMap g;
  g.dim = target.dim;
  g.forward = [target, gamma, scale](const Vec& x, const Vec& p) {
    Vec y = x;
    axpy(gamma, target.gradient(x), y);
    axpy(scale, p, y);
    return y;
  };
  g.inverse = [target, gamma, scale](const Vec& x, const Vec& y) {
    Vec p = y - x;
    axpy(-gamma, target.gradient(x), p);
    for (auto& c : p) c /= scale;
    return p;
  };
  g.log_jac_forward = [lj](const Vec&, const Vec&) { return lj; };
  return g;
}

inline ConditionalMap coupling_map(const CouplingSpec& spec) {
  ConditionalMap g;
  g.dim = spec.dim;
  g.forward = [spec](const Vec& x, const Vec& p) { return coupling_forward(spec, x, p).first; };
  g.inverse = [spec](const Vec& x, const Vec& y) { return coupling_inverse(spec, x, y); };
  g.log_jac_forward = [spec](const Vec& x, const Vec& p) {
    return coupling_forward(spec, x, p).second;
  };
  return g;
}

inline ConditionalMap identity_conditional(int dim) {
  ConditionalMap g;
  g.dim = dim;
  g.forward = [](const Vec&, const Vec& p) { return p; };
  g.inverse = [](const Vec&, const Vec& y) { return y; };
  g.log_jac_forward = [](const Vec&, const Vec&) { return 0.0; };
  return g;
}

/// log q_v(x, y) = log phi(G^{-1}(y)) + log J_{G^{-1}}(y), the lifted
/// proposal density of Eq. (23); the inverse Jacobian is the negated
/// forward one at the preimage.
inline double conditional_log_density(const ConditionalMap& g, const MomentumDensity& phi,
                                      const Vec& x, const Vec& y) {
  const Vec pre = g.inverse(x, y);
  return phi.log_density(pre) - g.log_jac_forward(x, pre);
}

}  // namespace skewmc
