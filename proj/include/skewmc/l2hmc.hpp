#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/coupling.hpp"
#include "skewmc/diffeo.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// x -> R^d map used by the momentum half-steps.
using L2hmcHFn = std::function<Vec(const Vec&)>;

/// One composite block G_i = H_i . F_i . H_{i-1/2}: a momentum half-step,
/// a position coupling split by part1, and a second momentum half-step.
/// The position maps take (complementary split of x, full momentum p).
struct L2hmcBlock {
  L2hmcHFn r_h_pre, m_h_pre;    // j = i - 1/2
  std::vector<int> part1;
  CouplingFn r_f1, m_f1;        // (x_2, p) -> R^{|part1|}
  CouplingFn r_f2, m_f2;        // (x'_1, p) -> R^{d - |part1|}
  L2hmcHFn r_h_post, m_h_post;  // j = i
};

/// Psi = G_K . ... . G_1 on R^{2d}. Needs the target gradient: the momentum
/// half-steps kick by grad log pi0 scaled through the R^H net.
struct L2hmcSpec {
  int dim = 0;
  double delta = 0.0;
  std::vector<L2hmcBlock> blocks;
  TargetDensity target;

  void validate() const {
    if (dim <= 0 || delta <= 0.0 || blocks.empty()) throw std::invalid_argument("invalid l2hmc spec");
    if (!target.has_gradient()) throw std::invalid_argument("l2hmc requires a target gradient");
  }
};

namespace detail {

// H_{j,x}(p) = p.exp(delta R) + delta [grad log pi0(x).exp(delta R) + M(x)]
inline double l2hmc_h_forward(const L2hmcSpec& spec, const L2hmcHFn& r_fn, const L2hmcHFn& m_fn,
                              const Vec& x, Vec& p) {
  const Vec r = r_fn(x);
  const Vec m = m_fn(x);
  const Vec grad = spec.target.gradient(x);
  double log_jac = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double scale = std::exp(spec.delta * r[k]);
    p[k] = p[k] * scale + spec.delta * (grad[k] * scale + m[k]);
    log_jac += spec.delta * r[k];
  }
  return log_jac;
}

inline void l2hmc_h_inverse(const L2hmcSpec& spec, const L2hmcHFn& r_fn, const L2hmcHFn& m_fn,
                            const Vec& x, Vec& p) {
  const Vec r = r_fn(x);
  const Vec m = m_fn(x);
  const Vec grad = spec.target.gradient(x);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double scale = std::exp(spec.delta * r[k]);
    p[k] = (p[k] - spec.delta * (grad[k] * scale + m[k])) / scale;
  }
}

// F_{i,p}(x): affine coupling on the position splits, momentum as context.
inline double l2hmc_f_forward(const L2hmcSpec& spec, const L2hmcBlock& block, Vec& x,
                              const Vec& p) {
  const auto part2 = complement_of(block.part1, spec.dim);
  Vec x1 = gather(x, block.part1);
  Vec x2 = gather(x, part2);
  double log_jac = 0.0;
  if (!block.part1.empty()) {
    const Vec r = block.r_f1(x2, p);
    const Vec m = block.m_f1(x2, p);
    for (std::size_t k = 0; k < x1.size(); ++k) {
      x1[k] = x1[k] * std::exp(spec.delta * r[k]) + spec.delta * m[k];
      log_jac += spec.delta * r[k];
    }
  }
  if (!part2.empty()) {
    const Vec r = block.r_f2(x1, p);
    const Vec m = block.m_f2(x1, p);
    for (std::size_t k = 0; k < x2.size(); ++k) {
      x2[k] = x2[k] * std::exp(spec.delta * r[k]) + spec.delta * m[k];
      log_jac += spec.delta * r[k];
    }
  }
  scatter(x, block.part1, x1);
  scatter(x, part2, x2);
  return log_jac;
}

inline void l2hmc_f_inverse(const L2hmcSpec& spec, const L2hmcBlock& block, Vec& x, const Vec& p) {
  const auto part2 = complement_of(block.part1, spec.dim);
  Vec x1 = gather(x, block.part1);
  Vec x2 = gather(x, part2);
  if (!part2.empty()) {
    const Vec r = block.r_f2(x1, p);
    const Vec m = block.m_f2(x1, p);
    for (std::size_t k = 0; k < x2.size(); ++k)
      x2[k] = (x2[k] - spec.delta * m[k]) * std::exp(-spec.delta * r[k]);
  }
  if (!block.part1.empty()) {
    const Vec r = block.r_f1(x2, p);
    const Vec m = block.m_f1(x2, p);
    for (std::size_t k = 0; k < x1.size(); ++k)
      x1[k] = (x1[k] - spec.delta * m[k]) * std::exp(-spec.delta * r[k]);
  }
  scatter(x, block.part1, x1);
  scatter(x, part2, x2);
}

}  // namespace detail

struct L2hmcResult {
  Vec x;
  Vec p;
  double log_jac = 0.0;
};

inline L2hmcResult l2hmc_forward(const L2hmcSpec& spec, Vec x, Vec p) {
  double log_jac = 0.0;
  for (const auto& block : spec.blocks) {
    log_jac += detail::l2hmc_h_forward(spec, block.r_h_pre, block.m_h_pre, x, p);
    log_jac += detail::l2hmc_f_forward(spec, block, x, p);
    log_jac += detail::l2hmc_h_forward(spec, block.r_h_post, block.m_h_post, x, p);
  }
  if (!all_finite(x) || !all_finite(p) || !std::isfinite(log_jac))
    throw std::runtime_error("map diverged");
  return {std::move(x), std::move(p), log_jac};
}

inline std::pair<Vec, Vec> l2hmc_inverse(const L2hmcSpec& spec, Vec x, Vec p) {
  for (auto it = spec.blocks.rbegin(); it != spec.blocks.rend(); ++it) {
    detail::l2hmc_h_inverse(spec, it->r_h_post, it->m_h_post, x, p);
    detail::l2hmc_f_inverse(spec, *it, x, p);
    detail::l2hmc_h_inverse(spec, it->r_h_pre, it->m_h_pre, x, p);
  }
  if (!all_finite(x) || !all_finite(p)) throw std::runtime_error("map diverged");
  return {std::move(x), std::move(p)};
}

/// Psi packaged as a Diffeo on R^{2d} (layout x ++ p) for the samplers and
/// for apply_signed.
inline Diffeo l2hmc_compose(const L2hmcSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  Diffeo out;
  out.dim = 2 * d;
  out.forward = [spec, d](const Vec& z) {
    Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
    auto res = l2hmc_forward(spec, std::move(x), std::move(p));
    return concat(res.x, res.p);
  };
  out.inverse = [spec, d](const Vec& z) {
    Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
    auto [xi, pi] = l2hmc_inverse(spec, std::move(x), std::move(p));
    return concat(xi, pi);
  };
  out.log_jac_forward = [spec, d](const Vec& z) {
    Vec x(z.begin(), z.begin() + d), p(z.begin() + d, z.end());
    return l2hmc_forward(spec, std::move(x), std::move(p)).log_jac;
  };
  return out;
}

}  // namespace skewmc
