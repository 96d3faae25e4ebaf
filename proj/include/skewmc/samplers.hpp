#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/coupling.hpp"
#include "skewmc/diffeo.hpp"
#include "skewmc/gmh.hpp"
#include "skewmc/l2hmc.hpp"
#include "skewmc/leapfrog.hpp"
#include "skewmc/rng.hpp"

namespace skewmc {

// The eight sampling algorithms. Draw order is a contract shared with the
// cross-implementation oracles in the tests:
//   1. missing initial momentum, then missing initial direction, are drawn
//      once before the loop;
//   2. per iteration: the branch uniform (when the kind has one), then the
//      refresh draws in listing order (momentum coordinates via Box-Muller,
//      direction as one uniform), then — for the randomized kinds — the
//      post-proposal refresh draws, and exactly one accept uniform last;
//   3. the accept uniform is skipped only when the acceptance is 1 by
//      construction (the zero-density branch).
// For the randomized kinds, R_i ~ Ber(omega) with R_i = 1 the full
// refreshment branch, per the algorithm listings; the mixture weight on the
// deterministic kernel is therefore 1 - omega.

enum class SamplerKind {
  nice_full,                // Algorithm 1
  nice_randomized,          // Algorithm 2
  nice_persistent,          // Algorithm 3
  lifted_density,           // Algorithm 4
  l2hmc_original,           // Algorithm 5
  l2hmc_lifted_full,        // Algorithm 6
  l2hmc_lifted_randomized,  // Algorithm 7
  l2hmc_persistent          // Algorithm 8
};

inline bool kind_uses_omega(SamplerKind k) {
  return k == SamplerKind::nice_randomized || k == SamplerKind::lifted_density ||
         k == SamplerKind::l2hmc_lifted_full || k == SamplerKind::l2hmc_lifted_randomized;
}

inline bool kind_uses_beta(SamplerKind k) {
  return k == SamplerKind::nice_persistent || k == SamplerKind::l2hmc_persistent;
}

inline bool kind_keeps_momentum(SamplerKind k) {
  return k == SamplerKind::nice_randomized || k == SamplerKind::nice_persistent ||
         k == SamplerKind::l2hmc_lifted_randomized || k == SamplerKind::l2hmc_persistent;
}

inline bool kind_keeps_direction(SamplerKind k) {
  return k == SamplerKind::lifted_density || k == SamplerKind::l2hmc_lifted_full ||
         k == SamplerKind::l2hmc_lifted_randomized || k == SamplerKind::l2hmc_persistent;
}

struct SamplerConfig {
  SamplerKind kind = SamplerKind::nice_full;
  long n_steps = 0;
  std::uint64_t seed = 0;
  std::optional<double> omega;  // refresh probability, kinds 2/4/6/7
  std::optional<double> beta;   // AR(1) persistence, kinds 3/8
  AcceptanceFunction accept = AcceptanceFunction::metropolis();
  ExtendedState initial;

  void validate() const {
    if (n_steps < 0) throw std::invalid_argument("n_steps must be nonnegative");
    if (initial.x.empty()) throw std::invalid_argument("initial position required");
    if (kind_uses_omega(kind) != omega.has_value())
      throw std::invalid_argument(kind_uses_omega(kind) ? "omega required for this sampler"
                                                        : "omega not used by this sampler");
    if (kind_uses_beta(kind) != beta.has_value())
      throw std::invalid_argument(kind_uses_beta(kind) ? "beta required for this sampler"
                                                       : "beta not used by this sampler");
    if (omega) {
      if (*omega < 0.0 || *omega > 1.0) throw std::invalid_argument("omega must lie in [0,1]");
      // Algorithm 4 reads omega = 2*rho with rho in (0, 1/2]
      if (kind == SamplerKind::lifted_density && *omega <= 0.0)
        throw std::invalid_argument("omega must be positive for lifted sampling");
    }
    if (beta && (*beta < 0.0 || *beta >= 1.0))
      throw std::invalid_argument("beta must lie in [0,1)");
  }
};

/// Record of one run: states[0..n_steps], per-iteration accept flags, the
/// log acceptance ratios, and the post-refresh state each proposal was
/// computed from (the audit handle for the rejection-branch contracts).
struct ChainTrace {
  std::vector<ExtendedState> states;
  std::vector<char> accepted;
  std::vector<double> log_ratios;
  std::vector<ExtendedState> refreshed;
  long direction_flips = 0;

  double acceptance_rate() const {
    if (accepted.empty()) return 0.0;
    long n = 0;
    for (char a : accepted) n += a;
    return static_cast<double>(n) / static_cast<double>(accepted.size());
  }
};

namespace detail {

inline void note_flip(ChainTrace& trace) {
  const auto m = trace.states.size();
  if (m >= 2 && trace.states[m - 2].v && trace.states[m - 1].v &&
      *trace.states[m - 2].v != *trace.states[m - 1].v)
    ++trace.direction_flips;
}

// Acceptance decision per the pinned order: -inf density at the current
// point short-circuits the uniform (alpha = 1 by construction).
inline bool accept_draw(double log_den, double log_num, const AcceptanceFunction& fn, Rng& rng,
                        double& log_ratio_out) {
  if (log_den == kNegInf) {
    log_ratio_out = kInf;
    return true;
  }
  log_ratio_out = log_num - log_den;
  const double alpha = acceptance_value_log(fn, log_ratio_out);
  return rng.uniform() < alpha;
}

}  // namespace detail

/// Algorithm 1: full momentum refreshment each iteration; the chain state
/// is the position only.
inline ChainTrace run_nice_full(const SamplerConfig& cfg, const TargetDensity& target,
                                const MomentumDensity& phi, const LeapfrogSpec& leapfrog) {
  cfg.validate();
  leapfrog.validate();
  if (!phi.symmetric) throw std::invalid_argument("momentum density must be symmetric");
  if (!nice1_holds(leapfrog)) throw std::invalid_argument("leapfrog spec violates NICE1");
  Rng rng(cfg.seed);
  ChainTrace trace;
  Vec x = cfg.initial.x;
  trace.states.emplace_back(x);
  for (long i = 0; i < cfg.n_steps; ++i) {
    const Vec q = phi.sample(rng);
    auto [y, qp] = leapfrog_forward(leapfrog, x, q);
    const double log_den = log_mu(target, phi, x, q);
    const double log_num = log_mu(target, phi, y, qp);
    double log_ratio = 0.0;
    const bool ok = detail::accept_draw(log_den, log_num, cfg.accept, rng, log_ratio);
    trace.refreshed.emplace_back(x, q);
    if (ok) x = std::move(y);
    trace.states.emplace_back(x);
    trace.accepted.push_back(ok);
    trace.log_ratios.push_back(log_ratio);
  }
  return trace;
}

/// Algorithm 2: mixture of the deterministic (pi, S)-reversible kernel
/// (momentum flip on reject) and the full-refreshment kernel of Algorithm 1.
inline ChainTrace run_nice_randomized(const SamplerConfig& cfg, const TargetDensity& target,
                                      const MomentumDensity& phi, const LeapfrogSpec& leapfrog) {
  cfg.validate();
  leapfrog.validate();
  if (!phi.symmetric) throw std::invalid_argument("momentum density must be symmetric");
  if (!nice1_holds(leapfrog)) throw std::invalid_argument("leapfrog spec violates NICE1");
  Rng rng(cfg.seed);
  ChainTrace trace;
  Vec x = cfg.initial.x;
  Vec p = cfg.initial.p ? *cfg.initial.p : phi.sample(rng);
  trace.states.emplace_back(x, p);
  for (long i = 0; i < cfg.n_steps; ++i) {
    const bool refresh = rng.uniform() < *cfg.omega;
    double log_ratio = 0.0;
    bool ok = false;
    if (!refresh) {
      trace.refreshed.emplace_back(x, p);
      auto [y, qp] = leapfrog_forward(leapfrog, x, p);
      ok = detail::accept_draw(log_mu(target, phi, x, p), log_mu(target, phi, y, qp), cfg.accept,
                               rng, log_ratio);
      if (ok) {
        x = std::move(y);
        p = std::move(qp);
      } else {
        for (auto& c : p) c = -c;  // reject the move and flip the momentum
      }
    } else {
      const Vec q = phi.sample(rng);
      trace.refreshed.emplace_back(x, q);
      auto [y, qp] = leapfrog_forward(leapfrog, x, q);
      Vec p_next = phi.sample(rng);
      ok = detail::accept_draw(log_mu(target, phi, x, q), log_mu(target, phi, y, qp), cfg.accept,
                               rng, log_ratio);
      if (ok) x = std::move(y);
      p = std::move(p_next);
    }
    trace.states.emplace_back(x, p);
    trace.accepted.push_back(ok);
    trace.log_ratios.push_back(log_ratio);
  }
  return trace;
}

/// Algorithm 3: AR(1) partial momentum refreshment q = beta p +
/// sqrt(1-beta^2) u; rejection flips the refreshed momentum.
inline ChainTrace run_nice_persistent(const SamplerConfig& cfg, const TargetDensity& target,
                                      const MomentumDensity& phi, const LeapfrogSpec& leapfrog) {
  cfg.validate();
  leapfrog.validate();
  if (!phi.is_standard_normal)
    throw std::invalid_argument("persistence requires normal momentum");
  if (!nice1_holds(leapfrog)) throw std::invalid_argument("leapfrog spec violates NICE1");
  Rng rng(cfg.seed);
  const double beta = *cfg.beta;
  const double mix = std::sqrt(1.0 - beta * beta);
  ChainTrace trace;
  Vec x = cfg.initial.x;
  Vec p = cfg.initial.p ? *cfg.initial.p : phi.sample(rng);
  trace.states.emplace_back(x, p);
  for (long i = 0; i < cfg.n_steps; ++i) {
    const Vec u = phi.sample(rng);
    Vec q = beta * p;
    axpy(mix, u, q);
    trace.refreshed.emplace_back(x, q);
    auto [y, qp] = leapfrog_forward(leapfrog, x, q);
    double log_ratio = 0.0;
    const bool ok = detail::accept_draw(log_mu(target, phi, x, q), log_mu(target, phi, y, qp),
                                        cfg.accept, rng, log_ratio);
    if (ok) {
      x = std::move(y);
      p = std::move(qp);
    } else {
      p = -std::move(q);  // flip the refreshed momentum
    }
    trace.states.emplace_back(x, p);
    trace.accepted.push_back(ok);
    trace.log_ratios.push_back(log_ratio);
  }
  return trace;
}

/// Algorithm 4: lifted sampling with per-direction proposal maps. The
/// acceptance ratio is pi0(y) q_{-w}(y, x) / [pi0(x) q_w(x, y)] with both
/// densities computed through the inverse maps and their log-Jacobians;
/// rejection keeps the position and flips the direction.
inline ChainTrace run_lifted_density(const SamplerConfig& cfg, const TargetDensity& target,
                                     const MomentumDensity& phi, const ConditionalMap& g_plus,
                                     const ConditionalMap& g_minus) {
  cfg.validate();
  if (!phi.symmetric) throw std::invalid_argument("momentum density must be symmetric");
  Rng rng(cfg.seed);
  ChainTrace trace;
  Vec x = cfg.initial.x;
  int v = cfg.initial.v ? *cfg.initial.v : rng.rademacher();
  if (v != -1 && v != +1) throw std::invalid_argument("direction must be -1 or +1");
  const auto record = [&trace](const Vec& pos, int dir) {
    ExtendedState z(pos);
    z.v = dir;
    trace.states.push_back(std::move(z));
    detail::note_flip(trace);
  };
  record(x, v);
  for (long i = 0; i < cfg.n_steps; ++i) {
    const bool refresh = rng.uniform() < *cfg.omega;
    const int w = refresh ? rng.rademacher() : v;
    const Vec q = phi.sample(rng);
    const ConditionalMap& g_fwd = (w == +1) ? g_plus : g_minus;
    const ConditionalMap& g_rev = (w == +1) ? g_minus : g_plus;
    const Vec y = g_fwd.forward(x, q);
    trace.refreshed.emplace_back(x, q, w);
    const double log_den = target.log_density(x) + conditional_log_density(g_fwd, phi, x, y);
    const double log_num = target.log_density(y) + conditional_log_density(g_rev, phi, y, x);
    double log_ratio = 0.0;
    const bool ok = detail::accept_draw(log_den, log_num, cfg.accept, rng, log_ratio);
    if (ok) {
      x = y;
      v = w;
    } else {
      v = -w;  // reject the move and flip the direction
    }
    record(x, v);
    trace.accepted.push_back(ok);
    trace.log_ratios.push_back(log_ratio);
  }
  return trace;
}

namespace detail {

struct SignedProposal {
  Vec y, qp;
  double log_jac;
};

inline SignedProposal propose_signed(const Diffeo& psi, int v, const Vec& x, const Vec& q) {
  auto [image, lj] = apply_signed(psi, v, concat(x, q));
  const int d = static_cast<int>(x.size());
  return {Vec(image.begin(), image.begin() + d), Vec(image.begin() + d, image.end()), lj};
}

}  // namespace detail

/// Algorithms 5-8, the L2HMC family over a diffeomorphism Psi on R^{2d},
/// dispatched on cfg.kind. All four accept with
/// a(mu(Psi^v(x, p)) J_{Psi^v}(x, p) / mu(x, p)).
inline ChainTrace run_l2hmc(const SamplerConfig& cfg, const TargetDensity& target,
                            const MomentumDensity& phi, const Diffeo& psi) {
  cfg.validate();
  if (!phi.symmetric) throw std::invalid_argument("momentum density must be symmetric");
  if (psi.dim != 2 * target.dim) throw std::invalid_argument("psi must act on R^{2d}");
  if (cfg.kind == SamplerKind::l2hmc_persistent && !phi.is_standard_normal)
    throw std::invalid_argument("persistence requires normal momentum");
  Rng rng(cfg.seed);
  ChainTrace trace;
  Vec x = cfg.initial.x;
  Vec p;
  int v = 0;
  if (kind_keeps_momentum(cfg.kind)) p = cfg.initial.p ? *cfg.initial.p : phi.sample(rng);
  if (kind_keeps_direction(cfg.kind)) {
    v = cfg.initial.v ? *cfg.initial.v : rng.rademacher();
    if (v != -1 && v != +1) throw std::invalid_argument("direction must be -1 or +1");
  }

  const auto record = [&](ChainTrace& t) {
    ExtendedState z(x);
    if (kind_keeps_momentum(cfg.kind)) z.p = p;
    if (kind_keeps_direction(cfg.kind)) z.v = v;
    t.states.push_back(std::move(z));
    detail::note_flip(t);
  };
  record(trace);

  for (long i = 0; i < cfg.n_steps; ++i) {
    double log_ratio = 0.0;
    bool ok = false;
    switch (cfg.kind) {
      case SamplerKind::l2hmc_original: {  // Algorithm 5
        const Vec q = phi.sample(rng);
        const int w = rng.rademacher();
        trace.refreshed.emplace_back(x, q, w);
        auto prop = detail::propose_signed(psi, w, x, q);
        ok = detail::accept_draw(log_mu(target, phi, x, q),
                                 log_mu(target, phi, prop.y, prop.qp) + prop.log_jac, cfg.accept,
                                 rng, log_ratio);
        if (ok) x = std::move(prop.y);
        break;
      }
      case SamplerKind::l2hmc_lifted_full: {  // Algorithm 6
        const bool refresh = rng.uniform() < *cfg.omega;
        const int w = refresh ? rng.rademacher() : v;
        const Vec q = phi.sample(rng);
        trace.refreshed.emplace_back(x, q, w);
        auto prop = detail::propose_signed(psi, w, x, q);
        ok = detail::accept_draw(log_mu(target, phi, x, q),
                                 log_mu(target, phi, prop.y, prop.qp) + prop.log_jac, cfg.accept,
                                 rng, log_ratio);
        if (ok) {
          x = std::move(prop.y);
          v = w;
        } else {
          v = -w;
        }
        break;
      }
      case SamplerKind::l2hmc_lifted_randomized: {  // Algorithm 7
        const bool refresh = rng.uniform() < *cfg.omega;
        if (!refresh) {
          trace.refreshed.emplace_back(x, p, v);
          auto prop = detail::propose_signed(psi, v, x, p);
          ok = detail::accept_draw(log_mu(target, phi, x, p),
                                   log_mu(target, phi, prop.y, prop.qp) + prop.log_jac, cfg.accept,
                                   rng, log_ratio);
          if (ok) {
            x = std::move(prop.y);
            p = std::move(prop.qp);
          } else {
            v = -v;
          }
        } else {
          const Vec q = phi.sample(rng);
          const int w = rng.rademacher();
          trace.refreshed.emplace_back(x, q, w);
          auto prop = detail::propose_signed(psi, w, x, q);
          Vec p_next = phi.sample(rng);
          const int v_next = rng.rademacher();
          ok = detail::accept_draw(log_mu(target, phi, x, q),
                                   log_mu(target, phi, prop.y, prop.qp) + prop.log_jac, cfg.accept,
                                   rng, log_ratio);
          if (ok) x = std::move(prop.y);
          p = std::move(p_next);
          v = v_next;
        }
        break;
      }
      case SamplerKind::l2hmc_persistent: {  // Algorithm 8
        const Vec u = phi.sample(rng);
        const double beta = *cfg.beta;
        Vec q = beta * p;
        axpy(std::sqrt(1.0 - beta * beta), u, q);
        trace.refreshed.emplace_back(x, q, v);
        auto prop = detail::propose_signed(psi, v, x, q);
        ok = detail::accept_draw(log_mu(target, phi, x, q),
                                 log_mu(target, phi, prop.y, prop.qp) + prop.log_jac, cfg.accept,
                                 rng, log_ratio);
        if (ok) {
          x = std::move(prop.y);
          p = std::move(prop.qp);
        } else {
          v = -v;  // keep the pre-refresh momentum, flip the direction
        }
        break;
      }
      default:
        throw std::invalid_argument("run_l2hmc drives kinds 5-8 only");
    }
    record(trace);
    trace.accepted.push_back(ok);
    trace.log_ratios.push_back(log_ratio);
  }
  return trace;
}

/// Everything the dispatcher may need; the cli assembles one of these from
/// the transform section of a run config.
struct SamplerInputs {
  std::optional<LeapfrogSpec> leapfrog;
  std::optional<Diffeo> psi;
  std::optional<ConditionalMap> g_plus;
  std::optional<ConditionalMap> g_minus;
};

inline ChainTrace run_sampler(const SamplerConfig& cfg, const TargetDensity& target,
                              const MomentumDensity& phi, const SamplerInputs& in) {
  switch (cfg.kind) {
    case SamplerKind::nice_full:
      if (!in.leapfrog) throw std::invalid_argument("sampler needs a leapfrog spec");
      return run_nice_full(cfg, target, phi, *in.leapfrog);
    case SamplerKind::nice_randomized:
      if (!in.leapfrog) throw std::invalid_argument("sampler needs a leapfrog spec");
      return run_nice_randomized(cfg, target, phi, *in.leapfrog);
    case SamplerKind::nice_persistent:
      if (!in.leapfrog) throw std::invalid_argument("sampler needs a leapfrog spec");
      return run_nice_persistent(cfg, target, phi, *in.leapfrog);
    case SamplerKind::lifted_density:
      if (!in.g_plus || !in.g_minus)
        throw std::invalid_argument("sampler needs both conditional maps");
      return run_lifted_density(cfg, target, phi, *in.g_plus, *in.g_minus);
    default:
      if (!in.psi) throw std::invalid_argument("sampler needs a psi diffeomorphism");
      return run_l2hmc(cfg, target, phi, *in.psi);
  }
}

}  // namespace skewmc
