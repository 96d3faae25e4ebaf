#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "skewmc/core.hpp"

namespace skewmc {

/// How the rejected mass of Eq. (7) is placed: stay puts it on z, flip on
/// s(z), optimal_flip uses the Peskun-optimal b(z) = max(0, abar(s(z)) -
/// abar(z)). The optimal split needs Q_alpha(z, Z) in closed form, which
/// only deterministic proposals (and finite chains, by enumeration) give.
enum class RejectionPolicy { flip, stay, optimal_flip };

/// Proposal kernel with a density w.r.t. the reference measure. log_q must
/// evaluate at arbitrary ordered pairs; the samplers apply the involution
/// themselves before asking for the reversed value, so q need not be
/// s-equivariant.
struct DensityProposal {
  std::function<double(const ExtendedState&, const ExtendedState&)> log_q;
  std::function<ExtendedState(const ExtendedState&, Rng&)> sample;
};

/// Deterministic proposal z' = Phi(z) with log|J_Phi(z)|. Phi must satisfy
/// Phi^{-1} = s . Phi . s for the involution it is used with.
struct DeterministicProposal {
  std::function<std::pair<ExtendedState, double>(const ExtendedState&)> map;
};

/// GMH acceptance probability for density proposals. The four inputs are
/// log pi(z), log pi(z'), log q(z, z') and log q(s(z'), s(z)); the caller
/// has already pushed the reversed pair through s. Returns 1 on the
/// pi(z) q(z, z') = 0 branch.
inline double gmh_accept_density(double log_pi_z, double log_pi_zp, double log_q_fwd,
                                 double log_q_rev, const AcceptanceFunction& fn) {
  if (std::isnan(log_pi_z) || std::isnan(log_pi_zp) || std::isnan(log_q_fwd) ||
      std::isnan(log_q_rev))
    throw std::invalid_argument("invalid log-density");
  const double log_den = log_pi_z + log_q_fwd;
  if (log_den == kNegInf) return 1.0;
  double log_num = log_pi_zp + log_q_rev;
  if (std::isnan(log_num)) log_num = kNegInf;  // -inf + inf cannot occur for densities; guard anyway
  return acceptance_value_log(fn, log_num - log_den);
}

/// GMH acceptance probability for a deterministic proposal, Eq.-(13) form:
/// a(pi(Phi(z)) J_Phi(z) / pi(z)); 1 when pi(z) = 0. Independent of s.
inline double gmh_accept_deterministic(double log_pi_z, double log_pi_phi_z, double log_jac_phi_z,
                                       const AcceptanceFunction& fn) {
  if (std::isnan(log_pi_z) || std::isnan(log_pi_phi_z) || std::isnan(log_jac_phi_z))
    throw std::invalid_argument("invalid log-density");
  if (log_pi_z == kNegInf) return 1.0;
  return acceptance_value_log(fn, log_pi_phi_z + log_jac_phi_z - log_pi_z);
}

struct GmhStepResult {
  ExtendedState next;
  bool accepted = false;
  double log_ratio = 0.0;  // log of the acceptance ratio argument
};

/// One GMH transition with a density proposal. Consumes the proposal's
/// draws, then exactly one uniform for the accept decision; the pi(z)q = 0
/// branch short-circuits that uniform since the acceptance is 1 by
/// construction. optimal_flip is rejected here: Q_alpha(z, Z) is an
/// intractable integral for density proposals.
inline GmhStepResult gmh_step(const ExtendedState& z, const DensityProposal& proposal,
                              const std::function<double(const ExtendedState&)>& log_pi,
                              const Involution& s, const AcceptanceFunction& fn,
                              RejectionPolicy policy, Rng& rng) {
  if (policy == RejectionPolicy::optimal_flip)
    throw std::invalid_argument("optimal_flip requires a deterministic proposal");
  const ExtendedState zp = proposal.sample(z, rng);
  const double log_pi_z = log_pi(z);
  const double log_q_fwd = proposal.log_q(z, zp);
  if (log_pi_z + log_q_fwd == kNegInf)
    return {zp, true, kInf};
  const double log_pi_zp = log_pi(zp);
  const double log_q_rev = proposal.log_q(s(zp), s(z));
  const double log_ratio = (log_pi_zp + log_q_rev) - (log_pi_z + log_q_fwd);
  const double alpha = gmh_accept_density(log_pi_z, log_pi_zp, log_q_fwd, log_q_rev, fn);
  if (rng.uniform() < alpha) return {zp, true, log_ratio};
  return {policy == RejectionPolicy::flip ? s(z) : z, false, log_ratio};
}

/// One GMH transition with a deterministic proposal. For optimal_flip the
/// rejected mass 1 - abar(z) is split between s(z) (weight b(z) =
/// max(0, abar(s(z)) - abar(z))) and z; the split consumes one extra
/// uniform, drawn only on rejection.
inline GmhStepResult gmh_step(const ExtendedState& z, const DeterministicProposal& proposal,
                              const std::function<double(const ExtendedState&)>& log_pi,
                              const Involution& s, const AcceptanceFunction& fn,
                              RejectionPolicy policy, Rng& rng) {
  const auto [zp, log_jac] = proposal.map(z);
  const double log_pi_z = log_pi(z);
  if (log_pi_z == kNegInf)
    return {zp, true, kInf};
  const double log_pi_zp = log_pi(zp);
  const double log_ratio = log_pi_zp + log_jac - log_pi_z;
  const double alpha = gmh_accept_deterministic(log_pi_z, log_pi_zp, log_jac, fn);
  if (rng.uniform() < alpha) return {zp, true, log_ratio};
  switch (policy) {
    case RejectionPolicy::stay:
      return {z, false, log_ratio};
    case RejectionPolicy::flip:
      return {s(z), false, log_ratio};
    case RejectionPolicy::optimal_flip: {
      const ExtendedState sz = s(z);
      const auto [szp, log_jac_s] = proposal.map(sz);
      const double alpha_s =
          gmh_accept_deterministic(log_pi(sz), log_pi(szp), log_jac_s, fn);
      const double b = std::max(0.0, alpha_s - alpha);
      const double rejected_mass = 1.0 - alpha;
      if (rejected_mass > 0.0 && rng.uniform() * rejected_mass < b)
        return {sz, false, log_ratio};
      return {z, false, log_ratio};
    }
  }
  return {z, false, log_ratio};
}

}  // namespace skewmc
