#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/gmh.hpp"
#include "skewmc/rng.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Explicit (pi, Q, s) on a finite state space: the exact-verification
/// representation. pi may contain zeros but must be s-invariant; s_perm is a
/// self-inverse permutation; rows of Q sum to 1.
struct FiniteChain {
  int n = 0;
  std::vector<double> pi;
  Mat Q;
  std::vector<int> s_perm;

  void validate() const {
    if (n <= 0 || static_cast<int>(pi.size()) != n || Q.rows != n || Q.cols != n ||
        static_cast<int>(s_perm.size()) != n)
      throw std::invalid_argument("finite chain: inconsistent sizes");
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      if (pi[i] < 0.0) throw std::invalid_argument("finite chain: negative mass");
      mass += pi[i];
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        if (Q(i, j) < 0.0) throw std::invalid_argument("finite chain: negative kernel entry");
        row += Q(i, j);
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw std::invalid_argument("finite chain: row " + std::to_string(i) + " not stochastic");
    }
    if (std::abs(mass - 1.0) > 1e-12) throw std::invalid_argument("finite chain: pi not normalized");
    for (int i = 0; i < n; ++i) {
      if (s_perm[i] < 0 || s_perm[i] >= n || s_perm[s_perm[i]] != i)
        throw std::invalid_argument("finite chain: s_perm not an involution");
      if (pi[s_perm[i]] != pi[i])
        throw std::invalid_argument("finite chain: pi not s-invariant");
    }
  }
};

/// The finite-space realization of the density decomposition: nu(i,j) =
/// pi_i Q_ij, its pushforward under F_s, the density h = nu/lambda where
/// lambda = nu + nu^s, the support set A = {h x h.F_s > 0}, and the ratio
/// r = h / h.F_s on A. Pairs with lambda = 0 get h = 0 and are excluded
/// from every check (both measures vanish there).
struct NuDecomposition {
  Mat nu;      // pi_i * Q_ij
  Mat h;       // d nu / d lambda, 0 where lambda = 0
  Mat r;       // defined on A only, 0 elsewhere
  std::vector<std::vector<char>> A;
};

inline NuDecomposition finite_nu_decomposition(const FiniteChain& chain) {
  const int n = chain.n;
  NuDecomposition out;
  out.nu = Mat(n, n);
  out.h = Mat(n, n);
  out.r = Mat(n, n);
  out.A.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.nu(i, j) = chain.pi[i] * chain.Q(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double nu_s = out.nu(chain.s_perm[j], chain.s_perm[i]);
      const double lambda = out.nu(i, j) + nu_s;
      out.h(i, j) = lambda > 0.0 ? out.nu(i, j) / lambda : 0.0;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double h_rev = out.h(chain.s_perm[j], chain.s_perm[i]);
      if (out.h(i, j) > 0.0 && h_rev > 0.0) {
        out.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        out.r(i, j) = out.h(i, j) / h_rev;
      }
    }
  return out;
}

/// The Eq.-(5) acceptance matrix: alpha_ij = a(h(s(j), s(i)) / h(i, j))
/// where h(i, j) > 0, and 1 on the h = 0 branch.
inline Mat finite_gmh_alpha(const FiniteChain& chain, const AcceptanceFunction& fn) {
  const NuDecomposition dec = finite_nu_decomposition(chain);
  const int n = chain.n;
  Mat alpha(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double h_fwd = dec.h(i, j);
      if (h_fwd > 0.0)
        alpha(i, j) = acceptance_value(fn, dec.h(chain.s_perm[j], chain.s_perm[i]) / h_fwd);
      else
        alpha(i, j) = 1.0;
    }
  return alpha;
}

/// Builds the full GMH transition matrix of Eq. (7): the accepted part
/// alpha . Q plus the rejected row mass placed per policy. For optimal_flip
/// b_i = max(0, m_i - m_{s(i)}) with m_i the rejected mass of row i, the
/// Peskun-optimal choice, never negative by the max and never above m_i.
inline Mat finite_build_gmh(const FiniteChain& chain, const AcceptanceFunction& fn,
                            RejectionPolicy policy) {
  const int n = chain.n;
  const Mat alpha = finite_gmh_alpha(chain, fn);
  Mat P(n, n);
  std::vector<double> rejected(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      P(i, j) = alpha(i, j) * chain.Q(i, j);
      row += P(i, j);
    }
    rejected[static_cast<std::size_t>(i)] = 1.0 - row;
  }
  for (int i = 0; i < n; ++i) {
    const double m_i = rejected[static_cast<std::size_t>(i)];
    switch (policy) {
      case RejectionPolicy::stay:
        P(i, i) += m_i;
        break;
      case RejectionPolicy::flip:
        P(i, chain.s_perm[i]) += m_i;
        break;
      case RejectionPolicy::optimal_flip: {
        const double b = std::max(0.0, m_i - rejected[static_cast<std::size_t>(chain.s_perm[i])]);
        P(i, chain.s_perm[i]) += b;
        P(i, i) += m_i - b;
        break;
      }
    }
  }
  return P;
}

/// Worst-case violation of the skew detailed balance identity Eq. (3):
/// max_ij | pi_i P_ij - pi_{s(j)} P_{s(j) s(i)} |.
inline double check_s_symmetry(const FiniteChain& chain, const Mat& P) {
  double worst = 0.0;
  for (int i = 0; i < chain.n; ++i)
    for (int j = 0; j < chain.n; ++j) {
      const double lhs = chain.pi[i] * P(i, j);
      const double rhs = chain.pi[chain.s_perm[j]] * P(chain.s_perm[j], chain.s_perm[i]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

struct Theorem4Report {
  bool condition_i_pass = true;   // alpha = 0 on {nu > 0} inside A^c
  bool condition_ii_pass = true;  // alpha r = alpha . F_s on A inside {nu > 0}
  double worst_i = 0.0;
  double worst_ii = 0.0;
  int worst_i_row = -1, worst_i_col = -1;
  int worst_ii_row = -1, worst_ii_col = -1;
};

inline Theorem4Report check_theorem4(const FiniteChain& chain, const Mat& alpha,
                                     const NuDecomposition& dec, double tol = 1e-12) {
  Theorem4Report rep;
  for (int i = 0; i < chain.n; ++i)
    for (int j = 0; j < chain.n; ++j) {
      if (dec.nu(i, j) <= 0.0) continue;
      if (!dec.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        if (alpha(i, j) > rep.worst_i) {
          rep.worst_i = alpha(i, j);
          rep.worst_i_row = i;
          rep.worst_i_col = j;
        }
      } else {
        const double v =
            std::abs(alpha(i, j) * dec.r(i, j) - alpha(chain.s_perm[j], chain.s_perm[i]));
        if (v > rep.worst_ii) {
          rep.worst_ii = v;
          rep.worst_ii_row = i;
          rep.worst_ii_col = j;
        }
      }
    }
  rep.condition_i_pass = rep.worst_i <= tol;
  rep.condition_ii_pass = rep.worst_ii <= tol;
  return rep;
}

/// || pi^T P - pi^T ||_inf, the invariance residual.
inline double check_invariance(const FiniteChain& chain, const Mat& P) {
  double worst = 0.0;
  for (int j = 0; j < chain.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < chain.n; ++i) s += chain.pi[i] * P(i, j);
    worst = std::max(worst, std::abs(s - chain.pi[j]));
  }
  return worst;
}

/// Hypotheses of Lemma 5 (positivity of q into the support, both ways
/// through s) and the Theorem 6 side condition (states outside the support
/// propose into it with probability 1).
struct SupportReport {
  bool lemma5_pass = true;
  bool theorem6_pass = true;
  int lemma5_row = -1, lemma5_col = -1;  // first failing (i, j)
  int theorem6_row = -1;
  std::string describe() const {
    std::string s;
    if (lemma5_pass && theorem6_pass) return "all support conditions hold";
    if (!lemma5_pass)
      s += "Lemma 5 fails at (" + std::to_string(lemma5_row) + ", " + std::to_string(lemma5_col) +
           "): q or q.s vanishes into the support. ";
    if (!theorem6_pass)
      s += "Theorem 6 side condition fails at row " + std::to_string(theorem6_row) +
           ": mass leaks outside the support.";
    return s;
  }
};

inline SupportReport check_support_conditions(const FiniteChain& chain) {
  SupportReport rep;
  for (int j = 0; j < chain.n && rep.lemma5_pass; ++j) {
    if (chain.pi[j] <= 0.0) continue;
    for (int i = 0; i < chain.n; ++i) {
      if (chain.Q(i, j) <= 0.0 || chain.Q(chain.s_perm[i], chain.s_perm[j]) <= 0.0) {
        rep.lemma5_pass = false;
        rep.lemma5_row = i;
        rep.lemma5_col = j;
        break;
      }
    }
  }
  for (int i = 0; i < chain.n; ++i) {
    if (chain.pi[i] > 0.0) continue;
    double into_support = 0.0;
    for (int j = 0; j < chain.n; ++j)
      if (chain.pi[j] > 0.0) into_support += chain.Q(i, j);
    if (std::abs(into_support - 1.0) > 1e-12) {
      rep.theorem6_pass = false;
      rep.theorem6_row = i;
      break;
    }
  }
  return rep;
}

/// Searches for a power k <= n with P^k strictly positive on the support;
/// the irreducibility witness behind Theorem 6's hypothesis.
inline bool irreducibility_witness(const FiniteChain& chain, const Mat& P) {
  const int n = chain.n;
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (chain.pi[i] > 0.0) support.push_back(i);
  Mat power = P;
  for (int k = 1; k <= n; ++k) {
    bool all_pos = true;
    for (int i : support)
      for (int j : support)
        if (power(i, j) <= 0.0) all_pos = false;
    if (all_pos) return true;
    Mat next(n, n);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        const double pil = power(i, l);
        if (pil == 0.0) continue;
        for (int j = 0; j < n; ++j) next(i, j) += pil * P(l, j);
      }
    power = next;
  }
  return false;
}

/// Random valid chain generator for the enumeration suites: a random
/// self-inverse permutation, an s-invariant mass vector (optionally with a
/// zero orbit), and a strictly positive row-stochastic Q.
inline FiniteChain random_finite_chain(int n, Rng& rng, bool with_zero_state = false) {
  FiniteChain chain;
  chain.n = n;
  chain.s_perm.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> unpaired;
  for (int i = 0; i < n; ++i) unpaired.push_back(i);
  while (!unpaired.empty()) {
    const int a = unpaired.back();
    unpaired.pop_back();
    if (unpaired.empty() || rng.uniform() < 0.3) {
      chain.s_perm[static_cast<std::size_t>(a)] = a;  // fixed point
    } else {
      const std::size_t k = static_cast<std::size_t>(rng.uniform() * unpaired.size());
      const int b = unpaired[k];
      unpaired.erase(unpaired.begin() + static_cast<std::ptrdiff_t>(k));
      chain.s_perm[static_cast<std::size_t>(a)] = b;
      chain.s_perm[static_cast<std::size_t>(b)] = a;
    }
  }
  chain.pi.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (chain.pi[static_cast<std::size_t>(i)] != 0.0) continue;
    const double mass = 0.1 + rng.uniform();
    chain.pi[static_cast<std::size_t>(i)] = mass;
    chain.pi[static_cast<std::size_t>(chain.s_perm[i])] = mass;  // s-invariance
  }
  if (with_zero_state && n >= 3) {
    // zero out one whole s-orbit, keeping at least two live states
    for (int i = 0; i < n; ++i) {
      const int j = chain.s_perm[i];
      const int live = (i == j) ? n - 1 : n - 2;
      if (live >= 2) {
        chain.pi[static_cast<std::size_t>(i)] = 0.0;
        chain.pi[static_cast<std::size_t>(j)] = 0.0;
        break;
      }
    }
  }
  double total = 0.0;
  for (double m : chain.pi) total += m;
  // paired entries are bit-equal before and after dividing by the same total
  for (auto& m : chain.pi) m /= total;
  chain.Q = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      chain.Q(i, j) = 0.05 + rng.uniform();
      row += chain.Q(i, j);
    }
    for (int j = 0; j < n; ++j) chain.Q(i, j) /= row;
  }
  chain.validate();
  return chain;
}

}  // namespace skewmc
