#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "skewmc/rng.hpp"
#include "skewmc/samplers.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// Prefix means of f along the trace (exact arithmetic: one running sum).
inline std::vector<double> ergodic_average(const ChainTrace& trace,
                                           const std::function<double(const ExtendedState&)>& f) {
  if (trace.states.empty()) throw std::invalid_argument("empty trace");
  std::vector<double> means;
  means.reserve(trace.states.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    sum += f(trace.states[i]);
    means.push_back(sum / static_cast<double>(i + 1));
  }
  return means;
}

/// Effective sample size by the initial-positive-sequence truncation:
/// n / (1 + 2 sum rho_k), the sum cut at the first nonpositive even-lag
/// pair, clamped to (0, n]. A zero-variance series returns the documented
/// sentinel 1.
inline double ess(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("series too short for ess");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  const auto gamma = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (series[i] - mean) * (series[i + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double g0 = gamma(0);
  if (g0 <= 0.0) return 1.0;  // constant series sentinel
  double tau = 1.0;
  for (std::size_t k = 1; k + 1 < n; k += 2) {
    const double pair = (gamma(k) + gamma(k + 1)) / g0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  const double out = static_cast<double>(n) / tau;
  return std::clamp(out, 1e-300, static_cast<double>(n));
}

inline std::vector<double> coordinate_series(const ChainTrace& trace, int coord) {
  std::vector<double> s;
  s.reserve(trace.states.size());
  for (const auto& z : trace.states) s.push_back(z.x[static_cast<std::size_t>(coord)]);
  return s;
}

struct TvCurve {
  std::vector<long> steps;
  std::vector<double> tv;
};

namespace detail {

// equal-mass bin edges fitted on the reference sample
inline std::vector<double> quantile_edges(std::vector<double> ref, int bins) {
  std::sort(ref.begin(), ref.end());
  std::vector<double> edges;
  for (int b = 1; b < bins; ++b) {
    const double q = static_cast<double>(b) / bins;
    const double idx = q * (static_cast<double>(ref.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    const double v = ref[lo] * (1.0 - frac) + ref[std::min(lo + 1, ref.size() - 1)] * frac;
    edges.push_back(v);
  }
  return edges;
}

inline int bin_of(double v, const std::vector<double>& edges) {
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
}

}  // namespace detail

/// Empirical TV distance between the step-k law of many chains and the
/// target, on equal-mass histogram bins fitted to an exact reference
/// sample. Positions must be 1-d or 2-d; project higher-dimensional chains
/// first.
inline TvCurve histogram_tv(const std::vector<ChainTrace>& chains,
                            const std::function<Vec(Rng&)>& target_sampler, int bins,
                            const std::vector<long>& step_marks, Rng& rng,
                            std::size_t n_reference = 0) {
  if (chains.empty()) throw std::invalid_argument("no chains");
  const int d = static_cast<int>(chains.front().states.front().x.size());
  if (d > 2) throw std::invalid_argument("project first");
  if (n_reference == 0) n_reference = chains.size();

  std::vector<Vec> ref(n_reference);
  for (auto& r : ref) r = target_sampler(rng);
  std::vector<std::vector<double>> edges(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    std::vector<double> coords;
    coords.reserve(n_reference);
    for (const auto& r : ref) coords.push_back(r[static_cast<std::size_t>(k)]);
    edges[static_cast<std::size_t>(k)] = detail::quantile_edges(std::move(coords), bins);
  }
  const auto cell_of = [&](const Vec& x) {
    int cell = detail::bin_of(x[0], edges[0]);
    if (d == 2) cell = cell * bins + detail::bin_of(x[1], edges[1]);
    return cell;
  };
  const int n_cells = d == 2 ? bins * bins : bins;
  std::vector<double> ref_hist(static_cast<std::size_t>(n_cells), 0.0);
  for (const auto& r : ref) ref_hist[static_cast<std::size_t>(cell_of(r))] += 1.0;
  for (auto& c : ref_hist) c /= static_cast<double>(n_reference);

  TvCurve curve;
  for (long mark : step_marks) {
    std::vector<double> hist(static_cast<std::size_t>(n_cells), 0.0);
    std::size_t count = 0;
    for (const auto& chain : chains) {
      if (mark < 0 || mark >= static_cast<long>(chain.states.size()))
        throw std::invalid_argument("step mark out of range");
      hist[static_cast<std::size_t>(cell_of(chain.states[static_cast<std::size_t>(mark)].x))] += 1.0;
      ++count;
    }
    for (auto& c : hist) c /= static_cast<double>(count);
    double tv = 0.0;
    for (int c = 0; c < n_cells; ++c)
      tv += std::abs(hist[static_cast<std::size_t>(c)] - ref_hist[static_cast<std::size_t>(c)]);
    curve.steps.push_back(mark);
    curve.tv.push_back(0.5 * tv);
  }
  return curve;
}

struct DiagnosticsReport {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> ess_per_coord;
  std::vector<double> iact;  // n / ess
  double acceptance_rate = 0.0;
  double flip_rate = 0.0;
  std::optional<TvCurve> tv;
};

inline DiagnosticsReport summarize(const ChainTrace& trace) {
  DiagnosticsReport rep;
  const int d = static_cast<int>(trace.states.front().x.size());
  const double n = static_cast<double>(trace.states.size());
  for (int k = 0; k < d; ++k) {
    const auto series = coordinate_series(trace, k);
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= std::max(1.0, n - 1.0);
    rep.mean.push_back(mean);
    rep.variance.push_back(var);
    const double e = ess(series);
    rep.ess_per_coord.push_back(e);
    rep.iact.push_back(n / e);
  }
  rep.acceptance_rate = trace.acceptance_rate();
  rep.flip_rate = trace.accepted.empty()
                      ? 0.0
                      : static_cast<double>(trace.direction_flips) /
                            static_cast<double>(trace.accepted.size());
  return rep;
}

}  // namespace skewmc
