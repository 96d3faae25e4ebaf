#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "skewmc/core.hpp"
#include "skewmc/rng.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

/// A zoo entry: the density with analytic gradient, an exact sampler for
/// reference draws, and the analytic mean. Every zoo target is positive and
/// continuously differentiable.
struct TargetModel {
  TargetDensity density;
  std::function<Vec(Rng&)> sample;
  Vec mean;
};

inline TargetModel make_gaussian(int dim, Vec mean, Vec cov_diag) {
  if (static_cast<int>(mean.size()) != dim || static_cast<int>(cov_diag.size()) != dim)
    throw std::invalid_argument("gaussian: parameter sizes must match dim");
  for (double v : cov_diag)
    if (v <= 0.0) throw std::invalid_argument("gaussian: variances must be positive");
  TargetModel model;
  model.density.dim = dim;
  model.density.log_density = [mean, cov_diag](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - mean[i];
      s += d * d / cov_diag[i];
    }
    return -0.5 * s;
  };
  model.density.gradient = [mean, cov_diag](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -(x[i] - mean[i]) / cov_diag[i];
    return g;
  };
  model.sample = [dim, mean, cov_diag](Rng& rng) {
    Vec x(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mean[i] + std::sqrt(cov_diag[i]) * rng.normal();
    return x;
  };
  model.mean = mean;
  return model;
}

inline TargetModel make_gaussian_mixture(std::vector<double> weights, std::vector<Vec> means,
                                         std::vector<double> scales) {
  const std::size_t K = weights.size();
  if (K == 0 || means.size() != K || scales.size() != K)
    throw std::invalid_argument("mixture: component lists must agree");
  const int dim = static_cast<int>(means.front().size());
  double total = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("mixture: weights must be positive");
    total += w;
  }
  for (auto& w : weights) w /= total;
  for (const auto& m : means)
    if (static_cast<int>(m.size()) != dim) throw std::invalid_argument("mixture: ragged means");
  for (double s : scales)
    if (s <= 0.0) throw std::invalid_argument("mixture: scales must be positive");

  const auto component_log = [=](const Vec& x, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = (x[i] - means[k][i]) / scales[k];
      s += d * d;
    }
    return std::log(weights[k]) - 0.5 * s - dim * std::log(scales[k]);
  };

  TargetModel model;
  model.density.dim = dim;
  model.density.log_density = [=](const Vec& x) {
    double m = kNegInf;
    for (std::size_t k = 0; k < K; ++k) m = std::max(m, component_log(x, k));
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k) s += std::exp(component_log(x, k) - m);
    return m + std::log(s);
  };
  model.density.gradient = [=](const Vec& x) {
    double m = kNegInf;
    for (std::size_t k = 0; k < K; ++k) m = std::max(m, component_log(x, k));
    double norm = 0.0;
    Vec g(x.size(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double w = std::exp(component_log(x, k) - m);
      norm += w;
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] += w * (-(x[i] - means[k][i]) / (scales[k] * scales[k]));
    }
    for (auto& v : g) v /= norm;
    return g;
  };
  model.sample = [=](Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = K - 1;
    for (std::size_t k = 0; k < K; ++k) {
      acc += weights[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    Vec x(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = means[pick][i] + scales[pick] * rng.normal();
    return x;
  };
  model.mean.assign(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < model.mean.size(); ++i) model.mean[i] += weights[k] * means[k][i];
  return model;
}

/// Banana-shaped warp of a Gaussian: x1 ~ N(0, 4), x2 + b(x1^2 - 4) ~ N(0, 1),
/// remaining coordinates standard normal.
inline TargetModel make_banana(int dim, double curvature) {
  if (dim < 2) throw std::invalid_argument("banana: dim must be at least 2");
  const double s1sq = 4.0;
  TargetModel model;
  model.density.dim = dim;
  model.density.log_density = [=](const Vec& x) {
    const double w = x[1] + curvature * (x[0] * x[0] - s1sq);
    double rest = 0.0;
    for (std::size_t j = 2; j < x.size(); ++j) rest += x[j] * x[j];
    return -0.5 * x[0] * x[0] / s1sq - 0.5 * w * w - 0.5 * rest;
  };
  model.density.gradient = [=](const Vec& x) {
    Vec g(x.size());
    const double w = x[1] + curvature * (x[0] * x[0] - s1sq);
    g[0] = -x[0] / s1sq - w * 2.0 * curvature * x[0];
    g[1] = -w;
    for (std::size_t j = 2; j < x.size(); ++j) g[j] = -x[j];
    return g;
  };
  model.sample = [=](Rng& rng) {
    Vec x(static_cast<std::size_t>(dim));
    x[0] = 2.0 * rng.normal();
    x[1] = rng.normal() - curvature * (x[0] * x[0] - s1sq);
    for (std::size_t j = 2; j < x.size(); ++j) x[j] = rng.normal();
    return x;
  };
  model.mean.assign(static_cast<std::size_t>(dim), 0.0);
  return model;
}

/// Neal's funnel: x1 ~ N(0, 9), x_j | x1 ~ N(0, exp(x1)).
inline TargetModel make_funnel(int dim) {
  if (dim < 2) throw std::invalid_argument("funnel: dim must be at least 2");
  TargetModel model;
  model.density.dim = dim;
  model.density.log_density = [dim](const Vec& x) {
    double rest = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) rest += x[j] * x[j];
    return -x[0] * x[0] / 18.0 - 0.5 * (dim - 1) * x[0] - 0.5 * std::exp(-x[0]) * rest;
  };
  model.density.gradient = [dim](const Vec& x) {
    Vec g(x.size());
    double rest = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) rest += x[j] * x[j];
    g[0] = -x[0] / 9.0 - 0.5 * (dim - 1) + 0.5 * std::exp(-x[0]) * rest;
    for (std::size_t j = 1; j < x.size(); ++j) g[j] = -std::exp(-x[0]) * x[j];
    return g;
  };
  model.sample = [dim](Rng& rng) {
    Vec x(static_cast<std::size_t>(dim));
    x[0] = 3.0 * rng.normal();
    const double s = std::exp(0.5 * x[0]);
    for (std::size_t j = 1; j < x.size(); ++j) x[j] = s * rng.normal();
    return x;
  };
  model.mean.assign(static_cast<std::size_t>(dim), 0.0);
  return model;
}

}  // namespace skewmc
