#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewmc {

using Vec = std::vector<double>;
using MapFn = std::function<Vec(const Vec&)>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Vec operator+(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec operator*(double c, Vec a) {
  for (auto& v : a) v *= c;
  return a;
}

inline Vec operator-(Vec a) {
  for (auto& v : a) v = -v;
  return a;
}

// a += c*b
inline void axpy(double c, const Vec& b, Vec& a) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Dense row-major matrix, sized for the small systems this library handles
/// (finite chains up to a few dozen states, finite-difference Jacobians).
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// log|det| by Gaussian elimination with partial pivoting; magnitudes are
/// accumulated in log space so determinants stay representable for d up to
/// ~50. Throws if a pivot vanishes.
inline double log_abs_det(Mat m) {
  if (m.rows != m.cols) throw std::invalid_argument("log_abs_det: matrix not square");
  const int n = m.rows;
  double log_mag = 0.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == 0.0 || !std::isfinite(m(piv, k)))
      throw std::runtime_error("numerically singular Jacobian");
    if (piv != k)
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(k, j));
    log_mag += std::log(std::abs(m(k, k)));
    for (int i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return log_mag;
}

}  // namespace skewmc
