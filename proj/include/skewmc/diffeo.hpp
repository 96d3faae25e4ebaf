#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

#include "skewmc/vec.hpp"

namespace skewmc {

/// An invertible smooth map on R^dim with its log absolute Jacobian
/// determinant. inverse(forward(z)) = z and the forward/inverse log-Jacobians
/// cancel; both are testable through the verify module.
struct Diffeo {
  int dim = 0;
  MapFn forward;
  MapFn inverse;
  std::function<double(const Vec&)> log_jac_forward;
};

/// Psi^v: forward branch for v = +1, inverse branch for v = -1. The signed
/// log-Jacobian uses J_{Psi^v}(z) = 1 / J_{Psi^{-v}}(Psi^v(z)), so the
/// inverse branch evaluates -log_jac_forward at the image.
inline std::pair<Vec, double> apply_signed(const Diffeo& psi, int v, const Vec& point) {
  if (v == +1) {
    Vec image = psi.forward(point);
    return {std::move(image), psi.log_jac_forward(point)};
  }
  if (v == -1) {
    Vec image = psi.inverse(point);
    const double lj = -psi.log_jac_forward(image);
    return {std::move(image), lj};
  }
  throw std::invalid_argument("direction must be -1 or +1");
}

}  // namespace skewmc
