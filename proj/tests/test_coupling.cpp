#include <catch2/catch_amalgamated.hpp>

#include "skewmc/coupling.hpp"
#include "skewmc/l2hmc.hpp"
#include "skewmc/leapfrog.hpp"
#include "skewmc/maps.hpp"
#include "skewmc/numcheck.hpp"
#include "skewmc/targets.hpp"

using namespace skewmc;

namespace {

CouplingSpec zero_coupling(int dim, int K) {
  CouplingSpec spec;
  spec.dim = dim;
  for (int b = 0; b < K; ++b) {
    CouplingBlock block;
    block.part1 = default_split(dim, b);
    const int d1 = static_cast<int>(block.part1.size());
    const int d2 = dim - d1;
    const auto zeros = [](int n) {
      return [n](const Vec&, const Vec&) { return Vec(static_cast<std::size_t>(n), 0.0); };
    };
    block.r1 = zeros(d1);
    block.m1 = zeros(d1);
    block.r2 = zeros(d2);
    block.m2 = zeros(d2);
    spec.blocks.push_back(std::move(block));
  }
  return spec;
}

}  // namespace

TEST_CASE("coupling: zero maps give the identity with zero log-Jacobian") {
  const CouplingSpec spec = zero_coupling(3, 2);
  const Vec x{0.1, 0.2, 0.3}, p{1.0, -1.0, 2.0};
  const auto [out, lj] = coupling_forward(spec, x, p);
  CHECK(out == p);
  CHECK(lj == 0.0);
  CHECK(coupling_inverse(spec, x, p) == p);
}

TEST_CASE("coupling: pure translation on the first split") {
  CouplingSpec spec = zero_coupling(2, 1);
  spec.blocks[0].m1 = [](const Vec&, const Vec&) { return Vec{0.7}; };
  const Vec x{0.0, 0.0}, p{1.0, 2.0};
  const auto [out, lj] = coupling_forward(spec, x, p);
  CHECK(out == Vec{1.7, 2.0});
  CHECK(lj == 0.0);
  CHECK(coupling_inverse(spec, x, out) == p);
}

TEST_CASE("coupling: log-Jacobian matches the FD determinant oracle") {
  Rng rng(21);
  for (int d : {2, 4, 6}) {
    const CouplingSpec spec = random_coupling_spec(d, 3, d, 0.4, 900 + static_cast<std::uint64_t>(d));
    for (int k = 0; k < 20; ++k) {
      const Vec x = rng.normal_vec(d), p = rng.normal_vec(d);
      const auto [out, lj] = coupling_forward(spec, x, p);
      const MapFn fwd = [&spec, &x](const Vec& u) { return coupling_forward(spec, x, u).first; };
      const double fd = fd_log_jacobian(fwd, p);
      CHECK(std::abs(fd - lj) / std::max(1.0, std::abs(lj)) <= 1e-4);
      CHECK(max_abs_diff(coupling_inverse(spec, x, out), p) <= 1e-8);
    }
  }
}

TEST_CASE("coupling: degenerate d = 1 split works") {
  const CouplingSpec spec = random_coupling_spec(1, 3, 1, 0.4, 7);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const Vec x{rng.normal()}, p{rng.normal()};
    const auto [out, lj] = coupling_forward(spec, x, p);
    CHECK(std::isfinite(lj));
    CHECK(max_abs_diff(coupling_inverse(spec, x, out), p) <= 1e-10);
  }
}

TEST_CASE("coupling divergence is reported") {
  CouplingSpec spec = zero_coupling(2, 1);
  spec.blocks[0].m1 = [](const Vec&, const Vec&) { return Vec{kInf}; };
  CHECK_THROWS_WITH(coupling_forward(spec, {0.0, 0.0}, {1.0, 1.0}), "map diverged");
}

TEST_CASE("l2hmc: zero nets reduce the momentum half-step to a gradient kick") {
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 1.0});
  L2hmcSpec spec = l2hmc_leapfrog_spec(target.density, 1, 0.2);
  // strip the position drift to isolate one H block: forward of (x, p)
  // must move p by 2 * delta * grad and x by the drift term only
  const Vec x{1.0, -0.5}, p{0.2, 0.3};
  const auto res = l2hmc_forward(spec, x, p);
  CHECK(res.log_jac == 0.0);
  // H_pre: p + delta*grad(x); F: x + 2*delta*p_half; H_post: + delta*grad(x')
  const double delta = spec.delta;
  Vec p_half = p;
  axpy(delta, target.density.gradient(x), p_half);
  Vec x_new = x;
  axpy(2.0 * delta, p_half, x_new);
  Vec p_new = p_half;
  axpy(delta, target.density.gradient(x_new), p_new);
  CHECK(max_abs_diff(res.x, x_new) <= 1e-15);
  CHECK(max_abs_diff(res.p, p_new) <= 1e-15);
}

TEST_CASE("l2hmc: leapfrog-equivalent spec matches leapfrog_step exactly") {
  // K = 1 with zero nets and delta = h/2 reproduces one classical leapfrog
  // step, i.e. leapfrog_step with M = N = (1/2) grad log pi0
  const auto target = make_gaussian(3, {0.2, -0.4, 0.0}, {1.0, 2.0, 0.5});
  const double h = 0.15;
  const L2hmcSpec spec = l2hmc_leapfrog_spec(target.density, 1, h);
  const LeapfrogSpec lf = gradient_spec(target.density, 1, h);
  Rng rng(33);
  for (int k = 0; k < 50; ++k) {
    const Vec x = rng.normal_vec(3), p = rng.normal_vec(3);
    const auto res = l2hmc_forward(spec, x, p);
    const auto [xl, pl] = leapfrog_step(lf, 1, x, p);
    CHECK(max_abs_diff(res.x, xl) <= 1e-14);
    CHECK(max_abs_diff(res.p, pl) <= 1e-14);
    CHECK(res.log_jac == 0.0);
  }
}

TEST_CASE("l2hmc: multi-block composite matches the m-step integrator") {
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 2.25});
  const double h = 0.2;
  const int m = 4;
  const L2hmcSpec spec = l2hmc_leapfrog_spec(target.density, m, h);
  const LeapfrogSpec lf = gradient_spec(target.density, m, h);
  Rng rng(34);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.normal_vec(2), p = rng.normal_vec(2);
    const auto res = l2hmc_forward(spec, x, p);
    const auto [xl, pl] = leapfrog_forward(lf, x, p);
    CHECK(max_abs_diff(res.x, xl) <= 1e-12);
    CHECK(max_abs_diff(res.p, pl) <= 1e-12);
  }
}

TEST_CASE("l2hmc: log-Jacobian FD agreement and round trips") {
  Rng rng(23);
  for (int d : {2, 4, 6}) {
    const auto target = make_gaussian(d, Vec(static_cast<std::size_t>(d), 0.0),
                                      Vec(static_cast<std::size_t>(d), 1.0));
    const L2hmcSpec spec =
        random_l2hmc_spec(target.density, 2, 0.15, 0.4, 600 + static_cast<std::uint64_t>(d));
    const Diffeo psi = l2hmc_compose(spec);
    for (int k = 0; k < 20; ++k) {
      const Vec z = rng.normal_vec(2 * d);
      const double lj = psi.log_jac_forward(z);
      const double fd = fd_log_jacobian(psi.forward, z);
      CHECK(std::abs(fd - lj) / std::max(1.0, std::abs(lj)) <= 1e-4);
      CHECK(max_abs_diff(psi.inverse(psi.forward(z)), z) <= 1e-8);
      const double lj_inv = -psi.log_jac_forward(psi.inverse(psi.forward(z)));
      CHECK(std::abs(lj + lj_inv) <= 1e-8);
    }
  }
}

TEST_CASE("l2hmc: spec validation") {
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 1.0});
  L2hmcSpec spec = l2hmc_leapfrog_spec(target.density, 1, 0.1);
  spec.delta = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  L2hmcSpec no_grad = l2hmc_leapfrog_spec(target.density, 1, 0.1);
  no_grad.target.gradient = {};
  CHECK_THROWS_AS(no_grad.validate(), std::invalid_argument);
}

TEST_CASE("conditional map densities run through the inverse path") {
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 1.0});
  const auto phi = MomentumDensity::standard_normal(2);
  const ConditionalMap g = mala_map(target.density, 0.3);
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vec x = rng.normal_vec(2), p = rng.normal_vec(2);
    const Vec y = g.forward(x, p);
    // log q(x, y) = log phi(p) - log J_G(x, p) evaluated through the inverse
    const double direct = phi.log_density(p) - g.log_jac_forward(x, p);
    CHECK(conditional_log_density(g, phi, x, y) == Catch::Approx(direct).margin(1e-10));
  }
}
