#include <catch2/catch_amalgamated.hpp>

#include "skewmc/diagnostics.hpp"
#include "skewmc/maps.hpp"
#include "skewmc/numcheck.hpp"
#include "skewmc/samplers.hpp"
#include "skewmc/suites.hpp"
#include "skewmc/targets.hpp"

using namespace skewmc;

namespace {

// Independently coded textbook leapfrog HMC. Per iteration it consumes d
// normals (momentum) and one uniform (accept), the draw order run_nice_full
// documents. Kicks are merged across interior steps, the textbook way.
std::vector<Vec> textbook_hmc(const TargetDensity& target, Vec x, int m, double h, long n_steps,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> states{x};
  const int d = target.dim;
  for (long i = 0; i < n_steps; ++i) {
    const Vec p0 = rng.normal_vec(d);
    Vec q = x;
    Vec p = p0;
    axpy(0.5 * h, target.gradient(q), p);
    for (int l = 0; l < m; ++l) {
      axpy(h, p, q);
      if (l + 1 < m) axpy(h, target.gradient(q), p);
    }
    axpy(0.5 * h, target.gradient(q), p);
    const double log_num = target.log_density(q) + (-0.5 * dot(p, p));
    const double log_den = target.log_density(x) + (-0.5 * dot(p0, p0));
    if (rng.uniform() < std::exp(std::min(0.0, log_num - log_den))) x = q;
    states.push_back(x);
  }
  return states;
}

// Directional variant matching Algorithm 5's draw order: d normals, one
// uniform for the direction, one for the accept decision. The trajectory
// runs with step v*h.
std::vector<Vec> textbook_hmc_directional(const TargetDensity& target, Vec x, int m, double h,
                                          long n_steps, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> states{x};
  const int d = target.dim;
  for (long i = 0; i < n_steps; ++i) {
    const Vec p0 = rng.normal_vec(d);
    const int v = rng.rademacher();
    const double hv = v * h;
    Vec q = x;
    Vec p = p0;
    axpy(0.5 * hv, target.gradient(q), p);
    for (int l = 0; l < m; ++l) {
      axpy(hv, p, q);
      if (l + 1 < m) axpy(hv, target.gradient(q), p);
    }
    axpy(0.5 * hv, target.gradient(q), p);
    const double log_num = target.log_density(q) + (-0.5 * dot(p, p));
    const double log_den = target.log_density(x) + (-0.5 * dot(p0, p0));
    if (rng.uniform() < std::exp(std::min(0.0, log_num - log_den))) x = q;
    states.push_back(x);
  }
  return states;
}

SamplerConfig base_config(SamplerKind kind, long n_steps, std::uint64_t seed, Vec x0) {
  SamplerConfig cfg;
  cfg.kind = kind;
  cfg.n_steps = n_steps;
  cfg.seed = seed;
  cfg.initial = ExtendedState(std::move(x0));
  if (kind_uses_omega(kind)) cfg.omega = 0.5;
  if (kind_uses_beta(kind)) cfg.beta = 0.7;
  return cfg;
}

}  // namespace

TEST_CASE("config validation: omega and beta are required exactly where used") {
  for (SamplerKind kind : all_sampler_kinds()) {
    SamplerConfig cfg = base_config(kind, 10, 1, {0.0, 0.0});
    CHECK_NOTHROW(cfg.validate());
    SamplerConfig missing = cfg;
    missing.omega.reset();
    missing.beta.reset();
    if (kind_uses_omega(kind) || kind_uses_beta(kind)) CHECK_THROWS(missing.validate());
    SamplerConfig extra = cfg;
    if (!kind_uses_omega(kind)) {
      extra.omega = 0.5;
      CHECK_THROWS(extra.validate());
    }
    if (!kind_uses_beta(kind)) {
      SamplerConfig eb = cfg;
      eb.beta = 0.5;
      CHECK_THROWS(eb.validate());
    }
  }
  SamplerConfig bad_beta = base_config(SamplerKind::nice_persistent, 10, 1, {0.0});
  bad_beta.beta = 1.0;  // AR(1) requires beta < 1
  CHECK_THROWS(bad_beta.validate());
  SamplerConfig bad_omega = base_config(SamplerKind::lifted_density, 10, 1, {0.0});
  bad_omega.omega = 0.0;  // Algorithm 4 needs rho = omega/2 > 0
  CHECK_THROWS(bad_omega.validate());
}

TEST_CASE("every sampler is reproducible bit-exactly and has the right trace shape") {
  const StationarityBench bench;
  for (SamplerKind kind : all_sampler_kinds()) {
    SamplerConfig cfg = base_config(kind, 50, 12345, {0.2, -0.1});
    const ChainTrace a = run_sampler(cfg, bench.target.density, bench.phi, bench.inputs());
    const ChainTrace b = run_sampler(cfg, bench.target.density, bench.phi, bench.inputs());
    REQUIRE(a.states.size() == 51);
    REQUIRE(a.accepted.size() == 50);
    REQUIRE(a.log_ratios.size() == 50);
    CHECK(a.states[0].x == Vec{0.2, -0.1});  // states[0] is the initial state
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      CHECK(a.states[i].x == b.states[i].x);
      CHECK(a.states[i].p == b.states[i].p);
      CHECK(a.states[i].v == b.states[i].v);
    }
    CHECK(a.accepted == b.accepted);
    CHECK(a.direction_flips == b.direction_flips);
  }
}

TEST_CASE("rejection branch contracts, kind by kind") {
  const StationarityBench bench;
  // larger steps force rejections
  SamplerInputs inputs = bench.inputs();
  inputs.leapfrog = gradient_spec(bench.target.density, 3, 0.9);
  inputs.g_plus = mala_map(bench.target.density, 1.5);
  inputs.psi = l2hmc_compose(random_l2hmc_spec(bench.target.density, 2, 0.6, 0.5, 0xfeed));

  for (SamplerKind kind : all_sampler_kinds()) {
    SamplerConfig cfg = base_config(kind, 400, 777, {2.5, -2.0});
    const ChainTrace trace = run_sampler(cfg, bench.target.density, bench.phi, inputs);
    long rejections = 0;
    for (std::size_t i = 0; i < trace.accepted.size(); ++i) {
      if (trace.accepted[i]) continue;
      ++rejections;
      const ExtendedState& prev = trace.states[i];
      const ExtendedState& next = trace.states[i + 1];
      const ExtendedState& refr = trace.refreshed[i];
      CHECK(next.x == prev.x);  // every rejection keeps the position
      switch (kind) {
        case SamplerKind::nice_randomized:
          // deterministic branch flips the current momentum; the refresh
          // branch redraws it, recognizable by refr.p != prev.p
          if (*refr.p == *prev.p) CHECK(*next.p == -*prev.p);
          break;
        case SamplerKind::nice_persistent:
          CHECK(*next.p == -*refr.p);  // flips the refreshed momentum
          break;
        case SamplerKind::lifted_density:
        case SamplerKind::l2hmc_lifted_full:
          CHECK(*next.v == -*refr.v);  // flips the proposal direction
          break;
        case SamplerKind::l2hmc_lifted_randomized:
          if (*refr.p == *prev.p && refr.v == prev.v) {
            CHECK(*next.p == *prev.p);
            CHECK(*next.v == -*prev.v);
          }
          break;
        case SamplerKind::l2hmc_persistent:
          CHECK(*next.p == *prev.p);  // keeps the pre-refresh momentum
          CHECK(*next.v == -*prev.v);
          break;
        default:
          break;  // nice_full / l2hmc_original just stay
      }
    }
    INFO(kind_name(kind));
    CHECK(rejections > 10);
  }
}

TEST_CASE("Algorithm 1 matches the textbook HMC oracle step for step") {
  const auto target = make_gaussian(2, {0.3, -0.2}, {1.0, 2.0});
  const auto phi = MomentumDensity::standard_normal(2);
  const LeapfrogSpec spec = gradient_spec(target.density, 3, 0.35);
  SamplerConfig cfg = base_config(SamplerKind::nice_full, 2000, 0xA11CE, {0.0, 0.0});
  const ChainTrace trace = run_nice_full(cfg, target.density, phi, spec);
  const auto oracle = textbook_hmc(target.density, {0.0, 0.0}, 3, 0.35, 2000, 0xA11CE);
  REQUIRE(oracle.size() == trace.states.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i)
    worst = std::max(worst, max_abs_diff(oracle[i], trace.states[i].x));
  CHECK(worst <= 1e-10);
  CHECK(trace.acceptance_rate() > 0.5);
  CHECK(trace.acceptance_rate() < 1.0);
}

TEST_CASE("Algorithm 5 with the leapfrog-equivalent psi matches directional HMC") {
  const auto target = make_gaussian(2, {0.3, -0.2}, {1.0, 2.0});
  const auto phi = MomentumDensity::standard_normal(2);
  const Diffeo psi = l2hmc_compose(l2hmc_leapfrog_spec(target.density, 3, 0.35));
  SamplerConfig cfg = base_config(SamplerKind::l2hmc_original, 2000, 0xB0B, {0.0, 0.0});
  const ChainTrace trace = run_l2hmc(cfg, target.density, phi, psi);
  const auto oracle = textbook_hmc_directional(target.density, {0.0, 0.0}, 3, 0.35, 2000, 0xB0B);
  double worst = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i)
    worst = std::max(worst, max_abs_diff(oracle[i], trace.states[i].x));
  CHECK(worst <= 1e-10);
}

TEST_CASE("Algorithm 1: near-identity map accepts almost surely") {
  const auto target = make_gaussian(1, {0.0}, {1.0});
  const auto phi = MomentumDensity::standard_normal(1);
  const LeapfrogSpec spec = gradient_spec(target.density, 1, 1e-3);
  SamplerConfig cfg = base_config(SamplerKind::nice_full, 1000, 42, {0.3});
  const ChainTrace trace = run_nice_full(cfg, target.density, phi, spec);
  CHECK(trace.acceptance_rate() > 0.999);
}

TEST_CASE("Algorithm 2 with omega = 1 behaves like Algorithm 1") {
  // the refresh branch always fires; the x-marginal matches Algorithm 1
  // distributionally (the draw streams differ by the branch uniform)
  const auto target = make_gaussian(1, {0.0}, {1.0});
  const auto phi = MomentumDensity::standard_normal(1);
  const LeapfrogSpec spec = gradient_spec(target.density, 2, 0.45);
  SamplerConfig cfg1 = base_config(SamplerKind::nice_full, 20000, 9, {0.0});
  SamplerConfig cfg2 = base_config(SamplerKind::nice_randomized, 20000, 10, {0.0});
  cfg2.omega = 1.0;
  const ChainTrace t1 = run_nice_full(cfg1, target.density, phi, spec);
  const ChainTrace t2 = run_nice_randomized(cfg2, target.density, phi, spec);
  const double p = ks_pvalue(
      ks_statistic(coordinate_series(t1, 0), coordinate_series(t2, 0)), 20001, 20001);
  CHECK(p > 0.01);
  // and the momentum is redrawn every iteration: consecutive momenta differ
  for (std::size_t i = 1; i < 50; ++i) CHECK(*t2.states[i].p != *t2.states[i - 1].p);
}

TEST_CASE("Algorithm 3: AR(1) refresh preserves the standard normal") {
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 1.0});
  const auto phi = MomentumDensity::standard_normal(2);
  const LeapfrogSpec spec = gradient_spec(target.density, 2, 0.4);
  SamplerConfig cfg = base_config(SamplerKind::nice_persistent, 30000, 123, {0.0, 0.0});
  cfg.beta = 0.8;
  const ChainTrace trace = run_nice_persistent(cfg, target.density, phi, spec);
  // sample covariance of the refreshed momenta stays near the identity
  double c00 = 0.0, c11 = 0.0, c01 = 0.0, m0 = 0.0, m1 = 0.0;
  const double n = static_cast<double>(trace.refreshed.size());
  for (const auto& z : trace.refreshed) {
    m0 += (*z.p)[0];
    m1 += (*z.p)[1];
  }
  m0 /= n;
  m1 /= n;
  for (const auto& z : trace.refreshed) {
    c00 += ((*z.p)[0] - m0) * ((*z.p)[0] - m0);
    c11 += ((*z.p)[1] - m1) * ((*z.p)[1] - m1);
    c01 += ((*z.p)[0] - m0) * ((*z.p)[1] - m1);
  }
  c00 /= n;
  c11 /= n;
  c01 /= n;
  // ESS-aware slack: AR(1) momenta are correlated across iterations
  const double slack = 3.0 * std::sqrt(2.0 / n) * std::sqrt((1 + 0.8 * 0.8) / (1 - 0.8 * 0.8));
  CHECK(std::abs(c00 - 1.0) < slack);
  CHECK(std::abs(c11 - 1.0) < slack);
  CHECK(std::abs(c01) < slack);

  // non-normal momentum is rejected
  MomentumDensity uniform_phi = phi;
  uniform_phi.is_standard_normal = false;
  CHECK_THROWS_WITH(run_nice_persistent(cfg, target.density, uniform_phi, spec),
                    "persistence requires normal momentum");
}

TEST_CASE("Algorithm 4: equal maps in both directions accept everything on a matched target") {
  // G_{+1} = G_{-1} = identity conditional map and pi0 = phi: the ratio is
  // exactly 1 whatever v, w, so every proposal is accepted
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 1.0});
  const auto phi = MomentumDensity::standard_normal(2);
  SamplerConfig cfg = base_config(SamplerKind::lifted_density, 500, 77, {0.4, -0.4});
  const ConditionalMap id = identity_conditional(2);
  const ChainTrace trace = run_lifted_density(cfg, target.density, phi, id, id);
  for (char a : trace.accepted) CHECK(a == 1);
  for (double r : trace.log_ratios) CHECK(std::abs(r) <= 1e-12);
}

TEST_CASE("Algorithm 4: MALA-cIT on a gaussian recovers the mean") {
  const auto target = make_gaussian(1, {0.0}, {1.0});
  const auto phi = MomentumDensity::standard_normal(1);
  SamplerConfig cfg = base_config(SamplerKind::lifted_density, 20000, 31337, {0.0});
  cfg.omega = 0.4;
  const ConditionalMap g_plus = mala_map(target.density, 0.1);
  const ConditionalMap g_minus = identity_conditional(1);
  const ChainTrace trace = run_lifted_density(cfg, target.density, phi, g_plus, g_minus);
  const auto series = coordinate_series(trace, 0);
  const double e = ess(series);
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(series.size());
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(var / e));
  CHECK(trace.direction_flips > 0);
}

TEST_CASE("stationarity under every algorithm, quick battery") {
  // 2000 chains, marks {1, 5}: the short-run version of the full
  // acceptance criterion
  const auto lines = suite_stationarity(2000, 0x57a7, {1, 5});
  for (const auto& l : lines) {
    INFO(l.name << " p-value " << l.measured);
    CHECK(l.pass);
  }
}

TEST_CASE("lag-1 autocorrelation report: persistent vs full refresh") {
  // reported, not hard-asserted: on a strongly correlated gaussian the
  // nonreversible chain should not backtrack more than the reversible one
  const auto target = make_gaussian(2, {0.0, 0.0}, {1.0, 9.0});
  const auto phi = MomentumDensity::standard_normal(2);
  const LeapfrogSpec spec = gradient_spec(target.density, 2, 0.35);
  SamplerConfig full = base_config(SamplerKind::nice_full, 20000, 5150, {0.0, 0.0});
  SamplerConfig mixed = base_config(SamplerKind::nice_randomized, 20000, 5150, {0.0, 0.0});
  mixed.omega = 0.15;  // mostly deterministic dynamics
  const ChainTrace tf = run_nice_full(full, target.density, phi, spec);
  const ChainTrace tm = run_nice_randomized(mixed, target.density, phi, spec);
  const auto lag1 = [](const std::vector<double>& s) {
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) num += (s[i] - mean) * (s[i + 1] - mean);
    for (double v : s) den += (v - mean) * (v - mean);
    return num / den;
  };
  const double rho_full = lag1(coordinate_series(tf, 1));
  const double rho_mixed = lag1(coordinate_series(tm, 1));
  WARN("lag-1 autocorrelation, coordinate 1: full refresh " << rho_full << ", persistent (omega=0.15) "
                                                            << rho_mixed);
  SUCCEED();
}
