#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "skewmc/chain_io.hpp"
#include "skewmc/diagnostics.hpp"
#include "skewmc/maps.hpp"
#include "skewmc/samplers.hpp"
#include "skewmc/suites.hpp"
#include "skewmc/targets.hpp"

namespace skewmc {

// Exit code contract: 0 success, 1 check failure, 2 usage/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace cfgdetail {

inline const json& need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline double need_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline long need_integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long>();
}

inline Vec need_vector(const json& obj, const std::string& key, const std::string& where) {
  const json& v = need(obj, key, where);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array");
  Vec out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace cfgdetail

inline TargetModel build_target(const json& spec) {
  using namespace cfgdetail;
  const std::string name = need(spec, "name", "target").get<std::string>();
  if (name == "gaussian") {
    const int dim = static_cast<int>(need_integer(spec, "dim", "target"));
    Vec mean = spec.contains("mean") ? need_vector(spec, "mean", "target")
                                     : Vec(static_cast<std::size_t>(dim), 0.0);
    Vec cov = spec.contains("cov_diag") ? need_vector(spec, "cov_diag", "target")
                                        : Vec(static_cast<std::size_t>(dim), 1.0);
    return make_gaussian(dim, std::move(mean), std::move(cov));
  }
  if (name == "gaussian_mixture") {
    const json& weights = need(spec, "weights", "target");
    const json& means = need(spec, "means", "target");
    std::vector<double> w;
    for (const auto& e : weights) w.push_back(e.get<double>());
    std::vector<Vec> mu;
    for (const auto& e : means) {
      Vec m;
      for (const auto& c : e) m.push_back(c.get<double>());
      mu.push_back(std::move(m));
    }
    std::vector<double> scales;
    for (const auto& e : need(spec, "scales", "target")) scales.push_back(e.get<double>());
    return make_gaussian_mixture(std::move(w), std::move(mu), std::move(scales));
  }
  if (name == "banana")
    return make_banana(static_cast<int>(need_integer(spec, "dim", "target")),
                       need_number(spec, "curvature", "target"));
  if (name == "funnel") return make_funnel(static_cast<int>(need_integer(spec, "dim", "target")));
  throw ConfigError("target.name: unknown target '" + name + "'");
}

inline SamplerKind parse_sampler_kind(const std::string& name) {
  for (SamplerKind kind : all_sampler_kinds())
    if (name == kind_name(kind)) return kind;
  throw ConfigError("sampler.kind: unknown sampler '" + name + "'");
}

/// A fully parsed and built run configuration.
struct RunPlan {
  TargetModel target;
  MomentumDensity phi;
  SamplerConfig sampler;
  SamplerInputs inputs;
  int chains = 1;
  std::string out_dir = ".";
};

inline LeapfrogSpec build_leapfrog(const json& spec, const TargetModel& target, bool log_bound) {
  using namespace cfgdetail;
  const int m = static_cast<int>(need_integer(spec, "m", "transform.leapfrog"));
  const std::string family =
      spec.contains("map_family") ? spec.at("map_family").get<std::string>() : "gradient";
  const double scale = spec.contains("scale") ? spec.at("scale").get<double>() : 0.5;
  const std::uint64_t seed =
      spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0x1eaf;
  LeapfrogSpec out;
  if (family == "tanh") {
    const double h_factor = spec.contains("h_factor") ? spec.at("h_factor").get<double>() : 0.9;
    out = random_nice_spec(target.density.dim, m, h_factor, scale, seed);
  } else {
    const double h = need_number(spec, "h", "transform.leapfrog");
    if (family == "gradient")
      out = gradient_spec(target.density, m, h);
    else if (family == "harmonic")
      out = harmonic_spec(target.density.dim, m, h);
    else if (family == "zero")
      out = zero_spec(target.density.dim, m, h);
    else
      throw ConfigError("transform.leapfrog.map_family: unknown family '" + family + "'");
  }
  if (spec.contains("lipschitz_L")) out.lipschitz_L = spec.at("lipschitz_L").get<double>();
  if (log_bound) {
    if (out.lipschitz_L) {
      const bool ok = step_bound_ok(*out.lipschitz_L, out.m, out.h);
      std::printf("leapfrog: family=%s m=%d h=%.6g declared L=%.6g c0=%.10f NICE2 %s\n",
                  family.c_str(), out.m, out.h, *out.lipschitz_L, compute_c0(),
                  ok ? "certified" : "NOT certified");
    } else {
      std::printf("leapfrog: family=%s m=%d h=%.6g (no declared Lipschitz constant)\n",
                  family.c_str(), out.m, out.h);
    }
  }
  return out;
}

/// Parses a run config document. Throws ConfigError with the offending key
/// path; JSON syntax errors carry the byte offset.
inline RunPlan parse_run_config(const std::string& path, bool log_bound = false) {
  using namespace cfgdetail;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  RunPlan plan;
  plan.target = build_target(need(doc, "target", "config"));
  const int dim = plan.target.density.dim;
  plan.phi = MomentumDensity::standard_normal(dim);

  const json& sampler = need(doc, "sampler", "config");
  plan.sampler.kind = parse_sampler_kind(need(sampler, "kind", "sampler").get<std::string>());
  plan.sampler.n_steps = need_integer(sampler, "n_steps", "sampler");
  plan.sampler.seed = sampler.contains("seed") ? sampler.at("seed").get<std::uint64_t>() : 0;
  if (sampler.contains("omega")) plan.sampler.omega = sampler.at("omega").get<double>();
  if (sampler.contains("beta")) plan.sampler.beta = sampler.at("beta").get<double>();
  if (sampler.contains("acceptance")) {
    const std::string a = sampler.at("acceptance").get<std::string>();
    if (a == "metropolis")
      plan.sampler.accept = AcceptanceFunction::metropolis();
    else if (a == "barker")
      plan.sampler.accept = AcceptanceFunction::barker();
    else
      throw ConfigError("sampler.acceptance: unknown kind '" + a + "'");
  }
  if (sampler.contains("initial")) {
    const json& init = sampler.at("initial");
    plan.sampler.initial.x = need_vector(init, "x", "sampler.initial");
    if (init.contains("p")) plan.sampler.initial.p = need_vector(init, "p", "sampler.initial");
    if (init.contains("v")) plan.sampler.initial.v = static_cast<int>(init.at("v").get<long>());
  } else {
    plan.sampler.initial.x = Vec(static_cast<std::size_t>(dim), 0.0);
  }
  if (static_cast<int>(plan.sampler.initial.x.size()) != dim)
    throw ConfigError("sampler.initial.x: dimension does not match the target");

  const json& transform = need(doc, "transform", "config");
  if (transform.contains("leapfrog"))
    plan.inputs.leapfrog = build_leapfrog(transform.at("leapfrog"), plan.target, log_bound);
  if (transform.contains("l2hmc")) {
    const json& spec = transform.at("l2hmc");
    const int K = static_cast<int>(need_integer(spec, "K", "transform.l2hmc"));
    const std::string family =
        spec.contains("family") ? spec.at("family").get<std::string>() : "tanh";
    if (family == "leapfrog") {
      plan.inputs.psi = l2hmc_compose(
          l2hmc_leapfrog_spec(plan.target.density, K, need_number(spec, "h", "transform.l2hmc")));
    } else if (family == "tanh") {
      const double delta = need_number(spec, "delta", "transform.l2hmc");
      const double scale = spec.contains("scale") ? spec.at("scale").get<double>() : 0.3;
      const std::uint64_t seed =
          spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0x127a6c;
      plan.inputs.psi = l2hmc_compose(random_l2hmc_spec(plan.target.density, K, delta, scale, seed));
    } else {
      throw ConfigError("transform.l2hmc.family: unknown family '" + family + "'");
    }
  }
  if (transform.contains("mala"))
    plan.inputs.g_plus =
        mala_map(plan.target.density, need_number(transform.at("mala"), "gamma", "transform.mala"));
  if (transform.contains("coupling")) {
    const json& spec = transform.at("coupling");
    const int K = static_cast<int>(need_integer(spec, "K", "transform.coupling"));
    if (K == 0) {
      plan.inputs.g_minus = identity_conditional(dim);
    } else {
      const double scale = spec.contains("scale") ? spec.at("scale").get<double>() : 0.3;
      const std::uint64_t seed =
          spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 0xc0119;
      plan.inputs.g_minus = coupling_map(random_coupling_spec(dim, K, dim, scale, seed));
    }
  }

  if (doc.contains("chains")) plan.chains = static_cast<int>(doc.at("chains").get<long>());
  if (plan.chains < 1) throw ConfigError("chains: must be at least 1");
  if (doc.contains("output_dir")) plan.out_dir = doc.at("output_dir").get<std::string>();
  plan.sampler.validate();
  return plan;
}

inline json report_to_json(const DiagnosticsReport& rep) {
  json out;
  out["mean"] = rep.mean;
  out["variance"] = rep.variance;
  out["ess"] = rep.ess_per_coord;
  out["iact"] = rep.iact;
  out["acceptance_rate"] = rep.acceptance_rate;
  out["direction_flip_rate"] = rep.flip_rate;
  if (rep.tv) {
    out["tv_steps"] = rep.tv->steps;
    out["tv"] = rep.tv->tv;
  }
  return out;
}

/// run subcommand: runs `chains` chains on a worker pool (chain c seeded by
/// split_seed(master, c) when more than one chain is requested), writes one
/// trace CSV per chain plus a diagnostics document.
inline int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
                   std::optional<int> chains_override, int workers,
                   std::optional<std::string> out_override) {
  RunPlan plan;
  try {
    plan = parse_run_config(config_path, /*log_bound=*/true);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }
  if (seed_override) plan.sampler.seed = *seed_override;
  if (chains_override) plan.chains = *chains_override;
  if (out_override) plan.out_dir = *out_override;
  std::filesystem::create_directories(plan.out_dir);

  std::vector<json> chain_reports(static_cast<std::size_t>(plan.chains));
  std::vector<std::string> errors(static_cast<std::size_t>(plan.chains));
  std::atomic<int> next{0};
  const int n_workers = std::max(1, std::min(workers, plan.chains));
  const auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= plan.chains) return;
      try {
        SamplerConfig cfg = plan.sampler;
        if (plan.chains > 1) cfg.seed = split_seed(plan.sampler.seed, static_cast<std::uint64_t>(c));
        const ChainTrace trace = run_sampler(cfg, plan.target.density, plan.phi, plan.inputs);
        write_trace_csv(trace, plan.out_dir + "/trace_" + std::to_string(c) + ".csv");
        json rep = report_to_json(summarize(trace));
        rep["chain"] = c;
        rep["seed"] = cfg.seed;
        chain_reports[static_cast<std::size_t>(c)] = std::move(rep);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(c)] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (int c = 0; c < plan.chains; ++c)
    if (!errors[static_cast<std::size_t>(c)].empty()) {
      std::fprintf(stderr, "chain %d failed: %s\n", c, errors[static_cast<std::size_t>(c)].c_str());
      return kExitCheckFailure;
    }
  json doc;
  doc["chains"] = chain_reports;
  std::ofstream out(plan.out_dir + "/diagnostics.json");
  out << doc.dump(2) << "\n";
  std::printf("wrote %d trace file(s) and diagnostics to %s\n", plan.chains, plan.out_dir.c_str());
  return kExitOk;
}

/// verify subcommand. Suites: finite, identities, jacobians, stationarity,
/// all; the finite suite additionally checks a user-supplied chain file.
inline int cmd_verify(const std::string& suite, const std::optional<std::string>& chain_file,
                      std::uint64_t seed, const std::string& out_dir) {
  std::vector<CheckLine> lines;
  try {
    if (suite == "finite" || suite == "all") {
      auto l = suite_finite(100, seed);
      lines.insert(lines.end(), l.begin(), l.end());
      auto d = suite_discrimination(seed + 1);
      lines.insert(lines.end(), d.begin(), d.end());
      if (chain_file) {
        const FiniteChain chain = load_finite_chain(*chain_file);
        for (const auto& fn : {AcceptanceFunction::metropolis(), AcceptanceFunction::barker()})
          for (const auto policy :
               {RejectionPolicy::flip, RejectionPolicy::stay, RejectionPolicy::optimal_flip}) {
            auto fl = finite_chain_battery(chain, fn, policy, "finite.user_chain");
            lines.insert(lines.end(), fl.begin(), fl.end());
          }
      }
    }
    if (suite == "identities" || suite == "all") {
      auto l = suite_identities(seed + 2);
      lines.insert(lines.end(), l.begin(), l.end());
    }
    if (suite == "jacobians" || suite == "all") {
      auto l = suite_jacobians(seed + 3);
      lines.insert(lines.end(), l.begin(), l.end());
    }
    if (suite == "stationarity" || suite == "all") {
      auto l = suite_stationarity(2000, seed + 4);
      lines.insert(lines.end(), l.begin(), l.end());
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "verify error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify error: %s\n", e.what());
    return kExitUsage;
  }
  if (lines.empty()) {
    std::fprintf(stderr, "unknown suite '%s' (use finite, identities, jacobians, stationarity, all)\n",
                 suite.c_str());
    return kExitUsage;
  }
  print_check_lines(lines);
  std::filesystem::create_directories(out_dir);
  const std::string report_path = out_dir + "/verify_" + suite + ".txt";
  if (std::FILE* f = std::fopen(report_path.c_str(), "w")) {
    print_check_lines(lines, f);
    std::fclose(f);
  }
  const bool ok = all_pass(lines);
  std::printf("%zu checks, %s; report written to %s\n", lines.size(), ok ? "all pass" : "FAILURES",
              report_path.c_str());
  return ok ? kExitOk : kExitCheckFailure;
}

/// c0 subcommand: the constant to 10 decimals, plus the certified maximal
/// step for a given Lipschitz constant and step count.
inline int cmd_c0(std::optional<double> L, std::optional<int> m) {
  const double c0 = compute_c0();
  std::printf("c0 = %.10f\n", c0);
  if (L && m) {
    if (*L < 0.0 || *m < 1) {
      std::fprintf(stderr, "c0: need L >= 0 and m >= 1\n");
      return kExitUsage;
    }
    if (*L == 0.0)
      std::printf("L = 0: every step size is certified\n");
    else
      std::printf("h_max(L=%g, m=%d) = %.10f\n", *L, *m, c0 / (std::sqrt(*L) * *m));
  }
  return kExitOk;
}

}  // namespace skewmc
