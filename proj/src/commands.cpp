#include "lghmc/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "lghmc/diagnostics.hpp"
#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"
#include "lghmc/matexp.hpp"
#include "lghmc/potentials.hpp"
#include "lghmc/sampler.hpp"
#include "lghmc/spaces.hpp"
#include "lghmc/version.hpp"

namespace lghmc {

namespace {

using nlohmann::json;

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["space"]["name"] = cfg.space_name;
  j["space"]["n"] = cfg.space_n;
  j["potential"]["name"] = cfg.potential_name;
  j["hmc"]["dt"] = cfg.hmc.dt;
  j["hmc"]["tau"] = cfg.hmc.tau;
  j["hmc"]["n_samples"] = cfg.hmc.n_samples;
  j["hmc"]["seed"] = cfg.hmc.seed;
  j["hmc"]["integrator"] = integrator_name(cfg.hmc.integrator);
  j["hmc"]["randomize_length"] = cfg.hmc.randomize_length;
  j["hmc"]["reproject_every"] = cfg.hmc.reproject_every;
  j["hmc"]["split_normal_step"] = cfg.hmc.split_normal_step;
  j["hmc"]["n_chains"] = cfg.n_chains;
  j["exp"]["taylor_degree"] = cfg.hmc.exp.taylor_degree;
  j["exp"]["epsilon"] = cfg.hmc.exp.epsilon;
  j["exp"]["alpha"] = cfg.hmc.exp.alpha;
  j["exp"]["strategy"] = strategy_name(cfg.hmc.exp.strategy);
  j["output"]["dir"] = cfg.output_dir;
  j["output"]["csv"] = cfg.write_csv;
  j["output"]["json"] = cfg.write_json;
  j["scan"]["step_sizes"] = cfg.scan_step_sizes;
  j["geodesic"]["momentum"] = cfg.geodesic_momentum;
  j["bench"]["dims"] = cfg.bench_dims;
  j["bench"]["n_random"] = cfg.bench_n_random;
  j["bench"]["max_norm"] = cfg.bench_max_norm;
  return j;
}

std::filesystem::path prepare_output_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.output_dir + "'");
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

struct Resolved {
  HomogeneousSpaceSpec spec;
  Potential pot;
};

Resolved resolve(const RunConfig& cfg, bool need_potential) {
  Resolved r{find_space(cfg.space_name, cfg.space_n), Potential{}};
  r.pot = find_potential(need_potential ? cfg.potential_name : "none");
  if (!r.pot.is_zero()) {
    Rng rng(404);
    const double dev = validate_gradient(r.pot, r.spec, rng, 100);
    if (dev > 1e-5)
      throw Error("potential '" + r.pot.name + "' fails its gradient check (dev " +
                  fmt_real(dev) + ")");
  }
  return r;
}

double constraint_target(const HomogeneousSpaceSpec& spec) {
  return spec.invariant_form.inner(spec.base_point, spec.base_point);
}

void check_on_manifold(const HomogeneousSpaceSpec& spec, const std::vector<double>& y,
                       double target) {
  const double v = spec.invariant_form.inner(y, y);
  if (std::fabs(v - target) > 1e-8)
    throw Error("sample left the manifold: form residual " + fmt_real(std::fabs(v - target)));
}

std::string chain_csv(const HomogeneousSpaceSpec& spec, const Chain& chain) {
  const double target = constraint_target(spec);
  std::string out = "index";
  for (int c = 1; c <= spec.n; ++c) out += ",x" + std::to_string(c);
  out += ",delta_h,accepted\n";
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    check_on_manifold(spec, chain.points[i], target);
    out += std::to_string(i);
    for (double x : chain.points[i]) out += "," + fmt_real(x);
    out += "," + fmt_real(chain.delta_h[i]);
    out += chain.accepted[i] ? ",1\n" : ",0\n";
  }
  return out;
}

json chain_meta(const RunConfig& cfg, const Chain& chain, const std::string& csv_name) {
  std::vector<double> exp_dh(chain.delta_h.size());
  for (std::size_t j = 0; j < chain.delta_h.size(); ++j) exp_dh[j] = std::exp(-chain.delta_h[j]);
  json j;
  j["version"] = kVersion;
  j["command"] = "sample";
  j["data_file"] = csv_name;
  j["seed"] = chain.seed;
  j["n_samples"] = chain.points.size();
  j["acceptance_rate"] = chain.acceptance_rate();
  j["mean_exp_minus_dh"] = chain.mean_exp_minus_dh();
  j["stderr_exp_minus_dh"] = batch_means_stderr(exp_dh);
  j["config"] = config_to_json(cfg);
  return j;
}

}  // namespace

int cmd_sample(const RunConfig& cfg, int workers) {
  const Resolved r = resolve(cfg, true);
  if (!r.spec.riemannian)
    throw CapabilityError("space '" + r.spec.name +
                          "' is pseudo-Riemannian: exp(-T) is not normalizable, so HMC sampling "
                          "is unavailable (geodesic mode still works)");
  const std::filesystem::path dir = prepare_output_dir(cfg);

  std::vector<Chain> chains(static_cast<std::size_t>(cfg.n_chains));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= cfg.n_chains) return;
      HmcConfig hc = cfg.hmc;
      hc.seed = cfg.hmc.seed + static_cast<std::uint64_t>(k);
      chains[static_cast<std::size_t>(k)] = hmc_run(hc, r.spec, r.pot);
    }
  };
  const int n_threads = std::max(1, std::min(workers, cfg.n_chains));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (int k = 0; k < cfg.n_chains; ++k) {
    const Chain& chain = chains[static_cast<std::size_t>(k)];
    const std::string base = cfg.n_chains == 1 ? "chain" : "chain_" + std::to_string(k);
    if (cfg.write_csv) write_text(dir / (base + ".csv"), chain_csv(r.spec, chain));
    if (cfg.write_json)
      write_json_file(dir / (base + "_meta.json"), chain_meta(cfg, chain, base + ".csv"));
    std::printf("%s: %zu samples, acceptance %.4f, <exp(-dH)> %.6f\n", base.c_str(),
                chain.points.size(), chain.acceptance_rate(), chain.mean_exp_minus_dh());
  }
  return kExitOk;
}

int cmd_geodesic(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, false);
  const std::filesystem::path dir = prepare_output_dir(cfg);

  std::vector<double> coeffs = cfg.geodesic_momentum;
  if (coeffs.empty()) {
    coeffs.assign(r.spec.p_generators.size(), 0.0);
    coeffs[0] = 1.0;
  }
  if (coeffs.size() != r.spec.p_generators.size())
    throw ConfigError("geodesic.momentum needs " + std::to_string(r.spec.p_generators.size()) +
                      " coefficients for " + r.spec.name);

  const long steps = trajectory_steps(cfg.hmc);
  const auto trace = geodesic_trace(r.spec, coeffs, cfg.hmc.dt, steps, cfg.hmc.exp);

  const double target = constraint_target(r.spec);
  std::string csv = "index,t";
  for (int c = 1; c <= r.spec.n; ++c) csv += ",x" + std::to_string(c);
  csv += "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    check_on_manifold(r.spec, trace[i], target);
    csv += std::to_string(i) + "," + fmt_real(static_cast<double>(i) * cfg.hmc.dt);
    for (double x : trace[i]) csv += "," + fmt_real(x);
    csv += "\n";
  }
  if (cfg.write_csv) write_text(dir / "geodesic.csv", csv);
  if (cfg.write_json) {
    json j;
    j["version"] = kVersion;
    j["command"] = "geodesic";
    j["data_file"] = "geodesic.csv";
    j["seed"] = cfg.hmc.seed;
    j["steps"] = steps;
    j["momentum"] = coeffs;
    j["config"] = config_to_json(cfg);
    write_json_file(dir / "geodesic_meta.json", j);
  }
  std::printf("geodesic: %zu points on %s\n", trace.size(), r.spec.name.c_str());
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.scan_step_sizes.size() < 3)
    throw ConfigError("scan needs at least 3 step sizes to fit a slope");
  const Resolved r = resolve(cfg, true);
  const std::filesystem::path dir = prepare_output_dir(cfg);

  const ScalingReport single = dh_scaling_study(r.spec, r.pot, cfg.hmc.tau, cfg.scan_step_sizes,
                                                cfg.hmc.integrator, cfg.hmc.seed);
  const ScalingReport chains =
      mean_dh2_scaling(r.spec, r.pot, cfg.hmc.tau, cfg.scan_step_sizes, cfg.hmc.n_samples,
                       cfg.hmc.seed, cfg.hmc.integrator);

  // Report the realized step sizes (snapped to an integer step count per
  // trajectory), which is what both fits run against.
  std::string csv = "dt,abs_dh,mean_dh2,mean_exp_dh,stderr_exp_dh,acceptance\n";
  for (std::size_t i = 0; i < cfg.scan_step_sizes.size(); ++i) {
    csv += fmt_real(single.step_sizes[i]);
    csv += "," + fmt_real(single.values[i]);
    csv += "," + fmt_real(chains.values[i]);
    csv += "," + fmt_real(chains.mean_exp_dh[i]);
    csv += "," + fmt_real(chains.stderr_exp_dh[i]);
    csv += "," + fmt_real(chains.acceptance[i]);
    csv += "\n";
  }
  if (cfg.write_csv) write_text(dir / "scan.csv", csv);
  if (cfg.write_json) {
    json j;
    j["version"] = kVersion;
    j["command"] = "scan";
    j["data_file"] = "scan.csv";
    j["seed"] = cfg.hmc.seed;
    j["integrator"] = integrator_name(cfg.hmc.integrator);
    j["abs_dh_slope"] = single.fitted_slope;
    j["abs_dh_r_squared"] = single.r_squared;
    j["abs_dh_reliable"] = single.reliable;
    j["mean_dh2_slope"] = chains.fitted_slope;
    j["mean_dh2_r_squared"] = chains.r_squared;
    j["mean_dh2_reliable"] = chains.reliable;
    j["mean_exp_dh"] = chains.mean_exp_dh;
    j["stderr_exp_dh"] = chains.stderr_exp_dh;
    j["config"] = config_to_json(cfg);
    write_json_file(dir / "scan_meta.json", j);
  }
  std::printf("scan: |dH| slope %.3f (r^2 %.4f), <dH^2> slope %.3f (r^2 %.4f)\n",
              single.fitted_slope, single.r_squared, chains.fitted_slope, chains.r_squared);
  return kExitOk;
}

namespace {

struct BenchSet {
  std::string label;
  int dim;
  std::vector<SquareMatrix> mats;
};

BenchSet antisymmetric_set(int dim, int n_random, double max_norm, Rng& rng) {
  BenchSet set{"antisymmetric", dim, {}};
  for (int t = 0; t < n_random; ++t) {
    SquareMatrix a(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const double v = rng.normal();
        a(i, j) = v;
        a(j, i) = -v;
      }
    const double norm = spectral_norm_bound(a, MatrixStructure::antisymmetric);
    if (norm > 0.0) a *= max_norm * rng.uniform() / norm;
    set.mats.push_back(a);
  }
  return set;
}

BenchSet horizontal_general_set(int n_random, double max_norm, Rng& rng) {
  BenchSet set{"horizontal-general", 3, {}};
  const HomogeneousSpaceSpec spec = make_h2_onesheet();
  for (int t = 0; t < n_random; ++t) {
    SquareMatrix a(3);
    for (const SquareMatrix& b : spec.p_generators) a += b * rng.normal();
    const double norm = spectral_norm_bound(a, MatrixStructure::general);
    if (norm > 0.0) a *= max_norm * rng.uniform() / norm;
    set.mats.push_back(a);
  }
  return set;
}

struct BenchRow {
  std::string set;
  int dim;
  std::string strategy;
  int n = 0;
  double max_error = 0.0;
  double ns_per_call = 0.0;
};

template <typename Fn>
BenchRow bench_strategy(const BenchSet& set, const std::string& name,
                        const std::vector<SquareMatrix>& oracle, Fn&& fn) {
  BenchRow row{set.label, set.dim, name};
  double sink = 0.0;
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> done;
  for (std::size_t i = 0; i < set.mats.size(); ++i) {
    try {
      const SquareMatrix e = fn(set.mats[i]);
      sink += e.trace();
      done.push_back(static_cast<int>(i));
    } catch (const SchurError&) {
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  row.n = static_cast<int>(done.size());
  if (row.n > 0) {
    row.ns_per_call =
        std::chrono::duration<double, std::nano>(stop - start).count() / row.n + 0.0 * sink;
    for (int i : done) {
      const SquareMatrix e = fn(set.mats[static_cast<std::size_t>(i)]);
      row.max_error = std::max(row.max_error, (e - oracle[static_cast<std::size_t>(i)]).max_abs());
    }
  }
  return row;
}

}  // namespace

int cmd_exp_bench(const RunConfig& cfg) {
  const std::filesystem::path dir = prepare_output_dir(cfg);
  Rng rng(cfg.hmc.seed);

  std::vector<BenchSet> sets;
  for (int dim : cfg.bench_dims)
    sets.push_back(antisymmetric_set(dim, cfg.bench_n_random, cfg.bench_max_norm, rng));
  sets.push_back(horizontal_general_set(cfg.bench_n_random, cfg.bench_max_norm, rng));

  ExpConfig oracle_cfg;
  oracle_cfg.taylor_degree = 40;
  oracle_cfg.epsilon = 1e-14;

  const ExpConfig run_cfg;
  std::vector<BenchRow> rows;
  for (const BenchSet& set : sets) {
    std::vector<SquareMatrix> oracle;
    oracle.reserve(set.mats.size());
    for (const SquareMatrix& a : set.mats) oracle.push_back(exp_scale_square(a, oracle_cfg));

    rows.push_back(bench_strategy(set, "scale-square", oracle, [&](const SquareMatrix& a) {
      return exp_scale_square(a, run_cfg);
    }));
    if (set.label == "antisymmetric" && set.dim == 3)
      rows.push_back(bench_strategy(set, "rodrigues", oracle,
                                    [&](const SquareMatrix& a) { return exp_rodrigues_so3(a); }));
    if (set.label == "antisymmetric" && set.dim >= 4)
      rows.push_back(bench_strategy(set, "projector", oracle, [&](const SquareMatrix& a) {
        const auto r = exp_projector_son(a);
        if (!r) throw SchurError("projector not engaged");
        return *r;
      }));
    if (set.label == "horizontal-general")
      rows.push_back(bench_strategy(set, "schur-parlett", oracle,
                                    [&](const SquareMatrix& a) { return exp_schur_parlett(a); }));
  }

  std::string csv = "set,dim,strategy,n,max_error,ns_per_call\n";
  for (const BenchRow& row : rows) {
    csv += row.set + "," + std::to_string(row.dim) + "," + row.strategy;
    csv += "," + std::to_string(row.n);
    csv += "," + fmt_real(row.max_error);
    csv += "," + fmt_real(row.ns_per_call);
    csv += "\n";
    std::printf("%-18s dim %d %-13s n=%-4d max_err %.3e  %.0f ns/call\n", row.set.c_str(), row.dim,
                row.strategy.c_str(), row.n, row.max_error, row.ns_per_call);
  }
  if (cfg.write_csv) write_text(dir / "bench.csv", csv);
  if (cfg.write_json) {
    json j;
    j["version"] = kVersion;
    j["command"] = "exp-bench";
    j["data_file"] = "bench.csv";
    j["seed"] = cfg.hmc.seed;
    j["config"] = config_to_json(cfg);
    json jr = json::array();
    for (const BenchRow& row : rows) {
      json x;
      x["set"] = row.set;
      x["dim"] = row.dim;
      x["strategy"] = row.strategy;
      x["n"] = row.n;
      x["max_error"] = row.max_error;
      x["ns_per_call"] = row.ns_per_call;
      jr.push_back(x);
    }
    j["rows"] = jr;
    write_json_file(dir / "bench_meta.json", j);
  }
  return kExitOk;
}

int cmd_validate_space(const RunConfig& cfg) {
  const HomogeneousSpaceSpec spec = find_space(cfg.space_name, cfg.space_n);
  Rng rng(cfg.hmc.seed);
  const SpaceReport rep = validate_space(spec, rng);

  struct Row {
    const char* name;
    double value;
    double tol;
  };
  const Row table[] = {
      {"stabilizer", rep.stabilizer, 1e-10},
      {"reductivity", rep.reductivity, 1e-12},
      {"symmetric_bracket", rep.symmetric_bracket, 1e-12},
      {"form_algebra", rep.form_algebra, 1e-12},
      {"form_group", rep.form_group, 1e-9},
      {"base_point", rep.base_point, 1e-12},
      {"orthonormality", rep.orthonormality, 1e-12},
      {"ad_invariance", rep.ad_invariance, 1e-10},
  };
  bool ok = true;
  std::printf("space %s (n=%d)\n", spec.name.c_str(), spec.n);
  json jrows;
  for (const Row& row : table) {
    const bool pass = row.value <= row.tol;
    ok = ok && pass;
    std::printf("  %-18s %.3e (tol %.0e) %s\n", row.name, row.value, row.tol,
                pass ? "PASS" : "FAIL");
    jrows[row.name] = {{"value", row.value}, {"tolerance", row.tol}, {"pass", pass}};
  }
  if (cfg.write_json) {
    const std::filesystem::path dir = prepare_output_dir(cfg);
    json j;
    j["version"] = kVersion;
    j["command"] = "validate-space";
    j["seed"] = cfg.hmc.seed;
    j["space"] = spec.name;
    j["n"] = spec.n;
    j["residuals"] = jrows;
    j["pass"] = ok;
    j["config"] = config_to_json(cfg);
    write_json_file(dir / "validate_meta.json", j);
  }
  if (!ok) {
    std::fprintf(stderr, "error: structural residuals exceed tolerances\n");
    return kExitNumerical;
  }
  return kExitOk;
}

int run_command(const std::string& command, const RunConfig& cfg, int workers) {
  try {
    if (command == "sample") return cmd_sample(cfg, workers);
    if (command == "geodesic") return cmd_geodesic(cfg);
    if (command == "scan") return cmd_scan(cfg);
    if (command == "exp-bench") return cmd_exp_bench(cfg);
    if (command == "validate-space") return cmd_validate_space(cfg);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCapability;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace lghmc
