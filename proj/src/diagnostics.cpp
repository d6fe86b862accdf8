#include "lghmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"
#include "lghmc/matexp.hpp"

namespace lghmc {

LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit fit;
  const std::size_t k = xs.size();
  if (k < 2 || ys.size() != k) return fit;
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    lx[i] = std::log(std::max(xs[i], 1e-300));
    ly[i] = std::log(std::max(ys[i], 1e-300));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double batch_means_stderr(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 4) return 0.0;
  std::size_t nb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  if (nb < 2) nb = 2;
  const std::size_t m = n / nb;
  std::vector<double> means(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = b * m; i < (b + 1) * m; ++i) s += series[i];
    means[b] = s / static_cast<double>(m);
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= static_cast<double>(nb);
  double var = 0.0;
  for (double v : means) var += (v - grand) * (v - grand);
  var /= static_cast<double>(nb - 1);
  return std::sqrt(var / static_cast<double>(nb));
}

namespace {

void check_step_sizes(const std::vector<double>& step_sizes) {
  if (step_sizes.size() < 3)
    throw ConfigError("scaling studies need at least 3 step sizes for a trustworthy fit");
  for (double dt : step_sizes)
    if (dt <= 0.0) throw ConfigError("step sizes must be positive");
}

void finish_fit(ScalingReport& r) {
  const LineFit fit = fit_loglog(r.step_sizes, r.values);
  r.fitted_slope = fit.slope;
  r.r_squared = fit.r_squared;
  r.reliable = fit.r_squared >= 0.98;
  for (double v : r.values)
    if (v <= 1e-12) r.reliable = false;  // at the arithmetic noise floor
}

}  // namespace

ScalingReport dh_scaling_study(const HomogeneousSpaceSpec& spec, const Potential& pot, double tau,
                               const std::vector<double>& step_sizes, Integrator integrator,
                               std::uint64_t seed) {
  check_step_sizes(step_sizes);
  Rng rng(seed);
  const SquareMatrix p0 = random_horizontal(spec, rng);

  ScalingReport r;
  for (double dt : step_sizes) {
    HmcConfig cfg;
    cfg.dt = dt;
    cfg.tau = tau;
    cfg.integrator = integrator;
    // Snap to an integer step count covering exactly tau, so every row
    // integrates the same flow and the fit runs against the realized dt.
    const long steps = trajectory_steps(cfg);
    cfg.dt = tau / static_cast<double>(steps);
    r.step_sizes.push_back(cfg.dt);
    Phase phase{SquareMatrix::identity(spec.n), p0};
    const double h0 = hamiltonian(phase, pot, spec);
    integrate_trajectory(phase, pot, spec, cfg, steps);
    const double h1 = hamiltonian(phase, pot, spec);
    r.values.push_back(std::fabs(h1 - h0));
  }
  finish_fit(r);
  return r;
}

ScalingReport mean_dh2_scaling(const HomogeneousSpaceSpec& spec, const Potential& pot, double tau,
                               const std::vector<double>& step_sizes, long n_samples,
                               std::uint64_t seed, Integrator integrator) {
  check_step_sizes(step_sizes);
  ScalingReport r;
  for (std::size_t i = 0; i < step_sizes.size(); ++i) {
    HmcConfig cfg;
    cfg.dt = step_sizes[i];
    cfg.tau = tau;
    cfg.n_samples = n_samples;
    cfg.seed = seed + i;
    cfg.integrator = integrator;
    cfg.dt = tau / static_cast<double>(trajectory_steps(cfg));  // realized step size
    r.step_sizes.push_back(cfg.dt);
    const Chain chain = hmc_run(cfg, spec, pot);
    double dh2 = 0.0;
    std::vector<double> exp_dh(chain.delta_h.size());
    for (std::size_t j = 0; j < chain.delta_h.size(); ++j) {
      dh2 += chain.delta_h[j] * chain.delta_h[j];
      exp_dh[j] = std::exp(-chain.delta_h[j]);
    }
    r.values.push_back(dh2 / static_cast<double>(chain.delta_h.size()));
    r.mean_exp_dh.push_back(chain.mean_exp_minus_dh());
    r.stderr_exp_dh.push_back(batch_means_stderr(exp_dh));
    r.acceptance.push_back(chain.acceptance_rate());
  }
  finish_fit(r);
  return r;
}

double reversibility_check(const HomogeneousSpaceSpec& spec, const Potential& pot, double dt,
                           double tau, int n_trials, std::uint64_t seed, Integrator integrator) {
  Rng rng(seed);
  HmcConfig cfg;
  cfg.dt = dt;
  cfg.tau = tau;
  cfg.integrator = integrator;
  const long steps = trajectory_steps(cfg);

  double worst = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    SquareMatrix start = random_horizontal(spec, rng) * 0.5;
    Phase phase{gram_schmidt_project(exp_dispatch(start, cfg.exp, spec.momentum_structure),
                                     spec.invariant_form),
                random_horizontal(spec, rng)};
    const Phase initial = phase;
    integrate_trajectory(phase, pot, spec, cfg, steps);
    phase.p = -phase.p;
    integrate_trajectory(phase, pot, spec, cfg, steps);
    phase.p = -phase.p;
    worst = std::max(worst, (phase.q - initial.q).max_abs());
    worst = std::max(worst, (phase.p - initial.p).max_abs());
  }
  return worst;
}

ChainSummary uniform_sphere_moment_check(const Chain& chain) {
  ChainSummary s;
  s.n = static_cast<long>(chain.points.size());
  if (chain.points.empty()) return s;
  s.acceptance_rate = chain.acceptance_rate();
  s.mean_exp_minus_dh = chain.mean_exp_minus_dh();
  std::vector<double> exp_dh(chain.delta_h.size());
  for (std::size_t j = 0; j < chain.delta_h.size(); ++j) exp_dh[j] = std::exp(-chain.delta_h[j]);
  s.stderr_exp_minus_dh = batch_means_stderr(exp_dh);

  const std::size_t dim = chain.points.front().size();
  const double target2 = 1.0 / static_cast<double>(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> xs(chain.points.size()), x2s(chain.points.size());
    for (std::size_t j = 0; j < chain.points.size(); ++j) {
      xs[j] = chain.points[j][c];
      x2s[j] = xs[j] * xs[j];
    }
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      m1 += xs[j];
      m2 += x2s[j];
    }
    m1 /= static_cast<double>(xs.size());
    m2 /= static_cast<double>(xs.size());
    const double e1 = batch_means_stderr(xs);
    const double e2 = batch_means_stderr(x2s);
    s.first_moments.push_back(m1);
    s.first_stderr.push_back(e1);
    s.second_moments.push_back(m2);
    s.second_stderr.push_back(e2);
    if (e1 > 0.0) s.worst_first_pull = std::max(s.worst_first_pull, std::fabs(m1) / e1);
    if (e2 > 0.0)
      s.worst_second_pull = std::max(s.worst_second_pull, std::fabs(m2 - target2) / e2);
  }
  s.moments_ok = s.worst_first_pull <= 4.0 && s.worst_second_pull <= 4.0;
  return s;
}

double exp_cross_validation(const std::vector<std::string>& space_names, int n_random,
                            double max_norm, std::uint64_t seed) {
  Rng rng(seed);
  const ExpConfig cfg;
  double worst = 0.0;
  for (const std::string& name : space_names) {
    const HomogeneousSpaceSpec spec = find_space(name, name == "sphere-n" ? 5 : 0);
    auto basis = spec.k_generators;
    basis.insert(basis.end(), spec.p_generators.begin(), spec.p_generators.end());
    // Hyperbolic spaces draw from the horizontal subspace, where the
    // non-normal structure lives; spheres exercise the full algebra.
    const auto& draw_from = spec.name.rfind("h2", 0) == 0 ? spec.p_generators : basis;

    for (int t = 0; t < n_random; ++t) {
      SquareMatrix a(spec.n);
      for (const SquareMatrix& b : draw_from) a += b * rng.normal();
      const MatrixStructure structure = a.detect_structure();
      const double norm = spectral_norm_bound(a, structure);
      if (norm > 0.0) a *= max_norm * rng.uniform() / norm;

      std::vector<SquareMatrix> results;
      results.push_back(exp_scale_square(a, cfg));
      if (structure == MatrixStructure::antisymmetric) {
        if (spec.n == 3) results.push_back(exp_rodrigues_so3(a));
        if (auto r = exp_projector_son(a)) results.push_back(*r);
      }
      try {
        results.push_back(exp_schur_parlett(a));
      } catch (const SchurError&) {
        // complex or clustered spectrum: strategy not applicable here
      }
      for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j)
          worst = std::max(worst, (results[i] - results[j]).max_abs());
    }
  }
  return worst;
}

}  // namespace lghmc
