#include "lghmc/sampler.hpp"

#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"

namespace lghmc {

double Chain::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  double n = 0.0;
  for (bool a : accepted) n += a ? 1.0 : 0.0;
  return n / static_cast<double>(accepted.size());
}

double Chain::mean_exp_minus_dh() const {
  if (delta_h.empty()) return 0.0;
  double s = 0.0;
  for (double d : delta_h) s += std::exp(-d);
  return s / static_cast<double>(delta_h.size());
}

long trajectory_steps(const HmcConfig& cfg) {
  if (cfg.dt <= 0.0 || cfg.tau <= 0.0) throw ConfigError("dt and tau must be positive");
  const long steps = std::llround(cfg.tau / cfg.dt);
  return steps < 1 ? 1 : steps;
}

double kinetic_energy(const HomogeneousSpaceSpec& spec, const SquareMatrix& p) {
  const std::vector<double> c = momentum_coeffs(spec, p);
  double t = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    t += spec.kinetic_signs[i] * spec.kinetic_eigenvalues[i] * c[i] * c[i];
  return t;
}

double hamiltonian(const Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec) {
  return kinetic_energy(spec, phase.p) + pot.value(project_to_manifold(phase.q, spec));
}

SquareMatrix force(const SquareMatrix& q, const Potential& pot,
                   const HomogeneousSpaceSpec& spec) {
  const std::vector<double> y = q.apply(spec.base_point);
  const std::vector<double> g = pot.gradient(y);
  SquareMatrix f(spec.n);
  for (std::size_t i = 0; i < spec.p_generators.size(); ++i) {
    const SquareMatrix& t = spec.p_generators[i];
    const std::vector<double> v = q.apply(t.apply(spec.base_point));
    double dv = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) dv += g[j] * v[j];
    // Hamilton's equations in coefficient form: 2 s_i lambda_i dp_i/dt = -e_i(V).
    f += t * (-dv / (2.0 * spec.kinetic_eigenvalues[i] * spec.kinetic_signs[i]));
  }
  return f;
}

void vhat_step(double eps, Phase& phase, const Potential& pot,
               const HomogeneousSpaceSpec& spec) {
  if (pot.is_zero()) return;
  phase.p += force(phase.q, pot, spec) * eps;
}

namespace {

void position_multiply(double eps, Phase& phase, const HomogeneousSpaceSpec& spec,
                       const ExpConfig& cfg, bool split) {
  if (split) {
    if (!spec.has_normal_split)
      throw StructureError("space '" + spec.name + "' registers no normal decomposition");
    const SquareMatrix sym = (phase.p + phase.p.transpose()) * 0.5;
    const SquareMatrix asym = (phase.p - phase.p.transpose()) * 0.5;
    phase.q = phase.q * exp_dispatch(sym * (0.5 * eps), cfg, MatrixStructure::normal) *
              exp_dispatch(asym * eps, cfg, MatrixStructure::antisymmetric) *
              exp_dispatch(sym * (0.5 * eps), cfg, MatrixStructure::normal);
  } else {
    phase.q = phase.q * exp_dispatch(phase.p * eps, cfg, spec.momentum_structure);
  }
}

struct TrajectoryContext {
  const Potential& pot;
  const HomogeneousSpaceSpec& spec;
  const HmcConfig& cfg;
  long t_steps = 0;

  void that(double eps) {
    position_multiply(eps, *phase, spec, cfg.exp, cfg.split_normal_step);
    ++t_steps;
    if (cfg.reproject_every > 0 && t_steps % cfg.reproject_every == 0)
      phase->q = gram_schmidt_project(phase->q, spec.invariant_form);
  }
  void vhat(double eps) { vhat_step(eps, *phase, pot, spec); }

  // One symmetric second-order block of `steps` position updates of size h.
  void leapfrog(double h, long steps) {
    vhat(0.5 * h);
    for (long l = 0; l < steps; ++l) {
      that(h);
      vhat(l + 1 == steps ? 0.5 * h : h);
    }
  }

  Phase* phase = nullptr;
};

}  // namespace

void that_step(double eps, Phase& phase, const HomogeneousSpaceSpec& spec, const ExpConfig& cfg) {
  position_multiply(eps, phase, spec, cfg, false);
  phase.q = gram_schmidt_project(phase.q, spec.invariant_form);
}

void split_normal_that_step(double eps, Phase& phase, const HomogeneousSpaceSpec& spec,
                            const ExpConfig& cfg) {
  position_multiply(eps, phase, spec, cfg, true);
  phase.q = gram_schmidt_project(phase.q, spec.invariant_form);
}

void integrate_trajectory(Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec,
                          const HmcConfig& cfg, long steps) {
  TrajectoryContext ctx{pot, spec, cfg};
  ctx.phase = &phase;
  if (cfg.integrator == Integrator::leapfrog) {
    ctx.leapfrog(cfg.dt, steps);
    return;
  }
  // Fourth-order triple jump: three second-order blocks with the middle one
  // run backwards, sized so the dt^3 errors cancel.
  const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double g2 = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));
  for (long l = 0; l < steps; ++l) {
    ctx.leapfrog(g1 * cfg.dt, 1);
    ctx.leapfrog(g2 * cfg.dt, 1);
    ctx.leapfrog(g1 * cfg.dt, 1);
  }
}

SquareMatrix gibbs_momentum(const HomogeneousSpaceSpec& spec, Rng& rng) {
  if (!spec.riemannian)
    throw CapabilityError("space '" + spec.name +
                          "' has an indefinite kinetic form: the Gibbs momentum distribution "
                          "exp(-T) is not normalizable, so momentum refreshment is disabled");
  std::vector<double> c(spec.p_generators.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = rng.normal() * std::sqrt(0.5 / spec.kinetic_eigenvalues[i]);
  return momentum_from_coeffs(spec, c);
}

SquareMatrix random_horizontal(const HomogeneousSpaceSpec& spec, Rng& rng) {
  std::vector<double> c(spec.p_generators.size());
  for (double& x : c) x = rng.normal();
  return momentum_from_coeffs(spec, c);
}

TrajectoryStats metropolis(Rng& rng, Phase& state, const Phase& proposal, double h0, double h1) {
  TrajectoryStats st;
  st.h_initial = h0;
  st.h_final = h1;
  st.delta_h = h1 - h0;
  const double u = rng.uniform();
  st.accepted = u <= std::exp(-st.delta_h);
  if (st.accepted) state = proposal;
  return st;
}

TrajectoryStats mdmc_update(Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec,
                            const HmcConfig& cfg, Rng& rng) {
  long steps = trajectory_steps(cfg);
  if (cfg.randomize_length && steps > 1) steps = rng.uniform_int((steps + 1) / 2, steps);

  const double h0 = hamiltonian(phase, pot, spec);
  Phase proposal = phase;
  integrate_trajectory(proposal, pot, spec, cfg, steps);
  const double h1 = hamiltonian(proposal, pot, spec);

  const TrajectoryStats st = metropolis(rng, phase, proposal, h0, h1);
  // Momentum flip: irrelevant under full refreshment but kept for the kernel
  // to be a reversible involution.
  if (st.accepted) phase.p = -phase.p;
  return st;
}

Chain hmc_run(const HmcConfig& cfg, const HomogeneousSpaceSpec& spec, const Potential& pot) {
  Rng rng(cfg.seed);
  Phase phase{SquareMatrix::identity(spec.n), SquareMatrix(spec.n)};
  Chain chain;
  chain.seed = cfg.seed;
  chain.points.reserve(static_cast<std::size_t>(cfg.n_samples));
  chain.delta_h.reserve(static_cast<std::size_t>(cfg.n_samples));
  chain.accepted.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (long i = 0; i < cfg.n_samples; ++i) {
    phase.p = gibbs_momentum(spec, rng);
    const TrajectoryStats st = mdmc_update(phase, pot, spec, cfg, rng);
    chain.points.push_back(project_to_manifold(phase.q, spec));
    chain.delta_h.push_back(st.delta_h);
    chain.accepted.push_back(st.accepted);
  }
  return chain;
}

std::vector<std::vector<double>> geodesic_trace(const HomogeneousSpaceSpec& spec,
                                                const std::vector<double>& momentum_coeffs_in,
                                                double dt, long steps, const ExpConfig& cfg) {
  Phase phase{SquareMatrix::identity(spec.n), momentum_from_coeffs(spec, momentum_coeffs_in)};
  std::vector<std::vector<double>> trace;
  trace.reserve(static_cast<std::size_t>(steps) + 1);
  trace.push_back(project_to_manifold(phase.q, spec));
  for (long i = 0; i < steps; ++i) {
    that_step(dt, phase, spec, cfg);
    trace.push_back(project_to_manifold(phase.q, spec));
  }
  return trace;
}

}  // namespace lghmc
