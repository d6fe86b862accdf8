#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lghmc/potentials.hpp"
#include "lghmc/sampler.hpp"
#include "lghmc/spaces.hpp"

namespace lghmc {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (log x, log y).
LineFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

// Standard error of the mean of a correlated series, batch means with
// sqrt(n) batches.
double batch_means_stderr(const std::vector<double>& series);

struct ScalingReport {
  // Realized step sizes: each requested dt is snapped to tau / round(tau / dt)
  // so that every trajectory integrates to exactly tau.
  std::vector<double> step_sizes;
  std::vector<double> values;  // per dt: |dH| for single trajectories, <dH^2> for chains
  std::vector<double> mean_exp_dh;
  std::vector<double> stderr_exp_dh;
  std::vector<double> acceptance;
  double fitted_slope = 0.0;
  double r_squared = 0.0;
  bool reliable = false;
};

// Single seeded trajectory per step size; fits log |dH| against log dt.
ScalingReport dh_scaling_study(const HomogeneousSpaceSpec& spec, const Potential& pot, double tau,
                               const std::vector<double>& step_sizes, Integrator integrator,
                               std::uint64_t seed);

// Full chain per step size; fits log <dH^2> against log dt and records the
// <exp(-dH)> = 1 identity with batch-means errors.
ScalingReport mean_dh2_scaling(const HomogeneousSpaceSpec& spec, const Potential& pot, double tau,
                               const std::vector<double>& step_sizes, long n_samples,
                               std::uint64_t seed, Integrator integrator = Integrator::leapfrog);

// Integrate, flip momentum, integrate, flip; max entrywise deviation from the
// starting phase over trials.
double reversibility_check(const HomogeneousSpaceSpec& spec, const Potential& pot, double dt,
                           double tau, int n_trials, std::uint64_t seed,
                           Integrator integrator = Integrator::leapfrog);

struct ChainSummary {
  long n = 0;
  double acceptance_rate = 0.0;
  double mean_exp_minus_dh = 0.0;
  double stderr_exp_minus_dh = 0.0;
  std::vector<double> first_moments;
  std::vector<double> first_stderr;
  std::vector<double> second_moments;
  std::vector<double> second_stderr;
  double worst_first_pull = 0.0;   // |moment - 0| in stderr units
  double worst_second_pull = 0.0;  // |moment - 1/n| in stderr units
  bool moments_ok = false;         // all pulls <= 4
};

// Moment check against the uniform measure on the unit sphere: E[x_i] = 0,
// E[x_i^2] = 1/n.
ChainSummary uniform_sphere_moment_check(const Chain& chain);

// Pairwise agreement of every applicable exponential strategy on random
// algebra elements of the named spaces.
double exp_cross_validation(const std::vector<std::string>& space_names, int n_random,
                            double max_norm, std::uint64_t seed);

}  // namespace lghmc
