#pragma once

#include <cstdint>
#include <vector>

#include "lghmc/matexp.hpp"
#include "lghmc/matrix.hpp"
#include "lghmc/potentials.hpp"
#include "lghmc/rng.hpp"
#include "lghmc/spaces.hpp"

namespace lghmc {

enum class Integrator { leapfrog, campostrini };

// Trajectory exponentials run far below the reversibility budget (1e-9); the
// looser matexp default is for standalone exponential calls.
inline ExpConfig default_trajectory_exp() {
  ExpConfig cfg;
  cfg.epsilon = 1e-12;
  return cfg;
}

struct HmcConfig {
  double dt = 0.1;
  double tau = 1.0;
  long n_samples = 100;
  std::uint64_t seed = 1;
  Integrator integrator = Integrator::leapfrog;
  bool randomize_length = false;
  long reproject_every = 1;  // T-steps between reprojections; 0 disables
  bool split_normal_step = false;
  ExpConfig exp = default_trajectory_exp();
};

struct Phase {
  SquareMatrix q;
  SquareMatrix p;
};

struct TrajectoryStats {
  double delta_h = 0.0;
  double h_initial = 0.0;
  double h_final = 0.0;
  bool accepted = false;
};

struct Chain {
  std::vector<std::vector<double>> points;
  std::vector<double> delta_h;
  std::vector<bool> accepted;
  std::uint64_t seed = 0;

  double acceptance_rate() const;
  double mean_exp_minus_dh() const;
};

long trajectory_steps(const HmcConfig& cfg);

double kinetic_energy(const HomogeneousSpaceSpec& spec, const SquareMatrix& p);
double hamiltonian(const Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec);

// Momentum rate -dV/dq expressed in the horizontal basis.
SquareMatrix force(const SquareMatrix& q, const Potential& pot, const HomogeneousSpaceSpec& spec);

void vhat_step(double eps, Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec);
void that_step(double eps, Phase& phase, const HomogeneousSpaceSpec& spec, const ExpConfig& cfg);
void split_normal_that_step(double eps, Phase& phase, const HomogeneousSpaceSpec& spec,
                            const ExpConfig& cfg);

// Integrate one trajectory of `steps` position updates in place.
void integrate_trajectory(Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec,
                          const HmcConfig& cfg, long steps);

SquareMatrix gibbs_momentum(const HomogeneousSpaceSpec& spec, Rng& rng);
SquareMatrix random_horizontal(const HomogeneousSpaceSpec& spec, Rng& rng);

TrajectoryStats metropolis(Rng& rng, Phase& state, const Phase& proposal, double h0, double h1);

TrajectoryStats mdmc_update(Phase& phase, const Potential& pot, const HomogeneousSpaceSpec& spec,
                            const HmcConfig& cfg, Rng& rng);

Chain hmc_run(const HmcConfig& cfg, const HomogeneousSpaceSpec& spec, const Potential& pot);

// V = 0 time series of projected points (includes the starting point).
std::vector<std::vector<double>> geodesic_trace(const HomogeneousSpaceSpec& spec,
                                                const std::vector<double>& momentum_coeffs_in,
                                                double dt, long steps, const ExpConfig& cfg);

}  // namespace lghmc
