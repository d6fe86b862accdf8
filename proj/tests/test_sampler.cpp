#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "lghmc/diagnostics.hpp"
#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"
#include "lghmc/matexp.hpp"
#include "lghmc/potentials.hpp"
#include "lghmc/rng.hpp"
#include "lghmc/sampler.hpp"
#include "lghmc/spaces.hpp"

using namespace lghmc;

namespace {

ExpConfig tight() {
  ExpConfig cfg;
  cfg.epsilon = 1e-13;
  return cfg;
}

Phase identity_phase(const HomogeneousSpaceSpec& spec) {
  return Phase{SquareMatrix::identity(spec.n), SquareMatrix(spec.n)};
}

Phase random_phase(const HomogeneousSpaceSpec& spec, Rng& rng) {
  Phase ph = identity_phase(spec);
  ph.p = random_horizontal(spec, rng);
  ph.q = exp_dispatch(random_horizontal(spec, rng) * 0.4, tight(), spec.momentum_structure);
  ph.q = gram_schmidt_project(ph.q, spec.invariant_form);
  return ph;
}

double form_drift(const Phase& ph, const HomogeneousSpaceSpec& spec) {
  const SquareMatrix m = spec.invariant_form.matrix();
  return (ph.q.transpose() * m * ph.q - m).max_abs();
}

}  // namespace

TEST_CASE("trajectory step counts") {
  HmcConfig cfg;
  cfg.tau = 1.0;
  cfg.dt = 0.1;
  CHECK(trajectory_steps(cfg) == 10);
  cfg.dt = 0.25;
  CHECK(trajectory_steps(cfg) == 4);
  cfg.tau = 0.25;
  cfg.dt = 0.1;
  CHECK(trajectory_steps(cfg) == 3);  // rounds 2.5 away from zero
  cfg.tau = 0.01;
  CHECK(trajectory_steps(cfg) == 1);  // never below one step
  cfg.dt = -1.0;
  CHECK_THROWS_AS(trajectory_steps(cfg), ConfigError);
}

TEST_CASE("kinetic energy in coefficients and traces") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const SquareMatrix p = momentum_from_coeffs(s2, {0.8, -0.5});
  const double t = kinetic_energy(s2, p);
  CHECK(t == doctest::Approx(0.5 * (0.64 + 0.25)).epsilon(1e-14));
  // Dual form: T = tr(P^T P) / 4 for the orthonormal Riemannian bases.
  CHECK(t == doctest::Approx(0.25 * (p.transpose() * p).trace()).epsilon(1e-14));

  const HomogeneousSpaceSpec one = make_h2_onesheet();
  const SquareMatrix po = momentum_from_coeffs(one, {0.8, -0.5});
  const double to = kinetic_energy(one, po);
  CHECK(to == doctest::Approx(0.5 * (0.64 - 0.25)).epsilon(1e-14));
  // Indefinite dual form: T = tr(P P) / 4.
  CHECK(to == doctest::Approx(0.25 * (po * po).trace()).epsilon(1e-14));

  // The indefinite kinetic form goes negative on timelike directions.
  CHECK(kinetic_energy(one, momentum_from_coeffs(one, {0.1, 2.0})) < 0.0);
}

TEST_CASE("hamiltonian adds the lifted potential") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("y_z2_expx2");
  Phase ph = identity_phase(s2);
  ph.p = momentum_from_coeffs(s2, {1.0, 0.0});
  // At the base point (1, 0, 0): U = 0 + 0 + e^1.
  CHECK(hamiltonian(ph, pot, s2) == doctest::Approx(0.5 + std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("force matches the directional derivative of the potential") {
  Rng rng(71);
  for (const char* name : {"s2", "h2-twosheet", "h2-onesheet"}) {
    const HomogeneousSpaceSpec spec = find_space(name);
    const Potential pot = find_potential(spec.n == 3 ? "yz2expx2" : "none");
    for (int trial = 0; trial < 5; ++trial) {
      const Phase ph = random_phase(spec, rng);
      const SquareMatrix f = force(ph.q, pot, spec);
      const std::vector<double> fc = momentum_coeffs(spec, f);
      for (int i = 0; i < spec.horizontal_dim(); ++i) {
        // Central difference of V(Q exp(eps T_i)) at eps = 0.
        const double h = 1e-6;
        const SquareMatrix ti = spec.p_generators[static_cast<std::size_t>(i)];
        const auto value = [&](double eps) {
          const SquareMatrix g = exp_dispatch(ti * eps, tight(), spec.momentum_structure);
          return pot.value((ph.q * g).apply(spec.base_point));
        };
        const double dv = (value(h) - value(-h)) / (2.0 * h);
        const double expected =
            -dv / (2.0 * spec.kinetic_eigenvalues[static_cast<std::size_t>(i)] *
                   spec.kinetic_signs[static_cast<std::size_t>(i)]);
        INFO("space ", name, " coeff ", i);
        CHECK(fc[static_cast<std::size_t>(i)] ==
              doctest::Approx(expected).epsilon(5e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("force direction at the base point") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  // U = z has gradient (0, 0, 1); at Q = I only the first horizontal
  // generator moves the base point in z.
  Potential zpot;
  zpot.name = "z";
  zpot.value = [](const std::vector<double>& y) { return y[2]; };
  zpot.gradient = [](const std::vector<double>&) {
    return std::vector<double>{0.0, 0.0, 1.0};
  };
  const SquareMatrix f = force(SquareMatrix::identity(3), zpot, s2);
  const std::vector<double> c = momentum_coeffs(s2, f);
  CHECK(c[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(0.0).epsilon(1e-14));

  // The zero potential produces no force.
  const SquareMatrix f0 = force(SquareMatrix::identity(3), find_potential("none"), s2);
  CHECK(f0.max_abs() == 0.0);
}

TEST_CASE("position and momentum updates move only their own variable") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("yz2expx2");
  Rng rng(5);
  Phase ph = random_phase(s2, rng);

  Phase after = ph;
  vhat_step(0.2, after, pot, s2);
  CHECK((after.q - ph.q).max_abs() == 0.0);
  CHECK((after.p - ph.p).max_abs() > 0.0);

  Phase moved = ph;
  that_step(0.2, moved, s2, tight());
  CHECK((moved.p - ph.p).max_abs() == 0.0);
  CHECK((moved.q - ph.q).max_abs() > 0.0);

  // Two half kicks equal one full kick.
  Phase twice = ph, once = ph;
  vhat_step(0.1, twice, pot, s2);
  vhat_step(0.1, twice, pot, s2);
  vhat_step(0.2, once, pot, s2);
  CHECK((twice.p - once.p).max_abs() < 1e-15);

  // A position step and its inverse cancel.
  Phase back = ph;
  that_step(0.3, back, s2, tight());
  that_step(-0.3, back, s2, tight());
  CHECK((back.q - ph.q).max_abs() < 1e-10);
}

TEST_CASE("geodesics follow great circles") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const double c2 = 0.7, c3 = -0.4;
  const double omega = std::sqrt(c2 * c2 + c3 * c3);
  const double dt = 0.05;
  const long steps = 40;
  const auto trace = geodesic_trace(s2, {c2, c3}, dt, steps, tight());
  REQUIRE(trace.size() == static_cast<std::size_t>(steps) + 1);
  double worst = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const std::vector<double> want = {std::cos(omega * t),
                                      -c3 * std::sin(omega * t) / omega,
                                      c2 * std::sin(omega * t) / omega};
    const std::vector<double>& got = trace[static_cast<std::size_t>(k)];
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(got[i] - want[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("leapfrog with zero potential is the free flow") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential none = find_potential("none");
  Rng rng(11);
  Phase ph = random_phase(s2, rng);
  Phase direct = ph;

  HmcConfig cfg;
  cfg.dt = 0.2;
  integrate_trajectory(ph, none, s2, cfg, 5);

  for (int i = 0; i < 5; ++i) that_step(0.2, direct, s2, cfg.exp);
  CHECK((ph.q - direct.q).max_abs() < 1e-13);
  CHECK((ph.p - direct.p).max_abs() == 0.0);
}

TEST_CASE("trajectories conserve energy at the expected order") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("yz2expx2");
  Rng rng(13);
  const Phase start = random_phase(s2, rng);

  const auto dh_for = [&](double dt, Integrator integrator) {
    HmcConfig cfg;
    cfg.dt = dt;
    cfg.integrator = integrator;
    Phase ph = start;
    const double h0 = hamiltonian(ph, pot, s2);
    integrate_trajectory(ph, pot, s2, cfg, std::llround(0.4 / dt));
    return std::fabs(hamiltonian(ph, pot, s2) - h0);
  };

  // Halving dt scales |dH| by ~2^2 for leapfrog and ~2^4 for the fourth-order
  // composition.
  const double l1 = dh_for(0.05, Integrator::leapfrog);
  const double l2 = dh_for(0.025, Integrator::leapfrog);
  CHECK(l1 / l2 > 3.0);
  CHECK(l1 / l2 < 5.0);

  const double c1 = dh_for(0.05, Integrator::campostrini);
  const double c2 = dh_for(0.025, Integrator::campostrini);
  CHECK(c1 / c2 > 10.0);
  CHECK(c1 / c2 < 24.0);

  // The fourth-order integrator conserves far better at equal step size.
  CHECK(c1 < 0.5 * l1);
}

TEST_CASE("trajectories keep the momentum horizontal and the orbit on the form") {
  Rng rng(17);
  for (const char* name : {"s2", "h2-twosheet", "h2-onesheet"}) {
    const HomogeneousSpaceSpec spec = find_space(name);
    const Potential pot = find_potential("yz2expx2");
    Phase ph = random_phase(spec, rng);
    // The hyperboloids are non-compact and the potential walls grow like
    // exp(x^2); keep the trajectory cool and short so it stays confined.
    ph.p *= 0.4;
    HmcConfig cfg;
    cfg.dt = 0.01;
    integrate_trajectory(ph, pot, spec, cfg, 30);
    INFO("space ", name);
    CHECK(momentum_residual_in_k(ph.p, spec) <= 1e-11);
    CHECK(form_drift(ph, spec) <= 1e-10);
  }
}

TEST_CASE("reprojection cadence controls the membership drift") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("yz2expx2");
  Rng rng(19);
  const Phase start = random_phase(s2, rng);

  HmcConfig cfg;
  cfg.dt = 0.1;

  Phase projected = start;
  cfg.reproject_every = 1;
  integrate_trajectory(projected, pot, s2, cfg, 500);
  const double drift_projected = form_drift(projected, s2);

  Phase raw = start;
  cfg.reproject_every = 0;
  integrate_trajectory(raw, pot, s2, cfg, 500);
  const double drift_raw = form_drift(raw, s2);

  CHECK(drift_projected <= 1e-12);
  CHECK(drift_raw > drift_projected);
  CHECK(drift_raw < 1e-6);  // still sane, just unmaintained
}

TEST_CASE("trajectories are reversible") {
  Rng rng(23);
  for (const char* name : {"s2", "h2-twosheet", "h2-onesheet"}) {
    const HomogeneousSpaceSpec spec = find_space(name);
    const Potential pot = find_potential("h2fig");
    for (Integrator integrator : {Integrator::leapfrog, Integrator::campostrini}) {
      Phase ph = random_phase(spec, rng);
      ph.p *= 0.4;  // stay inside the confined region on the non-compact spaces
      const Phase start = ph;
      HmcConfig cfg;
      cfg.dt = 0.02;
      cfg.integrator = integrator;
      integrate_trajectory(ph, pot, spec, cfg, 20);
      ph.p = -ph.p;
      integrate_trajectory(ph, pot, spec, cfg, 20);
      ph.p = -ph.p;
      INFO("space ", name);
      CHECK((ph.q - start.q).max_abs() <= 1e-9);
      CHECK((ph.p - start.p).max_abs() <= 1e-9);
    }
  }
}

TEST_CASE("split position update for mixed-normality momenta") {
  const HomogeneousSpaceSpec one = make_h2_onesheet();
  Rng rng(29);

  SUBCASE("agrees with the exact flow to third order") {
    Phase base = identity_phase(one);
    base.p = momentum_from_coeffs(one, {0.9, 0.6});
    const auto error_at = [&](double eps) {
      Phase split = base;
      split_normal_that_step(eps, split, one, tight());
      Phase exact = base;
      that_step(eps, exact, one, tight());
      return (split.q - exact.q).max_abs();
    };
    const double e1 = error_at(0.4);
    const double e2 = error_at(0.2);
    CHECK(e1 > 1e-7);  // the two flows genuinely differ
    CHECK(e1 / e2 > 6.0);
    CHECK(e1 / e2 < 10.5);
  }

  SUBCASE("is exactly reversible") {
    Phase ph = identity_phase(one);
    ph.p = momentum_from_coeffs(one, {0.9, 0.6});
    const Phase start = ph;
    split_normal_that_step(0.3, ph, one, tight());
    split_normal_that_step(-0.3, ph, one, tight());
    CHECK((ph.q - start.q).max_abs() < 1e-11);
  }

  SUBCASE("reduces to the plain step for antisymmetric momenta") {
    const HomogeneousSpaceSpec s2 = make_sphere_s2();
    Phase a = identity_phase(s2);
    a.p = momentum_from_coeffs(s2, {0.7, -0.2});
    Phase b = a;
    that_step(0.25, a, s2, tight());
    split_normal_that_step(0.25, b, s2, tight());
    CHECK((a.q - b.q).max_abs() < 1e-14);
  }

  SUBCASE("requires a registered decomposition") {
    HomogeneousSpaceSpec stripped = make_h2_onesheet();
    stripped.has_normal_split = false;
    Phase ph = identity_phase(stripped);
    ph.p = momentum_from_coeffs(stripped, {1.0, 0.0});
    CHECK_THROWS_AS(split_normal_that_step(0.1, ph, stripped, tight()), StructureError);
  }
}

TEST_CASE("gibbs momentum sampling") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  Rng rng(31);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const SquareMatrix p = gibbs_momentum(s2, rng);
    const std::vector<double> c = momentum_coeffs(s2, p);
    for (double x : c) {
      sum += x;
      sum2 += x * x;
    }
  }
  const double n2 = 2.0 * n;
  // lambda = 1/2 makes each coefficient standard normal.
  CHECK(std::fabs(sum / n2) < 4.0 / std::sqrt(n2));
  CHECK(std::fabs(sum2 / n2 - 1.0) < 4.0 * std::sqrt(2.0 / n2));

  const HomogeneousSpaceSpec one = make_h2_onesheet();
  CHECK_THROWS_AS(gibbs_momentum(one, rng), CapabilityError);
  try {
    gibbs_momentum(one, rng);
    FAIL("expected a capability error");
  } catch (const CapabilityError& e) {
    CHECK(std::string(e.what()).find("momentum refreshment") != std::string::npos);
  }
}

TEST_CASE("metropolis acceptance rule") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  Rng rng(37);
  Phase state = identity_phase(s2);
  Phase proposal = identity_phase(s2);
  proposal.q = exp_dispatch(momentum_from_coeffs(s2, {0.5, 0.0}), tight());

  // Downhill and flat proposals always pass.
  TrajectoryStats st = metropolis(rng, state, proposal, 1.0, 0.5);
  CHECK(st.accepted);
  CHECK(st.delta_h == doctest::Approx(-0.5));
  st = metropolis(rng, state, proposal, 1.0, 1.0);
  CHECK(st.accepted);

  // A huge climb never passes.
  Phase untouched = identity_phase(s2);
  st = metropolis(rng, untouched, proposal, 0.0, 1e9);
  CHECK_FALSE(st.accepted);
  CHECK(untouched.q.data() == SquareMatrix::identity(3).data());

  // dH = ln 2 accepts with probability 1/2.
  int accepted = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    Phase s = identity_phase(s2);
    if (metropolis(rng, s, proposal, 0.0, std::log(2.0)).accepted) ++accepted;
  }
  const double rate = static_cast<double>(accepted) / n;
  CHECK(std::fabs(rate - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("mdmc updates") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("y_z2_expx2");

  SUBCASE("small steps nearly conserve and accept") {
    HmcConfig cfg;
    cfg.dt = 0.001;
    cfg.tau = 0.05;
    Rng rng(41);
    Phase ph = identity_phase(s2);
    ph.p = gibbs_momentum(s2, rng);
    const TrajectoryStats st = mdmc_update(ph, pot, s2, cfg, rng);
    CHECK(std::fabs(st.delta_h) < 1e-6);
    CHECK(st.accepted);
  }

  SUBCASE("rejected proposals keep the state bit for bit") {
    HmcConfig cfg;
    cfg.dt = 0.9;  // coarse steps reject often
    cfg.tau = 2.7;
    Rng rng(43);
    Phase ph = identity_phase(s2);
    int rejections = 0;
    for (int i = 0; i < 60 && rejections < 3; ++i) {
      ph.p = gibbs_momentum(s2, rng);
      const Phase before = ph;
      const TrajectoryStats st = mdmc_update(ph, pot, s2, cfg, rng);
      if (!st.accepted) {
        ++rejections;
        CHECK(ph.q.data() == before.q.data());
        CHECK(ph.p.data() == before.p.data());
      }
    }
    CHECK(rejections >= 3);
  }

  SUBCASE("accepted proposals flip the momentum") {
    HmcConfig cfg;
    cfg.dt = 0.05;
    cfg.tau = 0.1;  // two steps, nearly always accepted
    Rng rng(47);
    Phase ph = identity_phase(s2);
    ph.p = gibbs_momentum(s2, rng);
    Phase copy = ph;
    const TrajectoryStats st = mdmc_update(ph, pot, s2, cfg, rng);
    REQUIRE(st.accepted);
    // Rebuild the proposal by hand and compare the flipped momentum.
    integrate_trajectory(copy, pot, s2, cfg, trajectory_steps(cfg));
    CHECK((ph.p + copy.p).max_abs() == 0.0);
    CHECK((ph.q - copy.q).max_abs() == 0.0);
  }

  SUBCASE("randomized lengths stay in the upper half range") {
    HmcConfig cfg;
    cfg.dt = 0.1;
    cfg.tau = 1.0;
    cfg.randomize_length = true;
    Rng draw(53);
    // The step count draw is internal; verify indirectly through determinism:
    // the same seed gives the same chain with and without a fresh context.
    const Chain a = hmc_run(cfg, s2, pot);
    const Chain b = hmc_run(cfg, s2, pot);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
      CHECK(a.points[i] == b.points[i]);
  }
}

TEST_CASE("hmc chains are deterministic and healthy") {
  const HomogeneousSpaceSpec s2 = make_sphere_s2();
  const Potential pot = find_potential("y_z2_expx2");
  HmcConfig cfg;
  cfg.dt = 0.1;
  cfg.tau = 0.25;
  cfg.n_samples = 200;
  cfg.seed = 7;

  const Chain chain = hmc_run(cfg, s2, pot);
  REQUIRE(chain.points.size() == 200);
  CHECK(chain.seed == 7);

  // Healthy acceptance at this resolution.
  CHECK(chain.acceptance_rate() > 0.5);
  CHECK(chain.acceptance_rate() <= 1.0);

  // Every sample stays on the unit sphere.
  for (const auto& y : chain.points) {
    const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    CHECK(std::fabs(r2 - 1.0) < 1e-9);
  }

  // Bitwise reproducibility.
  const Chain again = hmc_run(cfg, s2, pot);
  for (std::size_t i = 0; i < chain.points.size(); ++i)
    CHECK(chain.points[i] == again.points[i]);
  CHECK(chain.delta_h == again.delta_h);

  // A different seed decorrelates.
  cfg.seed = 8;
  const Chain other = hmc_run(cfg, s2, pot);
  CHECK(other.points.back() != chain.points.back());
}
