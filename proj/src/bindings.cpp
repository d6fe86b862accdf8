#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "lghmc/diagnostics.hpp"
#include "lghmc/errors.hpp"
#include "lghmc/matexp.hpp"
#include "lghmc/potentials.hpp"
#include "lghmc/sampler.hpp"
#include "lghmc/spaces.hpp"
#include "lghmc/version.hpp"

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

lghmc::SquareMatrix from_rows(const Rows& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw lghmc::DimensionError("matrix must be non-empty");
  lghmc::SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw lghmc::DimensionError("matrix must be square");
    for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Rows to_rows(const lghmc::SquareMatrix& m) {
  Rows rows(static_cast<std::size_t>(m.dim()), std::vector<double>(static_cast<std::size_t>(m.dim())));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return rows;
}

lghmc::ExpStrategy strategy_from_name(const std::string& name) {
  if (name == "automatic") return lghmc::ExpStrategy::automatic;
  if (name == "taylor-only") return lghmc::ExpStrategy::taylor_only;
  if (name == "rodrigues") return lghmc::ExpStrategy::rodrigues;
  if (name == "schur-parlett") return lghmc::ExpStrategy::schur_parlett;
  throw lghmc::ConfigError("unknown strategy '" + name + "'");
}

lghmc::Integrator integrator_from_name(const std::string& name) {
  if (name == "leapfrog") return lghmc::Integrator::leapfrog;
  if (name == "campostrini") return lghmc::Integrator::campostrini;
  throw lghmc::ConfigError("unknown integrator '" + name + "'");
}

Rows exp_matrix(const Rows& rows, const std::string& strategy, double epsilon, int degree,
                double alpha) {
  lghmc::ExpConfig cfg;
  cfg.strategy = strategy_from_name(strategy);
  cfg.epsilon = epsilon;
  cfg.taylor_degree = degree;
  cfg.alpha = alpha;
  return to_rows(lghmc::exp_dispatch(from_rows(rows), cfg));
}

py::dict sample(const std::string& space, const std::string& potential, double dt, double tau,
                long n_samples, std::uint64_t seed, const std::string& integrator, int space_n) {
  const lghmc::HomogeneousSpaceSpec spec = lghmc::find_space(space, space_n);
  const lghmc::Potential pot = lghmc::find_potential(potential);
  lghmc::HmcConfig cfg;
  cfg.dt = dt;
  cfg.tau = tau;
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.integrator = integrator_from_name(integrator);
  const lghmc::Chain chain = lghmc::hmc_run(cfg, spec, pot);
  py::dict out;
  out["points"] = chain.points;
  out["delta_h"] = chain.delta_h;
  out["accepted"] = chain.accepted;
  out["acceptance_rate"] = chain.acceptance_rate();
  out["mean_exp_minus_dh"] = chain.mean_exp_minus_dh();
  out["seed"] = chain.seed;
  return out;
}

Rows geodesic(const std::string& space, const std::vector<double>& momentum, double dt, long steps,
              int space_n) {
  const lghmc::HomogeneousSpaceSpec spec = lghmc::find_space(space, space_n);
  return lghmc::geodesic_trace(spec, momentum, dt, steps, lghmc::default_trajectory_exp());
}

py::dict validate_space_py(const std::string& space, int space_n, std::uint64_t seed) {
  const lghmc::HomogeneousSpaceSpec spec = lghmc::find_space(space, space_n);
  lghmc::Rng rng(seed);
  const lghmc::SpaceReport rep = lghmc::validate_space(spec, rng);
  py::dict out;
  out["stabilizer"] = rep.stabilizer;
  out["reductivity"] = rep.reductivity;
  out["symmetric_bracket"] = rep.symmetric_bracket;
  out["form_algebra"] = rep.form_algebra;
  out["form_group"] = rep.form_group;
  out["base_point"] = rep.base_point;
  out["orthonormality"] = rep.orthonormality;
  out["ad_invariance"] = rep.ad_invariance;
  out["worst"] = rep.worst();
  return out;
}

py::dict dh_scaling(const std::string& space, const std::string& potential, double tau,
                    const std::vector<double>& step_sizes, const std::string& integrator,
                    std::uint64_t seed, int space_n) {
  const lghmc::HomogeneousSpaceSpec spec = lghmc::find_space(space, space_n);
  const lghmc::Potential pot = lghmc::find_potential(potential);
  const lghmc::ScalingReport rep = lghmc::dh_scaling_study(spec, pot, tau, step_sizes,
                                                           integrator_from_name(integrator), seed);
  py::dict out;
  out["step_sizes"] = rep.step_sizes;
  out["values"] = rep.values;
  out["slope"] = rep.fitted_slope;
  out["r_squared"] = rep.r_squared;
  out["reliable"] = rep.reliable;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "HMC on naturally reductive homogeneous spaces (group-lift formulation)";
  m.attr("__version__") = lghmc::kVersion;

  py::register_exception<lghmc::ConfigError>(m, "ConfigError");
  py::register_exception<lghmc::CapabilityError>(m, "CapabilityError");

  m.def("exp_matrix", &exp_matrix, py::arg("matrix"), py::arg("strategy") = "automatic",
        py::arg("epsilon") = 1e-6, py::arg("degree") = 10, py::arg("alpha") = 0.9,
        "Matrix exponential via the configured strategy.");
  m.def(
      "taylor_threshold",
      [](int degree, double epsilon, double alpha) {
        lghmc::ExpConfig cfg;
        cfg.taylor_degree = degree;
        cfg.epsilon = epsilon;
        cfg.alpha = alpha;
        return lghmc::taylor_threshold(cfg);
      },
      py::arg("degree") = 10, py::arg("epsilon") = 1e-6, py::arg("alpha") = 0.9,
      "Largest norm the truncated series accepts.");
  m.def("spaces", [] {
    return std::vector<std::string>{"s2", "h2-twosheet", "h2-onesheet", "sphere-n"};
  });
  m.def("potentials", &lghmc::potential_names);
  m.def("sample", &sample, py::arg("space"), py::arg("potential") = "none", py::arg("dt") = 0.1,
        py::arg("tau") = 1.0, py::arg("n_samples") = 100, py::arg("seed") = 1,
        py::arg("integrator") = "leapfrog", py::arg("space_n") = 0,
        "Run one HMC chain; returns points, delta_h, accepted.");
  m.def("geodesic", &geodesic, py::arg("space"), py::arg("momentum"), py::arg("dt") = 0.1,
        py::arg("steps") = 10, py::arg("space_n") = 0,
        "Zero-potential trajectory from the base point.");
  m.def("validate_space", &validate_space_py, py::arg("space"), py::arg("space_n") = 0,
        py::arg("seed") = 1, "Structural residuals of a registered space.");
  m.def("dh_scaling", &dh_scaling, py::arg("space"), py::arg("potential"), py::arg("tau"),
        py::arg("step_sizes"), py::arg("integrator") = "leapfrog", py::arg("seed") = 1,
        py::arg("space_n") = 0, "Single-trajectory |dH| step-size scaling study.");
}
