#include "lghmc/spaces.hpp"

#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"
#include "lghmc/matexp.hpp"

namespace lghmc {

namespace {

SquareMatrix basis_so3(int which) {
  switch (which) {
    case 1:
      return SquareMatrix(3, {0, 0, 0, 0, 0, 1, 0, -1, 0});
    case 2:
      return SquareMatrix(3, {0, 0, -1, 0, 0, 0, 1, 0, 0});
    default:
      return SquareMatrix(3, {0, 1, 0, -1, 0, 0, 0, 0, 0});
  }
}

std::vector<double> unit_vector(int n, int axis) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(axis)] = 1.0;
  return v;
}

}  // namespace

HomogeneousSpaceSpec make_sphere_s2() {
  HomogeneousSpaceSpec s;
  s.name = "s2";
  s.n = 3;
  s.k_generators = {basis_so3(1)};
  s.p_generators = {basis_so3(2), basis_so3(3)};
  s.kinetic_eigenvalues = {0.5, 0.5};
  s.kinetic_signs = {1.0, 1.0};
  s.invariant_form = BilinearForm::euclidean(3);
  s.base_point = unit_vector(3, 0);
  s.riemannian = true;
  s.product = AlgebraProduct::transpose_trace;
  s.momentum_structure = MatrixStructure::antisymmetric;
  s.has_normal_split = true;
  return s;
}

HomogeneousSpaceSpec make_h2_twosheet() {
  HomogeneousSpaceSpec s;
  s.name = "h2-twosheet";
  s.n = 3;
  // Stabilizer rotation in the (y, z) plane; symmetric boosts move the
  // base point across the upper sheet of -x^2 + y^2 + z^2 = -1.
  s.k_generators = {SquareMatrix(3, {0, 0, 0, 0, 0, 1, 0, -1, 0})};
  s.p_generators = {SquareMatrix(3, {0, 0, -1, 0, 0, 0, -1, 0, 0}),
                    SquareMatrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 0})};
  s.kinetic_eigenvalues = {0.5, 0.5};
  s.kinetic_signs = {1.0, 1.0};
  s.invariant_form = BilinearForm({-1.0, 1.0, 1.0});
  s.base_point = unit_vector(3, 0);
  s.riemannian = true;
  s.product = AlgebraProduct::transpose_trace;
  s.momentum_structure = MatrixStructure::normal;
  s.has_normal_split = true;
  return s;
}

HomogeneousSpaceSpec make_h2_onesheet() {
  HomogeneousSpaceSpec s;
  s.name = "h2-onesheet";
  s.n = 3;
  // The quotient is by SO(1,1): the boost in the (y, z) plane stabilizes
  // the base point. Horizontal directions mix a boost with a rotation, so
  // momenta are not normal and the tr(AB) kinetic form is indefinite.
  s.k_generators = {SquareMatrix(3, {0, 0, 0, 0, 0, -1, 0, -1, 0})};
  s.p_generators = {SquareMatrix(3, {0, 0, 1, 0, 0, 0, 1, 0, 0}),
                    SquareMatrix(3, {0, 1, 0, -1, 0, 0, 0, 0, 0})};
  s.kinetic_eigenvalues = {0.5, 0.5};
  s.kinetic_signs = {1.0, -1.0};
  s.invariant_form = BilinearForm({1.0, 1.0, -1.0});
  s.base_point = unit_vector(3, 0);
  s.riemannian = false;
  s.product = AlgebraProduct::plain_trace;
  s.momentum_structure = MatrixStructure::general;
  s.has_normal_split = true;
  return s;
}

HomogeneousSpaceSpec make_son_sphere(int n) {
  if (n < 3 || n > 5) throw ConfigError("sphere-n supports n = 3..5");
  HomogeneousSpaceSpec s;
  s.name = "sphere-" + std::to_string(n);
  s.n = n;
  auto e_ab = [n](int a, int b) {
    SquareMatrix m(n);
    m(a, b) = 1.0;
    m(b, a) = -1.0;
    return m;
  };
  for (int b = 1; b < n; ++b) s.p_generators.push_back(e_ab(0, b));
  for (int a = 1; a < n; ++a)
    for (int b = a + 1; b < n; ++b) s.k_generators.push_back(e_ab(a, b));
  s.kinetic_eigenvalues.assign(s.p_generators.size(), 0.5);
  s.kinetic_signs.assign(s.p_generators.size(), 1.0);
  s.invariant_form = BilinearForm::euclidean(n);
  s.base_point = unit_vector(n, 0);
  s.riemannian = true;
  s.product = AlgebraProduct::transpose_trace;
  s.momentum_structure = MatrixStructure::antisymmetric;
  s.has_normal_split = true;
  return s;
}

HomogeneousSpaceSpec find_space(const std::string& name, int n) {
  if (name == "s2") return make_sphere_s2();
  if (name == "h2-twosheet") return make_h2_twosheet();
  if (name == "h2-onesheet") return make_h2_onesheet();
  if (name == "sphere-n") {
    if (n == 0) throw ConfigError("sphere-n needs the dimension parameter space.n");
    return make_son_sphere(n);
  }
  throw ConfigError("unknown space '" + name + "'");
}

std::vector<double> project_to_manifold(const SquareMatrix& q, const HomogeneousSpaceSpec& spec) {
  return q.apply(spec.base_point);
}

double algebra_inner(const HomogeneousSpaceSpec& spec, const SquareMatrix& a, const SquareMatrix& b) {
  const SquareMatrix left = spec.product == AlgebraProduct::transpose_trace ? a.transpose() : a;
  return 0.5 * (left * b).trace();
}

SquareMatrix momentum_from_coeffs(const HomogeneousSpaceSpec& spec, const std::vector<double>& coeffs) {
  if (coeffs.size() != spec.p_generators.size())
    throw DimensionError("coefficient count does not match the horizontal basis");
  SquareMatrix p(spec.n);
  for (std::size_t i = 0; i < coeffs.size(); ++i) p += spec.p_generators[i] * coeffs[i];
  return p;
}

std::vector<double> momentum_coeffs(const HomogeneousSpaceSpec& spec, const SquareMatrix& p) {
  // The generator bases are orthogonal under tr(A^T B) with norm^2 = 2.
  std::vector<double> c(spec.p_generators.size(), 0.0);
  for (std::size_t i = 0; i < spec.p_generators.size(); ++i) {
    const SquareMatrix& t = spec.p_generators[i];
    c[i] = 0.5 * (t.transpose() * p).trace();
  }
  return c;
}

double momentum_residual_in_k(const SquareMatrix& p, const HomogeneousSpaceSpec& spec) {
  SquareMatrix proj(spec.n);
  for (const SquareMatrix& k : spec.k_generators) {
    const double norm2 = (k.transpose() * k).trace();
    proj += k * ((k.transpose() * p).trace() / norm2);
  }
  return proj.frobenius_norm();
}

namespace {

SquareMatrix random_combination(const std::vector<SquareMatrix>& basis, int n, Rng& rng) {
  SquareMatrix x(n);
  for (const SquareMatrix& b : basis) x += b * rng.normal();
  return x;
}

// Structural residuals measure the geometry of the construction, not the
// accuracy of a user-facing exponential, so the checkers run a tight series.
ExpConfig tight_exp_config() {
  ExpConfig cfg;
  cfg.epsilon = 1e-13;
  return cfg;
}

// Residual of x outside the span of the basis, under the Frobenius product.
double span_residual(const SquareMatrix& x, const std::vector<SquareMatrix>& basis) {
  SquareMatrix rem = x;
  for (const SquareMatrix& b : basis) {
    const double norm2 = (b.transpose() * b).trace();
    rem -= b * ((b.transpose() * rem).trace() / norm2);
  }
  return rem.frobenius_norm();
}

}  // namespace

double ad_invariance_check(const HomogeneousSpaceSpec& spec, Rng& rng, int trials) {
  const SquareMatrix m = spec.invariant_form.matrix();
  double worst = 0.0;
  const ExpConfig cfg = tight_exp_config();
  for (int t = 0; t < trials; ++t) {
    const SquareMatrix kx = random_combination(spec.k_generators, spec.n, rng);
    const SquareMatrix k = exp_dispatch(kx, cfg);
    // Group elements preserve the form, so k^{-1} = M k^T M with M = M^{-1}
    // for the +-1 diagonal forms used here.
    const SquareMatrix kinv = m * k.transpose() * m;
    const SquareMatrix a = random_combination(spec.p_generators, spec.n, rng);
    const SquareMatrix b = random_combination(spec.p_generators, spec.n, rng);
    const SquareMatrix ada = k * a * kinv;
    const SquareMatrix adb = k * b * kinv;
    worst = std::max(worst, std::fabs(algebra_inner(spec, ada, adb) - algebra_inner(spec, a, b)));
    worst = std::max(worst, span_residual(ada, spec.p_generators));
  }
  return worst;
}

SpaceReport validate_space(const HomogeneousSpaceSpec& spec, Rng& rng) {
  SpaceReport r{};
  const SquareMatrix m = spec.invariant_form.matrix();
  const int n = spec.n;
  const ExpConfig cfg = tight_exp_config();

  const double stab_times[] = {0.1, -0.1, 1.0, -1.0, 3.0, -3.0};
  for (const SquareMatrix& k : spec.k_generators) {
    const std::vector<double> kp = k.apply(spec.base_point);
    double norm = 0.0;
    for (double x : kp) norm += x * x;
    r.stabilizer = std::max(r.stabilizer, std::sqrt(norm));
    for (double t : stab_times) {
      const std::vector<double> moved = exp_dispatch(k * t, cfg).apply(spec.base_point);
      norm = 0.0;
      for (std::size_t i = 0; i < moved.size(); ++i) {
        const double d = moved[i] - spec.base_point[i];
        norm += d * d;
      }
      r.stabilizer = std::max(r.stabilizer, std::sqrt(norm));
    }
  }

  auto bracket = [](const SquareMatrix& a, const SquareMatrix& b) { return a * b - b * a; };
  for (const SquareMatrix& k : spec.k_generators)
    for (const SquareMatrix& p : spec.p_generators)
      r.reductivity = std::max(r.reductivity, span_residual(bracket(k, p), spec.p_generators));
  for (const SquareMatrix& p1 : spec.p_generators)
    for (const SquareMatrix& p2 : spec.p_generators)
      r.symmetric_bracket = std::max(r.symmetric_bracket, span_residual(bracket(p1, p2), spec.k_generators));

  auto all_generators = spec.k_generators;
  all_generators.insert(all_generators.end(), spec.p_generators.begin(), spec.p_generators.end());
  for (const SquareMatrix& x : all_generators)
    r.form_algebra = std::max(r.form_algebra, (x.transpose() * m + m * x).frobenius_norm());
  for (int t = 0; t < 100; ++t) {
    SquareMatrix x = random_combination(spec.p_generators, n, rng);
    const double norm = x.frobenius_norm();
    if (norm > 0.0) x *= 3.0 * rng.uniform() / norm;
    const SquareMatrix g = exp_dispatch(x, cfg, spec.momentum_structure);
    r.form_group = std::max(r.form_group, (g.transpose() * m * g - m).frobenius_norm());
  }

  const double self = spec.invariant_form.inner(spec.base_point, spec.base_point);
  r.base_point = std::fabs(std::fabs(self) - 1.0);

  for (std::size_t i = 0; i < spec.p_generators.size(); ++i) {
    for (std::size_t j = 0; j < spec.p_generators.size(); ++j) {
      const double g = algebra_inner(spec, spec.p_generators[i], spec.p_generators[j]);
      const double want = i == j ? spec.kinetic_signs[i] : 0.0;
      r.orthonormality = std::max(r.orthonormality, std::fabs(g - want));
    }
  }

  r.ad_invariance = ad_invariance_check(spec, rng, 16);
  return r;
}

double SpaceReport::worst() const {
  double w = stabilizer;
  w = std::max(w, reductivity);
  w = std::max(w, symmetric_bracket);
  w = std::max(w, form_algebra);
  w = std::max(w, form_group);
  w = std::max(w, base_point);
  w = std::max(w, orthonormality);
  w = std::max(w, ad_invariance);
  return w;
}

}  // namespace lghmc
