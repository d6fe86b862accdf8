#include "lghmc/matexp.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"

namespace lghmc {

namespace {

void check_exp_config(const ExpConfig& cfg) {
  if (cfg.taylor_degree < 2) throw ConfigError("taylor degree must be >= 2");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

MatrixStructure norm_hint(const SquareMatrix& a) {
  const double scale = std::max(1.0, a.max_abs());
  return a.is_antisymmetric(1e-12 * scale) ? MatrixStructure::antisymmetric
                                           : MatrixStructure::general;
}

// sin(xi)/xi and (1 - cos(xi))/xi^2 with series guards below xi = 1e-4.
void rotation_coefficients(double xi, double* s, double* c) {
  if (xi < 1e-4) {
    const double x2 = xi * xi;
    *s = 1.0 - x2 / 6.0;
    *c = 0.5 - x2 / 24.0;
  } else {
    *s = std::sin(xi) / xi;
    *c = (1.0 - std::cos(xi)) / (xi * xi);
  }
}

void require_antisymmetric(const SquareMatrix& a) {
  if ((a + a.transpose()).frobenius_norm() > 1e-12)
    throw StructureError("input is not antisymmetric");
}

}  // namespace

double taylor_threshold(const ExpConfig& cfg) {
  check_exp_config(cfg);
  const int n = cfg.taylor_degree;
  const double tail = std::pow(cfg.epsilon * factorial(n) * (1.0 - cfg.alpha), 1.0 / n);
  return std::min(cfg.alpha * n, tail);
}

SquareMatrix exp_taylor_reduced(const SquareMatrix& a, const ExpConfig& cfg) {
  const double delta = taylor_threshold(cfg);
  if (spectral_norm_bound(a, norm_hint(a)) > delta)
    throw ThresholdError("input norm exceeds the series threshold");

  const int n = a.dim();
  const int deg = cfg.taylor_degree - 1;  // degree of the truncated series

  // Truncated series coefficients, ascending.
  std::vector<double> r(static_cast<std::size_t>(deg) + 1, 0.0);
  double inv = 1.0;
  for (int j = 0; j <= deg; ++j) {
    r[static_cast<std::size_t>(j)] = inv;
    inv /= (j + 1);
  }

  // Reduce modulo the characteristic polynomial (monic form) by synthetic
  // division; by Cayley-Hamilton this leaves the value at A unchanged.
  if (deg >= n) {
    std::vector<double> c = char_poly_coeffs(a);
    const double lead = c[static_cast<std::size_t>(n)];
    std::vector<double> monic(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) monic[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] / lead;
    for (int k = deg; k >= n; --k) {
      const double f = r[static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      r[static_cast<std::size_t>(k)] = 0.0;
      for (int j = 0; j < n; ++j) r[static_cast<std::size_t>(k - n + j)] -= f * monic[static_cast<std::size_t>(j)];
    }
  }

  // Horner evaluation of the remainder; at most n - 1 multiplications.
  const int top = std::min(deg, n - 1);
  SquareMatrix acc(n);
  for (int i = 0; i < n; ++i) acc(i, i) = r[static_cast<std::size_t>(top)];
  for (int k = top - 1; k >= 0; --k) {
    acc = acc * a;
    for (int i = 0; i < n; ++i) acc(i, i) += r[static_cast<std::size_t>(k)];
  }
  return acc;
}

namespace detail {

SquareMatrix exp_scale_square_with_k(const SquareMatrix& a, long k, const ExpConfig& cfg) {
  const SquareMatrix b = a * (1.0 / static_cast<double>(k));
  return binary_power(exp_taylor_reduced(b, cfg), k);
}

}  // namespace detail

SquareMatrix exp_scale_square(const SquareMatrix& a, const ExpConfig& cfg) {
  const double delta = taylor_threshold(cfg);
  const double norm = spectral_norm_bound(a, norm_hint(a));
  if (norm <= delta) return exp_taylor_reduced(a, cfg);

  const int n = cfg.taylor_degree;
  const double power = static_cast<double>(n) / (n - 1);
  const double raw = std::ceil(std::pow(norm / delta, power));
  if (!(raw < 9e15)) throw Error("input norm too large to scale");
  long k = static_cast<long>(raw);
  // Rounding can leave the scaled norm a hair above the threshold.
  while (spectral_norm_bound(a * (1.0 / static_cast<double>(k)), norm_hint(a)) > delta) ++k;
  return detail::exp_scale_square_with_k(a, k, cfg);
}

SquareMatrix exp_rodrigues_so3(const SquareMatrix& a) {
  if (a.dim() != 3) throw DimensionError("Rodrigues form needs a 3x3 input");
  require_antisymmetric(a);
  const SquareMatrix a2 = a * a;
  const double xi = std::sqrt(std::max(0.0, -0.5 * a2.trace()));
  double s, c;
  rotation_coefficients(xi, &s, &c);
  SquareMatrix r = a2 * c + a * s;
  for (int i = 0; i < 3; ++i) r(i, i) += 1.0;
  return r;
}

std::optional<SquareMatrix> exp_projector_son(const SquareMatrix& a) {
  const int n = a.dim();
  if (n < 2 || n > 5) throw DimensionError("projector form needs dimension 2..5");
  require_antisymmetric(a);
  if (n == 3) return exp_rodrigues_so3(a);

  const SquareMatrix a2 = a * a;
  if (n == 2) {
    const double xi = std::sqrt(std::max(0.0, -0.5 * a2.trace()));
    double s, c;
    rotation_coefficients(xi, &s, &c);
    SquareMatrix r = a2 * c + a * s;
    for (int i = 0; i < 2; ++i) r(i, i) += 1.0;
    return r;
  }

  // Dimensions 4 and 5: the eigenvalues of A^2 are {x+, x-} plus a null
  // eigenvalue in odd dimension, with x+- = (tr A^2 +- sqrt(Delta)) / 4 and
  // Delta = 4 tr A^4 - (tr A^2)^2.
  const double tr2 = a2.trace();
  const double tr4 = (a2 * a2).trace();
  const double delta = std::max(0.0, 4.0 * tr4 - tr2 * tr2);
  const double sq = std::sqrt(delta);
  std::vector<double> roots = {(tr2 + sq) / 4.0, (tr2 - sq) / 4.0};
  if (n == 5) roots.push_back(0.0);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::fabs(roots[i] - roots[j]) < 1e-6) return std::nullopt;

  // exp(A) = sum_j [cos(theta_j) P_j + sin(theta_j)/theta_j A P_j] over the
  // Lagrange projectors P_j of A^2.
  SquareMatrix result(n);
  for (std::size_t j = 0; j < roots.size(); ++j) {
    SquareMatrix proj = SquareMatrix::identity(n);
    double denom = 1.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (k == j) continue;
      SquareMatrix shift = a2;
      for (int i = 0; i < n; ++i) shift(i, i) -= roots[k];
      proj = proj * shift;
      denom *= roots[j] - roots[k];
    }
    proj *= 1.0 / denom;
    const double theta = std::sqrt(std::max(0.0, -roots[j]));
    double s, c;
    rotation_coefficients(theta, &s, &c);
    // cos(theta) = 1 - c * theta^2 keeps the small-angle guard consistent.
    result += proj * (1.0 - c * theta * theta) + (a * proj) * s;
  }
  return result;
}

SquareMatrix exp_dispatch(const SquareMatrix& a, const ExpConfig& cfg, MatrixStructure hint) {
  check_exp_config(cfg);
  const int n = a.dim();

  switch (cfg.strategy) {
    case ExpStrategy::taylor_only:
      return exp_scale_square(a, cfg);
    case ExpStrategy::rodrigues: {
      if (n == 3) return exp_rodrigues_so3(a);
      if (auto r = exp_projector_son(a)) return *r;
      return exp_scale_square(a, cfg);
    }
    case ExpStrategy::schur_parlett:
      return exp_schur_parlett(a);
    case ExpStrategy::automatic:
      break;
  }

  const MatrixStructure structure =
      hint != MatrixStructure::general ? hint : a.detect_structure();
  if (structure == MatrixStructure::antisymmetric && n >= 3 && n <= 5) {
    if (n == 3) return exp_rodrigues_so3(a);
    if (auto r = exp_projector_son(a)) return *r;
    return exp_scale_square(a, cfg);
  }
  if (structure == MatrixStructure::antisymmetric || structure == MatrixStructure::normal)
    return exp_scale_square(a, cfg);
  try {
    return exp_schur_parlett(a);
  } catch (const SchurError&) {
    return exp_scale_square(a, cfg);
  }
}

}  // namespace lghmc
