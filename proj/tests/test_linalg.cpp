#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lghmc/errors.hpp"
#include "lghmc/linalg.hpp"
#include "lghmc/matrix.hpp"
#include "lghmc/rng.hpp"

#ifdef LGHMC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace lghmc;

namespace {

SquareMatrix random_matrix(int n, Rng& rng, double scale) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * rng.normal();
  return m;
}

SquareMatrix random_antisymmetric(int n, Rng& rng, double scale) {
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double x = scale * rng.normal();
      m(i, j) = x;
      m(j, i) = -x;
    }
  return m;
}

// Cayley-Hamilton residual: p(A) with p = char poly must vanish.
double cayley_hamilton_residual(const SquareMatrix& a) {
  const std::vector<double> c = char_poly_coeffs(a);
  SquareMatrix acc(a.dim());
  for (std::size_t k = 0; k < c.size(); ++k)
    acc += binary_power(a, static_cast<long>(k)) * c[k];
  return acc.max_abs();
}

#ifdef LGHMC_HAVE_EIGEN
Eigen::MatrixXd to_eigen(const SquareMatrix& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  return m;
}
#endif

}  // namespace

TEST_CASE("matrix arithmetic and accessors") {
  const SquareMatrix a(2, {1.0, 2.0, 3.0, 4.0});
  const SquareMatrix b(2, {0.0, 1.0, -1.0, 0.0});

  const SquareMatrix s = a + b;
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 2.0);

  const SquareMatrix p = a * b;
  CHECK(p(0, 0) == -2.0);  // 1*0 + 2*(-1)
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 0) == -4.0);
  CHECK(p(1, 1) == 3.0);

  CHECK(a.trace() == 5.0);
  CHECK(a.transpose()(0, 1) == 3.0);
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
  CHECK(a.max_abs() == 4.0);
  CHECK((a * 2.0)(1, 1) == 8.0);
  CHECK((2.0 * a)(1, 1) == 8.0);
  CHECK((-a)(0, 0) == -1.0);

  const std::vector<double> v = a.apply({1.0, 1.0});
  CHECK(v[0] == 3.0);
  CHECK(v[1] == 7.0);

  const SquareMatrix id = SquareMatrix::identity(3);
  CHECK(id.trace() == 3.0);
  CHECK((id * id).max_abs() == 1.0);

  CHECK_THROWS_AS(a + SquareMatrix(3), DimensionError);
  CHECK_THROWS_AS(a * SquareMatrix(3), DimensionError);
  CHECK_THROWS_AS(a.apply({1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(SquareMatrix(0), DimensionError);
  CHECK_THROWS_AS(SquareMatrix(2, {1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(SquareMatrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionError);
  CHECK_THROWS_AS(SquareMatrix(1, {std::nan("")}), Error);
}

TEST_CASE("structure detection") {
  const SquareMatrix anti(3, {0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0});
  CHECK(anti.is_antisymmetric(1e-12));
  CHECK(anti.is_normal(1e-12));
  CHECK(anti.detect_structure() == MatrixStructure::antisymmetric);

  const SquareMatrix sym(2, {1.0, 2.0, 2.0, -3.0});
  CHECK(sym.is_symmetric(1e-12));
  CHECK_FALSE(sym.is_antisymmetric(1e-12));
  CHECK(sym.detect_structure() == MatrixStructure::normal);

  // Rotation matrix: normal but neither symmetric nor antisymmetric.
  const double c = std::cos(0.7), s = std::sin(0.7);
  const SquareMatrix rot(2, {c, -s, s, c});
  CHECK(rot.is_normal(1e-12));
  CHECK(rot.detect_structure() == MatrixStructure::normal);

  const SquareMatrix jordan(2, {1.0, 1.0, 0.0, 1.0});
  CHECK_FALSE(jordan.is_normal(1e-12));
  CHECK(jordan.detect_structure() == MatrixStructure::general);

  // Tolerance widening: a slightly perturbed antisymmetric matrix.
  SquareMatrix nearly = anti;
  nearly(0, 1) += 1e-9;
  CHECK(nearly.detect_structure(1e-12) == MatrixStructure::general);
  CHECK(nearly.detect_structure(1e-6) == MatrixStructure::antisymmetric);
}

TEST_CASE("bilinear forms") {
  const BilinearForm euclid = BilinearForm::euclidean(3);
  CHECK(euclid.positive_definite());
  CHECK(euclid.inner({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}) == 32.0);

  const BilinearForm lorentz(std::vector<double>{-1.0, 1.0, 1.0});
  CHECK_FALSE(lorentz.positive_definite());
  CHECK(lorentz.inner({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}) == -1.0);
  CHECK(lorentz.matrix()(0, 0) == -1.0);
  CHECK(lorentz.matrix()(1, 1) == 1.0);

  CHECK_THROWS_AS(BilinearForm(std::vector<double>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(BilinearForm(std::vector<double>{}), DimensionError);
}

TEST_CASE("trace powers") {
  const SquareMatrix a(2, {2.0, 0.0, 0.0, 3.0});
  const std::vector<double> t = trace_powers(a, 3);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == 5.0);
  CHECK(t[1] == 13.0);
  CHECK(t[2] == 35.0);

  Rng rng(11);
  const SquareMatrix b = random_matrix(4, rng, 1.0);
  const std::vector<double> tb = trace_powers(b, 4);
  CHECK(tb[0] == doctest::Approx(b.trace()).epsilon(1e-14));
  CHECK(tb[2] == doctest::Approx((b * b * b).trace()).epsilon(1e-12));
}

TEST_CASE("characteristic polynomial pinned conventions") {
  // det(A - x I) for the 2x2 identity: (1 - x)^2 = 1 - 2x + x^2.
  const std::vector<double> ci = char_poly_coeffs(SquareMatrix::identity(2));
  REQUIRE(ci.size() == 3);
  CHECK(ci[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ci[1] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(ci[2] == doctest::Approx(1.0).epsilon(1e-15));

  // Antisymmetric 3x3: det(A - x I) = -x^3 + (tr A^2 / 2) x.
  Rng rng(7);
  const SquareMatrix a = random_antisymmetric(3, rng, 1.5);
  const double tr2 = (a * a).trace();
  const std::vector<double> ca = char_poly_coeffs(a);
  REQUIRE(ca.size() == 4);
  CHECK(ca[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ca[1] == doctest::Approx(0.5 * tr2).epsilon(1e-13));
  CHECK(ca[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ca[3] == doctest::Approx(-1.0).epsilon(1e-15));

  // Leading coefficient is (-1)^n.
  for (int n = 2; n <= 5; ++n) {
    const SquareMatrix m = random_matrix(n, rng, 1.0);
    const std::vector<double> c = char_poly_coeffs(m);
    REQUIRE(static_cast<int>(c.size()) == n + 1);
    CHECK(c[static_cast<std::size_t>(n)] == doctest::Approx(n % 2 ? -1.0 : 1.0).epsilon(1e-14));
  }

  CHECK_THROWS_AS(char_poly_coeffs(SquareMatrix(9)), DimensionError);
}

TEST_CASE("characteristic polynomial satisfies Cayley-Hamilton") {
  Rng rng(23);
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const SquareMatrix a = random_matrix(n, rng, 1.0);
      CHECK(cayley_hamilton_residual(a) < 1e-10);
    }
}

#ifdef LGHMC_HAVE_EIGEN
TEST_CASE("characteristic polynomial against determinant evaluation") {
  Rng rng(31);
  for (int n = 2; n <= 5; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const SquareMatrix a = random_matrix(n, rng, 1.0);
      const std::vector<double> c = char_poly_coeffs(a);
      for (double x : {-1.3, -0.4, 0.0, 0.6, 1.7}) {
        double poly = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) poly = poly * x + c[k];
        const Eigen::MatrixXd m =
            to_eigen(a) - x * Eigen::MatrixXd::Identity(n, n);
        CHECK(poly == doctest::Approx(m.determinant()).epsilon(1e-9));
      }
    }
}
#endif

TEST_CASE("binary powering") {
  Rng rng(5);
  const SquareMatrix a = random_matrix(3, rng, 0.8);

  SquareMatrix naive = SquareMatrix::identity(3);
  for (int k = 0; k <= 12; ++k) {
    const SquareMatrix fast = binary_power(a, k);
    CHECK((fast - naive).max_abs() < 1e-10 * std::max(1.0, naive.max_abs()));
    naive = naive * a;
  }

  // Multiplication count stays within 2 floor(log2 k) + 1.
  for (long k : {1L, 2L, 3L, 7L, 8L, 100L, 1023L}) {
    int mults = 0;
    detail::binary_power_counted(a, k, &mults);
    const int budget = 2 * static_cast<int>(std::floor(std::log2(static_cast<double>(k)))) + 1;
    CHECK(mults <= budget);
  }
}

TEST_CASE("spectral norm bound") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const SquareMatrix a = random_matrix(4, rng, 1.0);
    const double bound = spectral_norm_bound(a);
    // The bound dominates ||A v|| / ||v|| for any vector.
    for (int probe = 0; probe < 5; ++probe) {
      std::vector<double> v(4);
      double norm = 0.0;
      for (double& x : v) {
        x = rng.normal();
        norm += x * x;
      }
      norm = std::sqrt(norm);
      const std::vector<double> av = a.apply(v);
      double anorm = 0.0;
      for (double x : av) anorm += x * x;
      anorm = std::sqrt(anorm);
      CHECK(anorm <= bound * norm * (1.0 + 1e-12));
    }
  }

  // Antisymmetric 3x3: the bound with the hint equals the rotation angle and
  // is sharp there.
  const SquareMatrix t1(3, {0.0, 0.0, 0.0, 0.0, 0.0, -2.5, 0.0, 2.5, 0.0});
  CHECK(spectral_norm_bound(t1, MatrixStructure::antisymmetric) ==
        doctest::Approx(2.5).epsilon(1e-14));
  CHECK(spectral_norm_bound(t1) == doctest::Approx(2.5 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("gram-schmidt reprojection") {
  Rng rng(17);

  SUBCASE("euclidean form produces orthogonal matrices") {
    const BilinearForm form = BilinearForm::euclidean(4);
    for (int trial = 0; trial < 10; ++trial) {
      SquareMatrix m = SquareMatrix::identity(4);
      m += random_matrix(4, rng, 0.05);
      const SquareMatrix q = gram_schmidt_project(m, form);
      const SquareMatrix g = q.transpose() * q;
      CHECK((g - SquareMatrix::identity(4)).max_abs() < 1e-14);
    }
  }

  SUBCASE("near-orthogonal input moves only slightly") {
    const BilinearForm form = BilinearForm::euclidean(3);
    const double c = std::cos(0.4), s = std::sin(0.4);
    SquareMatrix rot(3, {1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c});
    const SquareMatrix q = gram_schmidt_project(rot, form);
    CHECK((q - rot).max_abs() < 1e-14);
    rot(1, 2) += 1e-8;
    const SquareMatrix q2 = gram_schmidt_project(rot, form);
    CHECK((q2 - rot).max_abs() < 1e-7);
    CHECK((q2.transpose() * q2 - SquareMatrix::identity(3)).max_abs() < 1e-14);
  }

  SUBCASE("indefinite form is restored") {
    const BilinearForm lorentz(std::vector<double>{-1.0, 1.0, 1.0});
    const SquareMatrix metric = lorentz.matrix();
    const double ch = std::cosh(0.8), sh = std::sinh(0.8);
    SquareMatrix boost(3, {ch, sh, 0.0, sh, ch, 0.0, 0.0, 0.0, 1.0});
    boost(0, 1) += 3e-9;
    const SquareMatrix g = gram_schmidt_project(boost, lorentz);
    const SquareMatrix resid = g.transpose() * metric * g - metric;
    CHECK(resid.max_abs() < 1e-13);
  }

  SUBCASE("degenerate rows are rejected") {
    const BilinearForm lorentz(std::vector<double>{-1.0, 1.0});
    // Light-like first row: self inner product is exactly zero.
    const SquareMatrix bad(2, {1.0, 1.0, 0.0, 1.0});
    CHECK_THROWS_AS(gram_schmidt_project(bad, lorentz), DegenerateRowError);

    const BilinearForm euclid = BilinearForm::euclidean(2);
    const SquareMatrix rank1(2, {1.0, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(gram_schmidt_project(rank1, euclid), DegenerateRowError);
  }
}

TEST_CASE("rng basic statistics and determinism") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng rng(1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));

  long lo = 100, hi = 0;
  for (int i = 0; i < 1000; ++i) {
    const long k = rng.uniform_int(3, 7);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  CHECK(lo == 3);
  CHECK(hi == 7);
}
