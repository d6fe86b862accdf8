#include <cmath>
#include <utility>

#include "lghmc/errors.hpp"
#include "lghmc/matexp.hpp"

namespace lghmc {
namespace detail {

namespace {

// Givens rotation with c^2 + s^2 = 1 such that [c s; -s c]^T [x; y] has a
// zero second component.
std::pair<double, double> givens(double x, double y) {
  if (y == 0.0) return {1.0, 0.0};
  const double r = std::hypot(x, y);
  return {x / r, y / r};
}

// Similarity by the rotation acting on rows/columns (k, k+1): h <- G^T h G,
// q <- q G.
void apply_rotation(SquareMatrix& h, SquareMatrix& q, int k, double c, double s) {
  const int n = h.dim();
  for (int j = 0; j < n; ++j) {
    const double x = h(k, j), y = h(k + 1, j);
    h(k, j) = c * x + s * y;
    h(k + 1, j) = -s * x + c * y;
  }
  for (int i = 0; i < n; ++i) {
    const double x = h(i, k), y = h(i, k + 1);
    h(i, k) = c * x + s * y;
    h(i, k + 1) = -s * x + c * y;
  }
  for (int i = 0; i < n; ++i) {
    const double x = q(i, k), y = q(i, k + 1);
    q(i, k) = c * x + s * y;
    q(i, k + 1) = -s * x + c * y;
  }
}

// Householder reduction to upper Hessenberg form, accumulating q.
void hessenberg(SquareMatrix& h, SquareMatrix& q) {
  const int n = h.dim();
  for (int k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += h(i, k) * h(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    const double pivot = h(k + 1, k);
    const double sign = pivot >= 0.0 ? 1.0 : -1.0;
    v[static_cast<std::size_t>(k) + 1] = pivot + sign * norm;
    for (int i = k + 2; i < n; ++i) v[static_cast<std::size_t>(i)] = h(i, k);
    double vv = 0.0;
    for (int i = k + 1; i < n; ++i) vv += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    // h <- (I - beta v v^T) h (I - beta v v^T), q <- q (I - beta v v^T)
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += v[static_cast<std::size_t>(i)] * h(i, j);
      dot *= beta;
      for (int i = k + 1; i < n; ++i) h(i, j) -= dot * v[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[static_cast<std::size_t>(j)];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) h(i, j) -= dot * v[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += q(i, j) * v[static_cast<std::size_t>(j)];
      dot *= beta;
      for (int j = k + 1; j < n; ++j) q(i, j) -= dot * v[static_cast<std::size_t>(j)];
    }
  }
}

// Triangularize the 2x2 diagonal block at (k, k) by rotating onto a real
// eigenvector; throws on a complex pair.
void resolve_block(SquareMatrix& h, SquareMatrix& q, int k) {
  const double a = h(k, k), b = h(k, k + 1);
  const double c = h(k + 1, k), d = h(k + 1, k + 1);
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc < 0.0)
    throw SchurError("complex eigenvalue pair is outside the real Schur path");
  const double sq = std::sqrt(disc);
  // Eigenvalue of larger magnitude for a stable eigenvector direction.
  const double mid = 0.5 * (a + d);
  const double lam = mid >= 0.0 ? mid + sq : mid - sq;
  double vx = b, vy = lam - a;
  if (std::fabs(vx) + std::fabs(vy) < std::fabs(lam - d) + std::fabs(c)) {
    vx = lam - d;
    vy = c;
  }
  const auto [cs, sn] = givens(vx, vy);
  apply_rotation(h, q, k, cs, sn);
  h(k + 1, k) = 0.0;
}

// One explicit shifted QR sweep on the active window [lo, hi].
void qr_sweep(SquareMatrix& h, SquareMatrix& q, int lo, int hi, double mu) {
  for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
  std::vector<std::pair<double, double>> rots;
  rots.reserve(static_cast<std::size_t>(hi - lo));
  for (int k = lo; k < hi; ++k) {
    const auto [c, s] = givens(h(k, k), h(k + 1, k));
    rots.emplace_back(c, s);
    const int n = h.dim();
    for (int j = k; j < n; ++j) {
      const double x = h(k, j), y = h(k + 1, j);
      h(k, j) = c * x + s * y;
      h(k + 1, j) = -s * x + c * y;
    }
    h(k + 1, k) = 0.0;
  }
  for (int k = lo; k < hi; ++k) {
    const auto [c, s] = rots[static_cast<std::size_t>(k - lo)];
    const int top = std::min(k + 2, hi + 1);
    for (int i = 0; i < top; ++i) {
      const double x = h(i, k), y = h(i, k + 1);
      h(i, k) = c * x + s * y;
      h(i, k + 1) = -s * x + c * y;
    }
    for (int i = 0; i < h.dim(); ++i) {
      const double x = q(i, k), y = q(i, k + 1);
      q(i, k) = c * x + s * y;
      q(i, k + 1) = -s * x + c * y;
    }
  }
  for (int i = lo; i <= hi; ++i) h(i, i) += mu;
}

double wilkinson_shift(const SquareMatrix& h, int hi) {
  const double a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
  const double c = h(hi, hi - 1), d = h(hi, hi);
  const double p = 0.5 * (a - d);
  const double disc = p * p + b * c;
  if (disc < 0.0) return 0.5 * (a + d);  // complex pair: aim at the real part
  const double sq = std::sqrt(disc);
  const double mid = 0.5 * (a + d);
  // Eigenvalue closer to the trailing entry.
  return std::fabs(mid + sq - d) < std::fabs(mid - sq - d) ? mid + sq : mid - sq;
}

}  // namespace

SchurDecomposition schur_decompose(const SquareMatrix& a) {
  const int n = a.dim();
  if (n > 5) throw DimensionError("Schur path supports dimensions up to 5");
  SquareMatrix h = a;
  SquareMatrix q = SquareMatrix::identity(n);
  if (n == 1) return {q, h};
  hessenberg(h, q);

  const double hnorm = std::max(h.frobenius_norm(), 1e-300);
  auto deflate = [&](int k) {
    double thresh = 1e-15 * (std::fabs(h(k, k)) + std::fabs(h(k + 1, k + 1)));
    if (thresh == 0.0) thresh = 1e-15 * hnorm;
    if (std::fabs(h(k + 1, k)) <= thresh) {
      h(k + 1, k) = 0.0;
      return true;
    }
    return false;
  };

  const int cap = 100 * n * n;
  int iters = 0;
  int hi = n - 1;
  while (hi > 0) {
    if (deflate(hi - 1)) {
      --hi;
      continue;
    }
    int lo = hi;
    while (lo > 0 && !deflate(lo - 1)) --lo;
    if (hi - lo == 1) {
      resolve_block(h, q, lo);
      hi = lo;
      continue;
    }
    if (++iters > cap) throw SchurError("QR iteration did not converge");
    qr_sweep(h, q, lo, hi, wilkinson_shift(h, hi));
  }
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) h(i, j) = 0.0;
  return {q, h};
}

SquareMatrix parlett_exp_triangular(const SquareMatrix& t) {
  const int n = t.dim();
  SquareMatrix f(n);
  for (int i = 0; i < n; ++i) f(i, i) = std::exp(t(i, i));
  for (int sd = 1; sd < n; ++sd) {
    for (int i = 0; i + sd < n; ++i) {
      const int j = i + sd;
      const double gap = t(i, i) - t(j, j);
      if (std::fabs(gap) < 1e-8)
        throw SchurError("eigenvalue gap below 1e-8 in the Parlett recurrence");
      double num = t(i, j) * (f(i, i) - f(j, j));
      for (int k = i + 1; k < j; ++k) num += f(i, k) * t(k, j) - t(i, k) * f(k, j);
      f(i, j) = num / gap;
    }
  }
  return f;
}

}  // namespace detail

SquareMatrix exp_schur_parlett(const SquareMatrix& a) {
  const auto dec = detail::schur_decompose(a);
  const SquareMatrix f = detail::parlett_exp_triangular(dec.t);
  return dec.q * f * dec.q.transpose();
}

}  // namespace lghmc
