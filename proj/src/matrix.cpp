#include "lghmc/matrix.hpp"

#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"

namespace lghmc {

SquareMatrix::SquareMatrix(int dim) : n_(dim) {
  if (dim < 1) throw DimensionError("matrix dimension must be >= 1");
  a_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
}

SquareMatrix::SquareMatrix(int dim, std::initializer_list<double> rows) : n_(dim) {
  if (dim < 1) throw DimensionError("matrix dimension must be >= 1");
  if (rows.size() != static_cast<std::size_t>(n_) * n_)
    throw DimensionError("initializer size does not match dimension");
  a_.assign(rows.begin(), rows.end());
  check_finite();
}

SquareMatrix SquareMatrix::identity(int dim) {
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n))
      throw DimensionError("rows do not form a square matrix");
    for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  m.check_finite();
  return m;
}

void SquareMatrix::check_finite() const {
  for (double x : a_)
    if (!std::isfinite(x)) throw Error("matrix entry is not finite");
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& b) const {
  SquareMatrix r = *this;
  r += b;
  return r;
}

SquareMatrix SquareMatrix::operator-(const SquareMatrix& b) const {
  SquareMatrix r = *this;
  r -= b;
  return r;
}

SquareMatrix SquareMatrix::operator-() const {
  SquareMatrix r = *this;
  for (double& x : r.a_) x = -x;
  return r;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& b) {
  if (b.n_ != n_) throw DimensionError("dimension mismatch in +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& b) {
  if (b.n_ != n_) throw DimensionError("dimension mismatch in -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= b.a_[i];
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

SquareMatrix SquareMatrix::operator*(double s) const {
  SquareMatrix r = *this;
  r *= s;
  return r;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& b) const {
  if (b.n_ != n_) throw DimensionError("dimension mismatch in *");
  SquareMatrix r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n_; ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

SquareMatrix SquareMatrix::transpose() const {
  SquareMatrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double SquareMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SquareMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double SquareMatrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

bool SquareMatrix::is_antisymmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      if (std::fabs((*this)(i, j) + (*this)(j, i)) > tol) return false;
  return true;
}

bool SquareMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool SquareMatrix::is_normal(double tol) const {
  const SquareMatrix t = transpose();
  const SquareMatrix c = *this * t - t * *this;
  return c.max_abs() <= tol;
}

MatrixStructure SquareMatrix::detect_structure(double tol) const {
  const double scale = std::max(1.0, max_abs());
  if (is_antisymmetric(tol * scale)) return MatrixStructure::antisymmetric;
  if (is_normal(tol * scale * scale * n_)) return MatrixStructure::normal;
  return MatrixStructure::general;
}

std::vector<double> SquareMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != static_cast<std::size_t>(n_)) throw DimensionError("vector length mismatch");
  std::vector<double> r(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

BilinearForm::BilinearForm(std::vector<double> diag) : d_(std::move(diag)) {
  if (d_.empty()) throw DimensionError("form dimension must be >= 1");
  for (double x : d_)
    if (x == 0.0 || !std::isfinite(x)) throw Error("degenerate bilinear form");
}

BilinearForm BilinearForm::euclidean(int dim) {
  return BilinearForm(std::vector<double>(static_cast<std::size_t>(dim), 1.0));
}

bool BilinearForm::positive_definite() const {
  for (double x : d_)
    if (x <= 0.0) return false;
  return true;
}

double BilinearForm::inner(const std::vector<double>& u, const std::vector<double>& v) const {
  if (u.size() != d_.size() || v.size() != d_.size())
    throw DimensionError("vector length does not match form");
  double s = 0.0;
  for (std::size_t i = 0; i < d_.size(); ++i) s += u[i] * d_[i] * v[i];
  return s;
}

SquareMatrix BilinearForm::matrix() const {
  SquareMatrix m(dim());
  for (int i = 0; i < dim(); ++i) m(i, i) = d_[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace lghmc
