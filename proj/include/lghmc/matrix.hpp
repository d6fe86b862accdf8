#pragma once

#include <initializer_list>
#include <vector>

namespace lghmc {

// Structure tags used for exponential routing and norm bounds.
enum class MatrixStructure { general, normal, antisymmetric };

// Small dense real square matrix, row-major. Storage and accessors are
// 0-based; formulas taken from the literature use 1-based indices and are
// translated at the call site.
class SquareMatrix {
 public:
  explicit SquareMatrix(int dim);  // zero matrix
  SquareMatrix(int dim, std::initializer_list<double> rows);

  static SquareMatrix identity(int dim);
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return n_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  SquareMatrix operator+(const SquareMatrix& b) const;
  SquareMatrix operator-(const SquareMatrix& b) const;
  SquareMatrix operator-() const;
  SquareMatrix operator*(const SquareMatrix& b) const;
  SquareMatrix operator*(double s) const;
  SquareMatrix& operator+=(const SquareMatrix& b);
  SquareMatrix& operator-=(const SquareMatrix& b);
  SquareMatrix& operator*=(double s);

  SquareMatrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  bool is_antisymmetric(double tol) const;
  bool is_symmetric(double tol) const;
  bool is_normal(double tol) const;

  // Finest structure detectable at the given absolute tolerance.
  MatrixStructure detect_structure(double tol = 1e-12) const;

  std::vector<double> apply(const std::vector<double>& v) const;

  const std::vector<double>& data() const { return a_; }

 private:
  int n_;
  std::vector<double> a_;
  void check_finite() const;
};

inline SquareMatrix operator*(double s, const SquareMatrix& a) { return a * s; }

// Diagonal bilinear form x^T diag(d) y. Degenerate (zero) diagonal entries
// are rejected.
class BilinearForm {
 public:
  explicit BilinearForm(std::vector<double> diag);
  static BilinearForm euclidean(int dim);

  int dim() const { return static_cast<int>(d_.size()); }
  double entry(int i) const { return d_[static_cast<std::size_t>(i)]; }
  bool positive_definite() const;

  double inner(const std::vector<double>& u, const std::vector<double>& v) const;

  // diag(d) as a matrix; the diagonal entries are +-1 for every built-in
  // space, so this is also its own inverse there.
  SquareMatrix matrix() const;

 private:
  std::vector<double> d_;
};

}  // namespace lghmc
