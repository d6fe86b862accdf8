#include "lghmc/linalg.hpp"

#include <cmath>
#include <cstddef>

#include "lghmc/errors.hpp"

namespace lghmc {

std::vector<double> trace_powers(const SquareMatrix& a, int kmax) {
  if (kmax < 1) throw DimensionError("kmax must be >= 1");
  std::vector<double> tr;
  tr.reserve(static_cast<std::size_t>(kmax));
  SquareMatrix p = a;
  tr.push_back(p.trace());
  for (int k = 2; k <= kmax; ++k) {
    p = p * a;
    tr.push_back(p.trace());
  }
  return tr;
}

namespace {

// Walk all partitions of k as multiplicity maps {part -> count}, invoking
// f(parts, counts) once per partition.
template <typename F>
void for_each_partition(int k, F&& f) {
  std::vector<int> parts, counts;
  // Recursive descent over the largest part allowed.
  auto rec = [&](auto&& self, int remaining, int maxpart) -> void {
    if (remaining == 0) {
      f(parts, counts);
      return;
    }
    for (int j = std::min(remaining, maxpart); j >= 1; --j) {
      int r = 1;
      int left = remaining - j;
      while (true) {
        parts.push_back(j);
        counts.push_back(r);
        self(self, left, j - 1);
        parts.pop_back();
        counts.pop_back();
        if (left < j) break;
        left -= j;
        ++r;
      }
    }
  };
  rec(rec, k, k);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> char_poly_coeffs(const SquareMatrix& a) {
  const int n = a.dim();
  if (n > 8) throw DimensionError("char_poly_coeffs supports dimensions up to 8");
  const std::vector<double> tr = trace_powers(a, n);

  // e_k = sum over partitions {j^(r_j)} of k of
  //       prod_j (-1)^(r_j (j+1)) / (r_j! j^r_j) (tr A^j)^r_j.
  std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double sum = 0.0;
    for_each_partition(k, [&](const std::vector<int>& parts, const std::vector<int>& counts) {
      double term = 1.0;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const int j = parts[i];
        const int r = counts[i];
        const double sign = (r * (j + 1)) % 2 == 0 ? 1.0 : -1.0;
        term *= sign / (factorial(r) * std::pow(static_cast<double>(j), r));
        term *= std::pow(tr[static_cast<std::size_t>(j) - 1], r);
      }
      sum += term;
    });
    e[static_cast<std::size_t>(k)] = sum;
  }

  // det(A - x I) = sum_k (-1)^(n-k) e_k x^(n-k).
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const int pw = n - k;
    c[static_cast<std::size_t>(pw)] = (pw % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(k)];
  }
  return c;
}

namespace detail {

SquareMatrix binary_power_counted(const SquareMatrix& a, long k, int* mults) {
  if (k < 0) throw DimensionError("negative exponent");
  int count = 0;
  SquareMatrix result = SquareMatrix::identity(a.dim());
  if (k > 0) {
    SquareMatrix sq = a;
    while (true) {
      if (k & 1) {
        result = result * sq;
        ++count;
      }
      k >>= 1;
      if (k == 0) break;
      sq = sq * sq;
      ++count;
    }
  }
  if (mults) *mults = count;
  return result;
}

}  // namespace detail

SquareMatrix binary_power(const SquareMatrix& a, long k) {
  return detail::binary_power_counted(a, k, nullptr);
}

double spectral_norm_bound(const SquareMatrix& a, MatrixStructure hint) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  if (hint == MatrixStructure::antisymmetric) s *= 0.5;
  return std::sqrt(s);
}

SquareMatrix gram_schmidt_project(const SquareMatrix& m, const BilinearForm& form) {
  const int n = m.dim();
  if (form.dim() != n) throw DimensionError("form dimension mismatch");
  SquareMatrix r = m;

  auto row_inner = [&](int i, int j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += r(i, k) * form.entry(k) * r(j, k);
    return s;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      // Processed rows have |<r_j, r_j>| = 1; the sign matters for
      // indefinite forms.
      const double sj = row_inner(j, j);
      const double c = row_inner(i, j) / sj;
      for (int k = 0; k < n; ++k) r(i, k) -= c * r(j, k);
    }
    const double self = row_inner(i, i);
    if (std::fabs(self) < 1e-8)
      throw DegenerateRowError("row with vanishing self inner product in Gram-Schmidt");
    const double inv = 1.0 / std::sqrt(std::fabs(self));
    for (int k = 0; k < n; ++k) r(i, k) *= inv;
  }
  return r;
}

}  // namespace lghmc
