#pragma once

#include <vector>

#include "lghmc/matrix.hpp"

namespace lghmc {

// [tr A, tr A^2, ..., tr A^kmax].
std::vector<double> trace_powers(const SquareMatrix& a, int kmax);

// Coefficients of det(A - x I) in ascending powers of x; the leading
// coefficient is (-1)^n. Computed from the traces of powers through the
// partition form of Newton's identities, so no eigenvalues are needed.
// Partition enumeration caps the dimension at 8.
std::vector<double> char_poly_coeffs(const SquareMatrix& a);

// A^k by binary powering, k >= 0, with at most 2*floor(log2 k) + 1
// multiplications.
SquareMatrix binary_power(const SquareMatrix& a, long k);

// Upper bound on the largest singular value: sqrt(tr A A^T), or
// sqrt(tr A A^T / 2) when the antisymmetric structure is known (the
// eigenvalues then pair up, so the Frobenius sum counts each twice).
double spectral_norm_bound(const SquareMatrix& a,
                           MatrixStructure hint = MatrixStructure::general);

// Row-wise Gram-Schmidt with respect to the (possibly indefinite) diagonal
// form: rows are orthogonalized against the already-processed rows and
// normalized to |<r, r>| = 1. Throws DegenerateRowError when a self inner
// product falls below 1e-8 in magnitude. Used to reproject drifting group
// elements; for form-preserving inputs the row signature is preserved.
SquareMatrix gram_schmidt_project(const SquareMatrix& m, const BilinearForm& form);

namespace detail {
// binary_power with an explicit multiplication counter, for complexity tests.
SquareMatrix binary_power_counted(const SquareMatrix& a, long k, int* mults);
}  // namespace detail

}  // namespace lghmc
