#pragma once

#include <optional>

#include "lghmc/matrix.hpp"

namespace lghmc {

enum class ExpStrategy { automatic, taylor_only, rodrigues, schur_parlett };

struct ExpConfig {
  int taylor_degree = 10;  // series truncated after degree taylor_degree - 1
  double epsilon = 1e-6;   // absolute accuracy target of the truncated series
  double alpha = 0.9;      // fraction of the error budget given to the tail bound
  ExpStrategy strategy = ExpStrategy::automatic;
};

// Largest input norm delta for which the truncated series meets epsilon:
// delta = min(alpha N, (epsilon N! (1 - alpha))^(1/N)).
double taylor_threshold(const ExpConfig& cfg);

// Degree-(N-1) Taylor polynomial reduced modulo the characteristic
// polynomial, evaluated with Horner's scheme; at most dim-1 matrix
// multiplications. Requires spectral_norm_bound(A) <= taylor_threshold(cfg),
// else throws ThresholdError.
SquareMatrix exp_taylor_reduced(const SquareMatrix& a, const ExpConfig& cfg = {});

// Scaling and squaring wrapper: exp(A) = exp(A/k)^k with
// k = ceil((norm/delta)^(N/(N-1))), which keeps the accumulated error of the
// k-fold product within epsilon. Never throws on large norms.
SquareMatrix exp_scale_square(const SquareMatrix& a, const ExpConfig& cfg = {});

// Closed form for so(3): exp A = I + sin(xi)/xi A + (1-cos(xi))/xi^2 A^2
// with xi = sqrt(-tr(A^2)/2). Series guards take over below xi = 1e-4.
// Throws StructureError unless A is 3x3 antisymmetric (tolerance 1e-12 on
// the Frobenius norm of A + A^T).
SquareMatrix exp_rodrigues_so3(const SquareMatrix& a);

// Spectral projector method for antisymmetric A of dimension 2..5: the
// distinct eigenvalues of A^2 follow from tr A^2 and tr A^4 in closed form,
// each Lagrange projector gets a per-block rotation formula. Returns nullopt
// when the eigenvalues of A^2 cluster closer than 1e-6, in which case the
// caller should fall back to exp_scale_square.
std::optional<SquareMatrix> exp_projector_son(const SquareMatrix& a);

// Schur-Parlett for general (non-normal) real input with real, separated
// eigenvalues: Hessenberg reduction, shifted QR iteration, exponential of
// the triangular factor by the Parlett recurrence. Throws SchurError on
// complex eigenvalue pairs, eigenvalue gaps below 1e-8, or QR
// non-convergence (cap 100 n^2 iterations).
SquareMatrix exp_schur_parlett(const SquareMatrix& a);

// Strategy router. automatic: antisymmetric 3x3 -> Rodrigues, antisymmetric
// 4x4/5x5 -> projectors (falling back to scale-and-square on clustering),
// other normal input -> scale-and-square, general input -> Schur-Parlett
// with scale-and-square fallback. The structure hint widens what the
// detector already finds; it never overrides a detected finer structure.
SquareMatrix exp_dispatch(const SquareMatrix& a, const ExpConfig& cfg = {},
                          MatrixStructure hint = MatrixStructure::general);

namespace detail {

struct SchurDecomposition {
  SquareMatrix q;  // orthogonal
  SquareMatrix t;  // upper triangular, real eigenvalues on the diagonal
};

// Real Schur form restricted to matrices with real eigenvalues; throws
// SchurError otherwise. Dimension cap 5.
SchurDecomposition schur_decompose(const SquareMatrix& a);

// exp(T) for upper triangular T via the Parlett recurrence; throws
// SchurError when diagonal entries are closer than 1e-8.
SquareMatrix parlett_exp_triangular(const SquareMatrix& t);

// Scale-and-square with an explicit scaling count, for error-independence
// tests.
SquareMatrix exp_scale_square_with_k(const SquareMatrix& a, long k, const ExpConfig& cfg);

}  // namespace detail

}  // namespace lghmc
