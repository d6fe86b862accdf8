#pragma once

#include <string>
#include <vector>

#include "lghmc/matrix.hpp"
#include "lghmc/rng.hpp"

namespace lghmc {

// Inner product on the horizontal subspace. Riemannian spaces use
// <A, B> = tr(A^T B) / 2, which makes the stored generator bases orthonormal;
// the single-sheeted hyperboloid uses the indefinite <A, B> = tr(A B) / 2.
enum class AlgebraProduct { transpose_trace, plain_trace };

// A naturally reductive homogeneous space G/K presented through a matrix
// representation of G: stabilizer generators (basis of the Lie algebra of
// K), horizontal generators T_i carrying the momenta, the bilinear form the
// group preserves, and the base point p0 whose orbit is the manifold.
struct HomogeneousSpaceSpec {
  std::string name;
  int n = 0;  // representation dimension
  std::vector<SquareMatrix> k_generators;
  std::vector<SquareMatrix> p_generators;
  std::vector<double> kinetic_eigenvalues;  // lambda_j > 0, one per horizontal generator
  std::vector<double> kinetic_signs;        // +1/-1 signature of the product, +1 when Riemannian
  BilinearForm invariant_form{std::vector<double>{1.0}};
  std::vector<double> base_point;
  bool riemannian = true;
  AlgebraProduct product = AlgebraProduct::transpose_trace;
  MatrixStructure momentum_structure = MatrixStructure::general;
  bool has_normal_split = false;  // symmetric + antisymmetric decomposition registered

  int horizontal_dim() const { return static_cast<int>(p_generators.size()); }
};

// S^2 = SO(3)/SO(2) with the round metric.
HomogeneousSpaceSpec make_sphere_s2();

// Two-sheeted hyperbolic plane, SO(2,1)/SO(2): Riemannian, symmetric
// horizontal generators, form diag(-1, 1, 1).
HomogeneousSpaceSpec make_h2_twosheet();

// Single-sheeted hyperboloid, SO(2,1)/SO(1,1): pseudo-Riemannian (indefinite
// kinetic form), non-normal horizontal elements, form diag(1, 1, -1).
// Trajectory integration only; momentum refreshment is refused.
HomogeneousSpaceSpec make_h2_onesheet();

// S^(n-1) = SO(n)/SO(n-1) for n = 3..5.
HomogeneousSpaceSpec make_son_sphere(int n);

// Registry lookup: "s2", "h2-twosheet", "h2-onesheet", "sphere-n" (the
// latter takes the representation dimension as parameter).
HomogeneousSpaceSpec find_space(const std::string& name, int n = 0);

// Manifold point y = Q p0.
std::vector<double> project_to_manifold(const SquareMatrix& q, const HomogeneousSpaceSpec& spec);

// Inner product of the space on algebra elements.
double algebra_inner(const HomogeneousSpaceSpec& spec, const SquareMatrix& a, const SquareMatrix& b);

// Momentum matrix from coefficients against the horizontal basis and back.
SquareMatrix momentum_from_coeffs(const HomogeneousSpaceSpec& spec, const std::vector<double>& coeffs);
std::vector<double> momentum_coeffs(const HomogeneousSpaceSpec& spec, const SquareMatrix& p);

// Frobenius norm of the projection of P onto the stabilizer subalgebra;
// zero for exactly horizontal momenta.
double momentum_residual_in_k(const SquareMatrix& p, const HomogeneousSpaceSpec& spec);

// Largest violation of Ad_K-invariance of the space's inner product over
// random stabilizer elements and horizontal pairs, including the residual of
// Ad_k(p) outside the horizontal span.
double ad_invariance_check(const HomogeneousSpaceSpec& spec, Rng& rng, int trials);

// Structural residuals, all of which should sit at rounding level for a
// valid space.
struct SpaceReport {
  double stabilizer;         // ||K p0|| and ||exp(t K) p0 - p0||
  double reductivity;        // [k, p] outside span(p)
  double symmetric_bracket;  // [p, p] outside span(k)
  double form_algebra;       // X^T M + M X over all generators
  double form_group;         // exp(X)^T M exp(X) - M for sampled X
  double base_point;         // p0^T M p0 - sign
  double orthonormality;     // generator Gram matrix against the product
  double ad_invariance;
  double worst() const;
};
SpaceReport validate_space(const HomogeneousSpaceSpec& spec, Rng& rng);

}  // namespace lghmc
