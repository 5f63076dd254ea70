#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

#include "cdkdv/algebra.hpp"
#include "cdkdv/field.hpp"
#include "cdkdv/transforms.hpp"

namespace cdkdv {

using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

Vector8 to_vector(const CDNumber& x);
CDNumber to_cd(const Vector8& x);

/// Linear map D_{a,b} on the octonions, column k = D_{a,b}(e_k).
struct Derivation {
  CDNumber a;
  CDNumber b;
  Matrix8 matrix = Matrix8::Zero();

  CDNumber apply(const CDNumber& x) const { return to_cd(matrix * to_vector(x)); }
};

/// D_{a,b}(x) = [[a,b],x] - 3[a,b,x]. Throws LevelError unless level 3.
Derivation derivation(const Algebra& alg, const CDNumber& a, const CDNumber& b);
/// The same map from 1/2([[a,x],b] + [a,[b,x]] + [[a,b],x]).
Matrix8 derivation_half_sum(const Algebra& alg, const CDNumber& a, const CDNumber& b);

struct BasisPair {
  std::size_t i;
  std::size_t j;
};

/// The three pairs with e_i e_j = +e_p (each unordered pair oriented so the
/// sign is positive), sorted lexicographically.
std::vector<BasisPair> fano_pairs(const Algebra& alg, std::size_t p);

/// max over p of the max-abs entry of D_{e_i,e_j} + D_{e_r,e_s} + D_{e_u,e_v}.
double fano_identity_residual(const Algebra& alg);

struct G2Basis {
  /// Fourteen derivations, two per imaginary unit p = 1..7.
  std::vector<Derivation> elements;
  /// Rank of the 64 x 14 matrix of flattened elements.
  int rank = 0;
};

/// For each p the two lexicographically smallest oriented Fano pairs.
G2Basis g2_basis(const Algebra& alg);

/// Largest least-squares residual of re-expressing [D_i, D_j] in the basis.
double closure_residual(const G2Basis& basis);

/// max |D(xy) - D(x) y - x D(y)| over `trials` seeded random pairs and all
/// basis elements.
double leibniz_residual(const Algebra& alg, const G2Basis& basis, int trials = 100,
                        unsigned seed = 0);

struct JacobiResiduals {
  /// D_ab D_cd = D_{D_ab c, d} + D_{c, D_ab d} + D_cd D_ab (composition).
  double composition = 0.0;
  /// [D_ab, D_cd] = D_{D_ab c, d} + D_{c, D_ab d} + [D_cd, D_ab] (commutator).
  double commutator = 0.0;
};

/// Both readings of the generalized Jacobi identity, max over `trials`
/// seeded random choices of basis pairs (a, b), (c, d).
JacobiResiduals jacobi_residuals(const Algebra& alg, int trials = 50, unsigned seed = 0);

/// exp(s D) by scaling and squaring; the Taylor series stops once a term
/// falls below 1e-13 in max-norm.
Matrix8 exponentiate(const Matrix8& d, double s);

/// max |phi(xy) - phi(x) phi(y)| over `trials` seeded random pairs.
double multiplicativity_residual(const Algebra& alg, const Matrix8& phi, int trials = 100,
                                 unsigned seed = 0);
/// max | |phi(x)| - |x| | over seeded random x.
double norm_preservation_residual(const Matrix8& phi, int trials = 100, unsigned seed = 0);

struct Stabilizer {
  int dimension = 0;
  /// Null-space basis: coefficient vectors over the G2 basis and the
  /// corresponding derivation matrices.
  std::vector<Eigen::VectorXd> coefficients;
  std::vector<Matrix8> matrices;
};

/// {D in span(G2Basis) : D(v) = 0}. Requires an octonion v != 0.
Stabilizer stabilizer(const Algebra& alg, const CDNumber& v);

/// D applied to every sample.
Field apply(const Matrix8& d, const Field& u);
LocalDerivatives apply(const Matrix8& d, const LocalDerivatives& u);

struct InvarianceResidual {
  /// Residual of the unperturbed samples.
  double base = 0.0;
  /// Residual of u + mu D(u).
  double perturbed = 0.0;
  /// max |R(u + mu D u) - R(u)|; isolates the perturbation from the
  /// discretization error of the samples.
  double excess = 0.0;
};

/// Equation residual of u + mu D(u) at analytically differentiated samples.
InvarianceResidual invariance_residual(const Algebra& alg,
                                       const std::vector<LocalDerivatives>& samples,
                                       const CDNumber& v, const Matrix8& d, double mu);

/// Same on a stored trajectory: `window` holds u at t - dt, t, t + dt and the
/// time derivative is the centered difference.
InvarianceResidual invariance_residual(std::span<const Field> window, double dt,
                                       const CDNumber& v, const Matrix8& d, double mu,
                                       Spectral& spectral);

struct SlopeReport {
  double mu_large = 0.0;
  double mu_small = 0.0;
  double excess_large = 0.0;
  double excess_small = 0.0;
  /// log(excess_large / excess_small) / log(mu_large / mu_small).
  double slope = 0.0;
};

SlopeReport make_slope_report(const InvarianceResidual& large, double mu_large,
                              const InvarianceResidual& small, double mu_small);

}  // namespace cdkdv
