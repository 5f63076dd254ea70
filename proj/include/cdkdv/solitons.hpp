#pragma once

#include <utility>
#include <vector>

#include "cdkdv/algebra.hpp"
#include "cdkdv/field.hpp"
#include "cdkdv/jet.hpp"
#include "cdkdv/transforms.hpp"

namespace cdkdv {

/// One-soliton parameters: f = exp(-lambda x + lambda^3 t) and the
/// potential w = 6 lambda (alpha + f)^{-1} (alpha - f).
struct SolitonSpec {
  double lambda = 1.0;
  CDNumber alpha;

  double eta() const { return 3.0 * lambda * lambda; }
};

/// Throws unless lambda > 0 and alpha is off the closed negative real ray
/// (alpha = 0 is allowed and gives the zero solution).
void validate(const SolitonSpec& spec, const Algebra& alg);

/// Sign convention for the factor (alpha - f). kFlipped uses (f - alpha),
/// which flips the sign of every potential.
enum class Orientation { kBacklundConsistent, kFlipped };

struct TwoSolitonSpec {
  SolitonSpec a;
  SolitonSpec b;
  Orientation orientation = Orientation::kBacklundConsistent;

  /// alpha = alpha0 + gamma1 Im(v), beta = beta0 + gamma2 Im(v): the family
  /// for which [v, u] = 0.
  static TwoSolitonSpec aligned(double alpha0, double beta0, double gamma1, double gamma2,
                                double lambda_a, double lambda_b, const CDNumber& v);
};

/// Requires lambda_a != lambda_b, positive lambdas and level <= 3. The
/// individual parameters may lie on the negative real ray; regularity is
/// checked pointwise.
void validate(const TwoSolitonSpec& spec, const Algebra& alg);

struct SpaceTimePoint {
  double x;
  double t;
};

/// nx * nt points on a uniform tensor grid (endpoints included).
std::vector<SpaceTimePoint> sample_points(std::size_t nx, std::size_t nt, double x_lo,
                                          double x_hi, double t_lo, double t_hi);

/// 12 lambda^2 (alpha f) ((alpha + f)^2)^{-1}, evaluated in the scaled
/// variable that keeps f bounded. Throws PoleError if |alpha + f| < 1e-12.
CDNumber one_soliton_u(const Algebra& alg, const SolitonSpec& spec, double x, double t);

/// Jet of the potential w about (x, t).
Jet potential_jet(const Algebra& alg, const SolitonSpec& spec, double x, double t, int x_order,
                  int t_order, Orientation orientation = Orientation::kBacklundConsistent);
Jet potential_jet(const Algebra& alg, const TwoSolitonSpec& spec, double x, double t, int x_order,
                  int t_order);

/// w and its derivatives (through w_xxxx, w_t, w_xt).
LocalDerivatives potential_local(const Algebra& alg, const SolitonSpec& spec, double x, double t,
                                 Orientation orientation = Orientation::kBacklundConsistent);
/// u = w_x and its derivatives.
LocalDerivatives one_soliton_local(const Algebra& alg, const SolitonSpec& spec, double x,
                                   double t);
LocalDerivatives two_soliton_local(const Algebra& alg, const TwoSolitonSpec& spec, double x,
                                   double t);

CDNumber two_soliton_u(const Algebra& alg, const TwoSolitonSpec& spec, double x, double t);

/// max |u_xx + u^2/2 - lambda^2 u| over the samples.
double profile_ode_residual(const Algebra& alg, const SolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples);

/// max |u_t + u_xxx + (u^2)_x / 2| over the samples; with `v` the [v, u]
/// term is included.
double soliton_pde_residual(const Algebra& alg, const SolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples, const CDNumber& v = {});
double soliton_pde_residual(const Algebra& alg, const TwoSolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples, const CDNumber& v = {});

/// Backlund residuals of (w, w' = 0, eta = 3 lambda^2).
BacklundResiduals one_soliton_backlund(const Algebra& alg, const SolitonSpec& spec,
                                       const std::vector<SpaceTimePoint>& samples,
                                       const CDNumber& v = {});

/// max |w_x - closed form u| over the samples.
double potential_identity_residual(const Algebra& alg, const SolitonSpec& spec,
                                   const std::vector<SpaceTimePoint>& samples);

/// Largest gap between the exact x-derivative of 12 d_eta (w_a - w_b)^{-1}
/// and the symmetrized rule -1/2 (F_x F^{-2} + F^{-2} F_x).
double symmetrized_rule_gap(const Algebra& alg, const TwoSolitonSpec& spec,
                            const std::vector<SpaceTimePoint>& samples);

/// Samples u(x, t) on the grid.
Field make_initial_field(const SolitonSpec& spec, const Grid& grid, AlgebraPtr alg, double t = 0.0);
Field make_initial_field(const TwoSolitonSpec& spec, const Grid& grid, AlgebraPtr alg,
                         double t = 0.0);

inline constexpr double kDecayThreshold = 1e-12;

/// max |u| at the two ends of the periodic cell; should be below
/// kDecayThreshold for the periodic domain to stand in for the line.
double boundary_magnitude(const Field& u);

}  // namespace cdkdv
