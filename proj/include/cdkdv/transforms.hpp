#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "cdkdv/algebra.hpp"
#include "cdkdv/field.hpp"

namespace cdkdv {

/// Values of a function and the derivatives the residual checks need, at a
/// single (x, t).
struct LocalDerivatives {
  CDNumber f, fx, fxx, fxxx, fxxxx;
  CDNumber ft, fxt;

  bool has_time_derivative() const { return ft.dim() != 0; }
};

/// Pointwise derivatives of a snapshot from spectral differentiation. When
/// `f_t` is given, ft is taken from it and fxt is its spectral derivative.
std::vector<LocalDerivatives> local_derivatives(const Field& f, const Field* f_t,
                                                Spectral& spectral);

/// u_t + u_xxx + 1/2 (u u_x + u_x u) + [v, u] at one point.
CDNumber cdkdv_residual(const Algebra& alg, const LocalDerivatives& u, const CDNumber& v);
/// Potential form Q(w) = w_t + w_xxx + 1/2 w_x^2 + [v, w].
CDNumber potential_q(const Algebra& alg, const LocalDerivatives& w, const CDNumber& v);

// ---------------------------------------------------------------- Backlund

struct BacklundPair {
  std::vector<LocalDerivatives> w;
  std::vector<LocalDerivatives> w_prime;
  double eta = 0.0;
};

struct BacklundResiduals {
  /// max |w_x + w'_x - eta + (w - w')^2 / 12|
  double res_x = 0.0;
  /// max |w_t + w'_t - ((w - w')^2)_xx / 12 + w_x^2/2 + w'_x^2/2 + [v, w + w']|
  double res_t = 0.0;
};

/// Throws when time derivatives are missing or the two sample sets differ
/// in length.
BacklundResiduals backlund_residuals(const Algebra& alg, const BacklundPair& pair,
                                     const CDNumber& v);

/// Second x-derivative of the first Backlund relation, pointwise. Together
/// with the second relation it sums to Q(w) + Q(w').
CDNumber backlund_first_relation_xx(const Algebra& alg, const LocalDerivatives& w,
                                    const LocalDerivatives& w_prime);
CDNumber backlund_second_relation(const Algebra& alg, const LocalDerivatives& w,
                                  const LocalDerivatives& w_prime, const CDNumber& v);

// ----------------------------------------------------------------- Gardner

struct GardnerParams {
  double epsilon = 1.0;
  /// Backlund parameter tied to epsilon, eta = 3 / epsilon^2.
  double eta() const { return 3.0 / (epsilon * epsilon); }
};

struct GardnerImage {
  Field u;        // r + eps r_x - eps^2 r^2 / 6
  Field u_prime;  // r - eps r_x - eps^2 r^2 / 6
};

GardnerImage gardner_forward(const Field& r, double epsilon, Spectral& spectral);

inline constexpr int kMaxSeriesOrder = 8;

/// Coefficients r_0..r_order of the formal inverse r = sum eps^k r_k of
/// u = r + eps r_x - eps^2 r^2 / 6, from r_0 = u and
/// r_k = -d_x r_{k-1} + (1/6) sum_{i+j=k-2} r_i r_j.
std::vector<Field> gardner_series_coefficients(const Field& u, int order, Spectral& spectral);
Field gardner_inverse_series(const Field& u, double epsilon, int order, Spectral& spectral);

/// Integral of Re(r) over the periodic domain (Riemann sum).
double gardner_real_charge(const Field& r);
/// Integral of the full field, componentwise.
CDNumber field_integral(const Field& r);

// -------------------------------------------------------------- Conserved

struct ConservedReport {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  /// Integral of Re(r_k) for the Gardner series coefficients, k = 0..order
  /// (empty unless requested).
  std::vector<double> gardner_integrals;
};

/// H1 = int Re u, H2 = int (Re u)^2 - |Im u|^2,
/// H3 = int (Re u)^3/3 - (Re u_x)^2 + |Im u_x|^2 - Re(u) |Im u|^2.
ConservedReport conserved(const Field& u, Spectral& spectral, int series_order = 0);
ConservedReport conserved(const Field& u, int series_order = 0);

// -------------------------------------------------------------------- Lax

enum class LaxConvention {
  /// P = 4 d^3 + u d + u_x / 2 + v: the coefficient of v that makes
  /// L_t = [L, P] reproduce the [v, u] term of the evolution equation.
  kCompatible,
  /// P = 4 d^3 + u d + u_x / 2 + 6 v.
  kSixV,
};

/// Max-norm of L_t psi - (L(P psi) - P(L psi)) with L = -d^2 - u/6 and
/// coefficient action by left multiplication. `window` holds u at t - dt,
/// t, t + dt.
/// Rejects algebras beyond the octonions.
double lax_residual(std::span<const Field> window, double dt, const CDNumber& v, const Field& psi,
                    Spectral& spectral, LaxConvention convention = LaxConvention::kCompatible);

// ---------------------------------------------------------------- Galileo

/// u~(x) = u(x - c t) + c, v~ = v: maps a solution at time t to the boosted
/// solution at the same time.
std::pair<Field, CDNumber> galileo_boost(const Field& u, const CDNumber& v, double c, double t,
                                         Spectral& spectral);

}  // namespace cdkdv
