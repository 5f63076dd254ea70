#include "cdkdv/solitons.hpp"

#include <cmath>
#include <sstream>

#include "cdkdv/error.hpp"

namespace cdkdv {

namespace {

constexpr double kPoleTolerance = 1e-12;

double norm(const CDNumber& x) { return std::sqrt(norm_sq(x)); }

void check_spec_shape(const SolitonSpec& spec, const Algebra& alg) {
  if (spec.alpha.dim() != alg.dim())
    throw DimensionError("alpha has " + std::to_string(spec.alpha.dim()) +
                         " coefficients, algebra dimension is " + std::to_string(alg.dim()));
  require(spec.lambda > 0.0 && std::isfinite(spec.lambda), "lambda must be positive");
}

std::string where(double x, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "(x = " << x << ", t = " << t << ")";
  return os.str();
}

// alpha + f and +-(alpha - f) as jets.
std::pair<Jet, Jet> factors(const Algebra& alg, const SolitonSpec& spec, double x, double t,
                            int xo, int to, Orientation orientation) {
  const double l = spec.lambda;
  const Jet f = Jet::exponential(alg, std::exp(-l * x + l * l * l * t), -l, l * l * l, xo, to);
  const Jet a = Jet::constant(alg, spec.alpha, xo, to);
  Jet num = orientation == Orientation::kBacklundConsistent ? a - f : f - a;
  return {a + f, std::move(num)};
}

LocalDerivatives from_jet(const Jet& j, int shift) {
  LocalDerivatives d;
  d.f = j.derivative(shift, 0);
  d.fx = j.derivative(shift + 1, 0);
  d.fxx = j.derivative(shift + 2, 0);
  d.fxxx = j.derivative(shift + 3, 0);
  d.fxxxx = j.derivative(shift + 4, 0);
  d.ft = j.derivative(shift, 1);
  d.fxt = j.derivative(shift + 1, 1);
  return d;
}

CDNumber v_or_zero(const CDNumber& v, const Algebra& alg) {
  if (v.dim() == 0) return CDNumber(alg.dim());
  if (v.dim() != alg.dim()) throw DimensionError("v has wrong dimension");
  return v;
}

}  // namespace

void validate(const SolitonSpec& spec, const Algebra& alg) {
  check_spec_shape(spec, alg);
  if (imag_norm_sq(spec.alpha) == 0.0 && spec.alpha[0] < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "alpha lies on the negative real ray");
}

TwoSolitonSpec TwoSolitonSpec::aligned(double alpha0, double beta0, double gamma1, double gamma2,
                                       double lambda_a, double lambda_b, const CDNumber& v) {
  const CDNumber im = imag_part(v);
  TwoSolitonSpec s;
  s.a = {lambda_a, CDNumber::scalar(v.dim(), alpha0) + gamma1 * im};
  s.b = {lambda_b, CDNumber::scalar(v.dim(), beta0) + gamma2 * im};
  return s;
}

void validate(const TwoSolitonSpec& spec, const Algebra& alg) {
  if (alg.level() > 3)
    throw LevelError("two-soliton superposition needs an alternative algebra (level <= 3)");
  check_spec_shape(spec.a, alg);
  check_spec_shape(spec.b, alg);
  require(spec.a.lambda != spec.b.lambda, "two-soliton needs distinct lambdas");
}

std::vector<SpaceTimePoint> sample_points(std::size_t nx, std::size_t nt, double x_lo,
                                          double x_hi, double t_lo, double t_hi) {
  require(nx >= 1 && nt >= 1, "need at least one sample in each direction");
  std::vector<SpaceTimePoint> out;
  out.reserve(nx * nt);
  auto node = [](double lo, double hi, std::size_t i, std::size_t n) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t it = 0; it < nt; ++it)
    for (std::size_t ix = 0; ix < nx; ++ix)
      out.push_back({node(x_lo, x_hi, ix, nx), node(t_lo, t_hi, it, nt)});
  return out;
}

CDNumber one_soliton_u(const Algebra& alg, const SolitonSpec& spec, double x, double t) {
  validate(spec, alg);
  const double l = spec.lambda;
  const double s = -l * x + l * l * l * t;
  const std::size_t d = alg.dim();
  // alpha f / (alpha + f)^2 = alpha g / (alpha g + 1)^2 with g = 1/f; use
  // whichever keeps the exponential below one.
  CDNumber num, den;
  double pole_scale;
  if (s <= 0.0) {
    const double f = std::exp(s);
    num = f * spec.alpha;
    den = spec.alpha + CDNumber::scalar(d, f);
    pole_scale = 1.0;
  } else {
    const double g = std::exp(-s);
    num = g * spec.alpha;
    den = num + CDNumber::scalar(d, 1.0);
    pole_scale = g;
  }
  if (norm(den) < kPoleTolerance * pole_scale)
    throw PoleError("alpha + f vanishes at " + where(x, t));
  const CDNumber den_inv = inverse(alg, den);
  return (12.0 * l * l) * alg.multiply(num, alg.multiply(den_inv, den_inv));
}

Jet potential_jet(const Algebra& alg, const SolitonSpec& spec, double x, double t, int x_order,
                  int t_order, Orientation orientation) {
  validate(spec, alg);
  auto [a_plus_f, num] = factors(alg, spec, x, t, x_order, t_order, orientation);
  if (norm(a_plus_f.value()) < kPoleTolerance)
    throw PoleError("alpha + f vanishes at " + where(x, t));
  Jet w = multiply(inverse(a_plus_f), num);
  w *= 6.0 * spec.lambda;
  return w;
}

Jet potential_jet(const Algebra& alg, const TwoSolitonSpec& spec, double x, double t, int x_order,
                  int t_order) {
  validate(spec, alg);
  auto [aa, na] = factors(alg, spec.a, x, t, x_order, t_order, spec.orientation);
  auto [ab, nb] = factors(alg, spec.b, x, t, x_order, t_order, spec.orientation);
  // w_a - w_b = A_a^{-1} M A_b^{-1}; alpha and beta generate an associative
  // subalgebra, so the inverse of the difference is A_b M^{-1} A_a and only
  // M can vanish.
  Jet m = multiply(na, ab);
  m *= 6.0 * spec.a.lambda;
  Jet rhs = multiply(aa, nb);
  rhs *= 6.0 * spec.b.lambda;
  m -= rhs;
  if (norm(m.value()) < kPoleTolerance)
    throw PoleError("w_alpha and w_beta coincide at " + where(x, t));
  Jet w = multiply(multiply(ab, inverse(m)), aa);
  w *= 12.0 * (spec.a.eta() - spec.b.eta());
  return w;
}

LocalDerivatives potential_local(const Algebra& alg, const SolitonSpec& spec, double x, double t,
                                 Orientation orientation) {
  return from_jet(potential_jet(alg, spec, x, t, 4, 1, orientation), 0);
}

LocalDerivatives one_soliton_local(const Algebra& alg, const SolitonSpec& spec, double x,
                                   double t) {
  return from_jet(potential_jet(alg, spec, x, t, 5, 1), 1);
}

LocalDerivatives two_soliton_local(const Algebra& alg, const TwoSolitonSpec& spec, double x,
                                   double t) {
  return from_jet(potential_jet(alg, spec, x, t, 5, 1), 1);
}

CDNumber two_soliton_u(const Algebra& alg, const TwoSolitonSpec& spec, double x, double t) {
  return potential_jet(alg, spec, x, t, 1, 0).derivative(1, 0);
}

double profile_ode_residual(const Algebra& alg, const SolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples) {
  const double l2 = spec.lambda * spec.lambda;
  double worst = 0.0;
  for (const auto& p : samples) {
    const auto u = one_soliton_local(alg, spec, p.x, p.t);
    const CDNumber r = u.fxx + 0.5 * alg.multiply(u.f, u.f) - l2 * u.f;
    worst = std::max(worst, norm(r));
  }
  return worst;
}

double soliton_pde_residual(const Algebra& alg, const SolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples, const CDNumber& v) {
  const CDNumber vv = v_or_zero(v, alg);
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, norm(cdkdv_residual(alg, one_soliton_local(alg, spec, p.x, p.t), vv)));
  return worst;
}

double soliton_pde_residual(const Algebra& alg, const TwoSolitonSpec& spec,
                      const std::vector<SpaceTimePoint>& samples, const CDNumber& v) {
  const CDNumber vv = v_or_zero(v, alg);
  double worst = 0.0;
  for (const auto& p : samples)
    worst = std::max(worst, norm(cdkdv_residual(alg, two_soliton_local(alg, spec, p.x, p.t), vv)));
  return worst;
}

BacklundResiduals one_soliton_backlund(const Algebra& alg, const SolitonSpec& spec,
                                       const std::vector<SpaceTimePoint>& samples,
                                       const CDNumber& v) {
  BacklundPair pair;
  pair.eta = spec.eta();
  LocalDerivatives zero;
  zero.f = zero.fx = zero.fxx = zero.fxxx = zero.fxxxx = zero.ft = zero.fxt = CDNumber(alg.dim());
  for (const auto& p : samples) {
    pair.w.push_back(potential_local(alg, spec, p.x, p.t));
    pair.w_prime.push_back(zero);
  }
  return backlund_residuals(alg, pair, v_or_zero(v, alg));
}

double potential_identity_residual(const Algebra& alg, const SolitonSpec& spec,
                                   const std::vector<SpaceTimePoint>& samples) {
  double worst = 0.0;
  for (const auto& p : samples) {
    const CDNumber wx = potential_jet(alg, spec, p.x, p.t, 1, 0).derivative(1, 0);
    worst = std::max(worst, norm(wx - one_soliton_u(alg, spec, p.x, p.t)));
  }
  return worst;
}

double symmetrized_rule_gap(const Algebra& alg, const TwoSolitonSpec& spec,
                            const std::vector<SpaceTimePoint>& samples) {
  validate(spec, alg);
  const double scale = 12.0 * (spec.a.eta() - spec.b.eta());
  double worst = 0.0;
  for (const auto& p : samples) {
    const Jet diff = potential_jet(alg, spec.a, p.x, p.t, 1, 0, spec.orientation) -
                     potential_jet(alg, spec.b, p.x, p.t, 1, 0, spec.orientation);
    const CDNumber exact = scale * inverse(diff).derivative(1, 0);
    const CDNumber f_inv = inverse(alg, diff.value());
    const CDNumber f_inv2 = alg.multiply(f_inv, f_inv);
    const CDNumber fx = diff.derivative(1, 0);
    const CDNumber rule =
        (-0.5 * scale) * (alg.multiply(fx, f_inv2) + alg.multiply(f_inv2, fx));
    worst = std::max(worst, norm(rule - exact));
  }
  return worst;
}

Field make_initial_field(const SolitonSpec& spec, const Grid& grid, AlgebraPtr alg, double t) {
  Field u(grid, alg);
  for (std::size_t j = 0; j < grid.points; ++j) u.set(j, one_soliton_u(*alg, spec, grid.x(j), t));
  return u;
}

Field make_initial_field(const TwoSolitonSpec& spec, const Grid& grid, AlgebraPtr alg, double t) {
  Field u(grid, alg);
  for (std::size_t j = 0; j < grid.points; ++j) u.set(j, two_soliton_u(*alg, spec, grid.x(j), t));
  return u;
}

double boundary_magnitude(const Field& u) {
  return std::max(norm(u.at(0)), norm(u.at(u.size() - 1)));
}

}  // namespace cdkdv
