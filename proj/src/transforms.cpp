#include "cdkdv/transforms.hpp"

#include <cmath>

#include "cdkdv/error.hpp"
#include "cdkdv/solver.hpp"

namespace cdkdv {

std::vector<LocalDerivatives> local_derivatives(const Field& f, const Field* f_t,
                                                Spectral& spectral) {
  const Field d1 = spectral.derivative(f, 1);
  const Field d2 = spectral.derivative(f, 2);
  const Field d3 = spectral.derivative(f, 3);
  const Field d4 = spectral.derivative(f, 4);
  std::optional<Field> dxt;
  if (f_t) {
    f.check_compatible(*f_t);
    dxt = spectral.derivative(*f_t, 1);
  }
  std::vector<LocalDerivatives> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    auto& p = out[j];
    p.f = f.at(j);
    p.fx = d1.at(j);
    p.fxx = d2.at(j);
    p.fxxx = d3.at(j);
    p.fxxxx = d4.at(j);
    if (f_t) {
      p.ft = f_t->at(j);
      p.fxt = dxt->at(j);
    }
  }
  return out;
}

CDNumber cdkdv_residual(const Algebra& alg, const LocalDerivatives& u, const CDNumber& v) {
  if (!u.has_time_derivative()) throw Error(ErrorCode::kInvalidArgument, "missing u_t");
  CDNumber r = u.ft + u.fxxx;
  r += 0.5 * (alg.multiply(u.f, u.fx) + alg.multiply(u.fx, u.f));
  if (v.dim()) r += commutator(alg, v, u.f);
  return r;
}

CDNumber potential_q(const Algebra& alg, const LocalDerivatives& w, const CDNumber& v) {
  if (!w.has_time_derivative()) throw Error(ErrorCode::kInvalidArgument, "missing w_t");
  CDNumber q = w.ft + w.fxxx + 0.5 * alg.multiply(w.fx, w.fx);
  if (v.dim()) q += commutator(alg, v, w.f);
  return q;
}

namespace {

// ((w - w')^2)_xx = D_xx D + 2 D_x D_x + D D_xx with D = w - w'.
CDNumber square_difference_xx(const Algebra& alg, const LocalDerivatives& w,
                              const LocalDerivatives& wp) {
  const CDNumber d = w.f - wp.f;
  const CDNumber dx = w.fx - wp.fx;
  const CDNumber dxx = w.fxx - wp.fxx;
  return alg.multiply(dxx, d) + 2.0 * alg.multiply(dx, dx) + alg.multiply(d, dxx);
}

}  // namespace

CDNumber backlund_first_relation_xx(const Algebra& alg, const LocalDerivatives& w,
                                    const LocalDerivatives& wp) {
  return w.fxxx + wp.fxxx + (1.0 / 12.0) * square_difference_xx(alg, w, wp);
}

CDNumber backlund_second_relation(const Algebra& alg, const LocalDerivatives& w,
                                  const LocalDerivatives& wp, const CDNumber& v) {
  if (!w.has_time_derivative() || !wp.has_time_derivative())
    throw Error(ErrorCode::kInvalidArgument, "Backlund check needs time derivatives");
  CDNumber r = w.ft + wp.ft;
  r -= (1.0 / 12.0) * square_difference_xx(alg, w, wp);
  r += 0.5 * alg.multiply(w.fx, w.fx);
  r += 0.5 * alg.multiply(wp.fx, wp.fx);
  if (v.dim()) r += commutator(alg, v, w.f + wp.f);
  return r;
}

BacklundResiduals backlund_residuals(const Algebra& alg, const BacklundPair& pair,
                                     const CDNumber& v) {
  if (pair.w.size() != pair.w_prime.size())
    throw DimensionError("Backlund pair sample counts differ");
  BacklundResiduals out;
  for (std::size_t j = 0; j < pair.w.size(); ++j) {
    const auto& w = pair.w[j];
    const auto& wp = pair.w_prime[j];
    CDNumber r7 = w.fx + wp.fx;
    r7[0] -= pair.eta;
    const CDNumber d = w.f - wp.f;
    r7 += (1.0 / 12.0) * alg.multiply(d, d);
    out.res_x = std::max(out.res_x, std::sqrt(norm_sq(r7)));
    out.res_t = std::max(out.res_t, std::sqrt(norm_sq(backlund_second_relation(alg, w, wp, v))));
  }
  return out;
}

GardnerImage gardner_forward(const Field& r, double epsilon, Spectral& spectral) {
  const Field rx = spectral.derivative(r, 1);
  const Field sq = multiply(r, r);
  // u' is u with epsilon -> -epsilon; both go through the same expression.
  auto image = [&](double eps) {
    Field u = r;
    u.axpy(eps, rx);
    u.axpy(-(eps * eps) / 6.0, sq);
    return u;
  };
  return {image(epsilon), image(-epsilon)};
}

std::vector<Field> gardner_series_coefficients(const Field& u, int order, Spectral& spectral) {
  if (order < 0 || order > kMaxSeriesOrder)
    throw Error(ErrorCode::kInvalidArgument,
                "series order must be in 0.." + std::to_string(kMaxSeriesOrder));
  std::vector<Field> r;
  r.reserve(order + 1);
  r.push_back(u);
  for (int k = 1; k <= order; ++k) {
    Field next = spectral.derivative(r[k - 1], 1);
    next *= -1.0;
    for (int i = 0; i + 2 <= k; ++i) next.axpy(1.0 / 6.0, multiply(r[i], r[k - 2 - i]));
    r.push_back(std::move(next));
  }
  return r;
}

Field gardner_inverse_series(const Field& u, double epsilon, int order, Spectral& spectral) {
  const auto coeffs = gardner_series_coefficients(u, order, spectral);
  // Horner in epsilon.
  Field r = coeffs.back();
  for (int k = order - 1; k >= 0; --k) {
    r *= epsilon;
    r += coeffs[k];
  }
  return r;
}

double gardner_real_charge(const Field& r) {
  double s = 0.0;
  for (double v : r.component(0)) s += v;
  return s * r.grid().spacing();
}

CDNumber field_integral(const Field& r) {
  CDNumber out(r.dim());
  for (std::size_t k = 0; k < r.dim(); ++k) {
    double s = 0.0;
    for (double v : r.component(k)) s += v;
    out[k] = s * r.grid().spacing();
  }
  return out;
}

ConservedReport conserved(const Field& u, Spectral& spectral, int series_order) {
  ConservedReport rep;
  const Field ux = spectral.derivative(u, 1);
  const double h = u.grid().spacing();
  auto a = u.component(0);
  auto ax = ux.component(0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    double im2 = 0.0, imx2 = 0.0;
    for (std::size_t k = 1; k < u.dim(); ++k) {
      const double b = u.component(k)[j];
      const double bx = ux.component(k)[j];
      im2 += b * b;
      imx2 += bx * bx;
    }
    const double re = a[j];
    rep.h1 += re;
    rep.h2 += re * re - im2;
    rep.h3 += re * re * re / 3.0 - ax[j] * ax[j] + imx2 - re * im2;
  }
  rep.h1 *= h;
  rep.h2 *= h;
  rep.h3 *= h;
  if (series_order > 0) {
    for (const Field& rk : gardner_series_coefficients(u, series_order, spectral))
      rep.gardner_integrals.push_back(gardner_real_charge(rk));
  }
  return rep;
}

ConservedReport conserved(const Field& u, int series_order) {
  Spectral spectral(u.grid());
  return conserved(u, spectral, series_order);
}

double lax_residual(std::span<const Field> window, double dt, const CDNumber& v, const Field& psi,
                    Spectral& spectral, LaxConvention convention) {
  if (window.size() != 3) throw Error(ErrorCode::kInvalidArgument, "Lax check needs 3 snapshots");
  require(dt > 0.0, "Lax check needs a positive time spacing");
  const Field& u = window[1];
  if (u.algebra().level() > 3)
    throw LevelError("Lax pair is only formulated up to the octonions (level <= 3)");
  u.check_compatible(psi);
  u.check_compatible(window[0]);
  u.check_compatible(window[2]);
  const CDNumber vv = v.dim() ? v : CDNumber(u.dim());
  if (vv.dim() != u.dim()) throw DimensionError("v has wrong dimension");

  const Field ux = spectral.derivative(u, 1);
  Field ut = window[2] - window[0];
  ut *= 1.0 / (2.0 * dt);

  auto apply_l = [&](const Field& phi) {
    Field out = spectral.derivative(phi, 2);
    out *= -1.0;
    out.axpy(-1.0 / 6.0, multiply(u, phi));
    return out;
  };
  const double v_coeff = convention == LaxConvention::kCompatible ? 1.0 : 6.0;
  auto apply_p = [&](const Field& phi) {
    Field out = spectral.derivative(phi, 3);
    out *= 4.0;
    out += multiply(u, spectral.derivative(phi, 1));
    out.axpy(0.5, multiply(ux, phi));
    out.axpy(v_coeff, multiply(vv, phi));
    return out;
  };

  Field res = multiply(ut, psi);
  res *= -1.0 / 6.0;
  res -= apply_l(apply_p(psi));
  res += apply_p(apply_l(psi));
  return max_sample_norm(res);
}

std::pair<Field, CDNumber> galileo_boost(const Field& u, const CDNumber& v, double c, double t,
                                         Spectral& spectral) {
  Field shifted = (c * t == 0.0) ? u : spectral.translate(u, c * t);
  return {add_constant(std::move(shifted), CDNumber::scalar(u.dim(), c)), v};
}

}  // namespace cdkdv
