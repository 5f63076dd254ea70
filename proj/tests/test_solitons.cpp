#include <doctest.h>

#include <cmath>
#include <complex>

#include "cdkdv/error.hpp"
#include "cdkdv/solitons.hpp"
#include "support.hpp"

using namespace cdkdv;

namespace {

// Scalar two-soliton of u_t + u_xxx + u u_x = 0 in Hirota form,
// u = 12 (log F)_xx with F = 1 + E1 + E2 + A E1 E2.
double hirota(double k1, double k2, double d1, double d2, double x, double t) {
  const double e1 = std::exp(k1 * x - k1 * k1 * k1 * t + d1);
  const double e2 = std::exp(k2 * x - k2 * k2 * k2 * t + d2);
  const double a = std::pow((k1 - k2) / (k1 + k2), 2);
  const double f = 1 + e1 + e2 + a * e1 * e2;
  const double fx = k1 * e1 + k2 * e2 + a * (k1 + k2) * e1 * e2;
  const double fxx = k1 * k1 * e1 + k2 * k2 * e2 + a * (k1 + k2) * (k1 + k2) * e1 * e2;
  return 12.0 * (f * fxx - fx * fx) / (f * f);
}

CDNumber generic(std::size_t d) {
  CDNumber x(d);
  x[0] = 1.0;
  for (std::size_t k = 1; k < d; ++k) x[k] = (k % 2 ? 0.5 : -0.5) / k;
  return x;
}

}  // namespace

TEST_SUITE("solitons") {

TEST_CASE("real one-soliton is 3 lambda^2 sech^2(lambda (x - lambda^2 t) / 2)") {
  const Algebra alg(0);
  for (double lambda : {0.5, 1.0, 2.0})
    for (double x : {-6.0, -1.0, 0.0, 0.7, 5.0})
      for (double t : {-1.0, 0.0, 0.5}) {
        const double s = 1.0 / std::cosh(lambda * (x - lambda * lambda * t) / 2.0);
        CHECK(one_soliton_u(alg, {lambda, CDNumber{1.0}}, x, t)[0] ==
              doctest::Approx(3 * lambda * lambda * s * s).epsilon(1e-13));
      }
}

TEST_CASE("complex one-soliton matches complex arithmetic") {
  const Algebra alg(1);
  const std::complex<double> alpha(0.8, 0.6);
  const double lambda = 1.2;
  for (double x : {-3.0, 0.0, 2.0})
    for (double t : {-0.5, 0.3}) {
      const double f = std::exp(-lambda * x + lambda * lambda * lambda * t);
      const std::complex<double> u = 12.0 * lambda * lambda * alpha * f / ((alpha + f) * (alpha + f));
      const CDNumber got = one_soliton_u(alg, {lambda, CDNumber{alpha.real(), alpha.imag()}}, x, t);
      CHECK(got[0] == doctest::Approx(u.real()).epsilon(1e-12));
      CHECK(got[1] == doctest::Approx(u.imag()).epsilon(1e-12));
    }
}

TEST_CASE("one-soliton ODE and PDE residuals across algebras and speeds") {
  const auto samples = sample_points(20, 10, -10.0, 10.0, -1.0, 1.0);
  REQUIRE(samples.size() == 200);
  for (int level : {0, 2, 3})
    for (double lambda : {0.5, 1.0, 2.0}) {
      const Algebra alg(level);
      const SolitonSpec s{lambda, generic(alg.dim())};
      CAPTURE(level);
      CAPTURE(lambda);
      CHECK(profile_ode_residual(alg, s, samples) < 1e-8);
      CHECK(soliton_pde_residual(alg, s, samples) < 1e-8);
    }
}

TEST_CASE("aligned external field leaves the soliton a solution") {
  const auto samples = sample_points(10, 5, -8.0, 8.0, -1.0, 1.0);
  const Algebra alg(3);
  const CDNumber v = CDNumber::basis(8, 4);
  const SolitonSpec s{1.0, CDNumber::scalar(8, 1.0) + 0.7 * v};
  CHECK(soliton_pde_residual(alg, s, samples, v) < 1e-8);
  const SolitonSpec generic_s{1.0, generic(8)};
  CHECK(soliton_pde_residual(alg, generic_s, samples, v) > 1e-3);
}

TEST_CASE("real two-soliton equals the Hirota form") {
  const Algebra alg(0);
  const double ka = 0.8, kb = 1.2;
  TwoSolitonSpec s;
  s.a = {ka, CDNumber{1.0}};
  s.b = {kb, CDNumber{-1.0}};
  const double shift = std::log((ka + kb) / std::abs(ka - kb));
  for (double x = -12.0; x <= 12.0; x += 0.9)
    for (double t : {-2.0, -0.5, 0.0, 1.0, 3.0})
      CHECK(two_soliton_u(alg, s, x, t)[0] ==
            doctest::Approx(hirota(ka, kb, shift, shift, x, t)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("two-soliton residuals and orientation") {
  const auto samples = sample_points(20, 10, -10.0, 10.0, -1.0, 1.0);
  const Algebra alg(3);
  const CDNumber v = CDNumber::basis(8, 1);
  TwoSolitonSpec s = TwoSolitonSpec::aligned(1.0, -1.0, 0.3, 0.2, 0.8, 1.2, v);
  CHECK(soliton_pde_residual(alg, s, samples) < 1e-6);
  CHECK(soliton_pde_residual(alg, s, samples, v) < 1e-6);
  s.orientation = Orientation::kFlipped;
  CHECK(soliton_pde_residual(alg, s, samples) > 1.0);
}

TEST_CASE("two-soliton spec validation") {
  TwoSolitonSpec s;
  s.a = {1.0, generic(16)};
  s.b = {0.5, generic(16)};
  CHECK_THROWS_AS(validate(s, Algebra(4)), LevelError);
  s.a = {1.0, generic(8)};
  s.b = {1.0, generic(8)};
  CHECK_THROWS(validate(s, Algebra(3)));
}

TEST_CASE("one-soliton spec validation") {
  const Algebra alg(1);
  CHECK_THROWS(validate(SolitonSpec{-1.0, CDNumber{1.0, 0.0}}, alg));
  CHECK_THROWS(validate(SolitonSpec{1.0, CDNumber{-1.0, 0.0}}, alg));
  CHECK_THROWS_AS(validate(SolitonSpec{1.0, CDNumber{1.0, 0.0, 0.0, 0.0}}, alg), DimensionError);
  CHECK_NOTHROW(validate(SolitonSpec{1.0, CDNumber{-1.0, 0.1}}, alg));
  // alpha = -1 would meet alpha + f = 0 at the origin; it is rejected up front.
  CHECK_THROWS_WITH(one_soliton_u(Algebra(0), SolitonSpec{1.0, CDNumber{-1.0}}, 5.0, 0.0),
                    doctest::Contains("negative real ray"));
}

TEST_CASE("initial fields sample the closed form and decay at the boundary") {
  const Grid g = Grid::centered(80.0, 256);
  const auto alg = make_algebra(3);
  const SolitonSpec s{1.0, generic(8)};
  const Field f = make_initial_field(s, g, alg, 0.25);
  for (std::size_t j = 0; j < g.points; j += 17)
    CHECK(testing::max_abs_diff(f.at(j), one_soliton_u(*alg, s, g.x(j), 0.25)) < 1e-15);
  CHECK(boundary_magnitude(f) < kDecayThreshold);
}

}
