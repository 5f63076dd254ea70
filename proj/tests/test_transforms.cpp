#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cdkdv/solitons.hpp"
#include "cdkdv/solver.hpp"
#include "cdkdv/transforms.hpp"
#include "support.hpp"

using namespace cdkdv;

namespace {

double slope(double e_large, double e_small, double x_large, double x_small) {
  return std::log(e_large / e_small) / std::log(x_large / x_small);
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("Gardner image matches the pointwise formula") {
  const Grid g = Grid::centered(20.0, 64);
  const auto alg = make_algebra(3);
  Spectral sp(g);
  const Field r = testing::smooth_field(g, alg, 21);
  const double eps = 0.7;
  const auto img = gardner_forward(r, eps, sp);
  const Field rx = sp.derivative(r, 1);
  for (std::size_t j = 0; j < g.points; j += 5) {
    const CDNumber x = r.at(j), dx = rx.at(j), sq = alg->multiply(x, x);
    const CDNumber u = x + eps * dx - (eps * eps / 6.0) * sq;
    const CDNumber up = x - eps * dx - (eps * eps / 6.0) * sq;
    CHECK(testing::max_abs_diff(img.u.at(j), u) < 1e-13);
    CHECK(testing::max_abs_diff(img.u_prime.at(j), up) < 1e-13);
  }
}

TEST_CASE("flipping epsilon swaps u and u' bitwise") {
  const Grid g = Grid::centered(20.0, 64);
  const auto alg = make_algebra(4);
  Spectral sp(g);
  const Field r = testing::smooth_field(g, alg, 22);
  for (double eps : {0.25, 0.5, 1.0}) {
    const auto a = gardner_forward(r, eps, sp);
    const auto b = gardner_forward(r, -eps, sp);
    CHECK(std::equal(a.u.data().begin(), a.u.data().end(), b.u_prime.data().begin()));
    CHECK(std::equal(a.u_prime.data().begin(), a.u_prime.data().end(), b.u.data().begin()));
  }
}

TEST_CASE("series coefficients start with u, -u_x, u_xx + u^2/6") {
  const Grid g = Grid::centered(20.0, 64);
  const auto alg = make_algebra(3);
  Spectral sp(g);
  const Field u = testing::smooth_field(g, alg, 23);
  const auto r = gardner_series_coefficients(u, 2, sp);
  REQUIRE(r.size() == 3);
  CHECK((r[0] - u).max_abs() == 0.0);
  CHECK((r[1] + sp.derivative(u, 1)).max_abs() < 1e-12);
  Field r2 = sp.derivative(u, 2);
  r2.axpy(1.0 / 6.0, multiply(u, u));
  CHECK((r[2] - r2).max_abs() < 1e-11);
}

TEST_CASE("the truncated inverse series converges at order + 1") {
  const Grid g = Grid::centered(20.0, 64);
  const auto alg = make_algebra(3);
  Spectral sp(g);
  const Field u = testing::smooth_field(g, alg, 24, 0.5, 2);
  for (int order = 0; order <= 4; ++order) {
    auto err = [&](double eps) {
      const Field r = gardner_inverse_series(u, eps, order, sp);
      return (gardner_forward(r, eps, sp).u - u).max_abs();
    };
    const double s = slope(err(0.04), err(0.02), 0.04, 0.02);
    CAPTURE(order);
    CHECK(s > order + 0.8);
  }
}

TEST_CASE("integrated Gardner flow maps to a CD-KdV solution") {
  const Grid g = Grid::centered(40.0, 256);
  const auto alg = make_algebra(2);
  const double eps = 0.5, h = 1e-5;
  EvolutionSpec gs;
  gs.equation = Equation::kGardner;
  gs.epsilon = eps;
  gs.v = CDNumber{0, 0.4, 0, 0};
  gs.dt = 2e-4;
  gs.t_end = 0.1;
  gs.record_every = 250;
  Solver gardner(gs, g, alg);
  EvolutionSpec ks = gs;
  ks.equation = Equation::kCdKdv;
  Solver kdv(ks, g, alg);
  const SolitonSpec s{1.0, CDNumber{1.0, 0.3, -0.2, 0.1}};
  const RunRecord run = gardner.simulate(make_initial_field(s, g, alg));
  const double q0 = gardner_real_charge(run.snapshots.front());
  for (const Field& r : run.snapshots) {
    Field ut = gardner_forward(gardner.step_rk4(r, h), eps, gardner.spectral()).u -
               gardner_forward(gardner.step_rk4(r, -h), eps, gardner.spectral()).u;
    ut *= 1.0 / (2.0 * h);
    ut -= kdv.rhs(gardner_forward(r, eps, gardner.spectral()).u);
    CHECK(max_sample_norm(ut) < 1e-5);
    CHECK(std::abs(gardner_real_charge(r) - q0) < 1e-12);
  }
}

TEST_CASE("conserved densities of a real soliton match quadrature of the closed form") {
  const double lambda = 0.8;
  const Grid g = Grid::centered(80.0, 512);
  const auto alg = make_algebra(0);
  Field u(g, alg);
  auto sech2 = [&](double x) { return 1.0 / std::pow(std::cosh(lambda * x / 2.0), 2); };
  for (std::size_t j = 0; j < g.points; ++j) u.component(0)[j] = 3 * lambda * lambda * sech2(g.x(j));
  const ConservedReport c = conserved(u);
  // u = 3 l^2 sech^2(l x / 2): H1 = 12 l, H2 = 24 l^3, and H3 by fine quadrature
  CHECK(c.h1 == doctest::Approx(12 * lambda).epsilon(1e-12));
  CHECK(c.h2 == doctest::Approx(24 * std::pow(lambda, 3)).epsilon(1e-12));
  double h3 = 0.0;
  const int n = 400000;
  const double dx = 80.0 / n;
  for (int i = 0; i < n; ++i) {
    const double x = -40.0 + i * dx;
    const double uu = 3 * lambda * lambda * sech2(x);
    const double ux = -3 * lambda * lambda * lambda * sech2(x) * std::tanh(lambda * x / 2.0);
    h3 += (uu * uu * uu / 3.0 - ux * ux) * dx;
  }
  CHECK(c.h3 == doctest::Approx(h3).epsilon(1e-9));
}

TEST_CASE("imaginary parts enter the conserved densities with the opposite sign") {
  const Grid g = Grid::centered(20.0, 64);
  const auto alg = make_algebra(2);
  Field u(g, alg);
  for (std::size_t j = 0; j < g.points; ++j) {
    u.component(0)[j] = 1.0;
    u.component(3)[j] = 0.5;
  }
  const ConservedReport c = conserved(u);
  CHECK(c.h1 == doctest::Approx(20.0));
  CHECK(c.h2 == doctest::Approx(20.0 * (1.0 - 0.25)));
  CHECK(c.h3 == doctest::Approx(20.0 * (1.0 / 3.0 - 0.25)));
}

TEST_CASE("Lax residual of a quaternion soliton vanishes; a coefficient of 6 on v does not") {
  const Grid g = Grid::centered(40.0, 256);
  const auto alg = make_algebra(2);
  const CDNumber v{0, 1, 0, 0};
  EvolutionSpec es;
  es.v = v;
  es.dt = 1e-4;
  es.t_end = 2e-4;
  es.record_every = 1;
  Solver solver(es, g, alg);
  const RunRecord run = solver.simulate(make_initial_field(SolitonSpec{1.0, CDNumber{1.0, 0.2, 0.4, -0.3}}, g, alg));
  Field psi(g, alg);
  for (std::size_t j = 0; j < g.points; ++j) {
    psi.component(0)[j] = std::exp(-g.x(j) * g.x(j) / 8.0);
    psi.component(2)[j] = 0.5 * std::exp(-(g.x(j) - 1) * (g.x(j) - 1) / 8.0);
  }
  const double good = lax_residual(run.snapshots, es.dt, v, psi, solver.spectral(), LaxConvention::kCompatible);
  const double six_v = lax_residual(run.snapshots, es.dt, v, psi, solver.spectral(), LaxConvention::kSixV);
  CAPTURE(good);
  CAPTURE(six_v);
  CHECK(good < 1e-6);
  CHECK(six_v > 1e-2);
}

TEST_CASE("Lax residual rejects algebras beyond the octonions") {
  const Grid g = Grid::centered(20.0, 32);
  const auto alg = make_algebra(4);
  std::vector<Field> w(3, Field(g, alg));
  Spectral sp(g);
  CHECK_THROWS(lax_residual(w, 1e-3, CDNumber(16), Field(g, alg), sp));
}

TEST_CASE("Galilean boost commutes with the flow") {
  const Grid g = Grid::centered(40.0, 128);
  const auto alg = make_algebra(3);
  const CDNumber v = CDNumber::basis(8, 1);
  EvolutionSpec es;
  es.v = v;
  es.dt = 1e-3;
  es.t_end = 0.3;
  es.record_every = 1000;
  Solver solver(es, g, alg);
  const Field u0 = make_initial_field(SolitonSpec{1.0, CDNumber{1.0, 0.5, 0, 0, 0, 0, 0, 0}}, g, alg);
  const double c = 0.4;
  const Field plain = solver.simulate(u0).snapshots.back();
  const Field boosted = solver.simulate(galileo_boost(u0, v, c, 0.0, solver.spectral()).first).snapshots.back();
  const Field mapped = galileo_boost(plain, v, c, es.t_end, solver.spectral()).first;
  CHECK((boosted - mapped).max_abs() < 1e-8);
}

TEST_CASE("Backlund residuals vanish for the one-soliton over the zero seed") {
  const auto samples = sample_points(10, 5, -8.0, 8.0, -1.0, 1.0);
  for (int level : {0, 2, 3}) {
    const Algebra alg(level);
    CDNumber alpha = CDNumber::scalar(alg.dim(), 1.0);
    for (std::size_t k = 1; k < alg.dim(); ++k) alpha[k] = 0.3 / k;
    const auto r = one_soliton_backlund(alg, SolitonSpec{1.3, alpha}, samples, CDNumber());
    CHECK(r.res_x < 1e-10);
    CHECK(r.res_t < 1e-8);
  }
}

}
