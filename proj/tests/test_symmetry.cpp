#include <doctest.h>

#include <random>

#include "cdkdv/error.hpp"
#include "cdkdv/solitons.hpp"
#include "cdkdv/symmetry.hpp"
#include "support.hpp"

using namespace cdkdv;
using testing::max_abs_diff;
using testing::random_cd;

TEST_SUITE("symmetry") {

TEST_CASE("derivations satisfy the Leibniz rule and both defining forms agree") {
  const Algebra alg(3);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const CDNumber a = random_cd(8, rng), b = random_cd(8, rng);
    const Derivation d = derivation(alg, a, b);
    CHECK((d.matrix - derivation_half_sum(alg, a, b)).cwiseAbs().maxCoeff() < 1e-12);
    const CDNumber x = random_cd(8, rng), y = random_cd(8, rng);
    const CDNumber lhs = d.apply(alg.multiply(x, y));
    const CDNumber rhs = alg.multiply(d.apply(x), y) + alg.multiply(x, d.apply(y));
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    // Derivations kill the unit and preserve the imaginary subspace.
    CHECK(max_abs(d.apply(CDNumber::scalar(8, 1.0))) < 1e-14);
    CHECK(std::abs(d.apply(x)[0]) < 1e-13);
  }
}

TEST_CASE("derivations need the octonion level") {
  CHECK_THROWS_AS(derivation(Algebra(2), CDNumber(4), CDNumber(4)), LevelError);
}

TEST_CASE("each Fano line carries three oriented pairs whose derivations sum to zero") {
  const Algebra alg(3);
  for (std::size_t p = 1; p < 8; ++p) {
    const auto pairs = fano_pairs(alg, p);
    REQUIRE(pairs.size() == 3);
    for (const auto& q : pairs) {
      CHECK(alg.sign(q.i, q.j) == 1);
      CHECK(alg.index(q.i, q.j) == p);
    }
  }
  CHECK(fano_identity_residual(alg) < 1e-12);
}

TEST_CASE("the fourteen basis derivations span a closed Lie algebra") {
  const Algebra alg(3);
  const G2Basis basis = g2_basis(alg);
  CHECK(basis.elements.size() == 14);
  CHECK(basis.rank == 14);
  CHECK(closure_residual(basis) < 1e-10);
  CHECK(leibniz_residual(alg, basis) < 1e-12);
}

TEST_CASE("exponentiated derivations are norm-preserving automorphisms") {
  const Algebra alg(3);
  const G2Basis basis = g2_basis(alg);
  Matrix8 d = Matrix8::Zero();
  for (std::size_t i = 0; i < basis.elements.size(); ++i) d += (0.1 * (i + 1)) * basis.elements[i].matrix;
  const Matrix8 phi = exponentiate(d, 0.37);
  CHECK(multiplicativity_residual(alg, phi) < 1e-8);
  CHECK(norm_preservation_residual(phi) < 1e-10);
  CHECK((phi.transpose() * phi - Matrix8::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  // exp(sD) exp(-sD) = 1
  CHECK((phi * exponentiate(d, -0.37) - Matrix8::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("stabilizer of an imaginary unit is eight-dimensional") {
  const Algebra alg(3);
  for (std::size_t k = 1; k < 8; ++k) {
    const CDNumber v = CDNumber::basis(8, k);
    const Stabilizer s = stabilizer(alg, v);
    CHECK(s.dimension == 8);
    for (const Matrix8& m : s.matrices) CHECK((m * to_vector(v)).cwiseAbs().maxCoeff() < 1e-10);
  }
  std::mt19937_64 rng(32);
  CDNumber v = random_cd(8, rng);
  v[0] = 0.0;
  CHECK(stabilizer(alg, v).dimension == 8);
  CHECK(stabilizer(alg, CDNumber::basis(8, 0)).dimension == 14);
}

TEST_CASE("perturbing a solution along a symmetry is second order in mu") {
  const Algebra alg(3);
  const G2Basis basis = g2_basis(alg);
  const auto pts = sample_points(8, 4, -6.0, 6.0, -0.5, 0.5);
  CDNumber alpha(8);
  alpha[0] = 1.0;
  for (std::size_t k = 1; k < 8; ++k) alpha[k] = 0.2 / k;
  std::vector<LocalDerivatives> u;
  for (const auto& p : pts) u.push_back(one_soliton_local(alg, {1.0, alpha}, p.x, p.t));
  for (std::size_t i = 0; i < basis.elements.size(); i += 3) {
    const auto r = make_slope_report(invariance_residual(alg, u, CDNumber(8), basis.elements[i].matrix, 1e-2), 1e-2,
                                     invariance_residual(alg, u, CDNumber(8), basis.elements[i].matrix, 1e-3), 1e-3);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(0.05));
  }
}

}
