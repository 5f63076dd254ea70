#include <doctest.h>

#include <complex>
#include <random>

#include "cdkdv/algebra.hpp"
#include "cdkdv/error.hpp"
#include "support.hpp"

using namespace cdkdv;
using testing::max_abs_diff;
using testing::random_cd;

TEST_SUITE("algebra") {

TEST_CASE("levels outside 0..8 are rejected") {
  CHECK_THROWS_AS(Algebra(-1), LevelError);
  CHECK_THROWS_AS(Algebra(9), LevelError);
  CHECK(Algebra(8).dim() == 256);
}

TEST_CASE("complex level agrees with std::complex") {
  const Algebra alg(1);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const CDNumber x = random_cd(2, rng), y = random_cd(2, rng);
    const std::complex<double> z = std::complex<double>(x[0], x[1]) * std::complex<double>(y[0], y[1]);
    const CDNumber p = alg.multiply(x, y);
    CHECK(std::abs(p[0] - z.real()) < 1e-15);
    CHECK(std::abs(p[1] - z.imag()) < 1e-15);
  }
}

TEST_CASE("quaternion level agrees with the Hamilton product") {
  const Algebra alg(2);
  // i j = k, j k = i, k i = j, i^2 = j^2 = k^2 = -1
  CHECK(alg.sign(1, 2) == 1);
  CHECK(alg.index(1, 2) == 3);
  CHECK(alg.sign(2, 3) == 1);
  CHECK(alg.index(2, 3) == 1);
  CHECK(alg.sign(3, 1) == 1);
  CHECK(alg.index(3, 1) == 2);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(alg.sign(i, i) == -1);
    CHECK(alg.index(i, i) == 0);
  }
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const CDNumber a = random_cd(4, rng), b = random_cd(4, rng);
    const CDNumber h{a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                     a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                     a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                     a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
    CHECK(max_abs_diff(alg.multiply(a, b), h) < 1e-15);
  }
}

TEST_CASE("basis products land on the xor index with a unit sign") {
  for (int n = 0; n <= 6; ++n) {
    const Algebra alg(n);
    for (std::size_t i = 0; i < alg.dim(); ++i)
      for (std::size_t j = 0; j < alg.dim(); ++j) {
        CHECK(alg.index(i, j) == (i ^ j));
        CHECK(std::abs(alg.sign(i, j)) == 1);
      }
  }
}

TEST_CASE("e_0 is the unit and imaginary units square to -1") {
  for (int n = 0; n <= 8; ++n) {
    const Algebra alg(n);
    for (std::size_t i = 0; i < alg.dim(); ++i) {
      CHECK(alg.sign(0, i) == 1);
      CHECK(alg.sign(i, 0) == 1);
      if (i) CHECK(alg.sign(i, i) == -1);
    }
    // Distinct imaginary units anticommute.
    for (std::size_t i = 1; i < alg.dim(); ++i)
      for (std::size_t j = 1; j < alg.dim(); ++j)
        if (i != j) CHECK(alg.sign(i, j) == -alg.sign(j, i));
  }
}

TEST_CASE("conjugate, norm and inverse") {
  std::mt19937_64 rng(3);
  for (int n = 0; n <= 5; ++n) {
    const Algebra alg(n);
    const CDNumber x = random_cd(alg.dim(), rng);
    const CDNumber xx = alg.multiply(x, conjugate(x));
    CHECK(std::abs(xx[0] - norm_sq(x)) < 1e-13);
    for (std::size_t k = 1; k < alg.dim(); ++k) CHECK(std::abs(xx[k]) < 1e-13);
    const CDNumber one = alg.multiply(x, inverse(alg, x));
    CHECK(max_abs_diff(one, CDNumber::scalar(alg.dim(), 1.0)) < 1e-12);
  }
}

TEST_CASE("octonions satisfy the Moufang identity, sedenions do not") {
  std::mt19937_64 rng(4);
  auto moufang = [&](const Algebra& alg) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const CDNumber x = random_cd(alg.dim(), rng), y = random_cd(alg.dim(), rng),
                     z = random_cd(alg.dim(), rng);
      // z(x(zy)) = ((zx)z)y
      const CDNumber l = alg.multiply(z, alg.multiply(x, alg.multiply(z, y)));
      const CDNumber r = alg.multiply(alg.multiply(alg.multiply(z, x), z), y);
      worst = std::max(worst, max_abs_diff(l, r));
    }
    return worst;
  };
  CHECK(moufang(Algebra(3)) < 1e-13);
  CHECK(moufang(Algebra(4)) > 1e-3);
}

TEST_CASE("norm is multiplicative through the octonions only") {
  std::mt19937_64 rng(5);
  for (int n = 0; n <= 3; ++n) {
    const Algebra alg(n);
    for (int trial = 0; trial < 20; ++trial) {
      const CDNumber x = random_cd(alg.dim(), rng), y = random_cd(alg.dim(), rng);
      CHECK(std::abs(norm_sq(alg.multiply(x, y)) - norm_sq(x) * norm_sq(y)) < 1e-12);
    }
  }
  const auto r = audit_property(Algebra(4), Property::kNormMultiplicative);
  CHECK_FALSE(r.holds);
  REQUIRE(r.counterexample.has_value());
}

TEST_CASE("audits reproduce the doubling tower") {
  struct Row {
    Property p;
    int last_level;  // highest level where the property holds
  };
  const Row rows[] = {{Property::kCommutative, 1},
                      {Property::kAssociative, 2},
                      {Property::kAlternative, 3},
                      {Property::kNormMultiplicative, 3},
                      {Property::kPowerAssociative, 8}};
  for (int n = 0; n <= 4; ++n) {
    const Algebra alg(n);
    for (const auto& row : rows) {
      CAPTURE(n);
      CAPTURE(to_string(row.p));
      const auto r = audit_property(alg, row.p);
      CHECK(r.holds == (n <= row.last_level));
      CHECK(r.counterexample.has_value() == !r.holds);
    }
  }
}

TEST_CASE("power associativity holds on samples at level 5") {
  const Algebra alg(5);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const CDNumber x = random_cd(alg.dim(), rng, 0.5);
    std::vector<CDNumber> pw{CDNumber::scalar(alg.dim(), 1.0)};
    for (int k = 1; k <= 6; ++k) pw.push_back(alg.multiply(pw.back(), x));
    const double scale = std::pow(std::sqrt(norm_sq(x)), 6);
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; a + b <= 6; ++b)
        CHECK(max_abs_diff(alg.multiply(pw[a], pw[b]), pw[a + b]) < 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("structure constants are totally antisymmetric with values 0 or +-2") {
  for (int n = 2; n <= 4; ++n) {
    const Algebra alg(n);
    const StructureConstants c(alg);
    CHECK_FALSE(c.antisymmetry_violation().has_value());
    for (std::size_t i = 1; i < alg.dim(); ++i)
      for (std::size_t j = 1; j < alg.dim(); ++j)
        for (std::size_t k = 1; k < alg.dim(); ++k) {
          const int v = c(i, j, k);
          CHECK((v == 0 || v == 2 || v == -2));
          CHECK(v == -c(j, i, k));
          CHECK(v == -c(i, k, j));
        }
  }
}

TEST_CASE("commutator is imaginary and matches the structure-constant contraction") {
  std::mt19937_64 rng(7);
  const Algebra alg(3);
  const StructureConstants c(alg);
  const CDNumber a = random_cd(8, rng), b = random_cd(8, rng);
  const CDNumber comm = commutator(alg, a, b);
  CHECK(std::abs(comm[0]) < 1e-15);
  CDNumber contracted(8);
  for (std::size_t i = 1; i < 8; ++i)
    for (std::size_t j = 1; j < 8; ++j)
      for (std::size_t k = 1; k < 8; ++k) contracted[k] += a[i] * b[j] * c(i, j, k);
  CHECK(max_abs_diff(comm, contracted) < 1e-14);
}

TEST_CASE("octonion associator is totally antisymmetric") {
  std::mt19937_64 rng(8);
  const Algebra alg(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CDNumber x = random_cd(8, rng), y = random_cd(8, rng), z = random_cd(8, rng);
    const CDNumber a = associator(alg, x, y, z);
    CHECK(max_abs_diff(associator(alg, y, x, z), -a) < 1e-12);
    CHECK(max_abs_diff(associator(alg, x, z, y), -a) < 1e-12);
    CHECK(max_abs_diff(associator(alg, z, y, x), -a) < 1e-12);
    CHECK(max_abs_diff(associator(alg, y, z, x), a) < 1e-12);
    CHECK(max_abs_diff(associator(alg, z, x, y), a) < 1e-12);
  }
}

TEST_CASE("lower levels embed as subalgebras") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 5; ++n) {
    const Algebra lo(n - 1), hi(n);
    for (int trial = 0; trial < 10; ++trial) {
      const CDNumber x = random_cd(lo.dim(), rng), y = random_cd(lo.dim(), rng);
      CDNumber X(hi.dim()), Y(hi.dim());
      for (std::size_t k = 0; k < lo.dim(); ++k) {
        X[k] = x[k];
        Y[k] = y[k];
      }
      const CDNumber p = lo.multiply(x, y), P = hi.multiply(X, Y);
      for (std::size_t k = 0; k < lo.dim(); ++k) CHECK(P[k] == p[k]);
      for (std::size_t k = lo.dim(); k < hi.dim(); ++k) CHECK(P[k] == 0.0);
    }
  }
}

TEST_CASE("zero divisors appear first in the sedenions") {
  CHECK(find_zero_divisors(Algebra(3)).empty());
  const Algebra alg(4);
  const auto pairs = find_zero_divisors(alg);
  CHECK(pairs.size() == 84);
  for (const auto& z : pairs) {
    CDNumber x(16), y(16);
    x[z.i] += 1.0;
    x[z.j] += 1.0;
    y[z.k] += 1.0;
    y[z.l] += 1.0;
    CHECK(norm_sq(x) * norm_sq(y) != 0.0);
    CHECK(max_abs(alg.multiply(x, y)) == 0.0);
  }
  CHECK(find_zero_divisors(alg, 5).size() == 5);
}

TEST_CASE("relabeling is an isomorphism") {
  const Algebra alg(3);
  const std::vector<std::size_t> perm{0, 3, 5, 6, 1, 2, 4, 7};
  const Algebra re = alg.relabeled(perm);
  std::mt19937_64 rng(10);
  auto map = [&](const CDNumber& x) {
    CDNumber y(8);
    for (std::size_t k = 0; k < 8; ++k) y[perm[k]] = x[k];
    return y;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const CDNumber x = random_cd(8, rng), y = random_cd(8, rng);
    CHECK(max_abs_diff(re.multiply(map(x), map(y)), map(alg.multiply(x, y))) < 1e-15);
  }
  const std::vector<std::size_t> bad{1, 0, 2, 3, 4, 5, 6, 7};
  CHECK_THROWS(alg.relabeled(bad));
  const std::vector<std::size_t> dup{0, 1, 1, 3, 4, 5, 6, 7};
  CHECK_THROWS(alg.relabeled(dup));
}

TEST_CASE("mismatched operand sizes are rejected") {
  const Algebra alg(2);
  CHECK_THROWS_AS(alg.multiply(CDNumber(4), CDNumber(8)), DimensionError);
}

}
