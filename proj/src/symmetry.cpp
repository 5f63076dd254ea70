#include "cdkdv/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cdkdv/error.hpp"
#include "cdkdv/solver.hpp"

namespace cdkdv {

namespace {

void require_octonions(const Algebra& alg) {
  if (alg.level() != 3) throw LevelError("derivations are implemented for the octonions (level 3)");
}

void require_octonion(const CDNumber& x, const char* what) {
  if (x.dim() != 8) throw DimensionError(std::string(what) + " must be an octonion");
}

CDNumber random_octonion(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CDNumber x(8);
  for (std::size_t k = 0; k < 8; ++k) x[k] = normal(rng);
  return x;
}

double norm(const CDNumber& x) { return std::sqrt(norm_sq(x)); }

Eigen::Matrix<double, 64, 1> flatten(const Matrix8& m) {
  return Eigen::Map<const Eigen::Matrix<double, 64, 1>>(m.data());
}

// Max-norm of the cdkdv residual combination at one point given u, u_t.
CDNumber residual_at(const Algebra& alg, const LocalDerivatives& u, const CDNumber& v) {
  return cdkdv_residual(alg, u, v);
}

}  // namespace

Vector8 to_vector(const CDNumber& x) {
  require_octonion(x, "argument");
  Vector8 out;
  for (int k = 0; k < 8; ++k) out[k] = x[k];
  return out;
}

CDNumber to_cd(const Vector8& x) {
  CDNumber out(8);
  for (int k = 0; k < 8; ++k) out[k] = x[k];
  return out;
}

Derivation derivation(const Algebra& alg, const CDNumber& a, const CDNumber& b) {
  require_octonions(alg);
  require_octonion(a, "a");
  require_octonion(b, "b");
  Derivation d{a, b, Matrix8::Zero()};
  const CDNumber ab = commutator(alg, a, b);
  for (std::size_t k = 0; k < 8; ++k) {
    const CDNumber x = CDNumber::basis(8, k);
    const CDNumber col = commutator(alg, ab, x) - 3.0 * associator(alg, a, b, x);
    d.matrix.col(static_cast<int>(k)) = to_vector(col);
  }
  return d;
}

Matrix8 derivation_half_sum(const Algebra& alg, const CDNumber& a, const CDNumber& b) {
  require_octonions(alg);
  require_octonion(a, "a");
  require_octonion(b, "b");
  Matrix8 m;
  const CDNumber ab = commutator(alg, a, b);
  for (std::size_t k = 0; k < 8; ++k) {
    const CDNumber x = CDNumber::basis(8, k);
    const CDNumber col = 0.5 * (commutator(alg, commutator(alg, a, x), b) +
                                commutator(alg, a, commutator(alg, b, x)) +
                                commutator(alg, ab, x));
    m.col(static_cast<int>(k)) = to_vector(col);
  }
  return m;
}

std::vector<BasisPair> fano_pairs(const Algebra& alg, std::size_t p) {
  require_octonions(alg);
  require(p >= 1 && p < 8, "Fano line index must be an imaginary unit 1..7");
  std::vector<BasisPair> out;
  for (std::size_t i = 1; i < 8; ++i)
    for (std::size_t j = 1; j < 8; ++j)
      if (i != j && alg.index(i, j) == p && alg.sign(i, j) > 0) out.push_back({i, j});
  // Each unordered pair appears once (e_j e_i = -e_p), so out is already
  // lexicographic and has three entries.
  return out;
}

double fano_identity_residual(const Algebra& alg) {
  double worst = 0.0;
  for (std::size_t p = 1; p < 8; ++p) {
    Matrix8 sum = Matrix8::Zero();
    for (const auto& pr : fano_pairs(alg, p))
      sum += derivation(alg, CDNumber::basis(8, pr.i), CDNumber::basis(8, pr.j)).matrix;
    worst = std::max(worst, sum.cwiseAbs().maxCoeff());
  }
  return worst;
}

G2Basis g2_basis(const Algebra& alg) {
  G2Basis basis;
  for (std::size_t p = 1; p < 8; ++p) {
    const auto pairs = fano_pairs(alg, p);
    for (std::size_t q = 0; q < 2; ++q)
      basis.elements.push_back(
          derivation(alg, CDNumber::basis(8, pairs[q].i), CDNumber::basis(8, pairs[q].j)));
  }
  Eigen::Matrix<double, 64, 14> stacked;
  for (int c = 0; c < 14; ++c) stacked.col(c) = flatten(basis.elements[c].matrix);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
  lu.setThreshold(1e-10);
  basis.rank = static_cast<int>(lu.rank());
  return basis;
}

double closure_residual(const G2Basis& basis) {
  const int n = static_cast<int>(basis.elements.size());
  Eigen::MatrixXd stacked(64, n);
  for (int c = 0; c < n; ++c) stacked.col(c) = flatten(basis.elements[c].matrix);
  const auto qr = stacked.colPivHouseholderQr();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Matrix8& a = basis.elements[i].matrix;
      const Matrix8& b = basis.elements[j].matrix;
      const Eigen::VectorXd target = flatten(a * b - b * a);
      const Eigen::VectorXd coeffs = qr.solve(target);
      worst = std::max(worst, (stacked * coeffs - target).cwiseAbs().maxCoeff());
    }
  return worst;
}

double leibniz_residual(const Algebra& alg, const G2Basis& basis, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const CDNumber x = random_octonion(rng);
    const CDNumber y = random_octonion(rng);
    const CDNumber xy = alg.multiply(x, y);
    for (const auto& d : basis.elements) {
      const CDNumber r =
          d.apply(xy) - alg.multiply(d.apply(x), y) - alg.multiply(x, d.apply(y));
      worst = std::max(worst, norm(r));
    }
  }
  return worst;
}

JacobiResiduals jacobi_residuals(const Algebra& alg, int trials, unsigned seed) {
  require_octonions(alg);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> unit(1, 7);
  JacobiResiduals out;
  for (int t = 0; t < trials; ++t) {
    const CDNumber a = CDNumber::basis(8, unit(rng));
    const CDNumber b = CDNumber::basis(8, unit(rng));
    const CDNumber c = CDNumber::basis(8, unit(rng));
    const CDNumber d = CDNumber::basis(8, unit(rng));
    const Derivation dab = derivation(alg, a, b);
    const Derivation dcd = derivation(alg, c, d);
    const Matrix8 inner = derivation(alg, dab.apply(c), d).matrix +
                          derivation(alg, c, dab.apply(d)).matrix;
    const Matrix8 comp = dab.matrix * dcd.matrix - (inner + dcd.matrix * dab.matrix);
    const Matrix8 bracket_ab = dab.matrix * dcd.matrix - dcd.matrix * dab.matrix;
    const Matrix8 comm = bracket_ab - (inner - bracket_ab);
    out.composition = std::max(out.composition, comp.cwiseAbs().maxCoeff());
    out.commutator = std::max(out.commutator, comm.cwiseAbs().maxCoeff());
  }
  return out;
}

Matrix8 exponentiate(const Matrix8& d, double s) {
  Matrix8 a = s * d;
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  a /= std::ldexp(1.0, squarings);
  Matrix8 result = Matrix8::Identity();
  Matrix8 term = Matrix8::Identity();
  for (int k = 1; k < 64; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-13) break;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double multiplicativity_residual(const Algebra& alg, const Matrix8& phi, int trials,
                                 unsigned seed) {
  require_octonions(alg);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const CDNumber x = random_octonion(rng);
    const CDNumber y = random_octonion(rng);
    const CDNumber lhs = to_cd(phi * to_vector(alg.multiply(x, y)));
    const CDNumber rhs = alg.multiply(to_cd(phi * to_vector(x)), to_cd(phi * to_vector(y)));
    worst = std::max(worst, norm(lhs - rhs));
  }
  return worst;
}

double norm_preservation_residual(const Matrix8& phi, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector8 x = to_vector(random_octonion(rng));
    worst = std::max(worst, std::abs((phi * x).norm() - x.norm()));
  }
  return worst;
}

Stabilizer stabilizer(const Algebra& alg, const CDNumber& v) {
  require_octonions(alg);
  require_octonion(v, "v");
  require(norm_sq(v) > 0.0, "stabilizer needs v != 0");
  const G2Basis basis = g2_basis(alg);
  const Vector8 vv = to_vector(v);
  Eigen::Matrix<double, 8, 14> system;
  for (int c = 0; c < 14; ++c) system.col(c) = basis.elements[c].matrix * vv;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd kernel = lu.kernel();
  Stabilizer out;
  out.dimension = 14 - static_cast<int>(lu.rank());
  if (out.dimension == 0) return out;
  for (int c = 0; c < kernel.cols(); ++c) {
    Eigen::VectorXd coeffs = kernel.col(c);
    Matrix8 m = Matrix8::Zero();
    for (int i = 0; i < 14; ++i) m += coeffs[i] * basis.elements[i].matrix;
    out.coefficients.push_back(std::move(coeffs));
    out.matrices.push_back(m);
  }
  return out;
}

Field apply(const Matrix8& d, const Field& u) {
  if (u.dim() != 8) throw DimensionError("derivations act on octonion fields");
  Field out(u.grid(), u.algebra_ptr());
  for (std::size_t j = 0; j < u.size(); ++j) out.set(j, to_cd(d * to_vector(u.at(j))));
  return out;
}

LocalDerivatives apply(const Matrix8& d, const LocalDerivatives& u) {
  auto map = [&](const CDNumber& x) { return x.dim() ? to_cd(d * to_vector(x)) : CDNumber{}; };
  return {map(u.f), map(u.fx), map(u.fxx), map(u.fxxx), map(u.fxxxx), map(u.ft), map(u.fxt)};
}

InvarianceResidual invariance_residual(const Algebra& alg,
                                       const std::vector<LocalDerivatives>& samples,
                                       const CDNumber& v, const Matrix8& d, double mu) {
  require_octonions(alg);
  const CDNumber vv = v.dim() ? v : CDNumber(8);
  require_octonion(vv, "v");
  InvarianceResidual out;
  for (const auto& u : samples) {
    const LocalDerivatives du = apply(d, u);
    LocalDerivatives p = u;
    p.f += mu * du.f;
    p.fx += mu * du.fx;
    p.fxx += mu * du.fxx;
    p.fxxx += mu * du.fxxx;
    p.fxxxx += mu * du.fxxxx;
    p.ft += mu * du.ft;
    p.fxt += mu * du.fxt;
    const CDNumber r0 = residual_at(alg, u, vv);
    const CDNumber r1 = residual_at(alg, p, vv);
    out.base = std::max(out.base, norm(r0));
    out.perturbed = std::max(out.perturbed, norm(r1));
    out.excess = std::max(out.excess, norm(r1 - r0));
  }
  return out;
}

InvarianceResidual invariance_residual(std::span<const Field> window, double dt,
                                       const CDNumber& v, const Matrix8& d, double mu,
                                       Spectral& spectral) {
  if (window.size() != 3)
    throw Error(ErrorCode::kInvalidArgument, "invariance check needs 3 snapshots");
  require(dt > 0.0, "invariance check needs a positive time spacing");
  const Field& u = window[1];
  require_octonions(u.algebra());
  const CDNumber vv = v.dim() ? v : CDNumber(8);
  require_octonion(vv, "v");

  auto residual = [&](const Field& prev, const Field& cur, const Field& next) {
    Field r = next - prev;
    r *= 1.0 / (2.0 * dt);
    r += spectral.derivative(cur, 3);
    r.axpy(0.5, spectral.derivative(multiply(cur, cur), 1));
    r += commutator(vv, cur);
    return r;
  };
  auto perturb = [&](const Field& f) {
    Field out = f;
    out.axpy(mu, apply(d, f));
    return out;
  };
  const Field r0 = residual(window[0], window[1], window[2]);
  const Field r1 = residual(perturb(window[0]), perturb(window[1]), perturb(window[2]));
  return {max_sample_norm(r0), max_sample_norm(r1), max_sample_norm(r1 - r0)};
}

SlopeReport make_slope_report(const InvarianceResidual& large, double mu_large,
                              const InvarianceResidual& small, double mu_small) {
  SlopeReport r{mu_large, mu_small, large.excess, small.excess, 0.0};
  if (large.excess > 0.0 && small.excess > 0.0)
    r.slope = std::log(large.excess / small.excess) / std::log(mu_large / mu_small);
  return r;
}

}  // namespace cdkdv
