#include "cdkdv/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "cdkdv/error.hpp"

namespace cdkdv {

CDNumber CDNumber::basis(std::size_t dim, std::size_t k) {
  require(k < dim, "basis index out of range");
  CDNumber e(dim);
  e[k] = 1.0;
  return e;
}

CDNumber CDNumber::scalar(std::size_t dim, double a) {
  CDNumber e(dim);
  e[0] = a;
  return e;
}

CDNumber& CDNumber::operator+=(const CDNumber& o) {
  if (o.dim() != dim()) throw DimensionError("CDNumber dimensions differ");
  for (std::size_t k = 0; k < dim(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

CDNumber& CDNumber::operator-=(const CDNumber& o) {
  if (o.dim() != dim()) throw DimensionError("CDNumber dimensions differ");
  for (std::size_t k = 0; k < dim(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

CDNumber& CDNumber::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

CDNumber operator+(CDNumber a, const CDNumber& b) { return a += b; }
CDNumber operator-(CDNumber a, const CDNumber& b) { return a -= b; }
CDNumber operator-(CDNumber a) { return a *= -1.0; }
CDNumber operator*(double s, CDNumber a) { return a *= s; }
CDNumber operator*(CDNumber a, double s) { return a *= s; }

double real_part(const CDNumber& x) { return x.dim() ? x[0] : 0.0; }

CDNumber imag_part(CDNumber x) {
  if (x.dim()) x[0] = 0.0;
  return x;
}

CDNumber conjugate(CDNumber x) {
  for (std::size_t k = 1; k < x.dim(); ++k) x[k] = -x[k];
  return x;
}

double norm_sq(const CDNumber& x) {
  double s = 0.0;
  for (double c : x.coeffs()) s += c * c;
  return s;
}

double imag_norm_sq(const CDNumber& x) { return norm_sq(x) - real_part(x) * real_part(x); }

double max_abs(const CDNumber& x) {
  double m = 0.0;
  for (double c : x.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

Algebra::Algebra(int level) {
  if (level < 0) throw LevelError("algebra level must be non-negative");
  if (level > kMaxLevel)
    throw LevelError("algebra level " + std::to_string(level) + " exceeds supported maximum " +
                     std::to_string(kMaxLevel));

  // Level 0: the reals.
  std::vector<std::int8_t> sign{1};
  std::vector<std::uint16_t> index{0};
  std::size_t half = 1;

  for (int n = 1; n <= level; ++n) {
    const std::size_t d = 2 * half;
    std::vector<std::int8_t> s(d * d);
    std::vector<std::uint16_t> ix(d * d);
    auto conj_sign = [](std::size_t k) { return k == 0 ? 1 : -1; };
    auto old_s = [&](std::size_t i, std::size_t j) { return sign[i * half + j]; };
    auto old_i = [&](std::size_t i, std::size_t j) { return index[i * half + j]; };
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        int sg;
        std::size_t id;
        if (i < half && j < half) {
          // (p,0)(r,0) = (pr, 0)
          sg = old_s(i, j);
          id = old_i(i, j);
        } else if (i < half) {
          // (p,0)(0,s) = (0, sp)
          const std::size_t jj = j - half;
          sg = old_s(jj, i);
          id = half + old_i(jj, i);
        } else if (j < half) {
          // (0,q)(r,0) = (0, q r*)
          const std::size_t ii = i - half;
          sg = old_s(ii, j) * conj_sign(j);
          id = half + old_i(ii, j);
        } else {
          // (0,q)(0,s) = (-s* q, 0)
          const std::size_t ii = i - half, jj = j - half;
          sg = -conj_sign(jj) * old_s(jj, ii);
          id = old_i(jj, ii);
        }
        s[i * d + j] = static_cast<std::int8_t>(sg);
        ix[i * d + j] = static_cast<std::uint16_t>(id);
      }
    }
    sign = std::move(s);
    index = std::move(ix);
    half = d;
  }

  level_ = level;
  dim_ = half;
  sign_ = std::move(sign);
  index_ = std::move(index);
}

void Algebra::multiply(std::span<const double> x, std::span<const double> y,
                       std::span<double> out) const {
  if (x.size() != dim_ || y.size() != dim_ || out.size() != dim_)
    throw DimensionError("multiply: operand length does not match algebra dimension " +
                         std::to_string(dim_));
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const std::int8_t* srow = &sign_[i * dim_];
    const std::uint16_t* irow = &index_[i * dim_];
    for (std::size_t j = 0; j < dim_; ++j) out[irow[j]] += srow[j] * (xi * y[j]);
  }
}

CDNumber Algebra::multiply(const CDNumber& x, const CDNumber& y) const {
  CDNumber out(dim_);
  multiply(x.coeffs(), y.coeffs(), out.coeffs());
  return out;
}

Algebra Algebra::relabeled(std::span<const std::size_t> perm) const {
  if (perm.size() != dim_) throw DimensionError("relabeling permutation has wrong length");
  require(perm[0] == 0, "relabeling must fix e_0");
  std::vector<bool> seen(dim_, false);
  for (std::size_t p : perm) {
    require(p < dim_ && !seen[p], "relabeling is not a permutation");
    seen[p] = true;
  }
  Algebra out;
  out.level_ = level_;
  out.dim_ = dim_;
  out.sign_.resize(dim_ * dim_);
  out.index_.resize(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const std::size_t a = perm[i], b = perm[j];
      out.sign_[a * dim_ + b] = sign_[i * dim_ + j];
      out.index_[a * dim_ + b] = static_cast<std::uint16_t>(perm[index_[i * dim_ + j]]);
    }
  return out;
}

CDNumber inverse(const Algebra& alg, const CDNumber& x) {
  if (x.dim() != alg.dim()) throw DimensionError("inverse: dimension mismatch");
  const double n2 = norm_sq(x);
  if (n2 == 0.0) throw Error(ErrorCode::kInvalidArgument, "inverse of the zero element");
  return (1.0 / n2) * conjugate(x);
}

CDNumber commutator(const Algebra& alg, const CDNumber& x, const CDNumber& y) {
  return alg.multiply(x, y) - alg.multiply(y, x);
}

CDNumber associator(const Algebra& alg, const CDNumber& x, const CDNumber& y,
                    const CDNumber& z) {
  return alg.multiply(alg.multiply(x, y), z) - alg.multiply(x, alg.multiply(y, z));
}

StructureConstants::StructureConstants(const Algebra& alg)
    : dim_(alg.dim()), c_(alg.dim() * alg.dim() * alg.dim(), 0) {
  for (std::size_t i = 1; i < dim_; ++i)
    for (std::size_t j = 1; j < dim_; ++j) {
      if (i == j) continue;
      const std::size_t k = alg.index(i, j);
      // e_j e_i = -e_i e_j for distinct imaginary units, so [e_i,e_j] = 2 e_i e_j.
      c_[(i * dim_ + j) * dim_ + k] = static_cast<std::int8_t>(2 * alg.sign(i, j));
    }
}

std::optional<std::vector<std::size_t>> StructureConstants::antisymmetry_violation() const {
  const auto& c = *this;
  for (std::size_t i = 1; i < dim_; ++i)
    for (std::size_t j = 1; j < dim_; ++j)
      for (std::size_t k = 1; k < dim_; ++k) {
        const int v = c(i, j, k);
        if (v != -c(j, i, k) || v != -c(i, k, j) || v != -c(k, j, i) || v != c(j, k, i) ||
            v != c(k, i, j))
          return std::vector<std::size_t>{i, j, k};
      }
  return std::nullopt;
}

std::optional<Property> parse_property(const std::string& name) {
  if (name == "commutative") return Property::kCommutative;
  if (name == "associative") return Property::kAssociative;
  if (name == "alternative") return Property::kAlternative;
  if (name == "norm_multiplicative") return Property::kNormMultiplicative;
  if (name == "power_associative") return Property::kPowerAssociative;
  return std::nullopt;
}

std::string to_string(Property p) {
  switch (p) {
    case Property::kCommutative: return "commutative";
    case Property::kAssociative: return "associative";
    case Property::kAlternative: return "alternative";
    case Property::kNormMultiplicative: return "norm_multiplicative";
    case Property::kPowerAssociative: return "power_associative";
  }
  return "unknown";
}

namespace {

// Sparse integer element: at most a handful of signed basis terms.
struct Term {
  std::size_t index;
  int coeff;
};

class SparseInt {
 public:
  void add(std::size_t index, int coeff) {
    for (auto& t : terms_)
      if (t.index == index) {
        t.coeff += coeff;
        return;
      }
    terms_.push_back({index, coeff});
  }
  bool is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff == 0; });
  }
  long norm_sq() const {
    long s = 0;
    for (const auto& t : terms_) s += static_cast<long>(t.coeff) * t.coeff;
    return s;
  }

 private:
  std::vector<Term> terms_;
};

// Adds sign * e_a e_b e_c (left- or right-associated) to acc.
void add_triple(const Algebra& alg, std::size_t a, std::size_t b, std::size_t c, bool left_first,
                int sign, SparseInt& acc) {
  if (left_first) {
    const std::size_t ab = alg.index(a, b);
    acc.add(alg.index(ab, c), sign * alg.sign(a, b) * alg.sign(ab, c));
  } else {
    const std::size_t bc = alg.index(b, c);
    acc.add(alg.index(a, bc), sign * alg.sign(b, c) * alg.sign(a, bc));
  }
}

// acc += sign * [e_a, e_b, e_c]
void add_associator(const Algebra& alg, std::size_t a, std::size_t b, std::size_t c, int sign,
                    SparseInt& acc) {
  add_triple(alg, a, b, c, true, sign, acc);
  add_triple(alg, a, b, c, false, -sign, acc);
}

AuditReport audit_commutative(const Algebra& alg) {
  AuditReport r{Property::kCommutative, true, std::nullopt, 0.0};
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = i + 1; j < alg.dim(); ++j)
      if (alg.index(i, j) != alg.index(j, i) || alg.sign(i, j) != alg.sign(j, i)) {
        r.holds = false;
        r.counterexample = std::vector<std::size_t>{i, j};
        r.deviation = 2.0;
        return r;
      }
  return r;
}

AuditReport audit_associative(const Algebra& alg) {
  AuditReport r{Property::kAssociative, true, std::nullopt, 0.0};
  const std::size_t d = alg.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        SparseInt acc;
        add_associator(alg, i, j, k, 1, acc);
        if (!acc.is_zero()) {
          r.holds = false;
          r.counterexample = std::vector<std::size_t>{i, j, k};
          r.deviation = std::sqrt(static_cast<double>(acc.norm_sq()));
          return r;
        }
      }
  return r;
}

// Alternativity [x,x,z] = 0 and [x,z,z] = 0 for all x, z is equivalent to
// its polarized (multilinear) form on basis triples:
// [e_i,e_j,e_k] + [e_j,e_i,e_k] = 0 and [e_i,e_j,e_k] + [e_i,e_k,e_j] = 0.
AuditReport audit_alternative(const Algebra& alg) {
  AuditReport r{Property::kAlternative, true, std::nullopt, 0.0};
  const std::size_t d = alg.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        SparseInt left, right;
        add_associator(alg, i, j, k, 1, left);
        add_associator(alg, j, i, k, 1, left);
        add_associator(alg, i, j, k, 1, right);
        add_associator(alg, i, k, j, 1, right);
        const SparseInt* bad = !left.is_zero() ? &left : (!right.is_zero() ? &right : nullptr);
        if (bad) {
          r.holds = false;
          r.counterexample = std::vector<std::size_t>{i, j, k};
          r.deviation = std::sqrt(static_cast<double>(bad->norm_sq()));
          return r;
        }
      }
  return r;
}

SparseInt product_of_pairs(const Algebra& alg, std::size_t i, std::size_t j, std::size_t k,
                           std::size_t l) {
  SparseInt acc;
  for (std::size_t a : {i, j})
    for (std::size_t b : {k, l}) acc.add(alg.index(a, b), alg.sign(a, b));
  return acc;
}

AuditReport audit_norm_multiplicative(const Algebra& alg) {
  AuditReport r{Property::kNormMultiplicative, true, std::nullopt, 0.0};
  const std::size_t d = alg.dim();
  // Single basis elements always multiply to a unit; test x = e_i + e_j,
  // y = e_k + e_l where |x|^2 |y|^2 = 4.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k + 1; l < d; ++l) {
          const long n = product_of_pairs(alg, i, j, k, l).norm_sq();
          if (n != 4) {
            r.holds = false;
            r.counterexample = std::vector<std::size_t>{i, j, k, l};
            r.deviation = std::abs(static_cast<double>(n) - 4.0);
            return r;
          }
        }
  return r;
}

AuditReport audit_power_associative(const Algebra& alg) {
  AuditReport r{Property::kPowerAssociative, true, std::nullopt, 0.0};
  constexpr int kTrials = 200;
  constexpr int kMaxPower = 6;
  constexpr double kTol = 1e-10;
  std::mt19937_64 rng(0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = alg.dim();
  for (int trial = 0; trial < kTrials; ++trial) {
    CDNumber x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = normal(rng);
    std::vector<CDNumber> pw(kMaxPower + 1);
    pw[1] = x;
    for (int p = 2; p <= kMaxPower; ++p) pw[p] = alg.multiply(pw[p - 1], x);
    const double nx = std::sqrt(norm_sq(x));
    for (int a = 1; a < kMaxPower; ++a)
      for (int b = 1; a + b <= kMaxPower; ++b) {
        const CDNumber diff = alg.multiply(pw[a], pw[b]) - pw[a + b];
        const double rel = std::sqrt(norm_sq(diff)) / std::pow(nx, a + b);
        r.deviation = std::max(r.deviation, rel);
        if (rel >= kTol && r.holds) {
          r.holds = false;
          r.counterexample = std::vector<std::size_t>{static_cast<std::size_t>(trial),
                                                      static_cast<std::size_t>(a),
                                                      static_cast<std::size_t>(b)};
        }
      }
  }
  return r;
}

}  // namespace

AuditReport audit_property(const Algebra& alg, Property property) {
  switch (property) {
    case Property::kCommutative: return audit_commutative(alg);
    case Property::kAssociative: return audit_associative(alg);
    case Property::kAlternative: return audit_alternative(alg);
    case Property::kNormMultiplicative: return audit_norm_multiplicative(alg);
    case Property::kPowerAssociative: return audit_power_associative(alg);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown property");
}

std::vector<ZeroDivisorPair> find_zero_divisors(const Algebra& alg, std::size_t limit) {
  std::vector<ZeroDivisorPair> found;
  const std::size_t d = alg.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k + 1; l < d; ++l) {
          if (!product_of_pairs(alg, i, j, k, l).is_zero()) continue;
          found.push_back({i, j, k, l});
          if (limit && found.size() >= limit) return found;
        }
  return found;
}

}  // namespace cdkdv
