#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cdkdv {

/// Element of a 2^n-dimensional Cayley-Dickson algebra. Coefficient k
/// multiplies the basis element e_k; e_0 is the unit.
class CDNumber {
 public:
  CDNumber() = default;
  explicit CDNumber(std::size_t dim) : coeffs_(dim, 0.0) {}
  CDNumber(std::initializer_list<double> coeffs) : coeffs_(coeffs) {}
  explicit CDNumber(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  static CDNumber basis(std::size_t dim, std::size_t k);
  static CDNumber scalar(std::size_t dim, double a);

  std::size_t dim() const noexcept { return coeffs_.size(); }
  double& operator[](std::size_t k) { return coeffs_[k]; }
  double operator[](std::size_t k) const { return coeffs_[k]; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  CDNumber& operator+=(const CDNumber& o);
  CDNumber& operator-=(const CDNumber& o);
  CDNumber& operator*=(double a);

  friend bool operator==(const CDNumber&, const CDNumber&) = default;

 private:
  std::vector<double> coeffs_;
};

CDNumber operator+(CDNumber a, const CDNumber& b);
CDNumber operator-(CDNumber a, const CDNumber& b);
CDNumber operator-(CDNumber a);
CDNumber operator*(double s, CDNumber a);
CDNumber operator*(CDNumber a, double s);

double real_part(const CDNumber& x);
CDNumber imag_part(CDNumber x);
CDNumber conjugate(CDNumber x);
double norm_sq(const CDNumber& x);
double imag_norm_sq(const CDNumber& x);
/// Max-norm over coefficients.
double max_abs(const CDNumber& x);

/// Multiplication tables of the Cayley-Dickson algebra at a given level,
/// built by repeated doubling (p,q)(r,s) = (pr - s*q, sp + qr*).
///
/// Basis products are e_i e_j = sign(i,j) e_{index(i,j)}. Instances are
/// immutable after construction.
class Algebra {
 public:
  static constexpr int kMaxLevel = 8;

  explicit Algebra(int level);

  int level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return dim_; }
  int sign(std::size_t i, std::size_t j) const { return sign_[i * dim_ + j]; }
  std::size_t index(std::size_t i, std::size_t j) const { return index_[i * dim_ + j]; }

  /// out = x y. `out` must not alias the inputs.
  void multiply(std::span<const double> x, std::span<const double> y,
                std::span<double> out) const;
  CDNumber multiply(const CDNumber& x, const CDNumber& y) const;

  /// Copy of this algebra with basis labels permuted: new e_{perm[k]} is
  /// old e_k. perm[0] must be 0.
  Algebra relabeled(std::span<const std::size_t> perm) const;

 private:
  Algebra() = default;

  int level_ = 0;
  std::size_t dim_ = 1;
  std::vector<std::int8_t> sign_;
  std::vector<std::uint16_t> index_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline AlgebraPtr make_algebra(int level) { return std::make_shared<const Algebra>(level); }

CDNumber inverse(const Algebra& alg, const CDNumber& x);
CDNumber commutator(const Algebra& alg, const CDNumber& x, const CDNumber& y);
CDNumber associator(const Algebra& alg, const CDNumber& x, const CDNumber& y,
                    const CDNumber& z);

/// C_ijk with [e_i, e_j] = sum_k C_ijk e_k, indices 1..dim-1 (row-major,
/// index 0 slots are kept and always zero).
class StructureConstants {
 public:
  explicit StructureConstants(const Algebra& alg);

  std::size_t dim() const noexcept { return dim_; }
  int operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  /// Exhaustive integer check of total antisymmetry; returns the first
  /// failing triple, if any.
  std::optional<std::vector<std::size_t>> antisymmetry_violation() const;

 private:
  std::size_t dim_;
  std::vector<std::int8_t> c_;
};

enum class Property { kCommutative, kAssociative, kAlternative, kNormMultiplicative, kPowerAssociative };

std::optional<Property> parse_property(const std::string& name);
std::string to_string(Property p);

struct AuditReport {
  Property property;
  bool holds = true;
  /// Basis indices (or trial/exponents for power associativity) of the
  /// first witness found.
  std::optional<std::vector<std::size_t>> counterexample;
  /// Largest deviation seen (sampled audits) or of the witness.
  double deviation = 0.0;
};

/// Basis-level brute force for the polynomial identities; seeded sampling
/// (seed 0, 200 trials, exponents a+b <= 6) for power associativity.
AuditReport audit_property(const Algebra& alg, Property property);

struct ZeroDivisorPair {
  std::size_t i, j, k, l;  // (e_i + e_j)(e_k + e_l) = 0
};

/// Pairs x = e_i + e_j, y = e_k + e_l (i < j, k < l) with xy = 0.
/// `limit` caps the number returned (0 = no cap).
std::vector<ZeroDivisorPair> find_zero_divisors(const Algebra& alg, std::size_t limit = 0);

}  // namespace cdkdv
