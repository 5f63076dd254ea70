#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cdkdv/algebra.hpp"

namespace cdkdv {

/// Truncated bivariate Taylor expansion in (x, t) around a fixed point, with
/// Cayley-Dickson coefficients: c(i,j) = d^i_x d^j_t f / (i! j!).
///
/// Products follow the Leibniz rule, which holds for any bilinear product,
/// so jet arithmetic differentiates algebra-valued expressions exactly
/// (up to round-off) without any associativity assumption. The inverse is
/// the pointwise conj(F)/|F|^2 expanded as a real series.
class Jet {
 public:
  Jet(const Algebra& alg, int x_order, int t_order);

  static Jet constant(const Algebra& alg, const CDNumber& value, int x_order, int t_order);
  /// Real exponential exp(x_rate * dx + t_rate * dt) scaled by `value`.
  static Jet exponential(const Algebra& alg, double value, double x_rate, double t_rate,
                         int x_order, int t_order);

  const Algebra& algebra() const noexcept { return *alg_; }
  int x_order() const noexcept { return nx_; }
  int t_order() const noexcept { return nt_; }

  std::span<double> coeff(int i, int j) {
    return {c_.data() + offset(i, j), alg_->dim()};
  }
  std::span<const double> coeff(int i, int j) const {
    return {c_.data() + offset(i, j), alg_->dim()};
  }
  /// d^i_x d^j_t of the expanded function at the expansion point.
  CDNumber derivative(int i, int j) const;
  CDNumber value() const { return derivative(0, 0); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  /// Derivative series; the highest retained order becomes zero.
  Jet d_dx() const;
  Jet d_dt() const;

 private:
  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(i) * (nt_ + 1) + j) * alg_->dim();
  }
  void check_compatible(const Jet& o) const;

  const Algebra* alg_;
  int nx_, nt_;
  std::vector<double> c_;

  friend Jet multiply(const Jet& a, const Jet& b);
  friend Jet inverse(const Jet& a);
  friend Jet conjugate(const Jet& a);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(double s, Jet a);
Jet multiply(const Jet& a, const Jet& b);
Jet conjugate(const Jet& a);
/// Throws PoleError when |F| vanishes at the expansion point.
Jet inverse(const Jet& a);

}  // namespace cdkdv
