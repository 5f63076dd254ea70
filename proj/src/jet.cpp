#include "cdkdv/jet.hpp"

#include <cmath>

#include "cdkdv/error.hpp"

namespace cdkdv {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Jet::Jet(const Algebra& alg, int x_order, int t_order)
    : alg_(&alg), nx_(x_order), nt_(t_order),
      c_(static_cast<std::size_t>(x_order + 1) * (t_order + 1) * alg.dim(), 0.0) {
  require(x_order >= 0 && t_order >= 0, "jet orders must be non-negative");
}

Jet Jet::constant(const Algebra& alg, const CDNumber& value, int x_order, int t_order) {
  if (value.dim() != alg.dim()) throw DimensionError("jet constant: dimension mismatch");
  Jet j(alg, x_order, t_order);
  auto c = j.coeff(0, 0);
  for (std::size_t k = 0; k < alg.dim(); ++k) c[k] = value[k];
  return j;
}

Jet Jet::exponential(const Algebra& alg, double value, double x_rate, double t_rate, int x_order,
                     int t_order) {
  Jet j(alg, x_order, t_order);
  for (int i = 0; i <= x_order; ++i)
    for (int k = 0; k <= t_order; ++k)
      j.coeff(i, k)[0] =
          value * std::pow(x_rate, i) / factorial(i) * std::pow(t_rate, k) / factorial(k);
  return j;
}

CDNumber Jet::derivative(int i, int j) const {
  require(i <= nx_ && j <= nt_, "jet derivative beyond retained order");
  CDNumber out(alg_->dim());
  const double scale = factorial(i) * factorial(j);
  auto c = coeff(i, j);
  for (std::size_t k = 0; k < out.dim(); ++k) out[k] = scale * c[k];
  return out;
}

void Jet::check_compatible(const Jet& o) const {
  if (o.alg_->dim() != alg_->dim() || o.nx_ != nx_ || o.nt_ != nt_)
    throw DimensionError("jets have different shapes");
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet Jet::d_dx() const {
  Jet out(*alg_, nx_, nt_);
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j <= nt_; ++j) {
      auto src = coeff(i + 1, j);
      auto dst = out.coeff(i, j);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = (i + 1) * src[k];
    }
  return out;
}

Jet Jet::d_dt() const {
  Jet out(*alg_, nx_, nt_);
  for (int i = 0; i <= nx_; ++i)
    for (int j = 0; j < nt_; ++j) {
      auto src = coeff(i, j + 1);
      auto dst = out.coeff(i, j);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = (j + 1) * src[k];
    }
  return out;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet multiply(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  const Algebra& alg = *a.alg_;
  Jet out(alg, a.nx_, a.nt_);
  std::vector<double> tmp(alg.dim());
  for (int i = 0; i <= a.nx_; ++i)
    for (int j = 0; j <= a.nt_; ++j) {
      auto dst = out.coeff(i, j);
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          alg.multiply(a.coeff(p, q), b.coeff(i - p, j - q), tmp);
          for (std::size_t k = 0; k < tmp.size(); ++k) dst[k] += tmp[k];
        }
    }
  return out;
}

Jet conjugate(const Jet& a) {
  Jet out = a;
  const std::size_t d = a.alg_->dim();
  for (std::size_t base = 0; base < out.c_.size(); base += d)
    for (std::size_t k = 1; k < d; ++k) out.c_[base + k] = -out.c_[base + k];
  return out;
}

Jet inverse(const Jet& a) {
  const int nx = a.nx_, nt = a.nt_;
  const std::size_t d = a.alg_->dim();
  // |F|^2 as a real series.
  std::vector<double> n2((nx + 1) * (nt + 1), 0.0);
  auto at = [nt](std::vector<double>& v, int i, int j) -> double& { return v[i * (nt + 1) + j]; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= nt; ++j)
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          auto x = a.coeff(p, q);
          auto y = a.coeff(i - p, j - q);
          double s = 0.0;
          for (std::size_t k = 0; k < d; ++k) s += x[k] * y[k];
          at(n2, i, j) += s;
        }
  const double n0 = at(n2, 0, 0);
  if (!(n0 > 0.0)) throw PoleError("inverse of a vanishing value");
  // 1/|F|^2 by recursive series division.
  std::vector<double> rec((nx + 1) * (nt + 1), 0.0);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= nt; ++j) {
      double acc = (i == 0 && j == 0) ? 1.0 : 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          acc -= at(n2, p, q) * at(rec, i - p, j - q);
        }
      at(rec, i, j) = acc / n0;
    }
  const Jet conj = conjugate(a);
  Jet out(*a.alg_, nx, nt);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= nt; ++j) {
      auto dst = out.coeff(i, j);
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          const double r = at(rec, p, q);
          auto src = conj.coeff(i - p, j - q);
          for (std::size_t k = 0; k < d; ++k) dst[k] += r * src[k];
        }
    }
  return out;
}

}  // namespace cdkdv
