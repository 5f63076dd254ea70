#include "cdkdv/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "cdkdv/error.hpp"

namespace cdkdv {

void Grid::validate() const {
  require(length > 0.0 && std::isfinite(length), "grid length must be positive");
  require(points >= kMinPoints, "grid needs at least 16 points");
  require((points & (points - 1)) == 0, "grid point count must be a power of two");
}

double Grid::k_max() const { return std::numbers::pi * static_cast<double>(points) / length; }

Grid Grid::centered(double length, std::size_t points) {
  Grid g{length, points, -0.5 * length};
  g.validate();
  return g;
}

Field::Field(Grid grid, AlgebraPtr alg) : grid_(grid), alg_(std::move(alg)) {
  grid_.validate();
  require(alg_ != nullptr, "field needs an algebra");
  data_.assign(grid_.points * alg_->dim(), 0.0);
}

CDNumber Field::at(std::size_t j) const {
  CDNumber out(dim());
  for (std::size_t k = 0; k < dim(); ++k) out[k] = data_[k * grid_.points + j];
  return out;
}

void Field::set(std::size_t j, const CDNumber& value) {
  if (value.dim() != dim()) throw DimensionError("field sample has wrong dimension");
  for (std::size_t k = 0; k < dim(); ++k) data_[k * grid_.points + j] = value[k];
}

void Field::check_compatible(const Field& o) const {
  if (o.dim() != dim()) throw DimensionError("fields belong to algebras of different dimension");
  if (o.grid_.points != grid_.points || o.grid_.length != grid_.length)
    throw DimensionError("fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  return *this;
}

bool Field::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

namespace {

// Gathers sample j into x; the component-major layout keeps FFTs contiguous.
void gather(const Field& f, std::size_t j, std::vector<double>& x) {
  const std::size_t n = f.size();
  auto d = f.data();
  for (std::size_t k = 0; k < f.dim(); ++k) x[k] = d[k * n + j];
}

void scatter(Field& f, std::size_t j, const std::vector<double>& x) {
  const std::size_t n = f.size();
  auto d = f.data();
  for (std::size_t k = 0; k < f.dim(); ++k) d[k * n + j] = x[k];
}

}  // namespace

Field multiply(const Field& a, const Field& b) {
  a.check_compatible(b);
  Field out(a.grid(), a.algebra_ptr());
  const std::size_t d = a.dim();
  std::vector<double> x(d), y(d), z(d);
  for (std::size_t j = 0; j < a.size(); ++j) {
    gather(a, j, x);
    gather(b, j, y);
    a.algebra().multiply(x, y, z);
    scatter(out, j, z);
  }
  return out;
}

Field multiply(const CDNumber& c, const Field& b) {
  if (c.dim() != b.dim()) throw DimensionError("constant has wrong dimension");
  Field out(b.grid(), b.algebra_ptr());
  std::vector<double> y(b.dim()), z(b.dim());
  for (std::size_t j = 0; j < b.size(); ++j) {
    gather(b, j, y);
    b.algebra().multiply(c.coeffs(), y, z);
    scatter(out, j, z);
  }
  return out;
}

Field multiply(const Field& a, const CDNumber& c) {
  if (c.dim() != a.dim()) throw DimensionError("constant has wrong dimension");
  Field out(a.grid(), a.algebra_ptr());
  std::vector<double> x(a.dim()), z(a.dim());
  for (std::size_t j = 0; j < a.size(); ++j) {
    gather(a, j, x);
    a.algebra().multiply(x, c.coeffs(), z);
    scatter(out, j, z);
  }
  return out;
}

Field commutator(const CDNumber& v, const Field& u) { return multiply(v, u) - multiply(u, v); }

Field add_constant(Field u, const CDNumber& c) {
  if (c.dim() != u.dim()) throw DimensionError("constant has wrong dimension");
  for (std::size_t k = 0; k < u.dim(); ++k)
    for (double& s : u.component(k)) s += c[k];
  return u;
}

Field constant_field(const Grid& grid, AlgebraPtr alg, const CDNumber& value) {
  Field f(grid, std::move(alg));
  return add_constant(std::move(f), value);
}

Field embed(const Field& f, AlgebraPtr target) {
  require(target->dim() >= f.dim(), "embedding target is smaller than the source algebra");
  Field out(f.grid(), std::move(target));
  for (std::size_t k = 0; k < f.dim(); ++k) {
    auto src = f.component(k);
    std::copy(src.begin(), src.end(), out.component(k).begin());
  }
  return out;
}

namespace {
// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Spectral::Impl {
  std::size_t n = 0;
  std::size_t modes = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> wavenumber;

  explicit Impl(const Grid& g) : n(g.points), modes(g.points / 2 + 1) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(modes);
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
    }
    wavenumber.resize(modes);
    for (std::size_t m = 0; m < modes; ++m)
      wavenumber[m] = 2.0 * std::numbers::pi * static_cast<double>(m) / g.length;
  }

  ~Impl() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(backward);
      fftw_destroy_plan(forward);
    }
    fftw_free(spec);
    fftw_free(real);
  }

  std::complex<double> mode(std::size_t m) const { return {spec[m][0], spec[m][1]}; }
  void set_mode(std::size_t m, std::complex<double> c) {
    spec[m][0] = c.real();
    spec[m][1] = c.imag();
  }
};

Spectral::Spectral(const Grid& grid) : grid_(grid) {
  grid_.validate();
  impl_ = std::make_unique<Impl>(grid_);
}

Spectral::~Spectral() = default;

void Spectral::derivative(std::span<const double> in, std::span<double> out, int order) {
  require(order >= 1 && order <= 4, "derivative order must be in 1..4");
  auto& p = *impl_;
  if (in.size() != p.n || out.size() != p.n) throw DimensionError("derivative: wrong length");
  std::copy(in.begin(), in.end(), p.real);
  fftw_execute(p.forward);
  const double inv_n = 1.0 / static_cast<double>(p.n);
  const std::complex<double> i_unit(0.0, 1.0);
  for (std::size_t m = 0; m < p.modes; ++m) {
    std::complex<double> factor = std::pow(i_unit * p.wavenumber[m], order);
    // The Nyquist mode has no odd-derivative counterpart on the grid.
    if (m == p.n / 2 && order % 2 == 1) factor = 0.0;
    p.set_mode(m, p.mode(m) * factor * inv_n);
  }
  fftw_execute(p.backward);
  std::copy(p.real, p.real + p.n, out.begin());
}

Field Spectral::derivative(const Field& f, int order) {
  if (f.size() != grid_.points) throw DimensionError("field does not match spectral grid");
  Field out(f.grid(), f.algebra_ptr());
  for (std::size_t k = 0; k < f.dim(); ++k) derivative(f.component(k), out.component(k), order);
  return out;
}

void Spectral::dealias(Field& f) {
  auto& p = *impl_;
  const std::size_t cutoff = p.n / 3;
  const double inv_n = 1.0 / static_cast<double>(p.n);
  for (std::size_t k = 0; k < f.dim(); ++k) {
    auto c = f.component(k);
    std::copy(c.begin(), c.end(), p.real);
    fftw_execute(p.forward);
    for (std::size_t m = 0; m < p.modes; ++m)
      p.set_mode(m, m > cutoff ? std::complex<double>(0.0) : p.mode(m) * inv_n);
    fftw_execute(p.backward);
    std::copy(p.real, p.real + p.n, c.begin());
  }
}

Field Spectral::translate(const Field& f, double shift) {
  auto& p = *impl_;
  Field out(f.grid(), f.algebra_ptr());
  const double inv_n = 1.0 / static_cast<double>(p.n);
  for (std::size_t k = 0; k < f.dim(); ++k) {
    auto c = f.component(k);
    std::copy(c.begin(), c.end(), p.real);
    fftw_execute(p.forward);
    for (std::size_t m = 0; m < p.modes; ++m) {
      const double phase = -p.wavenumber[m] * shift;
      std::complex<double> factor = std::polar(1.0, phase);
      if (m == p.n / 2) factor = std::cos(phase);
      p.set_mode(m, p.mode(m) * factor * inv_n);
    }
    fftw_execute(p.backward);
    auto dst = out.component(k);
    std::copy(p.real, p.real + p.n, dst.begin());
  }
  return out;
}

}  // namespace cdkdv
