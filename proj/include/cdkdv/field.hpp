#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cdkdv/algebra.hpp"

namespace cdkdv {

/// Uniform periodic grid on [x_min, x_min + length) with `points` samples.
struct Grid {
  double length = 0.0;
  std::size_t points = 0;
  double x_min = 0.0;

  static constexpr std::size_t kMinPoints = 16;

  /// Throws on non-positive length or a point count that is not a power of
  /// two of at least kMinPoints.
  void validate() const;
  double spacing() const { return length / static_cast<double>(points); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * spacing(); }
  /// Largest resolved wavenumber pi N / L.
  double k_max() const;

  /// Grid centered on the origin, x in [-L/2, L/2).
  static Grid centered(double length, std::size_t points);
};

/// Algebra-valued samples u(x_j) on a periodic grid, stored component-major
/// so each real component function is a contiguous slice.
class Field {
 public:
  Field(Grid grid, AlgebraPtr alg);

  const Grid& grid() const noexcept { return grid_; }
  const Algebra& algebra() const noexcept { return *alg_; }
  const AlgebraPtr& algebra_ptr() const noexcept { return alg_; }
  std::size_t dim() const noexcept { return alg_->dim(); }
  std::size_t size() const noexcept { return grid_.points; }

  std::span<double> component(std::size_t k) {
    return {data_.data() + k * grid_.points, grid_.points};
  }
  std::span<const double> component(std::size_t k) const {
    return {data_.data() + k * grid_.points, grid_.points};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  CDNumber at(std::size_t j) const;
  void set(std::size_t j, const CDNumber& value);

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  /// Adds s * o.
  Field& axpy(double s, const Field& o);

  bool all_finite() const;
  /// max_j max_k |u_k(x_j)|
  double max_abs() const;

  void check_compatible(const Field& o) const;

 private:
  Grid grid_;
  AlgebraPtr alg_;
  std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Pointwise algebra product (a b)(x_j) = a(x_j) b(x_j).
Field multiply(const Field& a, const Field& b);
/// Pointwise left multiplication by a constant element.
Field multiply(const CDNumber& c, const Field& b);
Field multiply(const Field& a, const CDNumber& c);
Field commutator(const CDNumber& v, const Field& u);
/// Adds the constant c to every sample.
Field add_constant(Field u, const CDNumber& c);
Field constant_field(const Grid& grid, AlgebraPtr alg, const CDNumber& value);
/// Field with samples embedded from a lower level into the first
/// components of `target`.
Field embed(const Field& f, AlgebraPtr target);

/// Componentwise Fourier pseudospectral operators on one periodic grid.
///
/// Each instance owns FFTW plans and scratch buffers; use one instance per
/// thread.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  /// d^order/dx^order applied to each component. order in 1..4.
  Field derivative(const Field& f, int order);
  void derivative(std::span<const double> in, std::span<double> out, int order);
  /// Removes modes above 2N/3 (2/3-rule dealiasing).
  void dealias(Field& f);
  /// g(x) = f(x - shift), exact for band-limited data.
  Field translate(const Field& f, double shift);

 private:
  struct Impl;
  Grid grid_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cdkdv
