#pragma once

#include <cmath>
#include <random>

#include "cdkdv/algebra.hpp"
#include "cdkdv/field.hpp"

namespace testing {

inline cdkdv::CDNumber random_cd(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  cdkdv::CDNumber x(dim);
  for (std::size_t k = 0; k < dim; ++k) x[k] = u(rng);
  return x;
}

inline double max_abs_diff(const cdkdv::CDNumber& a, const cdkdv::CDNumber& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Smooth periodic field: low Fourier modes with random coefficients.
inline cdkdv::Field smooth_field(const cdkdv::Grid& g, cdkdv::AlgebraPtr alg, unsigned seed,
                                 double amplitude = 0.5, int modes = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  cdkdv::Field f(g, alg);
  for (std::size_t k = 0; k < alg->dim(); ++k)
    for (int m = 1; m <= modes; ++m) {
      const double a = u(rng) / m, b = u(rng) / m;
      const double w = 2.0 * M_PI * m / g.length;
      for (std::size_t j = 0; j < g.points; ++j)
        f.component(k)[j] += a * std::cos(w * g.x(j)) + b * std::sin(w * g.x(j));
    }
  return f;
}

}  // namespace testing
