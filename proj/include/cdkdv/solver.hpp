#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdkdv/error.hpp"
#include "cdkdv/field.hpp"
#include "cdkdv/transforms.hpp"

namespace cdkdv {

enum class Equation { kCdKdv, kGardner, kMkdv };

std::optional<Equation> parse_equation(const std::string& tag);
std::string to_string(Equation e);

/// RK4 is stable on the imaginary axis up to |z| = 2 sqrt(2); the linear
/// dispersive term has eigenvalues i k^3.
inline constexpr double kStabilityConstant = 2.8;

struct EvolutionSpec {
  Equation equation = Equation::kCdKdv;
  /// Constant external field; empty means zero.
  CDNumber v;
  /// Gardner parameter (ignored by the other equations).
  double epsilon = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 10;
  bool dealias = false;
};

/// Throws ConfigError when the time step violates
/// dt * (pi N / L)^3 <= kStabilityConstant or other fields are invalid.
void validate(const EvolutionSpec& spec, const Grid& grid, const Algebra& alg);

struct RunRecord {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<ConservedReport> conserved;
  std::vector<double> residual_norms;
  bool blew_up = false;
  double last_valid_time = 0.0;

  std::size_t size() const { return times.size(); }
};

class BlowUpError : public Error {
 public:
  BlowUpError(double last_valid_time, RunRecord partial);
  double last_valid_time() const noexcept { return last_valid_time_; }
  const RunRecord& partial() const noexcept { return partial_; }
  RunRecord& partial() noexcept { return partial_; }

 private:
  double last_valid_time_;
  RunRecord partial_;
};

/// Method-of-lines integrator: Fourier pseudospectral in space, classical
/// RK4 in time.
class Solver {
 public:
  Solver(EvolutionSpec spec, const Grid& grid, AlgebraPtr alg);

  const EvolutionSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return grid_; }
  const AlgebraPtr& algebra() const noexcept { return alg_; }
  Spectral& spectral() noexcept { return spectral_; }

  /// Time derivative of the semi-discrete system, f_t = rhs(f).
  Field rhs(const Field& f);
  /// One RK4 step; throws BlowUpError (with an empty partial record) when the
  /// result is not finite.
  Field step_rk4(const Field& f, double dt);
  /// Steps to t_end, recording every `record_every` steps and at t_end.
  RunRecord simulate(const Field& initial);

  /// Centered-difference consistency check at f:
  /// max_j |(S_dt f - S_-dt f)/(2 dt) - rhs(f)|.
  double step_residual(const Field& f);

 private:
  void check_field(const Field& f) const;
  void record(RunRecord& rec, double t, const Field& f);

  EvolutionSpec spec_;
  Grid grid_;
  AlgebraPtr alg_;
  Spectral spectral_;
};

/// Max over interior windows of |(f_{i+1} - f_{i-1})/(2 dt) - rhs(f_i)| for
/// snapshots spaced dt apart. Windows with non-finite samples are skipped,
/// so a blown-up trajectory reports its last valid window.
double residual_norm(Solver& solver, std::span<const Field> snapshots, double dt);

/// Euclidean norm of each sample, maximised over the grid.
double max_sample_norm(const Field& f);

}  // namespace cdkdv
