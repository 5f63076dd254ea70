#include "cdkdv/solver.hpp"

#include <cmath>
#include <string>

namespace cdkdv {

std::optional<Equation> parse_equation(const std::string& tag) {
  if (tag == "cdkdv") return Equation::kCdKdv;
  if (tag == "gardner") return Equation::kGardner;
  if (tag == "mkdv") return Equation::kMkdv;
  return std::nullopt;
}

std::string to_string(Equation e) {
  switch (e) {
    case Equation::kCdKdv: return "cdkdv";
    case Equation::kGardner: return "gardner";
    case Equation::kMkdv: return "mkdv";
  }
  return "unknown";
}

void validate(const EvolutionSpec& spec, const Grid& grid, const Algebra& alg) {
  grid.validate();
  if (spec.v.dim() != 0 && spec.v.dim() != alg.dim())
    throw DimensionError("v has " + std::to_string(spec.v.dim()) +
                         " coefficients, algebra dimension is " + std::to_string(alg.dim()));
  if (!(spec.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(spec.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (spec.record_every < 1) throw ConfigError("record_every must be at least 1");
  if (spec.equation == Equation::kGardner && spec.epsilon == 0.0)
    throw ConfigError("gardner equation needs a nonzero epsilon");
  const double k = grid.k_max();
  const double stiffness = spec.dt * k * k * k;
  if (stiffness > kStabilityConstant)
    throw ConfigError("dt * k_max^3 = " + std::to_string(stiffness) + " exceeds " +
                      std::to_string(kStabilityConstant) + "; reduce dt below " +
                      std::to_string(kStabilityConstant / (k * k * k)));
}

BlowUpError::BlowUpError(double last_valid_time, RunRecord partial)
    : Error(ErrorCode::kBlowUp,
            "solution blew up after t = " + std::to_string(last_valid_time)),
      last_valid_time_(last_valid_time), partial_(std::move(partial)) {}

Solver::Solver(EvolutionSpec spec, const Grid& grid, AlgebraPtr alg)
    : spec_(std::move(spec)), grid_(grid), alg_(std::move(alg)), spectral_(grid) {
  validate(spec_, grid_, *alg_);
  if (spec_.v.dim() == 0) spec_.v = CDNumber(alg_->dim());
}

void Solver::check_field(const Field& f) const {
  if (f.dim() != alg_->dim()) throw DimensionError("field algebra does not match solver algebra");
  if (f.size() != grid_.points || f.grid().length != grid_.length)
    throw DimensionError("field grid does not match solver grid");
}

Field Solver::rhs(const Field& f) {
  check_field(f);
  Field out = spectral_.derivative(f, 3);
  out *= -1.0;

  // Quadratic term 1/2 (f f_x + f_x f) = 1/2 (f^2)_x, differentiated in
  // conservative form.
  if (spec_.equation != Equation::kMkdv) {
    Field sq = multiply(f, f);
    if (spec_.dealias) spectral_.dealias(sq);
    out.axpy(-0.5, spectral_.derivative(sq, 1));
  }

  if (spec_.equation != Equation::kCdKdv) {
    const Field fx = spectral_.derivative(f, 1);
    const Field sq = multiply(f, f);
    Field cubic = multiply(sq, fx) + multiply(fx, sq);
    if (spec_.dealias) spectral_.dealias(cubic);
    const double coeff =
        spec_.equation == Equation::kGardner ? spec_.epsilon * spec_.epsilon / 12.0 : 1.0 / 12.0;
    out.axpy(coeff, cubic);
  }

  out -= commutator(spec_.v, f);
  return out;
}

namespace {

constexpr double kOverflow = 1e100;

bool healthy(const Field& f) { return f.all_finite() && f.max_abs() < kOverflow; }

}  // namespace

Field Solver::step_rk4(const Field& f, double dt) {
  if (dt == 0.0) return f;
  Field k1 = rhs(f);
  Field y = f;
  y.axpy(0.5 * dt, k1);
  Field k2 = rhs(y);
  y = f;
  y.axpy(0.5 * dt, k2);
  Field k3 = rhs(y);
  y = f;
  y.axpy(dt, k3);
  Field k4 = rhs(y);

  Field out = f;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  if (!healthy(out)) throw BlowUpError(0.0, RunRecord{});
  return out;
}

double max_sample_norm(const Field& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::sqrt(norm_sq(f.at(j))));
  return m;
}

double Solver::step_residual(const Field& f) {
  const double dt = spec_.dt;
  Field diff = step_rk4(f, dt) - step_rk4(f, -dt);
  diff *= 1.0 / (2.0 * dt);
  diff -= rhs(f);
  return max_sample_norm(diff);
}

void Solver::record(RunRecord& rec, double t, const Field& f) {
  rec.times.push_back(t);
  rec.snapshots.push_back(f);
  rec.conserved.push_back(conserved(f, spectral_));
  rec.residual_norms.push_back(step_residual(f));
  rec.last_valid_time = t;
}

RunRecord Solver::simulate(const Field& initial) {
  check_field(initial);
  if (!healthy(initial)) throw Error(ErrorCode::kInvalidArgument, "initial field is not finite");
  RunRecord rec;
  const double dt = spec_.dt;
  const auto steps = static_cast<long>(std::ceil(spec_.t_end / dt - 1e-9));

  Field f = initial;
  double t = 0.0;
  try {
    record(rec, t, f);
    for (long s = 1; s <= steps; ++s) {
      const double h = (s == steps) ? spec_.t_end - t : dt;
      f = step_rk4(f, h);
      t = (s == steps) ? spec_.t_end : static_cast<double>(s) * dt;
      rec.last_valid_time = t;
      if (s % spec_.record_every == 0 || s == steps) record(rec, t, f);
    }
  } catch (const BlowUpError&) {
    rec.blew_up = true;
    const double last = rec.last_valid_time;
    throw BlowUpError(last, std::move(rec));
  }
  return rec;
}

double residual_norm(Solver& solver, std::span<const Field> snapshots, double dt) {
  if (snapshots.size() < 3)
    throw Error(ErrorCode::kInvalidArgument, "residual_norm needs at least 3 snapshots");
  require(dt > 0.0, "residual_norm needs a positive time spacing");
  std::optional<double> last;
  for (std::size_t i = 1; i + 1 < snapshots.size(); ++i) {
    const Field& prev = snapshots[i - 1];
    const Field& cur = snapshots[i];
    const Field& next = snapshots[i + 1];
    if (!healthy(prev) || !healthy(cur) || !healthy(next)) break;
    Field r = next - prev;
    r *= 1.0 / (2.0 * dt);
    r -= solver.rhs(cur);
    const double n = max_sample_norm(r);
    last = last ? std::max(*last, n) : n;
  }
  if (!last) throw Error(ErrorCode::kInvalidArgument, "no finite snapshot window");
  return *last;
}

}  // namespace cdkdv
