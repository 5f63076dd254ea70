#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

#include "cdkdv/algebra.hpp"
#include "cdkdv/solitons.hpp"

namespace cdkdv {

/// Names accepted by run_verification.
const std::vector<std::string>& verification_kinds();

/// Runs one named family of checks with parameters from `params` (missing
/// fields take documented defaults) and returns a JSON report carrying the
/// measured residuals, their thresholds and a top-level "passed" flag.
/// Unknown kinds raise ConfigError.
nlohmann::json run_verification(const std::string& kind, const nlohmann::json& params);

/// A fixed generic element: 1 in e_0 and alternating 0.5/k elsewhere.
CDNumber generic_element(std::size_t dim);

/// Per-soliton certification summary as reported by `soliton --certify`.
nlohmann::json certify_soliton(const Algebra& alg, const SolitonSpec& spec, const CDNumber& v);
nlohmann::json certify_two_soliton(const Algebra& alg, const TwoSolitonSpec& spec,
                                   const CDNumber& v);

/// Slopes in mu of the residual excess of u + mu D(u) on a stored window
/// (three snapshots spaced dt apart, octonion level) for the fourteen g2
/// basis elements and the stabilizer of v. The expected slope is 2 when
/// D(v) = 0 and 1 otherwise; derivations that annihilate the window are
/// listed but not scored. Returns {cases, worst_kept, worst_broken, ...}.
nlohmann::json invariance_window_report(std::span<const Field> window, double dt,
                                        const CDNumber& v, double mu_large, double mu_small);

namespace thresholds {
inline constexpr double kProfileOde = 1e-8;
inline constexpr double kPde = 1e-8;
inline constexpr double kBacklundX = 1e-10;
inline constexpr double kBacklundT = 1e-8;
inline constexpr double kTwoSoliton = 1e-6;
inline constexpr double kScalarOracle = 1e-8;
inline constexpr double kAsymptotic = 1e-3;
inline constexpr double kDrift = 1e-6;
inline constexpr double kCollisionDrift = 1e-5;
inline constexpr double kClosedForm = 1e-4;
inline constexpr double kGardnerResidual = 1e-5;
inline constexpr double kLax = 1e-6;
inline constexpr double kCoefficients = 1e-10;
inline constexpr double kSlopeMargin = 0.8;
/// Allowed |slope - expected| in the invariance checks.
inline constexpr double kInvarianceSlope = 0.2;
inline constexpr double kFano = 1e-12;
inline constexpr double kLeibniz = 1e-12;
inline constexpr double kFormAgreement = 1e-12;
inline constexpr double kJacobi = 1e-10;
inline constexpr double kClosure = 1e-10;
inline constexpr double kMultiplicative = 1e-8;
inline constexpr double kNormPreserving = 1e-10;
inline constexpr double kGalileo = 1e-6;
}  // namespace thresholds

}  // namespace cdkdv
