#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

#include "cdkdv/field.hpp"
#include "cdkdv/solitons.hpp"
#include "cdkdv/solver.hpp"

namespace cdkdv {

struct InitialCondition {
  enum class Kind { kZero, kSoliton, kTwoSoliton, kFile, kProfile, kRandom };
  Kind kind = Kind::kZero;
  /// Evaluation time for the closed forms.
  double t0 = 0.0;
  SolitonSpec soliton;
  TwoSolitonSpec two_soliton;
  /// kFile: field CSV (x, c_0..) or run CSV (t, x, c_0..); `time` selects a
  /// snapshot of a run file (default: the last one).
  std::string path;
  std::optional<double> time;
  /// kProfile: coeffs * sech^2((x - center) / width).
  CDNumber coeffs;
  double width = 1.0;
  double center = 0.0;
  /// kRandom: sum over modes m = 1..modes of amplitude * N(0,1) / m
  /// times cos/sin(2 pi m x / L), drawn from the config seed.
  double amplitude = 0.1;
  int modes = 4;
};

struct OutputPaths {
  std::string run = "run.csv";
  std::string conserved = "conserved.csv";
};

struct RunConfig {
  int level = 3;
  Grid grid;
  EvolutionSpec evolution;
  InitialCondition initial;
  OutputPaths output;
  std::uint64_t seed = 0;
};

/// Parses and validates a JSON run configuration. Errors name the offending
/// field path ("initial.alpha: ..."); coefficient vectors of the wrong length
/// raise DimensionError, everything else ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const nlohmann::json& j);
inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }
nlohmann::json to_json(const RunConfig& cfg);

/// Initial field for the configured grid and algebra.
Field make_initial(const RunConfig& cfg, AlgebraPtr alg);

/// Helpers shared with the verification reports.
CDNumber parse_cd_json(const nlohmann::json& j, std::size_t dim, const std::string& path);
nlohmann::json cd_to_json(const CDNumber& x);

}  // namespace cdkdv
