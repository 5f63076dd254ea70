#include "cdkdv/config.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "cdkdv/error.hpp"
#include "cdkdv/io.hpp"

namespace cdkdv {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path.empty() ? "config" : path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(join(path, key), "unknown field");
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const std::string& key, const std::string& path,
              std::optional<double> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_number()) fail(join(path, key), "expected a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) fail(join(path, key), "expected a finite number");
  return x;
}

long integer(const json& obj, const std::string& key, const std::string& path,
             std::optional<long> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_number_integer()) fail(join(path, key), "expected an integer");
  return v->get<long>();
}

bool boolean(const json& obj, const std::string& key, const std::string& path, bool def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string string(const json& obj, const std::string& key, const std::string& path,
                   std::optional<std::string> def = std::nullopt) {
  const json* v = find(obj, key);
  if (!v) {
    if (def) return *def;
    fail(join(path, key), "required field is missing");
  }
  if (!v->is_string()) fail(join(path, key), "expected a string");
  return v->get<std::string>();
}

std::string choices(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

InitialCondition parse_initial(const json& j, std::size_t dim, const CDNumber& v) {
  const std::string path = "initial";
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = string(j, "kind", path);
  InitialCondition ic;
  if (kind == "zero") {
    check_keys(j, path, {"kind"});
    ic.kind = InitialCondition::Kind::kZero;
  } else if (kind == "soliton") {
    check_keys(j, path, {"kind", "lambda", "alpha", "t0"});
    ic.kind = InitialCondition::Kind::kSoliton;
    ic.soliton.lambda = number(j, "lambda", path);
    ic.soliton.alpha = find(j, "alpha") ? parse_cd_json(j["alpha"], dim, "initial.alpha")
                                        : CDNumber::scalar(dim, 1.0);
    ic.t0 = number(j, "t0", path, 0.0);
  } else if (kind == "two_soliton") {
    check_keys(j, path, {"kind", "lambda_a", "lambda_b", "alpha", "beta", "alpha0", "beta0",
                         "gamma1", "gamma2", "orientation", "t0"});
    ic.kind = InitialCondition::Kind::kTwoSoliton;
    const double la = number(j, "lambda_a", path);
    const double lb = number(j, "lambda_b", path);
    if (find(j, "alpha0")) {
      ic.two_soliton = TwoSolitonSpec::aligned(
          number(j, "alpha0", path), number(j, "beta0", path), number(j, "gamma1", path, 0.0),
          number(j, "gamma2", path, 0.0), la, lb, v);
    } else {
      ic.two_soliton.a = {la, parse_cd_json(j.at("alpha"), dim, "initial.alpha")};
      if (!find(j, "beta")) fail("initial.beta", "required field is missing");
      ic.two_soliton.b = {lb, parse_cd_json(j["beta"], dim, "initial.beta")};
    }
    const std::string o = string(j, "orientation", path, "backlund");
    if (o == "backlund")
      ic.two_soliton.orientation = Orientation::kBacklundConsistent;
    else if (o == "flipped")
      ic.two_soliton.orientation = Orientation::kFlipped;
    else
      fail("initial.orientation", "expected one of backlund, flipped");
    ic.t0 = number(j, "t0", path, 0.0);
  } else if (kind == "file") {
    check_keys(j, path, {"kind", "path", "time"});
    ic.kind = InitialCondition::Kind::kFile;
    ic.path = string(j, "path", path);
    if (find(j, "time")) ic.time = number(j, "time", path);
  } else if (kind == "profile") {
    check_keys(j, path, {"kind", "coeffs", "width", "center"});
    ic.kind = InitialCondition::Kind::kProfile;
    if (!find(j, "coeffs")) fail("initial.coeffs", "required field is missing");
    ic.coeffs = parse_cd_json(j["coeffs"], dim, "initial.coeffs");
    ic.width = number(j, "width", path, 1.0);
    if (!(ic.width > 0.0)) fail("initial.width", "must be positive");
    ic.center = number(j, "center", path, 0.0);
  } else if (kind == "random") {
    check_keys(j, path, {"kind", "amplitude", "modes"});
    ic.kind = InitialCondition::Kind::kRandom;
    ic.amplitude = number(j, "amplitude", path, 0.1);
    ic.modes = static_cast<int>(integer(j, "modes", path, 4));
    if (ic.modes < 1) fail("initial.modes", "must be at least 1");
  } else {
    fail("initial.kind",
         "expected one of " + choices({"zero", "soliton", "two_soliton", "file", "profile", "random"}) +
             ", got '" + kind + "'");
  }
  return ic;
}

}  // namespace

CDNumber parse_cd_json(const json& j, std::size_t dim, const std::string& path) {
  CDNumber x;
  if (j.is_string()) {
    try {
      x = parse_cd(j.get<std::string>());
    } catch (const Error& e) {
      fail(path, e.what());
    }
  } else if (j.is_array()) {
    x = CDNumber(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_number()) fail(path + "[" + std::to_string(k) + "]", "expected a number");
      x[k] = j[k].get<double>();
    }
  } else {
    fail(path, "expected an array of coefficients");
  }
  if (x.dim() != dim)
    throw DimensionError(path + ": has " + std::to_string(x.dim()) +
                         " coefficients, algebra dimension is " + std::to_string(dim));
  return x;
}

json cd_to_json(const CDNumber& x) {
  json a = json::array();
  for (std::size_t k = 0; k < x.dim(); ++k) a.push_back(x[k]);
  return a;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig parse_config(const json& j) {
  check_keys(j, "", {"level", "N", "L", "x_min", "dt", "t_end", "equation", "epsilon", "v",
                     "initial", "record_every", "dealias", "seed", "output"});
  RunConfig cfg;
  cfg.level = static_cast<int>(integer(j, "level", ""));
  if (cfg.level < 0 || cfg.level > Algebra::kMaxLevel)
    fail("level", "must be in 0.." + std::to_string(Algebra::kMaxLevel));
  const std::size_t dim = std::size_t{1} << cfg.level;

  const long n = integer(j, "N", "");
  if (n <= 0) fail("N", "must be positive");
  cfg.grid.points = static_cast<std::size_t>(n);
  cfg.grid.length = number(j, "L", "");
  cfg.grid.x_min = number(j, "x_min", "", -0.5 * cfg.grid.length);
  try {
    cfg.grid.validate();
  } catch (const Error& e) {
    fail("N/L", e.what());
  }

  auto& ev = cfg.evolution;
  const std::string eq = string(j, "equation", "");
  const auto parsed = parse_equation(eq);
  if (!parsed) fail("equation", "expected one of cdkdv, gardner, mkdv, got '" + eq + "'");
  ev.equation = *parsed;
  ev.dt = number(j, "dt", "");
  ev.t_end = number(j, "t_end", "");
  ev.epsilon = number(j, "epsilon", "", 0.0);
  ev.record_every = static_cast<int>(integer(j, "record_every", "", 10));
  ev.dealias = boolean(j, "dealias", "", false);
  ev.v = find(j, "v") ? parse_cd_json(j["v"], dim, "v") : CDNumber(dim);

  const long seed = integer(j, "seed", "", 0);
  if (seed < 0) fail("seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (const json* out = find(j, "output")) {
    check_keys(*out, "output", {"run", "conserved"});
    cfg.output.run = string(*out, "run", "output", cfg.output.run);
    cfg.output.conserved = string(*out, "conserved", "output", cfg.output.conserved);
  }

  if (const json* init = find(j, "initial"))
    cfg.initial = parse_initial(*init, dim, ev.v);
  else
    fail("initial", "required field is missing");

  try {
    const Algebra alg(cfg.level);
    validate(ev, cfg.grid, alg);
    if (cfg.initial.kind == InitialCondition::Kind::kSoliton) validate(cfg.initial.soliton, alg);
    if (cfg.initial.kind == InitialCondition::Kind::kTwoSoliton)
      validate(cfg.initial.two_soliton, alg);
  } catch (const DimensionError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["level"] = cfg.level;
  j["N"] = cfg.grid.points;
  j["L"] = cfg.grid.length;
  j["x_min"] = cfg.grid.x_min;
  j["dt"] = cfg.evolution.dt;
  j["t_end"] = cfg.evolution.t_end;
  j["equation"] = to_string(cfg.evolution.equation);
  j["epsilon"] = cfg.evolution.epsilon;
  j["v"] = cd_to_json(cfg.evolution.v);
  j["record_every"] = cfg.evolution.record_every;
  j["dealias"] = cfg.evolution.dealias;
  j["seed"] = cfg.seed;
  j["output"] = {{"run", cfg.output.run}, {"conserved", cfg.output.conserved}};
  const auto& ic = cfg.initial;
  json init;
  switch (ic.kind) {
    case InitialCondition::Kind::kZero: init["kind"] = "zero"; break;
    case InitialCondition::Kind::kSoliton:
      init = {{"kind", "soliton"}, {"lambda", ic.soliton.lambda},
              {"alpha", cd_to_json(ic.soliton.alpha)}, {"t0", ic.t0}};
      break;
    case InitialCondition::Kind::kTwoSoliton:
      init = {{"kind", "two_soliton"},
              {"lambda_a", ic.two_soliton.a.lambda},
              {"alpha", cd_to_json(ic.two_soliton.a.alpha)},
              {"lambda_b", ic.two_soliton.b.lambda},
              {"beta", cd_to_json(ic.two_soliton.b.alpha)},
              {"orientation", ic.two_soliton.orientation == Orientation::kFlipped ? "flipped"
                                                                                   : "backlund"},
              {"t0", ic.t0}};
      break;
    case InitialCondition::Kind::kFile:
      init = {{"kind", "file"}, {"path", ic.path}};
      if (ic.time) init["time"] = *ic.time;
      break;
    case InitialCondition::Kind::kProfile:
      init = {{"kind", "profile"}, {"coeffs", cd_to_json(ic.coeffs)}, {"width", ic.width},
              {"center", ic.center}};
      break;
    case InitialCondition::Kind::kRandom:
      init = {{"kind", "random"}, {"amplitude", ic.amplitude}, {"modes", ic.modes}};
      break;
  }
  j["initial"] = init;
  return j;
}

Field make_initial(const RunConfig& cfg, AlgebraPtr alg) {
  if (alg->level() != cfg.level) throw DimensionError("algebra level does not match config");
  const Grid& g = cfg.grid;
  const auto& ic = cfg.initial;
  switch (ic.kind) {
    case InitialCondition::Kind::kZero: return Field(g, alg);
    case InitialCondition::Kind::kSoliton: return make_initial_field(ic.soliton, g, alg, ic.t0);
    case InitialCondition::Kind::kTwoSoliton:
      return make_initial_field(ic.two_soliton, g, alg, ic.t0);
    case InitialCondition::Kind::kFile: {
      const LoadedRun run = load_run_csv_file(ic.path);
      if (run.level != cfg.level) throw DimensionError("initial file has a different algebra level");
      if (run.grid.points != g.points)
        throw DimensionError("initial file has " + std::to_string(run.grid.points) +
                             " grid points, config has " + std::to_string(g.points));
      std::size_t pick = run.snapshots.size() - 1;
      if (ic.time) {
        bool found = false;
        for (std::size_t r = 0; r < run.times.size(); ++r)
          if (std::abs(run.times[r] - *ic.time) <= 1e-12 * std::max(1.0, std::abs(*ic.time))) {
            pick = r;
            found = true;
            break;
          }
        if (!found) throw ConfigError("initial.time: no snapshot at that time in " + ic.path);
      }
      Field f(g, alg);
      std::copy(run.snapshots[pick].data().begin(), run.snapshots[pick].data().end(),
                f.data().begin());
      return f;
    }
    case InitialCondition::Kind::kProfile: {
      Field f(g, alg);
      for (std::size_t j = 0; j < g.points; ++j) {
        const double s = 1.0 / std::cosh((g.x(j) - ic.center) / ic.width);
        f.set(j, (s * s) * ic.coeffs);
      }
      return f;
    }
    case InitialCondition::Kind::kRandom: {
      Field f(g, alg);
      std::mt19937_64 rng(cfg.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t k = 0; k < f.dim(); ++k)
        for (int m = 1; m <= ic.modes; ++m) {
          const double a = ic.amplitude * normal(rng) / m;
          const double b = ic.amplitude * normal(rng) / m;
          const double kw = 2.0 * std::numbers::pi * m / g.length;
          auto c = f.component(k);
          for (std::size_t j = 0; j < g.points; ++j)
            c[j] += a * std::cos(kw * g.x(j)) + b * std::sin(kw * g.x(j));
        }
      return f;
    }
  }
  throw ConfigError("unhandled initial kind");
}

}  // namespace cdkdv
