#include "cdkdv/cdkdv.h"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "cdkdv/algebra.hpp"
#include "cdkdv/config.hpp"
#include "cdkdv/error.hpp"
#include "cdkdv/io.hpp"
#include "cdkdv/solitons.hpp"
#include "cdkdv/solver.hpp"
#include "cdkdv/symmetry.hpp"
#include "cdkdv/verify.hpp"

using nlohmann::json;

struct cdkdv_algebra {
  cdkdv::AlgebraPtr alg;
};

struct cdkdv_config {
  cdkdv::RunConfig cfg;
};

struct cdkdv_run {
  cdkdv::RunRecord rec;
};

namespace {

std::string& last_error() {
  thread_local std::string msg;
  return msg;
}

cdkdv_status fail(cdkdv_status s, const char* what) {
  last_error() = what;
  return s;
}

template <class F>
cdkdv_status guard(F&& f) {
  try {
    f();
    return CDKDV_OK;
  } catch (const cdkdv::Error& e) {
    return fail(static_cast<cdkdv_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(CDKDV_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CDKDV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CDKDV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CDKDV_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p) throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  need(out, "output pointer");
  *out = dup(s);
}

void emit(char** out, const json& j) { emit(out, j.dump(2)); }

json counterexample_json(const std::optional<std::vector<std::size_t>>& c) {
  return c ? json(*c) : json(nullptr);
}

json audit_json(const cdkdv::Algebra& alg, const std::string& property) {
  if (property == "antisymmetric_structure_constants") {
    const auto v = cdkdv::StructureConstants(alg).antisymmetry_violation();
    return {{"property", property}, {"level", alg.level()}, {"holds", !v},
            {"counterexample", counterexample_json(v)}, {"deviation", v ? 1.0 : 0.0}};
  }
  const auto p = cdkdv::parse_property(property);
  if (!p)
    throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument,
                       "property: expected one of commutative, associative, alternative, "
                       "norm_multiplicative, power_associative, antisymmetric_structure_constants; "
                       "got '" + property + "'");
  const auto r = cdkdv::audit_property(alg, *p);
  return {{"property", property}, {"level", alg.level()}, {"holds", r.holds},
          {"counterexample", counterexample_json(r.counterexample)}, {"deviation", r.deviation}};
}

json zero_divisor_json(const cdkdv::Algebra& alg, std::size_t limit) {
  const auto pairs = cdkdv::find_zero_divisors(alg, limit);
  json list = json::array();
  for (const auto& z : pairs) list.push_back({z.i, z.j, z.k, z.l});
  return {{"level", alg.level()}, {"found", !pairs.empty()}, {"count", pairs.size()},
          {"capped", limit != 0 && pairs.size() >= limit}, {"pairs", list},
          {"form", "(e_i + e_j)(e_k + e_l) = 0 as [i, j, k, l]"}};
}

// Coefficients given as an array or as comma-separated text.
cdkdv::CDNumber cd_value(const json& j, const std::string& key) {
  if (j.is_string()) return cdkdv::parse_cd(j.get<std::string>());
  if (!j.is_array() || !std::has_single_bit(j.size()))
    throw cdkdv::DimensionError(key + ": expected a power-of-two number of coefficients");
  return cdkdv::parse_cd_json(j, j.size(), key);
}

double num(const json& j, const char* key, double def) {
  auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_number()) throw cdkdv::ConfigError(std::string(key) + ": expected a number");
  return it->get<double>();
}

struct SolitonRequest {
  cdkdv::AlgebraPtr alg;
  bool two = false;
  cdkdv::SolitonSpec one;
  cdkdv::TwoSolitonSpec pair;
  cdkdv::CDNumber v;
  double t = 0.0;
  cdkdv::Grid grid;
};

SolitonRequest soliton_request(const char* text) {
  need(text, "spec");
  const json j = json::parse(text);
  if (!j.is_object()) throw cdkdv::ConfigError("soliton spec: expected an object");
  static const std::vector<std::string> keys{"lambda", "alpha", "lambda2", "beta", "orientation",
                                             "v",      "t",     "N",       "L"};
  for (const auto& [k, _] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw cdkdv::ConfigError(k + ": unknown field");
  if (!j.contains("alpha")) throw cdkdv::ConfigError("alpha: required field is missing");
  SolitonRequest r;
  r.one = {num(j, "lambda", 1.0), cd_value(j.at("alpha"), "alpha")};
  const std::size_t d = r.one.alpha.dim();
  r.alg = cdkdv::make_algebra(std::countr_zero(d));
  if (j.contains("v")) {
    r.v = cd_value(j.at("v"), "v");
    if (r.v.dim() != d)
      throw cdkdv::DimensionError("v: expected " + std::to_string(d) + " coefficients, got " +
                                  std::to_string(r.v.dim()));
  }
  if (j.contains("beta") != j.contains("lambda2"))
    throw cdkdv::ConfigError("lambda2 and beta must be given together");
  if (j.contains("beta")) {
    r.two = true;
    r.pair.a = r.one;
    r.pair.b = {num(j, "lambda2", 1.0), cd_value(j.at("beta"), "beta")};
    if (r.pair.b.alpha.dim() != d)
      throw cdkdv::DimensionError("beta: expected " + std::to_string(d) + " coefficients");
    const std::string o = j.value("orientation", std::string("backlund"));
    if (o == "backlund")
      r.pair.orientation = cdkdv::Orientation::kBacklundConsistent;
    else if (o == "flipped")
      r.pair.orientation = cdkdv::Orientation::kFlipped;
    else
      throw cdkdv::ConfigError("orientation: expected one of backlund, flipped");
    cdkdv::validate(r.pair, *r.alg);
  } else {
    cdkdv::validate(r.one, *r.alg);
  }
  r.t = num(j, "t", 0.0);
  const double n = num(j, "N", 256.0);
  if (n < 0 || n != std::floor(n)) throw cdkdv::ConfigError("N: expected a non-negative integer");
  r.grid = cdkdv::Grid::centered(num(j, "L", 80.0), static_cast<std::size_t>(n));
  r.grid.validate();
  return r;
}

const cdkdv::Field& first_snapshot(const cdkdv_run* run) {
  need(run, "run");
  if (run->rec.snapshots.empty())
    throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument, "run has no records");
  return run->rec.snapshots.front();
}

double relative_drift(const std::vector<cdkdv::ConservedReport>& c,
                      double cdkdv::ConservedReport::*h) {
  if (c.empty()) return 0.0;
  double worst = 0.0;
  const double h0 = c.front().*h;
  for (const auto& r : c) worst = std::max(worst, std::abs(r.*h - h0) / std::max(1.0, std::abs(h0)));
  return worst;
}

json run_summary(const cdkdv::RunRecord& rec) {
  json j;
  j["records"] = rec.size();
  if (!rec.snapshots.empty()) {
    const auto& f = rec.snapshots.front();
    j["level"] = f.algebra().level();
    j["N"] = f.grid().points;
    j["L"] = f.grid().length;
    j["t_final"] = rec.times.back();
  }
  j["blew_up"] = rec.blew_up;
  j["last_valid_time"] = rec.blew_up ? rec.last_valid_time : (rec.times.empty() ? 0.0 : rec.times.back());
  if (!rec.conserved.empty()) {
    const auto& c0 = rec.conserved.front();
    const auto& c1 = rec.conserved.back();
    j["H_initial"] = {c0.h1, c0.h2, c0.h3};
    j["H_final"] = {c1.h1, c1.h2, c1.h3};
    j["drift"] = {{"H1", relative_drift(rec.conserved, &cdkdv::ConservedReport::h1)},
                  {"H2", relative_drift(rec.conserved, &cdkdv::ConservedReport::h2)},
                  {"H3", relative_drift(rec.conserved, &cdkdv::ConservedReport::h3)}};
  }
  if (!rec.residual_norms.empty())
    j["max_step_residual"] =
        *std::max_element(rec.residual_norms.begin(), rec.residual_norms.end());
  return j;
}

}  // namespace

extern "C" {

const char* cdkdv_version(void) { return "1.0.0"; }

const char* cdkdv_last_error(void) { return last_error().c_str(); }

const char* cdkdv_status_name(cdkdv_status status) {
  switch (status) {
    case CDKDV_OK: return "ok";
    case CDKDV_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CDKDV_ERR_DIMENSION: return "dimension_mismatch";
    case CDKDV_ERR_LEVEL: return "level";
    case CDKDV_ERR_CONFIG: return "config";
    case CDKDV_ERR_BLOWUP: return "blowup";
    case CDKDV_ERR_POLE: return "pole";
    case CDKDV_ERR_IO: return "io";
    case CDKDV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void cdkdv_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- algebra

cdkdv_status cdkdv_algebra_create(int level, cdkdv_algebra** out) {
  return guard([&] {
    need(out, "out");
    *out = new cdkdv_algebra{cdkdv::make_algebra(level)};
  });
}

cdkdv_status cdkdv_algebra_relabel(const cdkdv_algebra* alg, const size_t* perm, size_t n,
                                   cdkdv_algebra** out) {
  return guard([&] {
    need(alg, "algebra");
    need(perm, "perm");
    need(out, "out");
    if (n != alg->alg->dim())
      throw cdkdv::DimensionError("perm: expected " + std::to_string(alg->alg->dim()) + " entries");
    const std::vector<std::size_t> p(perm, perm + n);
    *out = new cdkdv_algebra{std::make_shared<const cdkdv::Algebra>(alg->alg->relabeled(p))};
  });
}

void cdkdv_algebra_destroy(cdkdv_algebra* alg) { delete alg; }

int cdkdv_algebra_level(const cdkdv_algebra* alg) { return alg ? alg->alg->level() : -1; }

size_t cdkdv_algebra_dim(const cdkdv_algebra* alg) { return alg ? alg->alg->dim() : 0; }

cdkdv_status cdkdv_algebra_basis_product(const cdkdv_algebra* alg, size_t i, size_t j, int* sign,
                                         size_t* index) {
  return guard([&] {
    need(alg, "algebra");
    need(sign, "sign");
    need(index, "index");
    const std::size_t d = alg->alg->dim();
    if (i >= d || j >= d) throw cdkdv::DimensionError("basis index out of range");
    *sign = alg->alg->sign(i, j);
    *index = alg->alg->index(i, j);
  });
}

cdkdv_status cdkdv_algebra_multiply(const cdkdv_algebra* alg, const double* x, const double* y,
                                    double* out) {
  return guard([&] {
    need(alg, "algebra");
    need(x, "x");
    need(y, "y");
    need(out, "out");
    const std::size_t d = alg->alg->dim();
    std::vector<double> r(d);
    alg->alg->multiply({x, d}, {y, d}, r);
    std::copy(r.begin(), r.end(), out);
  });
}

cdkdv_status cdkdv_algebra_table_csv(const cdkdv_algebra* alg, char** csv) {
  return guard([&] {
    need(alg, "algebra");
    const auto& a = *alg->alg;
    std::string s = "i";
    for (std::size_t j = 0; j < a.dim(); ++j) s += ",e" + std::to_string(j);
    s += '\n';
    for (std::size_t i = 0; i < a.dim(); ++i) {
      s += std::to_string(i);
      for (std::size_t j = 0; j < a.dim(); ++j) {
        s += ',';
        if (a.sign(i, j) < 0) s += '-';
        s += std::to_string(a.index(i, j));
      }
      s += '\n';
    }
    emit(csv, s);
  });
}

cdkdv_status cdkdv_algebra_audit(const cdkdv_algebra* alg, const char* property, char** out) {
  return guard([&] {
    need(alg, "algebra");
    need(property, "property");
    emit(out, audit_json(*alg->alg, property));
  });
}

cdkdv_status cdkdv_algebra_classify(const cdkdv_algebra* alg, char** out) {
  return guard([&] {
    need(alg, "algebra");
    const auto& a = *alg->alg;
    json j = {{"level", a.level()}, {"dim", a.dim()}};
    for (const char* p : {"commutative", "associative", "alternative", "norm_multiplicative",
                          "power_associative", "antisymmetric_structure_constants"})
      j["properties"][p] = audit_json(a, p);
    // The full list is small up to the sedenions; above that a sample suffices.
    j["zero_divisors"] = zero_divisor_json(a, a.level() <= 4 ? 0 : 64);
    emit(out, j);
  });
}

cdkdv_status cdkdv_algebra_zero_divisors(const cdkdv_algebra* alg, size_t limit, char** out) {
  return guard([&] {
    need(alg, "algebra");
    emit(out, zero_divisor_json(*alg->alg, limit));
  });
}

// ----------------------------------------------------------------- config

cdkdv_status cdkdv_config_parse(const char* text, cdkdv_config** out) {
  return guard([&] {
    need(text, "config text");
    need(out, "out");
    *out = new cdkdv_config{cdkdv::parse_config(std::string(text))};
  });
}

cdkdv_status cdkdv_config_parse_file(const char* path, cdkdv_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new cdkdv_config{cdkdv::parse_config(cdkdv::read_file(path))};
  });
}

void cdkdv_config_destroy(cdkdv_config* cfg) { delete cfg; }

cdkdv_status cdkdv_config_set_seed(cdkdv_config* cfg, uint64_t seed) {
  return guard([&] {
    need(cfg, "config");
    cfg->cfg.seed = seed;
  });
}

uint64_t cdkdv_config_seed(const cdkdv_config* cfg) { return cfg ? cfg->cfg.seed : 0; }

cdkdv_status cdkdv_config_set_outputs(cdkdv_config* cfg, const char* run_csv,
                                      const char* conserved_csv) {
  return guard([&] {
    need(cfg, "config");
    if (run_csv) cfg->cfg.output.run = run_csv;
    if (conserved_csv) cfg->cfg.output.conserved = conserved_csv;
  });
}

cdkdv_status cdkdv_config_outputs(const cdkdv_config* cfg, char** run_csv, char** conserved_csv) {
  return guard([&] {
    need(cfg, "config");
    need(run_csv, "run_csv");
    need(conserved_csv, "conserved_csv");
    char* r = dup(cfg->cfg.output.run);
    try {
      *conserved_csv = dup(cfg->cfg.output.conserved);
    } catch (...) {
      std::free(r);
      throw;
    }
    *run_csv = r;
  });
}

cdkdv_status cdkdv_config_to_json(const cdkdv_config* cfg, char** out) {
  return guard([&] {
    need(cfg, "config");
    emit(out, cdkdv::to_json(cfg->cfg));
  });
}

// -------------------------------------------------------------------- run

cdkdv_status cdkdv_simulate(const cdkdv_config* cfg, cdkdv_run** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    const auto alg = cdkdv::make_algebra(c.level);
    cdkdv::Solver solver(c.evolution, c.grid, alg);
    const cdkdv::Field u0 = cdkdv::make_initial(c, alg);
    try {
      *out = new cdkdv_run{solver.simulate(u0)};
    } catch (cdkdv::BlowUpError& e) {
      *out = new cdkdv_run{std::move(e.partial())};
      throw;
    }
  });
}

cdkdv_status cdkdv_run_load_csv(const char* path, cdkdv_run** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto loaded = cdkdv::load_run_csv_file(path);
    cdkdv::RunRecord rec;
    rec.times = std::move(loaded.times);
    rec.snapshots = std::move(loaded.snapshots);
    rec.last_valid_time = rec.times.back();
    *out = new cdkdv_run{std::move(rec)};
  });
}

void cdkdv_run_destroy(cdkdv_run* run) { delete run; }

size_t cdkdv_run_records(const cdkdv_run* run) { return run ? run->rec.size() : 0; }

size_t cdkdv_run_points(const cdkdv_run* run) {
  return run && !run->rec.snapshots.empty() ? run->rec.snapshots.front().size() : 0;
}

size_t cdkdv_run_dim(const cdkdv_run* run) {
  return run && !run->rec.snapshots.empty() ? run->rec.snapshots.front().dim() : 0;
}

cdkdv_status cdkdv_run_time(const cdkdv_run* run, size_t record, double* t) {
  return guard([&] {
    need(run, "run");
    need(t, "t");
    if (record >= run->rec.size()) throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument, "record out of range");
    *t = run->rec.times[record];
  });
}

cdkdv_status cdkdv_run_snapshot(const cdkdv_run* run, size_t record, double* out) {
  return guard([&] {
    need(run, "run");
    need(out, "out");
    if (record >= run->rec.size()) throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument, "record out of range");
    const auto data = run->rec.snapshots[record].data();
    std::copy(data.begin(), data.end(), out);
  });
}

cdkdv_status cdkdv_run_report(const cdkdv_run* run, char** out) {
  return guard([&] {
    need(run, "run");
    emit(out, run_summary(run->rec));
  });
}

cdkdv_status cdkdv_run_write_csv(const cdkdv_run* run, const char* run_csv,
                                 const char* conserved_csv) {
  return guard([&] {
    need(run, "run");
    if (run_csv) {
      std::ostringstream os;
      cdkdv::write_run_csv(os, run->rec);
      cdkdv::write_file(run_csv, os.str());
    }
    if (conserved_csv) {
      if (run->rec.conserved.size() != run->rec.size())
        throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument,
                           "run has no conserved quantities; compute them first");
      std::ostringstream os;
      cdkdv::write_conserved_csv(os, run->rec);
      cdkdv::write_file(conserved_csv, os.str());
    }
  });
}

cdkdv_status cdkdv_run_csv(const cdkdv_run* run, char** csv) {
  return guard([&] {
    need(run, "run");
    std::ostringstream os;
    cdkdv::write_run_csv(os, run->rec);
    emit(csv, os.str());
  });
}

cdkdv_status cdkdv_run_conserved(cdkdv_run* run, const char* params_json, const char* conserved_csv,
                                 char** out) {
  return guard([&] {
    const cdkdv::Field& f0 = first_snapshot(run);
    const json p = params_json ? json::parse(params_json) : json::object();
    if (!p.is_object()) throw cdkdv::ConfigError("conserved parameters: expected an object");
    for (const auto& [k, _] : p.items())
      if (k != "equation" && k != "v" && k != "epsilon" && k != "dt")
        throw cdkdv::ConfigError(k + ": unknown field");
    cdkdv::EvolutionSpec es;
    const std::string eq = p.value("equation", std::string("cdkdv"));
    const auto tag = cdkdv::parse_equation(eq);
    if (!tag) throw cdkdv::ConfigError("equation: expected one of cdkdv, gardner, mkdv; got '" + eq + "'");
    es.equation = *tag;
    if (p.contains("v")) es.v = cdkdv::parse_cd_json(p.at("v"), f0.dim(), "v");
    es.epsilon = num(p, "epsilon", 0.0);
    es.dt = num(p, "dt", 1e-4);
    es.t_end = es.dt;
    cdkdv::Solver solver(es, f0.grid(), f0.algebra_ptr());
    auto& rec = run->rec;
    rec.conserved.clear();
    rec.residual_norms.clear();
    for (const auto& f : rec.snapshots) {
      rec.conserved.push_back(cdkdv::conserved(f, solver.spectral()));
      rec.residual_norms.push_back(solver.step_residual(f));
    }
    if (conserved_csv) {
      std::ostringstream os;
      cdkdv::write_conserved_csv(os, rec);
      cdkdv::write_file(conserved_csv, os.str());
    }
    json j = run_summary(rec);
    json rows = json::array();
    for (std::size_t r = 0; r < rec.size(); ++r)
      rows.push_back({{"t", rec.times[r]}, {"H1", rec.conserved[r].h1}, {"H2", rec.conserved[r].h2},
                      {"H3", rec.conserved[r].h3}, {"residual", rec.residual_norms[r]}});
    j["rows"] = rows;
    emit(out, j);
  });
}

// --------------------------------------------------------------- solitons

cdkdv_status cdkdv_soliton_field_csv(const char* spec_json, char** csv) {
  return guard([&] {
    const SolitonRequest r = soliton_request(spec_json);
    const cdkdv::Field f = r.two ? cdkdv::make_initial_field(r.pair, r.grid, r.alg, r.t)
                                 : cdkdv::make_initial_field(r.one, r.grid, r.alg, r.t);
    std::ostringstream os;
    cdkdv::write_field_csv(os, f);
    emit(csv, os.str());
  });
}

cdkdv_status cdkdv_soliton_certify(const char* spec_json, char** out) {
  return guard([&] {
    const SolitonRequest r = soliton_request(spec_json);
    json j = r.two ? cdkdv::certify_two_soliton(*r.alg, r.pair, r.v)
                   : cdkdv::certify_soliton(*r.alg, r.one, r.v);
    j["level"] = r.alg->level();
    emit(out, j);
  });
}

// ----------------------------------------------------------- verification

cdkdv_status cdkdv_verify_kinds(char** names) {
  return guard([&] {
    std::string s;
    for (const auto& k : cdkdv::verification_kinds()) s += k + '\n';
    emit(names, s);
  });
}

cdkdv_status cdkdv_verify(const char* kind, const char* params_json, char** out, int* passed) {
  return guard([&] {
    need(kind, "kind");
    const json p = params_json ? json::parse(params_json) : json::object();
    const json r = cdkdv::run_verification(kind, p);
    if (passed) *passed = r.at("passed").get<bool>() ? 1 : 0;
    emit(out, r);
  });
}

// --------------------------------------------------------------- symmetry

cdkdv_status cdkdv_symmetry_basis_csv(char** csv) {
  return guard([&] {
    const cdkdv::Algebra alg(3);
    const cdkdv::G2Basis basis = cdkdv::g2_basis(alg);
    auto unit = [](const cdkdv::CDNumber& x) {
      for (std::size_t k = 0; k < x.dim(); ++k)
        if (x[k] != 0.0) return k;
      return std::size_t{0};
    };
    std::string s = "basis,i,j,row";
    for (int k = 0; k < 8; ++k) s += ",c_" + std::to_string(k);
    s += '\n';
    for (std::size_t b = 0; b < basis.elements.size(); ++b) {
      const auto& d = basis.elements[b];
      for (int r = 0; r < 8; ++r) {
        s += std::to_string(b) + ',' + std::to_string(unit(d.a)) + ',' + std::to_string(unit(d.b)) +
             ',' + std::to_string(r);
        for (int c = 0; c < 8; ++c) s += ',' + cdkdv::format_double(d.matrix(r, c));
        s += '\n';
      }
    }
    emit(csv, s);
  });
}

cdkdv_status cdkdv_symmetry_stabilizer(const double* v, size_t n, char** out) {
  return guard([&] {
    need(v, "v");
    if (n != 8) throw cdkdv::DimensionError("v: expected 8 coefficients, got " + std::to_string(n));
    const cdkdv::Algebra alg(3);
    const cdkdv::CDNumber vv(std::vector<double>(v, v + n));
    const cdkdv::Stabilizer st = cdkdv::stabilizer(alg, vv);
    json basis = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < st.matrices.size(); ++i) {
      json rows = json::array();
      for (int r = 0; r < 8; ++r) {
        json row = json::array();
        for (int c = 0; c < 8; ++c) row.push_back(st.matrices[i](r, c));
        rows.push_back(row);
      }
      std::vector<double> coeffs(st.coefficients[i].data(),
                                 st.coefficients[i].data() + st.coefficients[i].size());
      basis.push_back({{"coefficients", coeffs}, {"matrix", rows}});
      worst = std::max(worst, (st.matrices[i] * cdkdv::to_vector(vv)).cwiseAbs().maxCoeff());
    }
    emit(out, json{{"v", std::vector<double>(v, v + n)},
                   {"dimension", st.dimension},
                   {"max_abs_Dv", worst},
                   {"basis", basis}});
  });
}

cdkdv_status cdkdv_symmetry_invariance(const cdkdv_run* run, size_t record, const double* v,
                                       size_t n, const double* mu, size_t n_mu, char** out) {
  return guard([&] {
    const cdkdv::Field& f0 = first_snapshot(run);
    need(v, "v");
    need(mu, "mu");
    if (n != f0.dim())
      throw cdkdv::DimensionError("v: expected " + std::to_string(f0.dim()) + " coefficients");
    if (n_mu < 2) throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument, "mu: expected at least two values");
    const auto& rec = run->rec;
    if (record < 1 || record + 1 >= rec.size())
      throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument,
                         "record must have a neighbour on each side (run has " +
                             std::to_string(rec.size()) + " records)");
    const double dt = rec.times[record + 1] - rec.times[record];
    const double dt_prev = rec.times[record] - rec.times[record - 1];
    if (!(dt > 0.0) || std::abs(dt - dt_prev) > 1e-9 * std::max(1.0, dt))
      throw cdkdv::Error(cdkdv::ErrorCode::kInvalidArgument,
                         "records around the window are not equally spaced in time");
    const auto [lo, hi] = std::minmax_element(mu, mu + n_mu);
    const cdkdv::CDNumber vv(std::vector<double>(v, v + n));
    json j = cdkdv::invariance_window_report(
        std::span<const cdkdv::Field>(rec.snapshots).subspan(record - 1, 3), dt, vv, *hi, *lo);
    const double tol = cdkdv::thresholds::kInvarianceSlope;
    j["tolerance"] = tol;
    j["record"] = record;
    j["t"] = rec.times[record];
    j["passed"] = j.at("worst_kept").get<double>() < tol && j.at("worst_broken").get<double>() < tol;
    emit(out, j);
  });
}

}  // extern "C"
