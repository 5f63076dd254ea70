// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdkdv/cdkdv.h"

using nlohmann::json;

namespace {

// Exit codes: 0 all asserted checks pass, 1 a check failed, 2 usage error,
// 10 + status for library errors.
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct LibraryError {
  cdkdv_status status;
  std::string message;
};

void check(cdkdv_status s) {
  if (s != CDKDV_OK) throw LibraryError{s, cdkdv_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  cdkdv_string_free(s);
  return out;
}

template <class F>
std::string call_string(F&& f) {
  char* out = nullptr;
  check(f(&out));
  return take(out);
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using AlgebraHandle = std::unique_ptr<cdkdv_algebra, Deleter<cdkdv_algebra, cdkdv_algebra_destroy>>;
using ConfigHandle = std::unique_ptr<cdkdv_config, Deleter<cdkdv_config, cdkdv_config_destroy>>;
using RunHandle = std::unique_ptr<cdkdv_run, Deleter<cdkdv_run, cdkdv_run_destroy>>;

AlgebraHandle make_algebra(int level) {
  cdkdv_algebra* a = nullptr;
  check(cdkdv_algebra_create(level, &a));
  return AlgebraHandle(a);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw CLI::ValidationError(flag, "not a number list: '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw LibraryError{CDKDV_ERR_IO, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw LibraryError{CDKDV_ERR_IO, "cannot write '" + path + "'"};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("CDKDV_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0' || s[0] == '-')
    throw CLI::ValidationError("CDKDV_SEED", "expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- algebra

int algebra_table(int level, const std::string& perm, const std::string& out) {
  AlgebraHandle alg = make_algebra(level);
  if (!perm.empty()) {
    std::vector<size_t> p;
    for (double x : parse_list(perm, "--perm")) p.push_back(static_cast<size_t>(x));
    cdkdv_algebra* r = nullptr;
    check(cdkdv_algebra_relabel(alg.get(), p.data(), p.size(), &r));
    alg.reset(r);
  }
  const std::string csv = call_string([&](char** o) { return cdkdv_algebra_table_csv(alg.get(), o); });
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text(out, csv);
    print({{"command", "algebra table"}, {"level", level}, {"out", out}});
  }
  return 0;
}

int algebra_audit(int level, const std::string& property) {
  AlgebraHandle alg = make_algebra(level);
  json r = json::parse(call_string([&](char** o) { return cdkdv_algebra_audit(alg.get(), property.c_str(), o); }));
  r["command"] = "algebra audit";
  print(r);
  return 0;
}

// Where each property of the doubling tower is lost.
bool expected_holds(const std::string& property, int level) {
  if (property == "commutative") return level <= 1;
  if (property == "associative") return level <= 2;
  if (property == "alternative" || property == "norm_multiplicative") return level <= 3;
  return true;  // power associativity, antisymmetric structure constants
}

int algebra_classify(int lo, int hi) {
  json levels = json::array();
  bool passed = true;
  for (int n = lo; n <= hi; ++n) {
    AlgebraHandle alg = make_algebra(n);
    json c = json::parse(call_string([&](char** o) { return cdkdv_algebra_classify(alg.get(), o); }));
    json checks;
    for (auto& [name, audit] : c["properties"].items()) {
      const bool want = expected_holds(name, n);
      const bool ok = audit["holds"].get<bool>() == want;
      checks[name] = {{"holds", audit["holds"]}, {"expected", want}, {"passed", ok}};
      passed = passed && ok;
    }
    const bool zd_want = n >= 4;
    const bool zd_ok = c["zero_divisors"]["found"].get<bool>() == zd_want;
    checks["zero_divisors"] = {{"found", c["zero_divisors"]["found"]}, {"expected", zd_want}, {"passed", zd_ok}};
    passed = passed && zd_ok;
    c["checks"] = checks;
    levels.push_back(c);
  }
  print({{"command", "algebra classify"}, {"levels", levels}, {"passed", passed}});
  return passed ? 0 : kExitFailed;
}

int algebra_zero_divisors(int level, std::size_t limit) {
  AlgebraHandle alg = make_algebra(level);
  json r = json::parse(call_string([&](char** o) { return cdkdv_algebra_zero_divisors(alg.get(), limit, o); }));
  r["command"] = "algebra zero-divisors";
  print(r);
  return 0;
}

// --------------------------------------------------------------- simulate

struct Job {
  std::string config_path;
  std::string run_csv;
  std::string conserved_csv;
  json report;
  int exit_code = 0;
};

void run_job(Job& job, std::optional<std::uint64_t> seed) {
  const auto t0 = std::chrono::steady_clock::now();
  job.report = {{"config_path", job.config_path}};
  try {
    cdkdv_config* c = nullptr;
    check(cdkdv_config_parse(read_text(job.config_path).c_str(), &c));
    ConfigHandle cfg(c);
    if (seed) check(cdkdv_config_set_seed(cfg.get(), *seed));
    check(cdkdv_config_set_outputs(cfg.get(), job.run_csv.empty() ? nullptr : job.run_csv.c_str(),
                                   job.conserved_csv.empty() ? nullptr : job.conserved_csv.c_str()));
    char* r = nullptr;
    char* k = nullptr;
    check(cdkdv_config_outputs(cfg.get(), &r, &k));
    job.run_csv = take(r);
    job.conserved_csv = take(k);
    job.report["config"] = json::parse(call_string([&](char** o) { return cdkdv_config_to_json(cfg.get(), o); }));

    cdkdv_run* raw = nullptr;
    const cdkdv_status s = cdkdv_simulate(cfg.get(), &raw);
    RunHandle run(raw);
    const std::string message = s == CDKDV_OK ? "" : cdkdv_last_error();
    if (run) {
      check(cdkdv_run_write_csv(run.get(), job.run_csv.c_str(), job.conserved_csv.c_str()));
      job.report["run"] = json::parse(call_string([&](char** o) { return cdkdv_run_report(run.get(), o); }));
      job.report["outputs"] = {{"run", job.run_csv}, {"conserved", job.conserved_csv}};
    }
    if (s != CDKDV_OK) throw LibraryError{s, message};
    job.report["passed"] = true;
  } catch (const LibraryError& e) {
    job.report["passed"] = false;
    job.report["error"] = {{"status", cdkdv_status_name(e.status)}, {"message", e.message}};
    job.exit_code = 10 + static_cast<int>(e.status);
  }
  job.report["wall_clock_s"] = seconds_since(t0);
}

int simulate(const std::vector<std::string>& configs, int jobs, std::optional<std::uint64_t> seed,
             const std::string& out_dir) {
  if (!seed) seed = env_seed();
  std::vector<Job> work(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    work[i].config_path = configs[i];
    if (!out_dir.empty()) {
      // One subdirectory per config keeps sweep outputs apart.
      std::filesystem::path dir = std::filesystem::path(out_dir);
      if (configs.size() > 1) dir /= std::to_string(i) + "_" + std::filesystem::path(configs[i]).stem().string();
      std::filesystem::create_directories(dir);
      work[i].run_csv = (dir / "run.csv").string();
      work[i].conserved_csv = (dir / "conserved.csv").string();
    }
  }
  if (configs.size() > 1 && out_dir.empty())
    throw CLI::ValidationError("--out-dir", "required when simulating several configs");

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < work.size();) run_job(work[i], seed);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (const auto& j : work) {
    if (j.exit_code && !code) code = j.exit_code;
    if (j.exit_code) std::cerr << "cdkdv: " << j.config_path << ": " << j.report["error"]["message"].get<std::string>() << '\n';
  }
  json report = {{"command", "simulate"}};
  if (seed) report["seed_override"] = *seed;
  if (work.size() == 1) {
    report.update(work.front().report);
  } else {
    json runs = json::array();
    bool all = true;
    for (const auto& j : work) {
      runs.push_back(j.report);
      all = all && j.report["passed"].get<bool>();
    }
    report["runs"] = runs;
    report["passed"] = all;
  }
  print(report);
  return code;
}

// ---------------------------------------------------------------- soliton

int soliton(const json& spec, const std::string& out, bool certify) {
  const std::string text = spec.dump();
  json report = {{"command", "soliton"}, {"spec", spec}};
  int code = 0;
  if (!out.empty() || !certify) {
    const std::string csv = call_string([&](char** o) { return cdkdv_soliton_field_csv(text.c_str(), o); });
    if (out.empty()) {
      std::cout << csv;
      return 0;
    }
    write_text(out, csv);
    report["out"] = out;
  }
  if (certify) {
    json c = json::parse(call_string([&](char** o) { return cdkdv_soliton_certify(text.c_str(), o); }));
    report["certificate"] = c;
    report["passed"] = c["passed"];
    if (!c["passed"].get<bool>()) code = kExitFailed;
  }
  print(report);
  return code;
}

// ----------------------------------------------------------------- verify

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

int verify(const std::string& kind, const std::string& config, const std::vector<std::string>& sets) {
  json params = config.empty() ? json::object() : json::parse(read_text(config));
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got '" + s + "'");
    params[s.substr(0, eq)] = parse_value(s.substr(eq + 1));
  }
  std::vector<std::string> kinds;
  if (kind == "all") {
    std::stringstream ss(call_string([](char** o) { return cdkdv_verify_kinds(o); }));
    for (std::string k; std::getline(ss, k);) kinds.push_back(k);
  } else {
    kinds.push_back(kind);
  }
  json reports = json::object();
  bool passed = true;
  for (const auto& k : kinds) {
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0;
    const std::string p = params.dump();
    json r = json::parse(call_string([&](char** o) { return cdkdv_verify(k.c_str(), p.c_str(), o, &ok); }));
    r["wall_clock_s"] = seconds_since(t0);
    passed = passed && ok;
    reports[k] = r;
  }
  json out = kinds.size() == 1 ? reports[kinds.front()] : json{{"reports", reports}, {"passed", passed}};
  out["command"] = "verify " + kind;
  print(out);
  return passed ? 0 : kExitFailed;
}

// -------------------------------------------------------------- conserved

RunHandle load_run(const std::string& path) {
  cdkdv_run* r = nullptr;
  check(cdkdv_run_load_csv(path.c_str(), &r));
  return RunHandle(r);
}

int conserved(const std::string& input, std::string out, const json& params) {
  if (out.empty()) {
    std::filesystem::path p(input);
    out = (p.parent_path() / (p.stem().string() + "_conserved.csv")).string();
  }
  RunHandle run = load_run(input);
  const std::string p = params.dump();
  json r = json::parse(call_string([&](char** o) { return cdkdv_run_conserved(run.get(), p.c_str(), out.c_str(), o); }));
  r["command"] = "conserved";
  r["input"] = input;
  r["out"] = out;
  print(r);
  return 0;
}

// --------------------------------------------------------------- symmetry

int symmetry_basis(const std::string& out) {
  const std::string csv = call_string([](char** o) { return cdkdv_symmetry_basis_csv(o); });
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text(out, csv);
    print({{"command", "symmetry basis"}, {"out", out}});
  }
  return 0;
}

int symmetry_stabilizer(const std::string& v) {
  const auto coeffs = parse_list(v, "--v");
  json r = json::parse(call_string([&](char** o) { return cdkdv_symmetry_stabilizer(coeffs.data(), coeffs.size(), o); }));
  r["command"] = "symmetry stabilizer";
  print(r);
  return 0;
}

int symmetry_invariance(const std::string& path, const std::string& v, const std::string& mu, std::size_t record) {
  RunHandle run = load_run(path);
  const auto vv = parse_list(v, "--v");
  const auto mm = parse_list(mu, "--mu");
  json r = json::parse(call_string([&](char** o) {
    return cdkdv_symmetry_invariance(run.get(), record, vv.data(), vv.size(), mm.data(), mm.size(), o);
  }));
  r["command"] = "symmetry invariance";
  r["run"] = path;
  print(r);
  return r["passed"].get<bool>() ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-Dickson KdV: algebra, dynamics, transformations, solitons and symmetry checks"};
  app.set_version_flag("--version", std::string(cdkdv_version()));
  app.require_subcommand(1);
  int code = 0;

  // algebra
  auto* alg = app.add_subcommand("algebra", "Multiplication tables and property audits");
  alg->require_subcommand(1);
  int level = 3;
  std::string perm, out, property;
  auto* table = alg->add_subcommand("table", "Signed basis-product table as CSV");
  table->add_option("--level", level, "Doubling level n (dimension 2^n)")->required()->check(CLI::Range(0, 8));
  table->add_option("--perm", perm, "Basis relabeling, comma-separated (new e_perm[k] = old e_k)");
  table->add_option("--out", out, "Write CSV here instead of stdout");
  table->callback([&] { code = algebra_table(level, perm, out); });

  auto* audit = alg->add_subcommand("audit", "Check one algebraic property");
  audit->add_option("--level", level)->required()->check(CLI::Range(0, 8));
  audit->add_option("--property", property,
                    "commutative | associative | alternative | norm_multiplicative | "
                    "power_associative | antisymmetric_structure_constants")
      ->required();
  audit->callback([&] { code = algebra_audit(level, property); });

  int lo = 0, hi = 4;
  auto* classify = alg->add_subcommand("classify", "Audit every property over a range of levels");
  classify->add_option("--min-level", lo)->check(CLI::Range(0, 8));
  classify->add_option("--max-level", hi)->check(CLI::Range(0, 8));
  classify->callback([&] { code = algebra_classify(lo, hi); });

  std::size_t limit = 0;
  auto* zd = alg->add_subcommand("zero-divisors", "Pairs (e_i + e_j)(e_k + e_l) = 0");
  zd->add_option("--level", level)->required()->check(CLI::Range(0, 8));
  zd->add_option("--limit", limit, "Stop after this many (0 = all)");
  zd->callback([&] { code = algebra_zero_divisors(level, limit); });

  // simulate
  std::vector<std::string> configs;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  auto* sim = app.add_subcommand("simulate", "Integrate a configured run and write CSV outputs");
  sim->add_option("--config", configs, "Run configuration JSON (repeatable)")->required()->check(CLI::ExistingFile);
  sim->add_option("--jobs", jobs, "Configs to run in parallel")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Override the config seed (takes precedence over CDKDV_SEED)");
  sim->add_option("--out-dir", out_dir, "Directory for outputs; one subdirectory per config when several");
  sim->callback([&] { code = simulate(configs, jobs, seed, out_dir); });

  // soliton
  double lambda = 1.0, lambda2 = 1.0, t = 0.0;
  std::string alpha, beta, v, grid = "256,80", orientation = "backlund";
  bool certify = false;
  auto* sol = app.add_subcommand("soliton", "Closed-form one- and two-soliton fields and certificates");
  sol->add_option("--lambda", lambda, "Spectral parameter of the first soliton")->check(CLI::PositiveNumber);
  sol->add_option("--alpha", alpha, "Coefficients of alpha, comma-separated")->required();
  auto* l2 = sol->add_option("--lambda2", lambda2, "Spectral parameter of the second soliton")->check(CLI::PositiveNumber);
  auto* b = sol->add_option("--beta", beta, "Coefficients of beta (two-soliton)");
  l2->needs(b);
  b->needs(l2);
  sol->add_option("--orientation", orientation, "Two-soliton sign convention")
      ->check(CLI::IsMember({"backlund", "flipped"}));
  sol->add_option("--v", v, "External field coefficients (certificate includes the v-equation)");
  sol->add_option("--t", t, "Evaluation time");
  sol->add_option("--grid", grid, "N,L");
  sol->add_option("--out", out, "Field CSV path");
  sol->add_flag("--certify", certify, "Print the residual certificate as JSON");
  sol->callback([&] {
    const auto g = parse_list(grid, "--grid");
    if (g.size() != 2) throw CLI::ValidationError("--grid", "expected N,L");
    json spec = {{"lambda", lambda}, {"alpha", alpha}, {"t", t}, {"N", static_cast<long>(g[0])}, {"L", g[1]}};
    if (!beta.empty()) {
      spec["lambda2"] = lambda2;
      spec["beta"] = beta;
      spec["orientation"] = orientation;
    }
    if (!v.empty()) spec["v"] = v;
    code = soliton(spec, out, certify);
  });

  // verify
  std::string kind, config;
  std::vector<std::string> sets;
  auto* ver = app.add_subcommand("verify", "Run a family of numerical checks; exit 0 iff all pass");
  ver->add_option("kind", kind,
                  "backlund | solitons | gardner | lax | series | symmetry | invariance | "
                  "conservation | galileo | determinism | all")
      ->required();
  ver->add_option("--config", config, "JSON object of parameter overrides")->check(CLI::ExistingFile);
  ver->add_option("--set", sets, "Parameter override key=value (value parsed as JSON when possible)");
  ver->callback([&] { code = verify(kind, config, sets); });

  // conserved
  std::string input, equation = "cdkdv";
  double epsilon = 0.0, dt = 1e-4;
  auto* cons = app.add_subcommand("conserved", "H1, H2, H3 and step residual of every record of a run CSV");
  cons->add_option("--input", input, "Run or field CSV")->required()->check(CLI::ExistingFile);
  cons->add_option("--out", out, "Conserved CSV (default <input>_conserved.csv)");
  cons->add_option("--equation", equation)->check(CLI::IsMember({"cdkdv", "gardner", "mkdv"}));
  cons->add_option("--v", v, "External field used by the residual");
  cons->add_option("--epsilon", epsilon, "Gardner parameter used by the residual");
  cons->add_option("--dt", dt, "Probe step of the residual")->check(CLI::PositiveNumber);
  cons->callback([&] {
    json p = {{"equation", equation}, {"epsilon", epsilon}, {"dt", dt}};
    if (!v.empty()) p["v"] = parse_list(v, "--v");
    code = conserved(input, out, p);
  });

  // symmetry
  auto* sym = app.add_subcommand("symmetry", "G2 derivations, stabilizers and invariance slopes");
  sym->require_subcommand(1);
  auto* basis = sym->add_subcommand("basis", "The fourteen derivation matrices as CSV");
  basis->add_option("--out", out);
  basis->callback([&] { code = symmetry_basis(out); });
  auto* stab = sym->add_subcommand("stabilizer", "Derivations annihilating v");
  stab->add_option("--v", v, "Octonion coefficients")->required();
  stab->callback([&] { code = symmetry_stabilizer(v); });
  std::string run_path, mu = "1e-2,1e-3";
  std::size_t record = 1;
  auto* inv = sym->add_subcommand("invariance", "Residual slopes of u + mu D(u) on a stored run");
  inv->add_option("--run", run_path, "Run CSV with equally spaced records")->required()->check(CLI::ExistingFile);
  inv->add_option("--v", v, "External field of the run")->required();
  inv->add_option("--mu", mu, "Perturbation amplitudes, comma-separated");
  inv->add_option("--record", record, "Centre record of the three-snapshot window");
  inv->callback([&] { code = symmetry_invariance(run_path, v, mu, record); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "cdkdv: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "cdkdv: error (" << cdkdv_status_name(e.status) << "): " << e.message << '\n';
    return 10 + static_cast<int>(e.status);
  } catch (const json::exception& e) {
    std::cerr << "cdkdv: error (config): " << e.what() << '\n';
    return 10 + static_cast<int>(CDKDV_ERR_CONFIG);
  } catch (const std::exception& e) {
    std::cerr << "cdkdv: error: " << e.what() << '\n';
    return 10 + static_cast<int>(CDKDV_ERR_INTERNAL);
  }
  return code;
}
