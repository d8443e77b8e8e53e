// sumdens: build and check towers A with B + A of prescribed density.
//
// Exit codes: 0 ok, 1 usage, 2 certificate failure, 3 resource limit.

#include "sumdens/sumdens.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::ordered_json;
using namespace sumdens;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitResource = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string b;
  std::string alpha;
  unsigned depth = 6;
  unsigned nmax = 8;
  std::string mod;
  std::uint64_t horizon = 1000000;
  std::string tower;
  std::string out;
  std::string csv;
  std::string horizons_csv;
  std::string density = "buck";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t memory_cap = 0;
  bool allow_depth_11 = false;
  bool debug_linear_k_search = false;
  bool dump = false;
  bool no_proxies = false;

  json to_json() const {
    json j;
    j["command"] = command;
    if (command == "construct" || command == "estimate") {
      j["b"] = b;
      j["alpha"] = alpha;
      j["depth"] = depth;
      j["allow_depth_11"] = allow_depth_11;
      j["debug_linear_k_search"] = debug_linear_k_search;
    }
    if (command == "estimate" || command == "verify") {
      j["horizon"] = horizon;
      j["proxies"] = !no_proxies;
    }
    if (command == "verify") {
      j["tower"] = tower;
      j["b"] = b;
    }
    if (command == "cover") {
      j["b"] = b;
      j["mod"] = mod;
    }
    if (command == "profile") {
      j["b"] = b;
      j["nmax"] = nmax;
    }
    if (command == "axioms") {
      j["density"] = density;
      j["samples"] = samples;
      j["seed"] = seed;
    }
    if (memory_cap != 0) j["memory_cap"] = memory_cap;
    return j;
  }
};

Rational parse_alpha(const std::string& text) {
  Rational a;
  try {
    a = parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError("--alpha: " + std::string(e.what()));
  }
  if (a < 0 || a > 1) throw UsageError("--alpha must lie in [0, 1], got " + text);
  return a;
}

std::unique_ptr<CoverOracle> oracle_for(const std::string& spec) {
  if (spec.empty()) throw UsageError("--b is required");
  try {
    return make_oracle(spec);
  } catch (const ResourceError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("--b: " + std::string(e.what()));
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

ConstructOptions construct_options(const RunConfig& cfg) {
  ConstructOptions o;
  o.allow_depth_11 = cfg.allow_depth_11;
  o.k_search = cfg.debug_linear_k_search ? KSearch::cross_check : KSearch::linear;
  return o;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "sumdens: warning: " << w << '\n';
}

std::string levels_csv(const Tower& t, const CoverOracle& oracle) {
  std::ostringstream os;
  write_levels_csv(os, t, oracle);
  return os.str();
}

int cmd_construct(const RunConfig& cfg) {
  const Rational alpha = parse_alpha(cfg.alpha);
  auto oracle = oracle_for(cfg.b);
  Tower t = construct(*oracle, alpha, cfg.depth, construct_options(cfg));
  t.config = cfg.to_json();
  print_warnings(t.warnings);
  write_text(cfg.out, dump_tower(t));
  if (!cfg.csv.empty()) write_text(cfg.csv, levels_csv(t, *oracle));
  std::ostream& log = cfg.out.empty() || cfg.out == "-" ? std::cerr : std::cout;
  if (t.trivial())
    log << "trivial tower: alpha = 1, A = N\n";
  else
    log << "constructed " << t.levels.size() << " levels; densityA = " << to_string(t.last().densityA)
        << ", certificate (" << to_string(t.last().L) << ", " << to_string(t.last().U) << "]\n";
  return kExitOk;
}

int cmd_cover(const RunConfig& cfg) {
  auto oracle = oracle_for(cfg.b);
  Integer m;
  try {
    m = parse_integer(cfg.mod);
  } catch (const std::exception& e) {
    throw UsageError("--mod: " + std::string(e.what()));
  }
  if (m < 1) throw UsageError("--mod must be positive");
  print_warnings(oracle->warnings());
  std::ostringstream os;
  if (cfg.dump) {
    const ResidueSet c = oracle->cover(m);
    os << "modulus " << m << "\ncount " << c.size() << "\nresidues ";
    bool first = true;
    c.for_each([&](const Integer& r) {
      os << (first ? "" : ",") << r;
      first = false;
    });
    os << '\n';
  } else {
    os << "modulus " << m << "\ncount " << oracle->cover_count(m) << '\n';
  }
  if (!oracle->exact()) os << "exact false\n";
  write_text(cfg.out, os.str());
  return kExitOk;
}

int cmd_profile(const RunConfig& cfg) {
  auto oracle = oracle_for(cfg.b);
  if (cfg.nmax < 1) throw UsageError("--nmax must be at least 1");
  if (cfg.nmax > kHardMaxDepth) throw ResourceError("--nmax above " + std::to_string(kHardMaxDepth));
  print_warnings(oracle->warnings());
  const SmallnessProfile p = smallness_profile(*oracle, cfg.nmax);
  json j;
  j["schema"] = "sumdens.profile/1";
  j["config"] = cfg.to_json();
  j["oracle"] = p.oracle;
  j["heuristic"] = p.heuristic;
  j["entries"] = json::array();
  for (const auto& e : p.entries)
    j["entries"].push_back({{"n", e.n}, {"modulus", e.modulus.str()}, {"covered", e.covered.str()},
                            {"epsilon", to_string(e.epsilon)}});
  j["verdict"] = to_string(p.verdict);
  write_text(cfg.out, j.dump(2) + "\n");
  if (!cfg.csv.empty()) {
    std::ostringstream os;
    os << "n,modulus,covered,epsilon\n";
    for (const auto& e : p.entries) os << e.n << ',' << e.modulus << ',' << e.covered << ',' << to_string(e.epsilon) << '\n';
    write_text(cfg.csv, os.str());
  }
  return kExitOk;
}

int report_outputs(const RunConfig& cfg, const DensityReport& r, const Tower& t, const CoverOracle& oracle) {
  print_warnings(r.warnings);
  write_text(cfg.out, to_json(r).dump(2) + "\n");
  if (!cfg.csv.empty()) write_text(cfg.csv, levels_csv(t, oracle));
  if (!cfg.horizons_csv.empty()) {
    std::ostringstream os;
    write_horizons_csv(os, r);
    write_text(cfg.horizons_csv, os.str());
  }
  std::ostream& log = cfg.out.empty() || cfg.out == "-" ? std::cerr : std::cout;
  if (!r.certificates.passed()) log << "certificate failure: " << r.certificates.summary() << '\n';
  log << (r.passed() ? "PASS" : "FAIL") << '\n';
  return r.passed() ? kExitOk : kExitCertificate;
}

DensityReport run_verify(const Tower& t, const CoverOracle& oracle, const RunConfig& cfg) {
  VerifyOptions vo;
  vo.proxies = !cfg.no_proxies;
  DensityReport r = verify_tower(t, oracle, cfg.horizon, vo);
  r.config = cfg.to_json();
  return r;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.tower.empty()) throw UsageError("--tower is required");
  Tower t;
  try {
    t = load_tower(cfg.tower);
  } catch (const ResourceError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("--tower: " + std::string(e.what()));
  }
  auto oracle = oracle_for(cfg.b.empty() ? t.oracle : cfg.b);
  return report_outputs(cfg, run_verify(t, *oracle, cfg), t, *oracle);
}

int cmd_estimate(const RunConfig& cfg) {
  const Rational alpha = parse_alpha(cfg.alpha);
  auto oracle = oracle_for(cfg.b);
  Tower t = construct(*oracle, alpha, cfg.depth, construct_options(cfg));
  t.config = cfg.to_json();
  return report_outputs(cfg, run_verify(t, *oracle, cfg), t, *oracle);
}

int cmd_axioms(const RunConfig& cfg) {
  UpperDensityFn mu;
  try {
    mu = density_fn_by_name(cfg.density);
  } catch (const std::exception& e) {
    throw UsageError("--density: " + std::string(e.what()));
  }
  const ConformanceReport r = axiom_suite(mu, cfg.samples, cfg.seed);
  json j = to_json(r);
  json out;
  out["schema"] = j["schema"];
  out["config"] = cfg.to_json();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "schema") out[it.key()] = it.value();
  write_text(cfg.out, out.dump(2) + "\n");
  std::ostream& log = cfg.out.empty() || cfg.out == "-" ? std::cerr : std::cout;
  log << r.passed_count() << "/" << r.axioms.size() << (r.all_passed() ? " PASS" : " FAIL") << '\n';
  return r.all_passed() ? kExitOk : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sumsets with prescribed arithmetic densities"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* construct_cmd = app.add_subcommand("construct", "Build a certified tower and write it as JSON");
  auto* cover_cmd = app.add_subcommand("cover", "Count (or list) the residues covered by B modulo m");
  auto* profile_cmd = app.add_subcommand("profile", "Smallness profile |cover(n!)|/n! for n <= nmax");
  auto* verify_cmd = app.add_subcommand("verify", "Re-certify a tower and check finite windows of A + B");
  auto* axioms_cmd = app.add_subcommand("axioms", "Check an upper-density evaluator against F1-F4");
  auto* estimate_cmd = app.add_subcommand("estimate", "Construct and verify in one run");

  for (auto* c : {construct_cmd, cover_cmd, profile_cmd, verify_cmd, estimate_cmd})
    c->add_option("--b", cfg.b, "Set B: primes, factorials, powers, factorial-plus-n, finite:<list>, file:<path>, "
                                "pred-enum:<path>:<bound>");
  for (auto* c : {construct_cmd, estimate_cmd}) {
    c->add_option("--alpha", cfg.alpha, "Target density p/q or exact decimal")->required();
    c->add_option("--depth", cfg.depth, "Tower depth N")->capture_default_str();
    c->add_flag("--allow-depth-11", cfg.allow_depth_11, "Permit N = 11");
    c->add_flag("--debug-linear-k-search", cfg.debug_linear_k_search, "Cross-check the k-search by bisection");
  }
  for (auto* c : {verify_cmd, estimate_cmd}) {
    c->add_option("--horizon", cfg.horizon, "Window [1, T]")->capture_default_str();
    c->add_option("--horizons-csv", cfg.horizons_csv, "Per-T rows as CSV");
    c->add_flag("--no-proxies", cfg.no_proxies, "Skip the density proxies");
  }
  for (auto* c : {construct_cmd, verify_cmd, estimate_cmd, profile_cmd})
    c->add_option("--csv", cfg.csv, "Per-level CSV output");
  for (auto* c : {construct_cmd, cover_cmd, profile_cmd, verify_cmd, axioms_cmd, estimate_cmd}) {
    c->add_option("--out", cfg.out, "Output file (default stdout)");
    c->add_option("--memory-cap", cfg.memory_cap, "Memory cap in bytes");
  }
  cover_cmd->add_option("--mod", cfg.mod, "Modulus m")->required();
  cover_cmd->add_flag("--dump", cfg.dump, "List the residues");
  profile_cmd->add_option("--nmax", cfg.nmax, "Largest n")->capture_default_str();
  verify_cmd->add_option("--tower", cfg.tower, "Tower JSON file")->required();
  axioms_cmd->add_option("--density", cfg.density, "buck or doubled")->capture_default_str();
  axioms_cmd->add_option("--samples", cfg.samples, "Random sets per axiom")->capture_default_str();
  axioms_cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "sumdens: error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cfg.memory_cap != 0) set_memory_cap(cfg.memory_cap);
    if (*construct_cmd) return cfg.command = "construct", cmd_construct(cfg);
    if (*cover_cmd) return cfg.command = "cover", cmd_cover(cfg);
    if (*profile_cmd) return cfg.command = "profile", cmd_profile(cfg);
    if (*verify_cmd) return cfg.command = "verify", cmd_verify(cfg);
    if (*axioms_cmd) return cfg.command = "axioms", cmd_axioms(cfg);
    if (*estimate_cmd) return cfg.command = "estimate", cmd_estimate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "sumdens: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "sumdens: resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const CertificateError& e) {
    std::cerr << "sumdens: certificate failure: " << e.what() << '\n';
    return kExitCertificate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sumdens: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    std::cerr << "sumdens: resource limit: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "sumdens: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
