#pragma once

// Finite-window checks of a tower: materialize A_N + B and (A_N minus the
// marked class) + B on [1, T], compare their frequencies with the exact
// certificates, and evaluate the empirical density proxies on them.

#include "sumdens/tower_json.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sumdens {

inline constexpr std::uint64_t kDefaultHorizonBudget = 10000000;

/// Indicator bitmaps over [0, T] of a lower and an upper approximation of A + B.
struct SumsetWindow {
  std::uint64_t horizon = 0;
  Bitmap lower;  // (A_N minus N!*N + h_N) + B, contained in A + B
  Bitmap upper;  // A_N + B, containing A + B

  /// Counts over [1, t] for t <= horizon.
  CountInterval count(std::uint64_t t) const {
    auto on = [&](const Bitmap& b) {
      return Integer(b.count_prefix(static_cast<std::size_t>(t) + 1) - (b.test(0) ? 1 : 0));
    };
    return {on(lower), on(upper)};
  }
};

namespace detail {

inline void require_horizon(std::uint64_t horizon, std::uint64_t budget) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (horizon > budget)
    throw ResourceError("horizon " + std::to_string(horizon) + " exceeds the enumeration budget " +
                        std::to_string(budget));
  require_memory(3 * (horizon / 8 + 16), "sumset window");
}

/// Smallest element of B in each class modulo m, among B cap [0, T]. Larger
/// elements of the same class add nothing to a periodic set of period m.
inline std::vector<std::uint64_t> class_minima(const std::vector<std::uint64_t>& members, std::uint64_t m) {
  std::vector<std::uint64_t> out;
  Bitmap seen(static_cast<std::size_t>(m));
  for (auto b : members) {
    const auto r = static_cast<std::size_t>(b % m);
    if (seen.test(r)) continue;
    seen.set(r);
    out.push_back(b);
  }
  return out;
}

inline Bitmap shifted_union(const Bitmap& base, const std::vector<std::uint64_t>& shifts) {
  Bitmap out(base.size());
  for (auto b : shifts)
    if (b < base.size()) out.or_range(base, 0, static_cast<std::size_t>(b), base.size() - static_cast<std::size_t>(b));
  return out;
}

}  // namespace detail

inline SumsetWindow sumset_window(const Tower& t, const CoverOracle& oracle, std::uint64_t horizon,
                                  std::uint64_t budget = kDefaultHorizonBudget) {
  detail::require_horizon(horizon, budget);
  const std::size_t len = static_cast<std::size_t>(horizon) + 1;
  const auto members = oracle.enumerate(horizon);
  SumsetWindow w{horizon, Bitmap(len), Bitmap(len)};
  if (members.empty()) return w;
  if (t.trivial()) {
    w.upper = detail::shifted_union(Bitmap::ones(len), {members.front()});
    w.lower = w.upper;
    return w;
  }
  const Level& lv = t.last();
  const auto m = lv.modulus.convert_to<std::uint64_t>();
  const auto minima = detail::class_minima(members, m);
  const Bitmap a_upper = tile(lv.H.bitmap(), len);
  const Bitmap a_lower = tile(lv.H_prime().bitmap(), len);
  w.upper = detail::shifted_union(a_upper, minima);
  w.lower = detail::shifted_union(a_lower, minima);
  return w;
}

/// Interval for |(A + B) cap [1, T]|.
inline CountInterval enumerate_sumset(const Tower& t, const CoverOracle& oracle, std::uint64_t horizon,
                                      std::uint64_t budget = kDefaultHorizonBudget) {
  return sumset_window(t, oracle, horizon, budget).count(horizon);
}

// ---------------------------------------------------------------------------
// Density proxies
// ---------------------------------------------------------------------------

struct ProxyValues {
  double asymptotic_liminf = 0;
  double asymptotic_limsup = 0;
  double banach = 0;
  double logarithmic = 0;
};

struct ProxyCheck {
  std::uint64_t horizon = 0;
  std::uint64_t banach_window = 0;
  double slack = 0;
  double lo = 0;  // certificate interval widened by the slack
  double hi = 0;
  ProxyValues lower;  // on the lower window
  ProxyValues upper;  // on the upper window
  bool passed = false;
};

inline ProxyValues proxies_of(const Bitmap& bits, std::uint64_t horizon, std::uint64_t window) {
  auto member = [&](std::uint64_t z) { return bits.test(static_cast<std::size_t>(z)); };
  const AsymptoticProxy a = empirical_asymptotic(member, horizon);
  return {a.liminf, a.limsup, empirical_banach(member, window, horizon), empirical_logarithmic(member, horizon)};
}

/// Asymptotic, Banach (window T/10) and logarithmic proxies on both windows,
/// each expected inside [L_N - slack, U_N + slack].
inline ProxyCheck cross_density_check(const Tower& t, const SumsetWindow& w, double slack = 0.03) {
  ProxyCheck out;
  out.horizon = w.horizon;
  out.banach_window = std::max<std::uint64_t>(1, w.horizon / 10);
  out.slack = slack;
  const Rational lo = t.trivial() ? Rational(1) : t.last().L;
  const Rational hi = t.trivial() ? Rational(1) : t.last().U;
  out.lo = to_double(lo) - slack;
  out.hi = to_double(hi) + slack;
  out.lower = proxies_of(w.lower, w.horizon, out.banach_window);
  out.upper = proxies_of(w.upper, w.horizon, out.banach_window);
  auto in = [&](double v) { return out.lo <= v && v <= out.hi; };
  auto all_in = [&](const ProxyValues& p) {
    return in(p.asymptotic_liminf) && in(p.asymptotic_limsup) && in(p.banach) && in(p.logarithmic);
  };
  out.passed = all_in(out.lower) && all_in(out.upper);
  return out;
}

inline ProxyCheck cross_density_check(const Tower& t, const CoverOracle& oracle, std::uint64_t horizon,
                                      double slack = 0.03) {
  return cross_density_check(t, sumset_window(t, oracle, horizon), slack);
}

// ---------------------------------------------------------------------------
// Consolidated report
// ---------------------------------------------------------------------------

struct EmpiricalRow {
  std::uint64_t horizon = 0;
  CountInterval count_A;
  CountInterval count_sum;
  double freq_lower = 0;
  double freq_upper = 0;
  double sampling_slack = 0;  // 10 / sqrt(T)
  double budget = 0;          // eps_N + 2/(N+1)! + sampling slack
  bool passed = false;
};

struct VerifyOptions {
  std::vector<std::uint64_t> grid;  // empty: {T/100, T/10, T}
  std::uint64_t budget = kDefaultHorizonBudget;
  bool proxies = true;
  double proxy_slack = 0.03;
};

struct DensityReport {
  Rational alpha;
  std::string oracle;
  bool exact = true;
  unsigned depth = 0;
  std::vector<std::string> warnings;
  CertificateReport certificates;
  DensityInterval a{0, 1};
  SumBounds sums;
  Rational tail;  // 2 / (N+1)!
  std::vector<EmpiricalRow> rows;
  std::optional<ProxyCheck> proxies;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  bool certified() const { return certificates.passed() && sums.width_ok && sums.contains_alpha; }
  bool empirical_passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const EmpiricalRow& r) { return r.passed; }) &&
           (!proxies || proxies->passed);
  }
  bool passed() const { return certified() && empirical_passed(); }
};

inline std::vector<std::uint64_t> default_grid(std::uint64_t horizon) {
  std::vector<std::uint64_t> g;
  for (std::uint64_t d : {100, 10, 1})
    if (horizon / d >= 1) g.push_back(horizon / d);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline DensityReport verify_tower(const Tower& t, const CoverOracle& oracle, std::uint64_t horizon,
                                  const VerifyOptions& opts = {}) {
  DensityReport r;
  r.alpha = t.alpha;
  r.oracle = t.oracle;
  r.exact = t.exact && oracle.exact();
  r.depth = t.depth;
  r.warnings = t.warnings;
  r.config = t.config;
  if (oracle.spec() != t.oracle)
    r.warnings.push_back("tower was built for " + t.oracle + " but is verified against " + oracle.spec());
  r.certificates = check_certificates(t, oracle);
  r.a = a_bounds(t);
  r.sums = sum_bounds(t, oracle);
  const unsigned N = t.trivial() ? 0 : t.last().n;
  r.tail = t.trivial() ? Rational(0) : Rational(Integer(2), factorial(N + 1));

  const SumsetWindow w = sumset_window(t, oracle, horizon, opts.budget);
  const auto grid = opts.grid.empty() ? default_grid(horizon) : opts.grid;
  const double lo = to_double(r.sums.final.lower());
  const double hi = to_double(r.sums.final.upper());
  for (auto T : grid) {
    if (T < 1 || T > horizon) throw std::invalid_argument("grid point " + std::to_string(T) + " outside [1, T]");
    EmpiricalRow row;
    row.horizon = T;
    row.count_A = count_A(t, Integer(T));
    row.count_sum = w.count(T);
    row.freq_lower = to_double(Rational(row.count_sum.lower, Integer(T)));
    row.freq_upper = to_double(Rational(row.count_sum.upper, Integer(T)));
    row.sampling_slack = 10.0 / std::sqrt(static_cast<double>(T));
    row.budget = to_double(r.sums.epsilon + r.tail) + row.sampling_slack;
    row.passed = lo - row.budget <= row.freq_lower && row.freq_upper <= hi + row.budget;
    r.rows.push_back(row);
  }
  if (opts.proxies) r.proxies = cross_density_check(t, w, opts.proxy_slack);
  return r;
}

inline DensityReport theorem_report(const CoverOracle& oracle, const Rational& alpha, unsigned depth,
                                    std::uint64_t horizon, const ConstructOptions& copts = {},
                                    const VerifyOptions& vopts = {}) {
  return verify_tower(construct(oracle, alpha, depth, copts), oracle, horizon, vopts);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline void write_levels_csv(std::ostream& os, const Tower& t, const CoverOracle& oracle) {
  os << "n,size_H,h,k,densityA,L,U,epsilon\n";
  for (const auto& lv : t.levels) {
    os << lv.n << ',' << lv.H.size() << ',' << lv.h << ',' << (lv.k_chosen ? std::to_string(*lv.k_chosen) : "")
       << ',' << to_string(lv.densityA) << ',' << to_string(lv.L) << ',' << to_string(lv.U) << ','
       << to_string(Rational(oracle.cover_count(lv.modulus), lv.modulus)) << '\n';
  }
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << std::fixed << v;
  return os.str();
}

inline void write_horizons_csv(std::ostream& os, const DensityReport& r) {
  os << "T,countA_lower,countA_upper,count_sum_lower,count_sum_upper,freq_lower,freq_upper,budget,pass\n";
  for (const auto& row : r.rows) {
    os << row.horizon << ',' << row.count_A.lower << ',' << row.count_A.upper << ',' << row.count_sum.lower << ','
       << row.count_sum.upper << ',' << format_double(row.freq_lower) << ',' << format_double(row.freq_upper) << ','
       << format_double(row.budget) << ',' << (row.passed ? "pass" : "fail") << '\n';
  }
}

inline nlohmann::ordered_json to_json(const ProxyValues& p) {
  nlohmann::ordered_json j;
  j["asymptotic_liminf"] = p.asymptotic_liminf;
  j["asymptotic_limsup"] = p.asymptotic_limsup;
  j["banach"] = p.banach;
  j["logarithmic"] = p.logarithmic;
  return j;
}

inline nlohmann::ordered_json to_json(const CertificateReport& c) {
  nlohmann::ordered_json j;
  j["passed"] = c.passed();
  j["heuristic"] = c.heuristic;
  j["first_failure"] = c.first_failure ? nlohmann::ordered_json(*c.first_failure) : nlohmann::ordered_json(nullptr);
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : c.levels) {
    nlohmann::ordered_json e;
    e["n"] = l.n;
    e["L"] = to_string(l.L);
    e["U"] = to_string(l.U);
    e["ok"] = l.ok();
    e["problems"] = l.problems;
    j["levels"].push_back(std::move(e));
  }
  return j;
}

inline nlohmann::ordered_json to_json(const DensityReport& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema"] = "sumdens.report/1";
  j["config"] = r.config;
  j["tower"] = {{"alpha", to_string(r.alpha)}, {"oracle", r.oracle}, {"exact", r.exact}, {"depth", r.depth}};
  j["warnings"] = r.warnings;
  j["levels"] = json::array();
  const auto& cl = r.certificates.levels;
  for (std::size_t i = 0; i < r.sums.levels.size(); ++i) {
    const auto& b = r.sums.levels[i];
    json e;
    e["n"] = b.n;
    e["epsilon"] = to_string(b.epsilon);
    e["L"] = to_string(b.L);
    e["U"] = to_string(b.U);
    if (i < cl.size()) e["certified"] = cl[i].ok();
    j["levels"].push_back(std::move(e));
  }
  j["certificates"] = to_json(r.certificates);
  j["a_bounds"] = {{"lower", to_string(r.a.lower())}, {"upper", to_string(r.a.upper())}};
  j["sum_bounds"] = {{"lower", to_string(r.sums.final.lower())},
                     {"upper", to_string(r.sums.final.upper())},
                     {"epsilon", to_string(r.sums.epsilon)},
                     {"width_ok", r.sums.width_ok},
                     {"contains_alpha", r.sums.contains_alpha},
                     {"heuristic", r.sums.heuristic}};
  j["budget"] = {{"epsilon", to_string(r.sums.epsilon)}, {"tail", to_string(r.tail)}, {"sampling", "10/sqrt(T)"}};
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    json e;
    e["T"] = row.horizon;
    e["count_A"] = {row.count_A.lower.str(), row.count_A.upper.str()};
    e["count_sum"] = {row.count_sum.lower.str(), row.count_sum.upper.str()};
    e["freq_lower"] = row.freq_lower;
    e["freq_upper"] = row.freq_upper;
    e["sampling_slack"] = row.sampling_slack;
    e["budget"] = row.budget;
    e["verdict"] = row.passed ? "pass" : "fail";
    j["rows"].push_back(std::move(e));
  }
  if (r.proxies) {
    const auto& p = *r.proxies;
    j["proxies"] = {{"T", p.horizon}, {"banach_window", p.banach_window}, {"slack", p.slack},
                    {"interval", {p.lo, p.hi}}, {"lower", to_json(p.lower)}, {"upper", to_json(p.upper)},
                    {"verdict", p.passed ? "pass" : "fail"}};
  } else {
    j["proxies"] = nullptr;
  }
  j["certified"] = r.certified();
  j["verdict"] = r.passed() ? "PASS" : "FAIL";
  return j;
}

}  // namespace sumdens
