#pragma once

// The tower (H_n, h_n): H_n is a residue set mod n!, h_n a marked member,
// and A = intersection of the sets A_n = n!*N + H_n. Each level carries exact
// Buck densities L_n of (A_n minus the class h_n) + B and U_n of A_n + B.

#include "sumdens/cover_oracle.hpp"
#include "sumdens/density.hpp"
#include "sumdens/periodic_set.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sumdens {

inline constexpr unsigned kDefaultMaxDepth = 10;
inline constexpr unsigned kHardMaxDepth = 11;

struct Level {
  unsigned n = 0;
  Integer modulus;  // n!
  ResidueSet H;
  Integer h;
  std::optional<unsigned> k_chosen;  // absent at level 1
  Rational densityA;
  Rational L;
  Rational U;

  /// H minus the marked residue h.
  ResidueSet H_prime() const {
    return set_difference(H, ResidueSet::from_values(modulus, std::span<const Integer>(&h, 1)));
  }
  PeriodicSet A() const { return PeriodicSet(H); }
};

struct Tower {
  Rational alpha;
  std::string oracle;
  bool exact = true;
  unsigned depth = 0;
  std::vector<Level> levels;  // empty for the trivial tower
  std::vector<std::string> warnings;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  /// alpha = 1 is handled by A = N, with no levels.
  bool trivial() const { return levels.empty(); }
  const Level& last() const { return levels.back(); }
};

enum class KSearch {
  linear,       // incremental scan from the base sumset
  binary,       // bisection over [0, m], each probe rebuilt from the base
  cross_check,  // both, failing on disagreement
};

struct ConstructOptions {
  bool allow_depth_11 = false;
  KSearch k_search = KSearch::linear;
};

inline void check_depth(unsigned depth, bool allow_depth_11) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (depth > kHardMaxDepth)
    throw ResourceError("depth " + std::to_string(depth) + " exceeds the dense budget (" +
                        std::to_string(kHardMaxDepth) + "! is the largest supported modulus)");
  if (depth > kDefaultMaxDepth && !allow_depth_11)
    throw ResourceError("depth " + std::to_string(depth) + " needs the depth-11 opt-in");
}

/// Level 1: H_1 = {0} mod 1, h_1 = 0.
inline Level base_level(const CoverOracle& oracle) {
  const ResidueSet c = oracle.cover(Integer(1));
  if (c.empty()) throw std::invalid_argument("oracle " + oracle.spec() + " describes an empty set");
  return {1, 1, ResidueSet::full(1), 0, std::nullopt, 1, 0, 1};
}

namespace detail {

inline bool exceeds(std::size_t count, std::size_t modulus, const Rational& alpha) {
  return Rational(Integer(count), Integer(modulus)) > alpha;
}

struct StepResult {
  Level level;
  Bitmap lower_sum;  // (H'_{m+1} + cover) mod (m+1)!, reused by the next step
};

inline std::size_t linear_k(const Bitmap& base, const Bitmap& c, std::size_t h, std::size_t stride, unsigned m,
                            const Rational& alpha, Bitmap& lower, Bitmap& upper) {
  Bitmap acc = base;
  for (unsigned j = 0; j <= m; ++j) {
    Bitmap next = acc;
    next.rotate_or(c, h + j * stride);
    if (exceeds(next.count(), next.size(), alpha)) {
      lower = std::move(acc);
      upper = std::move(next);
      return j;
    }
    acc = std::move(next);
  }
  throw CertificateError("no k in [0, " + std::to_string(m) + "] lifts the density above alpha at level " +
                         std::to_string(m + 1));
}

inline Bitmap candidate(const Bitmap& base, const Bitmap& c, std::size_t h, std::size_t stride, std::size_t j) {
  Bitmap out = base;
  for (std::size_t i = 0; i <= j; ++i) out.rotate_or(c, h + i * stride);
  return out;
}

inline std::size_t binary_k(const Bitmap& base, const Bitmap& c, std::size_t h, std::size_t stride, unsigned m,
                            const Rational& alpha) {
  std::size_t lo = 0, hi = m;
  if (!exceeds(candidate(base, c, h, stride, hi).count(), base.size(), alpha))
    throw CertificateError("no k in [0, " + std::to_string(m) + "] lifts the density above alpha at level " +
                           std::to_string(m + 1));
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (exceeds(candidate(base, c, h, stride, mid).count(), base.size(), alpha))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace detail

/// From level m to m + 1 given B's cover mod (m+1)!. `prev_lower_sum`, when
/// given, must be (H'_m + cover) mod m!; otherwise it is recomputed.
inline detail::StepResult step(const Level& prev, const ResidueSet& cover_next, const Rational& alpha,
                               const ConstructOptions& opts = {}, const Bitmap* prev_lower_sum = nullptr) {
  const unsigned m = prev.n;
  const Integer big = prev.modulus * (m + 1);
  if (cover_next.modulus() != big)
    throw std::invalid_argument("step: cover modulus " + cover_next.modulus().str() + " is not " + big.str());
  if (!(prev.L <= alpha && alpha < prev.U))
    throw CertificateError("step: level " + std::to_string(m) + " is not certified for alpha = " + to_string(alpha));
  ResidueSet::check_modulus(big);
  if (!is_dense_modulus(big)) throw ResourceError("step: modulus " + big.str() + " exceeds the dense budget");

  const std::size_t M = ResidueSet::dense_size(big);
  const std::size_t stride = prev.modulus.convert_to<std::size_t>();
  const std::size_t h = prev.h.convert_to<std::size_t>();
  const Bitmap& c = cover_next.bitmap();
  require_memory(4 * (Bitmap::word_count(M) + 1) * 8, "construction step");

  Bitmap small_sum = prev_lower_sum ? *prev_lower_sum
                                    : sumset(prev.H_prime(), reduce(cover_next, prev.modulus)).bitmap();
  const Bitmap base = tile(small_sum, M);

  Bitmap lower, upper;
  std::size_t k = 0;
  switch (opts.k_search) {
    case KSearch::linear:
      k = detail::linear_k(base, c, h, stride, m, alpha, lower, upper);
      break;
    case KSearch::binary:
      k = detail::binary_k(base, c, h, stride, m, alpha);
      lower = k == 0 ? base : detail::candidate(base, c, h, stride, k - 1);
      upper = detail::candidate(base, c, h, stride, k);
      break;
    case KSearch::cross_check: {
      k = detail::linear_k(base, c, h, stride, m, alpha, lower, upper);
      const std::size_t kb = detail::binary_k(base, c, h, stride, m, alpha);
      if (kb != k)
        throw CertificateError("k-search disagreement at level " + std::to_string(m + 1) + ": linear " +
                               std::to_string(k) + ", binary " + std::to_string(kb));
      break;
    }
  }

  Bitmap hb = tile(prev.H_prime().bitmap(), M);
  for (std::size_t i = 0; i <= k; ++i) hb.set(h + i * stride);

  Level next;
  next.n = m + 1;
  next.modulus = big;
  next.h = Integer(h + k * stride);
  next.k_chosen = static_cast<unsigned>(k);
  next.L = Rational(Integer(lower.count()), big);
  next.U = Rational(Integer(upper.count()), big);
  next.H = ResidueSet::from_bitmap(big, std::move(hb));
  next.densityA = next.H.density();
  if (!(next.L <= alpha && alpha < next.U))
    throw CertificateError("level " + std::to_string(m + 1) + " violates L <= alpha < U");
  return {std::move(next), std::move(lower)};
}

inline Tower construct(const CoverOracle& oracle, const Rational& alpha, unsigned depth,
                       const ConstructOptions& opts = {}) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0, 1], got " + to_string(alpha));
  check_depth(depth, opts.allow_depth_11);
  Tower t;
  t.alpha = alpha;
  t.oracle = oracle.spec();
  t.exact = oracle.exact();
  t.depth = depth;
  if (!t.exact) t.warnings.push_back("oracle " + t.oracle + " is under-approximate; certificates are heuristic");
  for (const auto& w : oracle.warnings()) t.warnings.push_back(w);
  if (alpha == 1) {
    (void)base_level(oracle);  // still rejects an empty B
    return t;
  }

  t.levels.push_back(base_level(oracle));
  Bitmap lower_sum(1);  // (H'_1 + B) mod 1 is empty
  for (unsigned n = 2; n <= depth; ++n) {
    const ResidueSet c = oracle.cover(factorial(n));
    auto r = step(t.levels.back(), c, alpha, opts, &lower_sum);
    lower_sum = std::move(r.lower_sum);
    t.levels.push_back(std::move(r.level));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Independent certification
// ---------------------------------------------------------------------------

struct LevelCheck {
  unsigned n = 0;
  Rational L;  // recomputed
  Rational U;  // recomputed
  bool lower_ok = false;     // L <= alpha
  bool upper_ok = false;     // alpha < U
  bool stored_ok = false;    // stored modulus, h in H, densityA, L, U, k and h recurrence agree
  bool nest_lower_ok = true;  // rebase(H'_n) subset of H_{n+1}
  bool nest_upper_ok = true;  // H_{n+1} subset of rebase(H_n)
  std::vector<std::string> problems;

  bool ok() const { return lower_ok && upper_ok && stored_ok && nest_lower_ok && nest_upper_ok; }
};

struct CertificateReport {
  bool heuristic = false;
  std::vector<LevelCheck> levels;
  std::optional<unsigned> first_failure;

  bool passed() const { return !first_failure.has_value(); }
  std::string summary() const {
    if (passed()) return "all " + std::to_string(levels.size()) + " levels certified";
    for (const auto& l : levels)
      if (l.n == *first_failure) return "level " + std::to_string(l.n) + ": " + l.problems.front();
    return "level " + std::to_string(*first_failure) + " failed";
  }
};

/// Recomputes every certificate with a direct sumset at modulus n! and checks
/// the nesting between consecutive levels.
inline CertificateReport check_certificates(const Tower& t, const CoverOracle& oracle) {
  CertificateReport report;
  report.heuristic = !oracle.exact() || !t.exact;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    const Level& lv = t.levels[i];
    LevelCheck chk;
    chk.n = lv.n;
    auto problem = [&](std::string what) { chk.problems.push_back(std::move(what)); };

    const Integer expected_mod = factorial(lv.n);
    chk.stored_ok = lv.modulus == expected_mod && lv.H.modulus() == expected_mod && lv.n == i + 1;
    if (!chk.stored_ok) {
      problem("modulus is not " + expected_mod.str());
      report.levels.push_back(std::move(chk));
      if (!report.first_failure) report.first_failure = lv.n;
      continue;
    }
    if (!lv.H.contains(lv.h)) {
      chk.stored_ok = false;
      problem("marked residue h = " + lv.h.str() + " is not in H");
    }

    const ResidueSet c = oracle.cover(lv.modulus);
    const ResidueSet hp = lv.H_prime();
    const ResidueSet lower = sumset(hp, c);
    const ResidueSet upper = set_union(lower, shift(c, lv.h));
    chk.L = lower.density();
    chk.U = upper.density();
    chk.lower_ok = chk.L <= t.alpha;
    chk.upper_ok = t.alpha < chk.U;
    if (!chk.lower_ok) problem("L = " + to_string(chk.L) + " exceeds alpha");
    if (!chk.upper_ok) problem("U = " + to_string(chk.U) + " does not exceed alpha");

    if (lv.densityA != lv.H.density() || lv.L != chk.L || lv.U != chk.U) {
      chk.stored_ok = false;
      problem("stored densities differ from recomputed values");
    }
    if (i == 0) {
      if (lv.k_chosen || lv.h != 0) {
        chk.stored_ok = false;
        problem("level 1 must be H = {0}, h = 0 with no k");
      }
    } else {
      const Level& pv = t.levels[i - 1];
      if (!lv.k_chosen || *lv.k_chosen >= lv.n || lv.h != pv.h + Integer(*lv.k_chosen) * pv.modulus) {
        chk.stored_ok = false;
        problem("h does not follow h_prev + k * (n-1)!");
      }
    }

    if (i + 1 < t.levels.size()) {
      const Level& nx = t.levels[i + 1];
      if (nx.H.modulus() == lv.modulus * (lv.n + 1)) {
        chk.nest_lower_ok = is_subset(rebase(hp, nx.H.modulus()), nx.H);
        chk.nest_upper_ok = is_subset(nx.H, rebase(lv.H, nx.H.modulus()));
      } else {
        chk.nest_lower_ok = chk.nest_upper_ok = false;
      }
      if (!chk.nest_lower_ok)
        problem("nesting " + std::to_string(lv.n) + "->" + std::to_string(nx.n) + ": H'_n is not inside H_{n+1}");
      if (!chk.nest_upper_ok)
        problem("nesting " + std::to_string(lv.n) + "->" + std::to_string(nx.n) + ": H_{n+1} is not inside H_n");
    }
    if (!chk.ok() && !report.first_failure) report.first_failure = lv.n;
    report.levels.push_back(std::move(chk));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Bounds on A and A + B
// ---------------------------------------------------------------------------

/// Buck density of A lies in [densityA(N) - 1/N!, densityA(N)].
inline DensityInterval a_bounds(const Tower& t) {
  if (t.trivial()) return {1, 1};
  const Level& lv = t.last();
  Rational lo = lv.densityA - Rational(1, lv.modulus);
  if (lo < 0) lo = 0;
  return {lo, lv.densityA};
}

struct LevelBounds {
  unsigned n = 0;
  Rational L;
  Rational U;
  Rational epsilon;  // |cover(n!)| / n!
};

struct SumBounds {
  std::vector<LevelBounds> levels;
  DensityInterval final{0, 1};
  Rational epsilon;  // of the last level
  bool width_ok = true;
  bool contains_alpha = true;
  bool heuristic = false;
};

/// Final [L_N, U_N] certifies alpha - eps_N < lower density of A + B and
/// upper density of A + B <= alpha + eps_N.
inline SumBounds sum_bounds(const Tower& t, const CoverOracle& oracle) {
  SumBounds out;
  out.heuristic = !oracle.exact() || !t.exact;
  if (t.trivial()) {
    out.final = DensityInterval(1, 1);
    out.epsilon = 0;
    return out;
  }
  for (const auto& lv : t.levels)
    out.levels.push_back({lv.n, lv.L, lv.U, Rational(oracle.cover_count(lv.modulus), lv.modulus)});
  const auto& last = out.levels.back();
  out.final = DensityInterval(last.L, last.U);
  out.epsilon = last.epsilon;
  out.width_ok = out.final.width() <= out.epsilon;
  out.contains_alpha = out.final.contains(t.alpha);
  return out;
}

enum class Membership { out, in_at_depth, exceptional };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::out: return "out";
    case Membership::in_at_depth: return "in_at_depth";
    case Membership::exceptional: return "exceptional";
  }
  return "out";
}

/// `out` is definitive (A is inside every A_n); `in_at_depth` means x lies in
/// A_N off the marked class, hence in A_{N+1}; the marked class is undecided.
inline Membership membership(const Tower& t, const Integer& x) {
  if (x < 0) throw std::invalid_argument("membership: x must be non-negative");
  if (t.trivial()) return Membership::in_at_depth;
  for (const auto& lv : t.levels)
    if (!lv.H.contains(x % lv.modulus)) return Membership::out;
  return x % t.last().modulus == t.last().h ? Membership::exceptional : Membership::in_at_depth;
}

struct CountInterval {
  Integer lower;
  Integer upper;
};

namespace detail {

/// |{x in [1, T] : x mod m in H}| for a dense H.
inline Integer count_in_window(const ResidueSet& H, const Integer& horizon) {
  const Integer m = H.modulus();
  const Integer span = horizon + 1;  // [0, T]
  const Integer blocks = span / m;
  const std::size_t rest = (span % m).convert_to<std::size_t>();
  Integer count = blocks * H.size() + H.bitmap().count_prefix(rest);
  if (H.contains(std::uint64_t{0})) count -= 1;
  return count;
}

/// |{x in [1, T] : x = h mod m}|.
inline Integer count_class(const Integer& m, const Integer& h, const Integer& horizon) {
  if (h == 0) return horizon / m;
  if (h > horizon) return 0;
  return (horizon - h) / m + 1;
}

}  // namespace detail

/// Interval for |A cap [1, T]|: A_N gives the upper end; removing the marked
/// class and the density still removable at deeper levels gives the lower.
inline CountInterval count_A(const Tower& t, const Integer& horizon) {
  if (horizon < 0) throw std::invalid_argument("count_A: horizon must be non-negative");
  if (t.trivial()) return {horizon, horizon};
  const Level& lv = t.last();
  const Integer upper = detail::count_in_window(lv.H, horizon);
  const unsigned N = lv.n;
  // sum_{n > N} 1/n! <= (N + 2) / ((N + 1) (N + 1)!)
  const Integer tail_num = horizon * (N + 2);
  const Integer tail_den = Integer(N + 1) * factorial(N + 1);
  const Integer tail = (tail_num + tail_den - 1) / tail_den;
  Integer lower = upper - detail::count_class(lv.modulus, lv.h, horizon) - tail;
  if (lower < 0) lower = 0;
  return {lower, upper};
}

}  // namespace sumdens
