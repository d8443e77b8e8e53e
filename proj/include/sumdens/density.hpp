#pragma once

// Upper quasi-densities and their relatives. The Buck density is exact
// (Rational) on periodic and finite sets; the asymptotic, Banach and
// logarithmic estimators are finite-horizon binary64 proxies used only for
// cross-checking and never feed construction decisions.

#include "sumdens/periodic_set.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumdens {

/// Closed interval [lower, upper] inside [0, 1].
class DensityInterval {
 public:
  DensityInterval(Rational lower, Rational upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_ > upper_) throw std::invalid_argument("density interval with lower > upper");
    if (lower_ < 0 || upper_ > 1) throw std::invalid_argument("density interval outside [0, 1]");
  }

  const Rational& lower() const { return lower_; }
  const Rational& upper() const { return upper_; }
  Rational width() const { return upper_ - lower_; }
  bool contains(const Rational& x) const { return lower_ <= x && x <= upper_; }

  friend bool operator==(const DensityInterval&, const DensityInterval&) = default;

 private:
  Rational lower_;
  Rational upper_;
};

/// Upper Buck density of a periodic set. The set is its own cover from the
/// family of finite unions of progressions, and every cover has asymptotic
/// density at least |H|/k, so the infimum is attained.
inline Rational buck_upper_periodic(const PeriodicSet& p) { return density(p); }

/// Finite sets are covered by m*N + (S mod m) for every m, with density at
/// most |S|/m, so the infimum is zero.
inline Rational buck_upper_finite(std::span<const Integer> /*members*/) { return 0; }

/// mu_*(X) from mu^*(N \ X).
inline Rational conjugate(const Rational& value_of_complement) {
  if (value_of_complement < 0 || value_of_complement > 1)
    throw std::invalid_argument("conjugate expects a value in [0, 1], got " + to_string(value_of_complement));
  return Rational(1) - value_of_complement;
}

/// X lies in the domain of the induced density iff its lower and upper values agree.
inline bool in_domain(const Rational& lower, const Rational& upper) {
  if (lower > upper) throw std::invalid_argument("in_domain: lower exceeds upper");
  return lower == upper;
}

/// A named upper-density evaluator over set descriptions.
struct UpperDensityFn {
  std::string name;
  bool exact = true;
  std::function<Rational(const PeriodicSet&)> on_periodic;
  std::function<Rational(std::span<const Integer>)> on_finite;  // may be empty

  Rational operator()(const PeriodicSet& p) const { return on_periodic(p); }
};

inline UpperDensityFn buck_density_fn() {
  return {"buck", true, [](const PeriodicSet& p) { return buck_upper_periodic(p); },
          [](std::span<const Integer> s) { return buck_upper_finite(s); }};
}

// ---------------------------------------------------------------------------
// Empirical estimators
// ---------------------------------------------------------------------------

template <class P>
concept MembershipPredicate = std::predicate<P&, std::uint64_t>;

struct AsymptoticProxy {
  double liminf = 0;  // min of |X cap [1,n]|/n over the grid
  double limsup = 0;  // max of the same
};

/// Log-spaced sample points in [max(1, T/100), T], always including T.
inline std::vector<std::uint64_t> log_grid(std::uint64_t horizon, unsigned points = 64) {
  std::vector<std::uint64_t> grid;
  const std::uint64_t lo = std::max<std::uint64_t>(1, horizon / 100);
  if (lo >= horizon) return {horizon};
  const double ratio = std::log(static_cast<double>(horizon) / static_cast<double>(lo));
  for (unsigned i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    auto n = static_cast<std::uint64_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * t)));
    grid.push_back(std::clamp<std::uint64_t>(n, lo, horizon));
  }
  grid.back() = horizon;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

template <MembershipPredicate Pred>
AsymptoticProxy empirical_asymptotic(Pred&& member, std::uint64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("empirical_asymptotic: horizon must be at least 1");
  const auto grid = log_grid(horizon);
  AsymptoticProxy out{1.0, 0.0};
  std::uint64_t count = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= horizon && next < grid.size(); ++n) {
    if (member(n)) ++count;
    if (n == grid[next]) {
      const double f = static_cast<double>(count) / static_cast<double>(n);
      out.liminf = std::min(out.liminf, f);
      out.limsup = std::max(out.limsup, f);
      ++next;
    }
  }
  return out;
}

/// Max over windows [s, s + w) inside [1, T] of |X cap window| / w.
template <MembershipPredicate Pred>
double empirical_banach(Pred&& member, std::uint64_t window, std::uint64_t horizon) {
  if (window < 1 || window > horizon) throw std::invalid_argument("empirical_banach: need 1 <= w <= T");
  std::vector<char> ring(window, 0);
  std::uint64_t count = 0;
  std::uint64_t best = 0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const std::size_t slot = (n - 1) % window;
    count -= static_cast<std::uint64_t>(ring[slot]);
    ring[slot] = member(n) ? 1 : 0;
    count += static_cast<std::uint64_t>(ring[slot]);
    if (n >= window) best = std::max(best, count);
  }
  return static_cast<double>(best) / static_cast<double>(window);
}

/// (sum of 1/i over members i in [s, T]) / (sum of 1/i for s <= i <= T), with s = 1 by default.
template <MembershipPredicate Pred>
double empirical_logarithmic(Pred&& member, std::uint64_t horizon, std::uint64_t start = 1) {
  if (horizon < 1) throw std::invalid_argument("empirical_logarithmic: horizon must be at least 1");
  if (start < 1 || start > horizon) throw std::invalid_argument("empirical_logarithmic: need 1 <= start <= T");
  double hit = 0;
  double total = 0;
  // Summing from the small terms upward keeps the rounding error negligible.
  for (std::uint64_t i = horizon; i >= start; --i) {
    const double w = 1.0 / static_cast<double>(i);
    total += w;
    if (member(i)) hit += w;
  }
  return hit / total;
}

}  // namespace sumdens
