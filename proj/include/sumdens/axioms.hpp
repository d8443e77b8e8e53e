#pragma once

// Conformance checks of an upper-density evaluator against the four axioms
// of an arithmetic upper density, on pseudo-random periodic sets:
//   F1  mu(X) <= mu(N) = 1
//   F2  X subset of Y implies mu(X) <= mu(Y)
//   F3  mu(X u Y) <= mu(X) + mu(Y)
//   F4  mu(k X + h) = mu(X) / k

#include "sumdens/density.hpp"
#include "sumdens/periodic_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sumdens {

/// Uniform integer in [lo, hi] from raw engine output, identical on every platform.
inline std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return rng();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + x % span;
}

/// Random periodic set with modulus in [1, max_modulus] and a random fill ratio.
inline PeriodicSet random_periodic(std::mt19937_64& rng, std::uint64_t max_modulus) {
  const std::uint64_t k = uniform_u64(rng, 1, max_modulus);
  const std::uint64_t fill = uniform_u64(rng, 0, 1000);  // per-mille inclusion rate
  Bitmap bits(static_cast<std::size_t>(k));
  for (std::uint64_t r = 0; r < k; ++r)
    if (uniform_u64(rng, 0, 999) < fill) bits.set(static_cast<std::size_t>(r));
  return PeriodicSet(ResidueSet::from_bitmap(Integer(k), std::move(bits)));
}

struct AxiomResult {
  std::string axiom;
  std::size_t checked = 0;
  bool passed = true;
  std::string detail;                 // set on failure
  std::vector<PeriodicSet> witness;   // the offending sets, on failure
};

struct ConformanceReport {
  std::string density;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<AxiomResult> axioms;

  bool all_passed() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.passed; });
  }
  std::size_t passed_count() const {
    return static_cast<std::size_t>(std::count_if(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.passed; }));
  }
};

namespace detail {

inline void fail(AxiomResult& r, std::string detail, std::vector<PeriodicSet> witness) {
  if (!r.passed) return;  // keep the first counterexample
  r.passed = false;
  r.detail = std::move(detail);
  r.witness = std::move(witness);
}

}  // namespace detail

inline ConformanceReport axiom_suite(const UpperDensityFn& mu, std::size_t samples, std::uint64_t seed,
                                     std::uint64_t max_modulus = 10000) {
  ConformanceReport report{mu.name, samples, seed, {}};
  std::mt19937_64 rng(seed);

  AxiomResult f1, f2, f3, f4;
  f1.axiom = "F1";
  f2.axiom = "F2";
  f3.axiom = "F3";
  f4.axiom = "F4";
  const Rational whole = mu(PeriodicSet::naturals());
  if (whole != 1) detail::fail(f1, "mu(N) = " + to_string(whole) + ", expected 1/1", {PeriodicSet::naturals()});

  for (std::size_t i = 0; i < samples; ++i) {
    // F1
    {
      PeriodicSet x = random_periodic(rng, max_modulus);
      Rational v = mu(x);
      ++f1.checked;
      if (v > whole) detail::fail(f1, "mu(X) = " + to_string(v) + " exceeds mu(N) = " + to_string(whole), {x});
    }
    // F2: Y is X rebased by a small factor plus extra residues.
    {
      PeriodicSet x = random_periodic(rng, max_modulus);
      const std::uint64_t k = x.modulus().convert_to<std::uint64_t>();
      const std::uint64_t t = uniform_u64(rng, 1, std::max<std::uint64_t>(1, max_modulus / k));
      ResidueSet grown = rebase(x.residues(), Integer(k * t));
      Bitmap bits = grown.bitmap();
      const std::uint64_t extra = uniform_u64(rng, 0, k * t);
      for (std::uint64_t j = 0; j < extra; ++j) bits.set(static_cast<std::size_t>(uniform_u64(rng, 0, k * t - 1)));
      PeriodicSet y(ResidueSet::from_bitmap(Integer(k * t), std::move(bits)));
      Rational vx = mu(x), vy = mu(y);
      ++f2.checked;
      if (vx > vy)
        detail::fail(f2, "X subset of Y but mu(X) = " + to_string(vx) + " > mu(Y) = " + to_string(vy), {x, y});
    }
    // F3: independent moduli, resampled while the lcm is unreasonably large.
    {
      PeriodicSet x = random_periodic(rng, max_modulus);
      PeriodicSet y = random_periodic(rng, max_modulus);
      while (lcm(x.modulus(), y.modulus()) > 1000000) y = random_periodic(rng, max_modulus);
      Rational vu = mu(unite(x, y)), vx = mu(x), vy = mu(y);
      ++f3.checked;
      if (vu > vx + vy)
        detail::fail(f3, "mu(X u Y) = " + to_string(vu) + " > mu(X) + mu(Y) = " + to_string(vx + vy), {x, y});
    }
    // F4
    {
      PeriodicSet x = random_periodic(rng, max_modulus);
      const std::uint64_t k = uniform_u64(rng, 1, 100);
      const std::uint64_t h = uniform_u64(rng, 0, 100);
      PeriodicSet image = affine(x, Integer(k), Integer(h));
      Rational lhs = mu(image), rhs = mu(x) / Rational(k);
      ++f4.checked;
      if (lhs != rhs)
        detail::fail(f4,
                     "mu(" + std::to_string(k) + "X + " + std::to_string(h) + ") = " + to_string(lhs) +
                         " but mu(X)/" + std::to_string(k) + " = " + to_string(rhs),
                     {x, image});
    }
  }
  report.axioms = {std::move(f1), std::move(f2), std::move(f3), std::move(f4)};
  return report;
}

/// "buck", or "doubled": twice the Buck density, a deliberately broken
/// evaluator that violates F1.
inline UpperDensityFn density_fn_by_name(const std::string& name) {
  if (name == "buck") return buck_density_fn();
  if (name == "doubled")
    return {"doubled", true, [](const PeriodicSet& p) { return 2 * buck_upper_periodic(p); },
            [](std::span<const Integer>) { return Rational(0); }};
  throw std::invalid_argument("unknown density '" + name + "' (expected buck or doubled)");
}

inline nlohmann::ordered_json to_json(const ConformanceReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "sumdens.axioms/1";
  j["density"] = r.density;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["axioms"] = nlohmann::ordered_json::array();
  for (const auto& a : r.axioms) {
    nlohmann::ordered_json e;
    e["axiom"] = a.axiom;
    e["checked"] = a.checked;
    e["verdict"] = a.passed ? "pass" : "fail";
    if (!a.passed) {
      e["detail"] = a.detail;
      e["counterexample"] = nlohmann::ordered_json::array();
      for (const auto& w : a.witness) e["counterexample"].push_back(format_periodic(w));
    }
    j["axioms"].push_back(std::move(e));
  }
  j["passed"] = r.passed_count();
  j["total"] = r.axioms.size();
  return j;
}

}  // namespace sumdens
