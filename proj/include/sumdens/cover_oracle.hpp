#pragma once

// Residue covers: for a fixed set B and modulus m, the residues r such that
// the progression m*N + r meets B. These drive both the smallness test
// (|cover(n!)| = o(n!)) and every sumset in the construction.

#include "sumdens/errors.hpp"
#include "sumdens/number_theory.hpp"
#include "sumdens/residue_set.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sumdens {

enum class Exactness { exact, under_approximate };

class CoverOracle {
 public:
  virtual ~CoverOracle() = default;

  /// The spec string this oracle was built from, e.g. "primes" or "finite:0,3".
  virtual std::string spec() const = 0;
  virtual Exactness exactness() const { return Exactness::exact; }
  bool exact() const { return exactness() == Exactness::exact; }

  /// Residues r in [0, m) whose class meets B; exact oracles return the
  /// whole cover, under-approximate ones a subset of it.
  virtual ResidueSet cover(const Integer& m) const = 0;
  virtual Integer cover_count(const Integer& m) const { return cover(m).size(); }

  /// Members of B in [0, T], ascending.
  virtual std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const = 0;

  virtual std::vector<std::string> warnings() const { return {}; }
};

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

/// Every class coprime to m holds a prime (Dirichlet); the remaining classes
/// that meet the primes are exactly those of the primes dividing m.
inline ResidueSet primes_cover(const Integer& m) {
  if (m < 1) throw std::invalid_argument("primes_cover: modulus must be positive");
  const Factorization f = factorize(m);
  if (is_dense_modulus(m)) {
    ResidueSet::check_modulus(m);
    const std::size_t mm = ResidueSet::dense_size(m);
    Bitmap bits = Bitmap::ones(mm);
    for (const auto& pp : f) {
      const auto p = pp.prime.convert_to<std::size_t>();
      for (std::size_t r = 0; r < mm; r += p) bits.reset(r);
    }
    for (const auto& pp : f) bits.set(static_cast<std::size_t>(mod_floor(pp.prime, m).convert_to<std::size_t>()));
    return ResidueSet::from_bitmap(m, std::move(bits));
  }
  ResidueSet::require_sparse(euler_phi(f) + f.size(), "primes cover");
  ResidueSet::Sparse members;
  for (Integer r = 0; r < m; ++r) {
    bool coprime = std::none_of(f.begin(), f.end(), [&](const PrimePower& pp) { return r % pp.prime == 0; });
    bool divisor_prime = std::any_of(f.begin(), f.end(), [&](const PrimePower& pp) { return mod_floor(pp.prime, m) == r; });
    if (coprime || divisor_prime) members.push_back(r);
  }
  return ResidueSet::from_sorted_unique(m, std::move(members));
}

/// phi(m) coprime classes plus one class per prime divisor.
inline Integer primes_cover_count(const Integer& m) {
  const Factorization f = factorize(m);
  return euler_phi(f) + f.size();
}

// ---------------------------------------------------------------------------
// Factorials {j! : j >= 1}
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kMaxFactorialSteps = 100000000;

inline ResidueSet factorials_cover(const Integer& m) {
  if (m < 1) throw std::invalid_argument("factorials_cover: modulus must be positive");
  std::vector<Integer> values;
  Integer f = 1 % m;
  // Once m divides j!, every later factorial is 0 as well.
  for (std::uint64_t j = 1;; ++j) {
    if (j > kMaxFactorialSteps) throw ResourceError("factorials_cover: m = " + m.str() + " needs too many steps");
    f = f * j % m;
    values.push_back(f);
    if (f == 0) break;
  }
  return ResidueSet::from_values(m, std::span<const Integer>(values));
}

// ---------------------------------------------------------------------------
// Perfect powers {a^k : a >= 0, k >= 2}
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid on signed 128-bit to avoid overflow.
  i128 t = 0, new_t = 1;
  i128 r = m, new_r = a % m;
  while (new_r != 0) {
    i128 q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw std::logic_error("inverse_mod: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

// Image of x -> x^k on Z/q for a prime power q = p^e. It depends on k only
// through k itself when k < e, and through gcd(k, phi(q)) once k >= e (all
// non-units then vanish).
struct PowerImageKey {
  std::uint64_t small_k = 0;  // k when k < e, else 0
  std::uint64_t unit_gcd = 0;  // gcd(k, phi(q)) when k >= e, else 0
  auto operator<=>(const PowerImageKey&) const = default;
};

}  // namespace detail

/// Union over k in [2, v_max(m) + lambda(m) + 1] of the k-th power residues.
/// The k-th power map mod m is periodic in k with period dividing lambda(m)
/// once k >= v_max(m), so the schedule covers every exponent. Computed per
/// prime power and recombined by CRT.
inline ResidueSet perfect_powers_cover(const Integer& m) {
  if (m < 1) throw std::invalid_argument("perfect_powers_cover: modulus must be positive");
  if (!fits_u64(m) || m > Integer(std::uint64_t{1} << 62))
    throw ResourceError("perfect_powers_cover: modulus " + m.str() + " is too large to materialize");
  const std::uint64_t mm = m.convert_to<std::uint64_t>();
  const Factorization f = factorize(m);
  const std::uint64_t vmax = max_exponent(f);
  const Integer lambda = carmichael_lambda(f);
  if (!fits_u64(lambda + vmax + 1)) throw ResourceError("perfect_powers_cover: exponent schedule too long");
  const std::uint64_t last_k = vmax + lambda.convert_to<std::uint64_t>() + 1;

  struct Local {
    std::uint64_t q, e, phi;
    std::map<detail::PowerImageKey, std::size_t> index;  // key -> slot in images
    std::vector<Bitmap> images;
  };
  std::vector<Local> locals;
  for (const auto& pp : f) {
    const std::uint64_t q = pp.value().convert_to<std::uint64_t>();
    const std::uint64_t p = pp.prime.convert_to<std::uint64_t>();
    ResidueSet::check_modulus(Integer(q));
    locals.push_back({q, pp.exponent, q / p * (p - 1), {}, {}});
  }

  // Distinct tuples of per-prime-power images over the schedule.
  std::set<std::vector<std::size_t>> tuples;
  for (std::uint64_t k = 2; k <= last_k; ++k) {
    std::vector<std::size_t> tuple;
    tuple.reserve(locals.size());
    for (auto& loc : locals) {
      detail::PowerImageKey key = k < loc.e ? detail::PowerImageKey{k, 0} : detail::PowerImageKey{0, std::gcd(k, loc.phi)};
      auto [it, inserted] = loc.index.try_emplace(key, loc.images.size());
      if (inserted) {
        Bitmap img(static_cast<std::size_t>(loc.q));
        for (std::uint64_t x = 0; x < loc.q; ++x) img.set(static_cast<std::size_t>(powmod(x, k, loc.q)));
        loc.images.push_back(std::move(img));
      }
      tuple.push_back(it->second);
    }
    tuples.insert(std::move(tuple));
  }

  // Drop tuples whose product is contained in another tuple's product.
  std::vector<std::vector<std::size_t>> kept;
  std::vector<std::vector<std::size_t>> all(tuples.begin(), tuples.end());
  for (std::size_t a = 0; a < all.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < all.size() && !dominated; ++b) {
      if (a == b) continue;
      bool sub = true;
      for (std::size_t i = 0; i < locals.size() && sub; ++i)
        sub = locals[i].images[all[a][i]].is_subset_of(locals[i].images[all[b][i]]);
      // Equal products keep the lower index only.
      if (sub) {
        bool equal = true;
        for (std::size_t i = 0; i < locals.size() && equal; ++i)
          equal = locals[i].images[all[a][i]] == locals[i].images[all[b][i]];
        dominated = !equal || b < a;
      }
    }
    if (!dominated) kept.push_back(all[a]);
  }

  std::vector<std::uint64_t> coeff;
  for (const auto& loc : locals) {
    const std::uint64_t rest = mm / loc.q;
    coeff.push_back(mulmod(rest, detail::inverse_mod(rest % loc.q, loc.q), mm));
  }

  const bool dense = is_dense_modulus(m);
  Bitmap bits(dense ? static_cast<std::size_t>(mm) : 0);
  std::vector<Integer> sparse_vals;
  if (dense) ResidueSet::check_modulus(m);

  for (const auto& tuple : kept) {
    std::vector<std::vector<std::uint64_t>> parts;
    Integer product = 1;
    for (std::size_t i = 0; i < locals.size(); ++i) {
      std::vector<std::uint64_t> vals;
      locals[i].images[tuple[i]].for_each_set([&](std::size_t v) { vals.push_back(mulmod(v, coeff[i], mm)); });
      product *= vals.size();
      parts.push_back(std::move(vals));
    }
    if (!dense) ResidueSet::require_sparse(product + sparse_vals.size(), "perfect powers cover");
    // Depth-first walk over the CRT product.
    auto walk = [&](auto&& self, std::size_t i, std::uint64_t acc) -> void {
      if (i == parts.size()) {
        if (dense)
          bits.set(static_cast<std::size_t>(acc));
        else
          sparse_vals.emplace_back(acc);
        return;
      }
      for (std::uint64_t v : parts[i]) {
        std::uint64_t next = acc + v;
        if (next >= mm) next -= mm;
        self(self, i + 1, next);
      }
    };
    walk(walk, 0, 0);
  }
  if (dense) return ResidueSet::from_bitmap(m, std::move(bits));
  return ResidueSet::from_values(m, std::span<const Integer>(sparse_vals));
}

// ---------------------------------------------------------------------------
// Finite and enumerated sets
// ---------------------------------------------------------------------------

inline ResidueSet finite_cover(std::span<const Integer> members, const Integer& m) {
  if (members.empty()) throw std::invalid_argument("finite_cover: B must be non-empty");
  return ResidueSet::from_values(m, members);
}

/// {b mod m : 0 <= b <= T, pred(b)}; only a lower approximation of the cover
/// of an infinite set.
template <class Pred>
ResidueSet enumerated_cover(Pred&& pred, std::uint64_t horizon, const Integer& m) {
  if (horizon < 1) throw std::invalid_argument("enumerated_cover: horizon must be at least 1");
  std::vector<Integer> vals;
  for (std::uint64_t b = 0; b <= horizon; ++b)
    if (pred(b)) vals.emplace_back(b);
  return ResidueSet::from_values(m, std::span<const Integer>(vals));
}

// ---------------------------------------------------------------------------
// Oracle implementations
// ---------------------------------------------------------------------------

class PrimesOracle final : public CoverOracle {
 public:
  std::string spec() const override { return "primes"; }
  ResidueSet cover(const Integer& m) const override { return primes_cover(m); }
  Integer cover_count(const Integer& m) const override { return primes_cover_count(m); }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override { return primes_up_to(horizon); }
};

class FactorialsOracle final : public CoverOracle {
 public:
  std::string spec() const override { return "factorials"; }
  ResidueSet cover(const Integer& m) const override { return factorials_cover(m); }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    std::uint64_t f = 1;
    for (std::uint64_t j = 1; f <= horizon; ++j) {
      f *= j;
      if (f > horizon) break;
      if (out.empty() || out.back() != f) out.push_back(f);
      if (f > horizon / (j + 1)) break;
    }
    return out;
  }
};

class PerfectPowersOracle final : public CoverOracle {
 public:
  std::string spec() const override { return "powers"; }
  ResidueSet cover(const Integer& m) const override { return perfect_powers_cover(m); }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out{0};
    if (horizon >= 1) out.push_back(1);
    for (std::uint64_t a = 2; a <= horizon / a; ++a) {
      std::uint64_t v = a * a;
      while (true) {
        out.push_back(v);
        if (v > horizon / a) break;
        v *= a;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// {n! + n : n >= 0}: sparse, yet it meets every residue class of every modulus.
class FactorialPlusIndexOracle final : public CoverOracle {
 public:
  std::string spec() const override { return "factorial-plus-n"; }
  // Once m divides n!, n! + n = n (mod m), and n runs through every class.
  ResidueSet cover(const Integer& m) const override {
    if (m < 1) throw std::invalid_argument("factorial-plus-n cover: modulus must be positive");
    return ResidueSet::full(m);
  }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    std::uint64_t f = 1;
    for (std::uint64_t n = 0;; ++n) {
      if (n > 0) {
        if (f > (horizon) / n) break;
        f *= n;
      }
      if (f > horizon - std::min(horizon, n)) break;
      out.push_back(f + n);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

class FiniteOracle final : public CoverOracle {
 public:
  FiniteOracle(std::vector<Integer> members, std::string spec) : spec_(std::move(spec)) {
    if (members.empty()) throw std::invalid_argument("finite set B must be non-empty");
    for (const auto& v : members)
      if (v < 0) throw std::invalid_argument("finite set members must be non-negative");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
  }

  std::string spec() const override { return spec_; }
  ResidueSet cover(const Integer& m) const override { return finite_cover(members_, m); }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    for (const auto& v : members_) {
      if (v > horizon) break;
      out.push_back(v.convert_to<std::uint64_t>());
    }
    return out;
  }
  const std::vector<Integer>& members() const { return members_; }

 private:
  std::vector<Integer> members_;
  std::string spec_;
};

/// A user-supplied B known only through a finite enumeration up to a bound.
/// Covers are lower approximations and everything derived from them is heuristic.
class EnumeratedOracle final : public CoverOracle {
 public:
  EnumeratedOracle(std::vector<std::uint64_t> members, std::uint64_t bound, std::string spec)
      : bound_(bound), spec_(std::move(spec)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto v : members)
      if (v <= bound_) members_.push_back(v);
    if (members_.empty()) warnings_.push_back("enumerated set is empty up to " + std::to_string(bound_) +
                                              "; B must be non-empty");
  }

  template <class Pred>
  static EnumeratedOracle from_predicate(Pred&& pred, std::uint64_t bound, std::string spec) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t b = 0; b <= bound; ++b)
      if (pred(b)) members.push_back(b);
    return EnumeratedOracle(std::move(members), bound, std::move(spec));
  }

  std::string spec() const override { return spec_; }
  Exactness exactness() const override { return Exactness::under_approximate; }
  ResidueSet cover(const Integer& m) const override {
    std::vector<Integer> vals(members_.begin(), members_.end());
    return ResidueSet::from_values(m, std::span<const Integer>(vals));
  }
  std::vector<std::uint64_t> enumerate(std::uint64_t horizon) const override {
    std::vector<std::uint64_t> out;
    for (auto v : members_) {
      if (v > horizon) break;
      out.push_back(v);
    }
    return out;
  }
  std::vector<std::string> warnings() const override {
    auto w = warnings_;
    w.push_back("B is known only up to " + std::to_string(bound_) + "; covers are under-approximate");
    return w;
  }

 private:
  std::vector<std::uint64_t> members_;
  std::uint64_t bound_;
  std::string spec_;
  std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Spec strings
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Integer> parse_integer_list(std::string_view text) {
  std::vector<Integer> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_integer(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

inline std::vector<Integer> read_integer_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::vector<Integer> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_integer(line));
  }
  return out;
}

}  // namespace detail

/// primes | factorials | powers | factorial-plus-n | finite:<list> |
/// file:<path> | pred-enum:<path>:<bound>
inline std::unique_ptr<CoverOracle> make_oracle(std::string_view spec) {
  const std::string s(spec);
  if (s == "primes") return std::make_unique<PrimesOracle>();
  if (s == "factorials") return std::make_unique<FactorialsOracle>();
  if (s == "powers") return std::make_unique<PerfectPowersOracle>();
  if (s == "factorial-plus-n") return std::make_unique<FactorialPlusIndexOracle>();
  if (s.rfind("finite:", 0) == 0) return std::make_unique<FiniteOracle>(detail::parse_integer_list(spec.substr(7)), s);
  if (s.rfind("file:", 0) == 0) return std::make_unique<FiniteOracle>(detail::read_integer_file(s.substr(5)), s);
  if (s.rfind("pred-enum:", 0) == 0) {
    const std::string rest = s.substr(10);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("pred-enum spec needs <path>:<bound>");
    const Integer bound = parse_integer(rest.substr(colon + 1));
    if (bound < 1 || !fits_u64(bound)) throw std::invalid_argument("pred-enum bound must be a positive 64-bit integer");
    std::vector<std::uint64_t> members;
    for (const auto& v : detail::read_integer_file(rest.substr(0, colon))) {
      if (v < 0) throw std::invalid_argument("pred-enum members must be non-negative");
      if (v <= bound) members.push_back(v.convert_to<std::uint64_t>());
    }
    return std::make_unique<EnumeratedOracle>(std::move(members), bound.convert_to<std::uint64_t>(), s);
  }
  throw std::invalid_argument("unknown set spec '" + s + "'");
}

// ---------------------------------------------------------------------------
// Smallness profile
// ---------------------------------------------------------------------------

enum class SmallnessVerdict { consistent_with_small, not_small, inconclusive };

inline const char* to_string(SmallnessVerdict v) {
  switch (v) {
    case SmallnessVerdict::consistent_with_small: return "consistent-with-small";
    case SmallnessVerdict::not_small: return "not-small";
    case SmallnessVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct SmallnessEntry {
  unsigned n = 0;
  Integer modulus;   // n!
  Integer covered;   // |cover(n!)|
  Rational epsilon;  // covered / n!
};

struct SmallnessProfile {
  std::string oracle;
  bool heuristic = false;
  std::vector<SmallnessEntry> entries;
  SmallnessVerdict verdict = SmallnessVerdict::inconclusive;
};

/// eps_n = |cover(n!)| / n! for n = 1..n_max. "not-small" when the last two
/// values are 1; "consistent-with-small" when the last value is below 1 and
/// the sequence is non-increasing over its second half.
inline SmallnessProfile smallness_profile(const CoverOracle& oracle, unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("smallness_profile: n_max must be at least 1");
  SmallnessProfile out{oracle.spec(), !oracle.exact(), {}, SmallnessVerdict::inconclusive};
  for (unsigned n = 1; n <= n_max; ++n) {
    Integer m = factorial(n);
    Integer c = oracle.cover_count(m);
    out.entries.push_back({n, m, c, Rational(c, m)});
  }
  const auto& e = out.entries;
  if (n_max >= 2 && e[n_max - 1].epsilon == 1 && e[n_max - 2].epsilon == 1) {
    out.verdict = SmallnessVerdict::not_small;
  } else if (n_max >= 2 && e.back().epsilon < 1) {
    bool non_increasing = true;
    for (std::size_t i = n_max / 2; i + 1 < e.size(); ++i) non_increasing &= e[i + 1].epsilon <= e[i].epsilon;
    if (non_increasing) out.verdict = SmallnessVerdict::consistent_with_small;
  }
  return out;
}

}  // namespace sumdens
