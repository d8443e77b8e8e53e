#pragma once

// Finite unions of arithmetic progressions, represented as k*N + H with
// H a subset of [0, k). Every operation is a pure function of its inputs.

#include "sumdens/number_theory.hpp"
#include "sumdens/residue_set.hpp"

#include <ostream>
#include <span>
#include <vector>

namespace sumdens {

class PeriodicSet {
 public:
  PeriodicSet() : residues_(ResidueSet::empty(1)) {}
  explicit PeriodicSet(ResidueSet residues) : residues_(std::move(residues)) {}

  static PeriodicSet naturals() { return PeriodicSet(ResidueSet::full(1)); }
  static PeriodicSet none() { return PeriodicSet(ResidueSet::empty(1)); }

  const Integer& modulus() const { return residues_.modulus(); }
  const ResidueSet& residues() const { return residues_; }

  bool contains(const Integer& x) const { return x >= 0 && residues_.contains(x); }
  bool contains(std::uint64_t x) const { return residues_.contains(x); }

  /// Set equality: same residues at a common modulus, or same canonical form.
  friend bool operator==(const PeriodicSet& a, const PeriodicSet& b);

 private:
  ResidueSet residues_;
};

inline PeriodicSet make_periodic(const Integer& k, std::span<const Integer> hs) {
  if (k < 1) throw std::invalid_argument("make_periodic: modulus must be at least 1");
  return PeriodicSet(ResidueSet::from_values(k, hs));
}

template <std::integral T>
PeriodicSet make_periodic(const Integer& k, std::initializer_list<T> hs) {
  std::vector<Integer> v;
  for (T h : hs) v.emplace_back(h);
  return make_periodic(k, std::span<const Integer>(v));
}

inline PeriodicSet make_periodic(const Integer& k, std::initializer_list<int> hs) {
  return make_periodic<int>(k, hs);
}

/// |H| / k, reduced.
inline Rational density(const PeriodicSet& p) { return p.residues().density(); }

inline bool member(const PeriodicSet& p, const Integer& x) { return p.contains(x); }

inline PeriodicSet rebase(const PeriodicSet& p, const Integer& m) { return PeriodicSet(rebase(p.residues(), m)); }

namespace detail {

inline std::pair<ResidueSet, ResidueSet> common_modulus(const PeriodicSet& p, const PeriodicSet& q) {
  const Integer m = lcm(p.modulus(), q.modulus());
  ResidueSet::check_modulus(m);
  return {rebase(p.residues(), m), rebase(q.residues(), m)};
}

}  // namespace detail

inline PeriodicSet unite(const PeriodicSet& p, const PeriodicSet& q) {
  auto [a, b] = detail::common_modulus(p, q);
  return PeriodicSet(set_union(a, b));
}

inline PeriodicSet intersect(const PeriodicSet& p, const PeriodicSet& q) {
  auto [a, b] = detail::common_modulus(p, q);
  return PeriodicSet(set_intersection(a, b));
}

inline PeriodicSet complement(const PeriodicSet& p) { return PeriodicSet(complement(p.residues())); }

/// P is contained in Q as subsets of N.
inline bool is_subset(const PeriodicSet& p, const PeriodicSet& q) {
  auto [a, b] = detail::common_modulus(p, q);
  return is_subset(a, b);
}

/// k*P + h with modulus k * P.modulus. Offsets are reduced modulo the new
/// modulus, so the result agrees with k*P + h on [h, inf) and differs from it
/// by at most finitely many elements below h.
inline PeriodicSet affine(const PeriodicSet& p, const Integer& k, const Integer& h) {
  if (k < 1) throw std::invalid_argument("affine: scale must be positive");
  if (h < 0) throw std::invalid_argument("affine: offset must be non-negative");
  const Integer m = k * p.modulus();
  ResidueSet::check_modulus(m);
  if (is_dense_modulus(m)) {
    const std::size_t mm = ResidueSet::dense_size(m);
    const std::size_t kk = k.convert_to<std::size_t>();
    const std::size_t hh = mod_floor(h, m).convert_to<std::size_t>();
    Bitmap bits(mm);
    p.residues().for_each_u64([&](std::uint64_t r) { bits.set((kk * r + hh) % mm); });
    return PeriodicSet(ResidueSet::from_bitmap(m, std::move(bits)));
  }
  std::vector<Integer> vals;
  p.residues().for_each([&](const Integer& r) { vals.push_back(k * r + h); });
  return PeriodicSet(ResidueSet::from_values(m, std::span<const Integer>(vals)));
}

/// P + C where C is the residue cover of some Y modulo P.modulus; the result
/// is the periodic set P + Y.
inline PeriodicSet sumset_mod(const PeriodicSet& p, const ResidueSet& c) {
  if (c.modulus() != p.modulus())
    throw std::invalid_argument("sumset_mod: cover modulus " + c.modulus().str() + " differs from " +
                                p.modulus().str());
  return PeriodicSet(sumset(p.residues(), c));
}

/// Minimal-period form: the smallest d dividing the modulus that represents
/// the same set.
inline PeriodicSet canonicalize(const PeriodicSet& p) {
  const ResidueSet& h = p.residues();
  if (h.empty()) return PeriodicSet::none();
  if (h.is_full()) return PeriodicSet::naturals();
  Integer d = p.modulus();
  // The periods of a set form the multiples of its minimal period, so
  // stripping prime factors greedily reaches it.
  for (const auto& [prime, exponent] : factorize(p.modulus())) {
    for (unsigned i = 0; i < exponent; ++i) {
      const Integer candidate = d / prime;
      if (shift(h, candidate) != h) break;
      d = candidate;
    }
  }
  return PeriodicSet(reduce(h, d));
}

inline bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
  if (a.modulus() == b.modulus()) return a.residues() == b.residues();
  PeriodicSet ca = canonicalize(a);
  PeriodicSet cb = canonicalize(b);
  return ca.residues() == cb.residues();
}

inline std::ostream& operator<<(std::ostream& os, const PeriodicSet& p) {
  os << p.modulus() << "N+{";
  bool first = true;
  p.residues().for_each([&](const Integer& r) {
    os << (first ? "" : ",") << r;
    first = false;
  });
  return os << "}";
}

}  // namespace sumdens
