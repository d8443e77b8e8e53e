#pragma once

// A set of residues modulo a positive modulus. Moduli up to
// kDenseModulusThreshold are stored as bitmaps, larger ones as sorted member
// lists; the representation is a function of the modulus alone, so two sets
// with the same modulus always share it and compare member-wise.

#include "sumdens/bitmap.hpp"
#include "sumdens/errors.hpp"
#include "sumdens/rational.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sumdens {

inline bool is_dense_modulus(const Integer& m) { return m <= Integer(kDenseModulusThreshold); }

/// Bitmap of length `total` holding `src` repeated from position 0.
inline Bitmap tile(const Bitmap& src, std::size_t total) {
  Bitmap out(total);
  if (src.size() == 0 || total == 0) return out;
  std::size_t filled = std::min(src.size(), total);
  out.or_range(src, 0, 0, filled);
  const std::size_t period = src.size();
  while (filled < total) {
    // Copying a prefix whose length is a multiple of the period keeps the phase.
    std::size_t block = filled - filled % period;
    std::size_t len = std::min(block, total - filled);
    out.or_range(out, 0, filled, len);
    filled += len;
  }
  return out;
}

class ResidueSet {
 public:
  using Sparse = std::vector<Integer>;

  ResidueSet() : modulus_(1), members_(Bitmap(1)) {}

  static ResidueSet empty(const Integer& m) {
    check_modulus(m);
    if (is_dense_modulus(m)) return ResidueSet(m, Bitmap(dense_size(m)));
    return ResidueSet(m, Sparse{});
  }

  static ResidueSet full(const Integer& m) {
    check_modulus(m);
    if (is_dense_modulus(m)) return ResidueSet(m, Bitmap::ones(dense_size(m)));
    require_sparse(m, "full residue set");
    Sparse all;
    for (Integer r = 0; r < m; ++r) all.push_back(r);
    return ResidueSet(m, std::move(all));
  }

  static ResidueSet from_bitmap(const Integer& m, Bitmap bits) {
    check_modulus(m);
    if (!is_dense_modulus(m) || bits.size() != dense_size(m))
      throw std::invalid_argument("bitmap length must equal a dense modulus");
    return ResidueSet(m, std::move(bits));
  }

  /// Values are reduced into [0, m) and deduplicated.
  static ResidueSet from_values(const Integer& m, std::span<const Integer> values) {
    check_modulus(m);
    if (is_dense_modulus(m)) {
      Bitmap bits(dense_size(m));
      for (const auto& v : values) bits.set(mod_floor(v, m).convert_to<std::size_t>());
      return ResidueSet(m, std::move(bits));
    }
    require_memory(values.size() * sizeof(Integer), "sparse residue set");
    Sparse members;
    members.reserve(values.size());
    for (const auto& v : values) members.push_back(mod_floor(v, m));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return ResidueSet(m, std::move(members));
  }

  template <std::integral T>
  static ResidueSet from_values(const Integer& m, std::initializer_list<T> values) {
    std::vector<Integer> v;
    for (T x : values) v.emplace_back(x);
    return from_values(m, std::span<const Integer>(v));
  }

  /// Sorted-unique members below m, already reduced; the caller guarantees it.
  static ResidueSet from_sorted_unique(const Integer& m, Sparse members) {
    check_modulus(m);
    if (is_dense_modulus(m)) return from_values(m, std::span<const Integer>(members));
    return ResidueSet(m, std::move(members));
  }

  const Integer& modulus() const { return modulus_; }
  bool is_dense() const { return std::holds_alternative<Bitmap>(members_); }

  std::uint64_t size() const {
    if (is_dense()) return bitmap().count();
    return sparse().size();
  }
  bool empty() const { return is_dense() ? bitmap().none() : sparse().empty(); }
  bool is_full() const { return Integer(size()) == modulus_; }

  Rational density() const { return Rational(Integer(size()), modulus_); }

  bool contains(const Integer& x) const {
    Integer r = mod_floor(x, modulus_);
    if (is_dense()) return bitmap().test(r.convert_to<std::size_t>());
    return std::binary_search(sparse().begin(), sparse().end(), r);
  }
  bool contains(std::uint64_t x) const {
    if (is_dense()) return bitmap().test(static_cast<std::size_t>(x % dense_size(modulus_)));
    return contains(Integer(x));
  }

  const Bitmap& bitmap() const { return std::get<Bitmap>(members_); }
  const Sparse& sparse() const { return std::get<Sparse>(members_); }

  /// Ascending; f receives each member as std::uint64_t. Requires modulus < 2^64.
  template <class F>
  void for_each_u64(F&& f) const {
    if (is_dense()) {
      bitmap().for_each_set([&](std::size_t i) { f(static_cast<std::uint64_t>(i)); });
    } else {
      for (const auto& r : sparse()) f(to_u64(r));
    }
  }

  /// Ascending; f receives each member as Integer.
  template <class F>
  void for_each(F&& f) const {
    if (is_dense()) {
      bitmap().for_each_set([&](std::size_t i) { f(Integer(i)); });
    } else {
      for (const auto& r : sparse()) f(r);
    }
  }

  std::vector<Integer> members() const {
    std::vector<Integer> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](const Integer& r) { out.push_back(r); });
    return out;
  }

  std::vector<std::uint64_t> members_u64() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each_u64([&](std::uint64_t r) { out.push_back(r); });
    return out;
  }

  friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
    return a.modulus_ == b.modulus_ && a.members_ == b.members_;
  }

  static std::size_t dense_size(const Integer& m) { return m.convert_to<std::size_t>(); }

  static void require_sparse(const Integer& count, const char* what) {
    if (!fits_u64(count) || count.convert_to<std::uint64_t>() > memory_cap() / sizeof(Integer))
      throw ResourceError(std::string(what) + " with " + count.str() + " members exceeds the memory cap");
  }

  static void check_modulus(const Integer& m) {
    if (m < 1) throw std::invalid_argument("modulus must be positive, got " + m.str());
    if (is_dense_modulus(m)) require_memory(dense_size(m) / 8 + 8, "dense residue bitmap");
  }

 private:
  ResidueSet(Integer m, Bitmap bits) : modulus_(std::move(m)), members_(std::move(bits)) {}
  ResidueSet(Integer m, Sparse members) : modulus_(std::move(m)), members_(std::move(members)) {}

  Integer modulus_;
  std::variant<Bitmap, Sparse> members_;
};

namespace detail {

inline void require_same_modulus(const ResidueSet& a, const ResidueSet& b, const char* op) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument(std::string(op) + ": moduli differ (" + a.modulus().str() + " vs " +
                                b.modulus().str() + ")");
}

}  // namespace detail

inline ResidueSet set_union(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a, b, "union");
  if (a.is_dense()) {
    Bitmap bits = a.bitmap();
    bits |= b.bitmap();
    return ResidueSet::from_bitmap(a.modulus(), std::move(bits));
  }
  ResidueSet::Sparse out;
  std::set_union(a.sparse().begin(), a.sparse().end(), b.sparse().begin(), b.sparse().end(), std::back_inserter(out));
  return ResidueSet::from_sorted_unique(a.modulus(), std::move(out));
}

inline ResidueSet set_intersection(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a, b, "intersection");
  if (a.is_dense()) {
    Bitmap bits = a.bitmap();
    bits &= b.bitmap();
    return ResidueSet::from_bitmap(a.modulus(), std::move(bits));
  }
  ResidueSet::Sparse out;
  std::set_intersection(a.sparse().begin(), a.sparse().end(), b.sparse().begin(), b.sparse().end(),
                        std::back_inserter(out));
  return ResidueSet::from_sorted_unique(a.modulus(), std::move(out));
}

inline ResidueSet set_difference(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a, b, "difference");
  if (a.is_dense()) {
    Bitmap bits = a.bitmap();
    bits.subtract(b.bitmap());
    return ResidueSet::from_bitmap(a.modulus(), std::move(bits));
  }
  ResidueSet::Sparse out;
  std::set_difference(a.sparse().begin(), a.sparse().end(), b.sparse().begin(), b.sparse().end(),
                      std::back_inserter(out));
  return ResidueSet::from_sorted_unique(a.modulus(), std::move(out));
}

inline ResidueSet complement(const ResidueSet& a) {
  if (a.is_dense()) {
    Bitmap bits = a.bitmap();
    bits.flip_all();
    return ResidueSet::from_bitmap(a.modulus(), std::move(bits));
  }
  ResidueSet::require_sparse(a.modulus() - a.size(), "complement");
  ResidueSet::Sparse out;
  auto it = a.sparse().begin();
  for (Integer r = 0; r < a.modulus(); ++r) {
    if (it != a.sparse().end() && *it == r) {
      ++it;
      continue;
    }
    out.push_back(r);
  }
  return ResidueSet::from_sorted_unique(a.modulus(), std::move(out));
}

inline bool is_subset(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a, b, "subset");
  if (a.is_dense()) return a.bitmap().is_subset_of(b.bitmap());
  return std::includes(b.sparse().begin(), b.sparse().end(), a.sparse().begin(), a.sparse().end());
}

/// The same residues viewed modulo a multiple m of the current modulus.
inline ResidueSet rebase(const ResidueSet& a, const Integer& m) {
  const Integer& k = a.modulus();
  if (m < 1 || m % k != 0)
    throw std::invalid_argument("rebase: " + m.str() + " is not a positive multiple of " + k.str());
  if (m == k) return a;
  ResidueSet::check_modulus(m);
  if (is_dense_modulus(m))
    return ResidueSet::from_bitmap(m, tile(a.bitmap(), ResidueSet::dense_size(m)));
  const Integer copies = m / k;
  ResidueSet::require_sparse(copies * a.size(), "rebased residue set");
  ResidueSet::Sparse out;
  for (Integer j = 0; j < copies; ++j) {
    const Integer offset = j * k;
    a.for_each([&](const Integer& r) { out.push_back(r + offset); });
  }
  return ResidueSet::from_sorted_unique(m, std::move(out));
}

/// {r mod d : r in a} for a divisor d of the modulus.
inline ResidueSet reduce(const ResidueSet& a, const Integer& d) {
  const Integer& m = a.modulus();
  if (d < 1 || m % d != 0) throw std::invalid_argument("reduce: " + d.str() + " does not divide " + m.str());
  if (d == m) return a;
  if (a.is_dense()) {
    const std::size_t dd = ResidueSet::dense_size(d);
    const std::size_t mm = a.bitmap().size();
    Bitmap out(dd);
    if (dd >= 64) {
      for (std::size_t off = 0; off < mm; off += dd) out.or_range(a.bitmap(), off, 0, dd);
    } else {
      a.bitmap().for_each_set([&](std::size_t r) { out.set(r % dd); });
    }
    return ResidueSet::from_bitmap(d, std::move(out));
  }
  std::vector<Integer> vals;
  vals.reserve(a.sparse().size());
  for (const auto& r : a.sparse()) vals.push_back(r % d);
  return ResidueSet::from_values(d, std::span<const Integer>(vals));
}

/// {(r + c) mod m : r in a}.
inline ResidueSet shift(const ResidueSet& a, const Integer& c) {
  const Integer& m = a.modulus();
  Integer s = mod_floor(c, m);
  if (a.is_dense()) return ResidueSet::from_bitmap(m, a.bitmap().rotated(s.convert_to<std::size_t>()));
  std::vector<Integer> vals;
  vals.reserve(a.sparse().size());
  for (const auto& r : a.sparse()) vals.push_back(r + s);
  return ResidueSet::from_values(m, std::span<const Integer>(vals));
}

/// Residue sumset {(x + y) mod m : x in a, y in b}.
inline ResidueSet sumset(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a, b, "sumset");
  const Integer& m = a.modulus();
  if (a.empty() || b.empty()) return ResidueSet::empty(m);
  const bool a_small = a.size() <= b.size();
  const ResidueSet& small = a_small ? a : b;
  const ResidueSet& large = a_small ? b : a;
  if (large.is_full()) return ResidueSet::full(m);

  if (a.is_dense()) {
    const Bitmap& src = large.bitmap();
    const std::size_t words = src.num_words();
    Bitmap acc(src.size());
    std::size_t since_check = 0;
    bool saturated = false;
    // Stop early once every residue is reached; the count is as cheap as one shift.
    const std::size_t check_every = std::max<std::size_t>(16, 4096 / std::max<std::size_t>(words, 1));
    small.bitmap().for_each_set([&](std::size_t s) {
      if (saturated) return;
      acc.rotate_or(src, s);
      if (++since_check == check_every) {
        since_check = 0;
        saturated = acc.count() == acc.size();
      }
    });
    return ResidueSet::from_bitmap(m, std::move(acc));
  }

  const Integer pairs = Integer(small.size()) * large.size();
  ResidueSet::require_sparse(pairs, "sparse sumset");
  std::vector<Integer> vals;
  vals.reserve(pairs.convert_to<std::size_t>());
  for (const auto& x : small.sparse())
    for (const auto& y : large.sparse()) {
      Integer z = x + y;
      if (z >= m) z -= m;
      vals.push_back(std::move(z));
    }
  return ResidueSet::from_values(m, std::span<const Integer>(vals));
}

}  // namespace sumdens
