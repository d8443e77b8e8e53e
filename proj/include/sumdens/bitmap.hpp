#pragma once

// Fixed-length bit array backed by 64-bit words. Bits past size() are always
// zero, and one spare zero word trails the storage so unaligned 64-bit reads
// never need a bounds branch.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sumdens {

class Bitmap {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitmap() : words_(1, 0) {}
  explicit Bitmap(std::size_t nbits) : nbits_(nbits), words_(word_count(nbits) + 1, 0) {}

  static Bitmap ones(std::size_t nbits) {
    Bitmap b(nbits);
    b.set_all();
    return b;
  }

  std::size_t size() const { return nbits_; }
  std::size_t num_words() const { return word_count(nbits_); }
  std::span<const word_type> words() const { return {words_.data(), num_words()}; }

  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i / kWordBits] |= word_type{1} << (i % kWordBits);
  }
  void reset(std::size_t i) {
    assert(i < nbits_);
    words_[i / kWordBits] &= ~(word_type{1} << (i % kWordBits));
  }

  void set_all() {
    std::fill(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(num_words()), ~word_type{0});
    clear_tail();
  }
  void reset_all() { std::fill(words_.begin(), words_.end(), 0); }

  void flip_all() {
    for (std::size_t w = 0; w < num_words(); ++w) words_[w] = ~words_[w];
    clear_tail();
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < num_words(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w]));
    return c;
  }

  /// Number of set bits in [0, end).
  std::size_t count_prefix(std::size_t end) const {
    assert(end <= nbits_);
    std::size_t full = end / kWordBits;
    std::size_t c = 0;
    for (std::size_t w = 0; w < full; ++w) c += static_cast<std::size_t>(std::popcount(words_[w]));
    if (std::size_t rem = end % kWordBits; rem != 0)
      c += static_cast<std::size_t>(std::popcount(words_[full] & low_mask(rem)));
    return c;
  }

  bool none() const {
    for (std::size_t w = 0; w < num_words(); ++w)
      if (words_[w] != 0) return false;
    return true;
  }

  Bitmap& operator|=(const Bitmap& o) {
    assert(o.nbits_ == nbits_);
    for (std::size_t w = 0; w < num_words(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  Bitmap& operator&=(const Bitmap& o) {
    assert(o.nbits_ == nbits_);
    for (std::size_t w = 0; w < num_words(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  /// this &= ~o
  Bitmap& subtract(const Bitmap& o) {
    assert(o.nbits_ == nbits_);
    for (std::size_t w = 0; w < num_words(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  bool is_subset_of(const Bitmap& o) const {
    assert(o.nbits_ == nbits_);
    for (std::size_t w = 0; w < num_words(); ++w)
      if ((words_[w] & ~o.words_[w]) != 0) return false;
    return true;
  }

  friend bool operator==(const Bitmap& a, const Bitmap& b) {
    return a.nbits_ == b.nbits_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }

  /// Bits [pos, pos + 64) as one word; bits at or past size() read as zero.
  word_type extract(std::size_t pos) const {
    std::size_t q = pos / kWordBits;
    std::size_t r = pos % kWordBits;
    if (q >= words_.size()) return 0;
    if (r == 0) return words_[q];
    word_type hi = q + 1 < words_.size() ? words_[q + 1] : 0;
    return (words_[q] >> r) | (hi << (kWordBits - r));
  }

  /// this[dst + i] |= src[src_begin + i] for i in [0, len).
  void or_range(const Bitmap& src, std::size_t src_begin, std::size_t dst_begin, std::size_t len) {
    assert(src_begin + len <= src.nbits_);
    assert(dst_begin + len <= nbits_);
    if (len == 0) return;
    std::size_t d = dst_begin;
    std::size_t s = src_begin;
    const std::size_t end = dst_begin + len;

    if (std::size_t lead = d % kWordBits; lead != 0) {
      std::size_t take = std::min(kWordBits - lead, len);
      words_[d / kWordBits] |= (src.extract(s) & low_mask(take)) << lead;
      d += take;
      s += take;
    }

    const std::size_t full = (end - d) / kWordBits;
    word_type* out = words_.data() + d / kWordBits;
    const word_type* in = src.words_.data() + s / kWordBits;
    const unsigned r = static_cast<unsigned>(s % kWordBits);
    if (r == 0) {
      for (std::size_t i = 0; i < full; ++i) out[i] |= in[i];
    } else {
      const unsigned l = static_cast<unsigned>(kWordBits) - r;
      for (std::size_t i = 0; i < full; ++i) out[i] |= (in[i] >> r) | (in[i + 1] << l);
    }
    d += full * kWordBits;
    s += full * kWordBits;

    if (d < end) words_[d / kWordBits] |= src.extract(s) & low_mask(end - d);
  }

  /// Cyclic: this[(i + shift) mod size] |= src[i]. Both bitmaps share one size.
  void rotate_or(const Bitmap& src, std::size_t shift) {
    assert(src.nbits_ == nbits_);
    if (nbits_ == 0) return;
    shift %= nbits_;
    or_range(src, 0, shift, nbits_ - shift);
    if (shift != 0) or_range(src, nbits_ - shift, 0, shift);
  }

  Bitmap rotated(std::size_t shift) const {
    Bitmap out(nbits_);
    out.rotate_or(*this, shift);
    return out;
  }

  /// The first `len` bits as a new bitmap.
  Bitmap prefix(std::size_t len) const {
    assert(len <= nbits_);
    Bitmap out(len);
    out.or_range(*this, 0, 0, len);
    return out;
  }

  /// Visits set bits in increasing order.
  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < num_words(); ++w) {
      word_type bits = words_[w];
      while (bits != 0) {
        f(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  static constexpr std::size_t word_count(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

 private:
  static constexpr word_type low_mask(std::size_t n) {
    return n >= kWordBits ? ~word_type{0} : (word_type{1} << n) - 1;
  }

  void clear_tail() {
    if (std::size_t rem = nbits_ % kWordBits; rem != 0) words_[num_words() - 1] &= low_mask(rem);
  }

  std::size_t nbits_ = 0;
  std::vector<word_type> words_;
};

}  // namespace sumdens
