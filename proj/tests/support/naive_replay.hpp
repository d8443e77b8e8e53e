#pragma once

// Reference replay of the tower recursion for finite B, written without the
// library: every set is an explicit list of integers in [0, W), densities of
// periodic sumsets are read off the last full period of the window, and all
// comparisons with alpha = p/q are done by cross-multiplication.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace naive {

struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline Frac reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

inline bool greater(std::int64_t count, std::int64_t modulus, Frac alpha) {
  return count * alpha.den > alpha.num * modulus;
}

struct Level {
  int n = 0;
  std::int64_t modulus = 1;
  std::set<std::int64_t> H;
  std::int64_t h = 0;
  int k = -1;  // -1 at level 1
  Frac densityA, L, U;
};

inline std::int64_t fact(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Number of residues r in [0, m) such that r + c*m lies in X + B for large c,
/// where X = {x : x mod m in residues}. Read off the window [W - m, W).
inline std::int64_t sumset_period_count(const std::set<std::int64_t>& residues, std::int64_t m,
                                        const std::vector<std::int64_t>& B, std::int64_t W) {
  std::vector<char> x(static_cast<std::size_t>(W), 0), s(static_cast<std::size_t>(W), 0);
  for (std::int64_t v = 0; v < W; ++v)
    if (residues.count(v % m)) x[static_cast<std::size_t>(v)] = 1;
  for (std::int64_t v = 0; v < W; ++v) {
    if (!x[static_cast<std::size_t>(v)]) continue;
    for (auto b : B)
      if (v + b < W) s[static_cast<std::size_t>(v + b)] = 1;
  }
  std::int64_t count = 0;
  for (std::int64_t z = W - m; z < W; ++z) count += s[static_cast<std::size_t>(z)];
  return count;
}

/// window_periods: W = window_periods * N!; B must lie well below W - N!.
inline std::vector<Level> replay(const std::vector<std::int64_t>& B, Frac alpha, int depth, int window_periods = 5) {
  if (B.empty()) throw std::invalid_argument("empty B");
  const std::int64_t W = window_periods * fact(depth);
  if (*std::max_element(B.begin(), B.end()) > W - fact(depth)) throw std::invalid_argument("window too small");
  std::vector<Level> out;
  Level first;
  first.n = 1;
  first.modulus = 1;
  first.H = {0};
  first.h = 0;
  first.densityA = {1, 1};
  first.L = reduced(sumset_period_count({}, 1, B, W), 1);
  first.U = reduced(sumset_period_count({0}, 1, B, W), 1);
  out.push_back(first);

  for (int m = 1; m < depth; ++m) {
    const Level& prev = out.back();
    const std::int64_t small = prev.modulus;
    const std::int64_t big = small * (m + 1);
    std::set<std::int64_t> hprime = prev.H;
    hprime.erase(prev.h);
    // (H'_m + m! N) lifted to residues mod (m+1)!
    std::set<std::int64_t> lifted;
    for (std::int64_t r = 0; r < big; ++r)
      if (hprime.count(r % small)) lifted.insert(r);

    int chosen = -1;
    std::int64_t lower_count = sumset_period_count(lifted, big, B, W), upper_count = 0;
    std::set<std::int64_t> cand = lifted;
    for (int k = 0; k <= m; ++k) {
      cand.insert(prev.h + k * small);
      const std::int64_t c = sumset_period_count(cand, big, B, W);
      if (greater(c, big, alpha)) {
        chosen = k;
        upper_count = c;
        break;
      }
      lower_count = c;
    }
    if (chosen < 0) throw std::logic_error("no admissible k");

    Level next;
    next.n = m + 1;
    next.modulus = big;
    next.H = lifted;
    for (int i = 0; i <= chosen; ++i) next.H.insert(prev.h + i * small);
    next.h = prev.h + chosen * small;
    next.k = chosen;
    next.densityA = reduced(static_cast<std::int64_t>(next.H.size()), big);
    next.L = reduced(lower_count, big);
    next.U = reduced(upper_count, big);
    out.push_back(next);
  }
  return out;
}

}  // namespace naive
