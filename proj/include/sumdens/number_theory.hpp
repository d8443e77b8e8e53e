#pragma once

#include "sumdens/errors.hpp"
#include "sumdens/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace sumdens {

struct PrimePower {
  Integer prime;
  unsigned exponent = 0;

  Integer value() const { return boost::multiprecision::pow(prime, exponent); }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho; n must be composite and odd.
inline std::uint64_t pollard_rho(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factor_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

}  // namespace detail

/// Prime factorization in increasing prime order. Trial division handles the
/// smooth part; a cofactor must fit in 64 bits to be split further.
inline Factorization factorize(const Integer& n) {
  if (n < 1) throw std::invalid_argument("factorize expects a positive integer");
  Factorization result;
  Integer rest = n;
  auto take = [&](std::uint64_t p) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e != 0) result.push_back({Integer(p), e});
  };
  take(2);
  for (std::uint64_t p = 3; p < 100000 && rest > 1; p += 2) {
    if (Integer(p) * p > rest) break;
    take(p);
  }
  if (rest > 1) {
    if (!fits_u64(rest)) throw ResourceError("cannot factor the large cofactor " + rest.str());
    std::vector<std::uint64_t> primes;
    detail::factor_u64(rest.convert_to<std::uint64_t>(), primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
      std::size_t j = i;
      while (j < primes.size() && primes[j] == primes[i]) ++j;
      result.push_back({Integer(primes[i]), static_cast<unsigned>(j - i)});
      i = j;
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return a.prime < b.prime; });
  }
  return result;
}

inline Integer euler_phi(const Factorization& f) {
  Integer phi = 1;
  for (const auto& [p, e] : f) phi *= boost::multiprecision::pow(p, e - 1) * (p - 1);
  return phi;
}

inline Integer carmichael_lambda(const Factorization& f) {
  Integer lambda = 1;
  for (const auto& [p, e] : f) {
    Integer part;
    if (p == 2)
      part = e == 1 ? Integer(1) : e == 2 ? Integer(2) : boost::multiprecision::pow(Integer(2), e - 2);
    else
      part = boost::multiprecision::pow(p, e - 1) * (p - 1);
    lambda = lcm(lambda, part);
  }
  return lambda;
}

inline unsigned max_exponent(const Factorization& f) {
  unsigned v = 0;
  for (const auto& pp : f) v = std::max(v, pp.exponent);
  return v;
}

/// All primes in [0, limit], by a segmented sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }

  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> seg(kSegment);
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegment) {
    const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (std::uint64_t x = lo; x <= hi; ++x)
      if (seg[x - lo]) primes.push_back(x);
  }
  return primes;
}

}  // namespace sumdens
