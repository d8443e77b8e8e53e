#include "sumdens/number_theory.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace sumdens;

namespace {

std::uint64_t naive_phi(std::uint64_t m) {
  std::uint64_t c = 0;
  for (std::uint64_t r = 0; r < m; ++r) c += std::gcd(r, m) == 1;
  return m == 1 ? 1 : c;
}

// Least e >= 1 with a^e = 1 for every unit a.
std::uint64_t naive_lambda(std::uint64_t m) {
  if (m <= 2) return 1;
  for (std::uint64_t e = 1;; ++e) {
    bool all = true;
    for (std::uint64_t a = 1; a < m && all; ++a)
      if (std::gcd(a, m) == 1) all = powmod(a, e, m) == 1;
    if (all) return e;
  }
}

}  // namespace

TEST(NumberTheory, FactorizeSmallAgainstTrialDivision) {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    Integer prod = 1;
    Integer last = 0;
    for (const auto& pp : factorize(Integer(n))) {
      EXPECT_TRUE(is_prime_u64(pp.prime.convert_to<std::uint64_t>()));
      EXPECT_GT(pp.prime, last);
      last = pp.prime;
      prod *= pp.value();
    }
    ASSERT_EQ(prod, n);
  }
}

TEST(NumberTheory, FactorizeLargeSemiprimesAndFactorials) {
  const std::uint64_t p = 1000000007, q = 998244353;
  auto f = factorize(Integer(p) * q);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].prime, q);
  EXPECT_EQ(f[1].prime, p);
  auto f11 = factorize(factorial(11));
  ASSERT_EQ(f11.size(), 5u);
  EXPECT_EQ(f11[0].prime, 2);
  EXPECT_EQ(f11[0].exponent, 8u);
  EXPECT_EQ(f11[4].prime, 11);
  auto f30 = factorize(factorial(30));
  EXPECT_EQ(f30.back().prime, 29);
}

TEST(NumberTheory, PhiAndCarmichaelMatchBruteForce) {
  for (std::uint64_t m = 1; m <= 400; ++m) {
    const auto f = factorize(Integer(m));
    ASSERT_EQ(euler_phi(f), naive_phi(m)) << m;
    ASSERT_EQ(carmichael_lambda(f), naive_lambda(m)) << m;
  }
  EXPECT_EQ(euler_phi(factorize(Integer(720))), 192);
  EXPECT_EQ(max_exponent(factorize(Integer(720))), 4u);
}

TEST(NumberTheory, MillerRabinAndSieveAgree) {
  const auto primes = primes_up_to(1000000);
  EXPECT_EQ(primes.size(), 78498u);
  std::size_t idx = 0;
  for (std::uint64_t n = 0; n <= 1000000; ++n) {
    const bool is_p = idx < primes.size() && primes[idx] == n;
    if (is_p) ++idx;
    ASSERT_EQ(is_prime_u64(n), is_p) << n;
  }
  EXPECT_TRUE(is_prime_u64(18446744073709551557ULL));
  EXPECT_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_EQ(primes_up_to(10000000).size(), 664579u);
  EXPECT_TRUE(primes_up_to(1).empty());
}

TEST(NumberTheory, ModularHelpers) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t m = 1 + rng() % 1000000007ULL;
    const std::uint64_t a = rng() % m, b = rng() % m;
    ASSERT_EQ(mulmod(a, b, m), static_cast<std::uint64_t>((static_cast<sumdens::u128>(a) * b) % m));
  }
  EXPECT_EQ(powmod(3, 0, 7), 1u);
  EXPECT_EQ(powmod(3, 6, 7), 1u);
  EXPECT_EQ(powmod(5, 3, 1), 0u);
}
