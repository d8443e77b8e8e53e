#include "sumdens/periodic_io.hpp"
#include "sumdens/periodic_set.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace sumdens;

namespace {

PeriodicSet random_set(std::mt19937_64& rng, std::uint64_t max_k) {
  const std::uint64_t k = 1 + rng() % max_k;
  std::vector<Integer> hs;
  for (std::uint64_t r = 0; r < k; ++r)
    if (rng() % 3 == 0) hs.emplace_back(r);
  return make_periodic(Integer(k), std::span<const Integer>(hs));
}

}  // namespace

TEST(PeriodicSet, DensityAndMembership) {
  auto p = make_periodic(Integer(6), {0, 1});
  EXPECT_EQ(density(p), Rational(1, 3));
  EXPECT_TRUE(member(p, Integer(7)));
  EXPECT_FALSE(member(p, Integer(8)));
  EXPECT_FALSE(member(p, Integer(-1)));
  EXPECT_EQ(density(PeriodicSet::naturals()), 1);
  EXPECT_EQ(density(PeriodicSet::none()), 0);
  EXPECT_THROW(make_periodic(Integer(0), {0}), std::invalid_argument);
}

TEST(PeriodicSet, EqualityIsSetEquality) {
  EXPECT_EQ(make_periodic(Integer(2), {1}), make_periodic(Integer(6), {1, 3, 5}));
  EXPECT_EQ(make_periodic(Integer(12), {1, 4, 7, 10}), make_periodic(Integer(3), {1}));
  EXPECT_NE(make_periodic(Integer(4), {1}), make_periodic(Integer(2), {1}));
  EXPECT_EQ(canonicalize(make_periodic(Integer(12), {1, 4, 7, 10})).modulus(), 3);
  EXPECT_EQ(canonicalize(make_periodic(Integer(30), {})), PeriodicSet::none());
  EXPECT_EQ(canonicalize(rebase(make_periodic(Integer(7), {2, 3}), Integer(70))).modulus(), 7);
}

TEST(PeriodicSet, OperationsAgreeWithMembershipOnAWindow) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const PeriodicSet p = random_set(rng, 60), q = random_set(rng, 60);
    const PeriodicSet u = unite(p, q), i = intersect(p, q), c = complement(p);
    const Integer window = 3 * lcm(p.modulus(), q.modulus());
    for (Integer x = 0; x < window; ++x) {
      ASSERT_EQ(u.contains(x), p.contains(x) || q.contains(x));
      ASSERT_EQ(i.contains(x), p.contains(x) && q.contains(x));
      ASSERT_EQ(c.contains(x), !p.contains(x));
    }
    ASSERT_EQ(is_subset(i, p), true);
    ASSERT_EQ(is_subset(p, u), true);
  }
}

TEST(PeriodicSet, AffineImageAgreesAboveOffset) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const PeriodicSet p = random_set(rng, 40);
    const std::uint64_t k = 1 + rng() % 9, h = rng() % 50;
    const PeriodicSet img = affine(p, Integer(k), Integer(h));
    EXPECT_EQ(density(img), density(p) / Rational(k));
    std::set<std::uint64_t> direct;
    for (std::uint64_t x = 0; x < 2000; ++x)
      if (p.contains(x)) direct.insert(k * x + h);
    for (std::uint64_t y = h; y < 2000; ++y) ASSERT_EQ(img.contains(y), direct.count(y) == 1) << y;
  }
}

TEST(PeriodicSet, SumsetModEqualsSumWithAnySetOfThatCover) {
  auto p = make_periodic(Integer(6), {0, 2});
  auto c = ResidueSet::from_values(Integer(6), {1});
  EXPECT_EQ(sumset_mod(p, c), make_periodic(Integer(6), {1, 3}));
  EXPECT_THROW(sumset_mod(p, ResidueSet::from_values(Integer(3), {1})), std::invalid_argument);
}

TEST(PeriodicIo, ResiduesAndBitmapFormsRoundTrip) {
  auto p = make_periodic(Integer(20), {0, 3, 9, 19});
  const std::string text = format_periodic(p);
  EXPECT_EQ(text, "modulus 20\nresidues 0,3,9,19\n");
  EXPECT_EQ(parse_periodic(text), p);
  EXPECT_EQ(to_hex_bitmap(p.residues()), "090208");
  EXPECT_EQ(parse_periodic("modulus 20\nbitmap 090208\n"), p);
  EXPECT_EQ(parse_periodic("modulus 5\nresidues\n"), make_periodic(Integer(5), {}));
  EXPECT_EQ(parse_periodic("modulus 5\nresidues 1, 2\nresidues 4\n"), make_periodic(Integer(5), {1, 2, 4}));
}

TEST(PeriodicIo, RejectsMalformedText) {
  for (const char* bad : {"", "residues 1\n", "modulus 0\nresidues 0\n", "modulus 5\nresidues 5\n",
                          "modulus 5\nbitmap 3\n", "modulus 5\nbitmap 21\n", "modulus 5\nbitmap zz\n",
                          "modulus 5\nresidues 1\nbitmap 01\n", "modulus 5\nfoo\n", "modulus 5\nresidues 1,,2\n"})
    EXPECT_THROW(parse_periodic(bad), std::invalid_argument) << bad;
}
