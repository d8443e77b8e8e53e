// Build a depth-8 tower for B = primes and alpha = 1/2, then count A + B up to 10^6.

#include "sumdens/sumdens.hpp"

#include <iostream>

int main() {
  using namespace sumdens;
  PrimesOracle primes;
  const Tower t = construct(primes, Rational(1, 2), 8);
  const SumBounds sb = sum_bounds(t, primes);
  std::cout << "density of A in [" << to_string(a_bounds(t).lower()) << ", " << to_string(a_bounds(t).upper())
            << "]\n";
  std::cout << "density of A + P in [" << to_string(sb.final.lower()) << ", " << to_string(sb.final.upper())
            << "], epsilon " << to_string(sb.epsilon) << '\n';
  const std::uint64_t T = 1000000;
  const CountInterval c = enumerate_sumset(t, primes, T);
  std::cout << "|(A + P) cap [1, " << T << "]| in [" << c.lower << ", " << c.upper << "]\n";
  std::cout << "certificates: " << check_certificates(t, primes).summary() << '\n';
}
