// Step through the first levels for B = {0} and alpha = 1/2, printing each choice of k.

#include "sumdens/sumdens.hpp"

#include <iostream>

int main() {
  using namespace sumdens;
  auto zero = make_oracle("finite:0");
  const Rational alpha(1, 2);
  Level lv = base_level(*zero);
  std::cout << "n=1 H={0} h=0\n";
  for (unsigned n = 2; n <= 5; ++n) {
    lv = step(lv, zero->cover(factorial(n)), alpha).level;
    std::cout << "n=" << n << " |H|=" << lv.H.size() << " k=" << *lv.k_chosen << " h=" << lv.h
              << " densityA=" << to_string(lv.densityA) << " (L, U] = (" << to_string(lv.L) << ", "
              << to_string(lv.U) << "]";
    if (lv.H.size() <= 8) {
      std::cout << " H={";
      bool first = true;
      lv.H.for_each_u64([&](std::uint64_t r) {
        std::cout << (first ? "" : ",") << r;
        first = false;
      });
      std::cout << '}';
    }
    std::cout << '\n';
  }
  std::cout << "membership of 3: " << to_string(membership(construct(*zero, alpha, 5), Integer(3))) << '\n';
}
