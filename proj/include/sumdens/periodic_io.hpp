#pragma once

// Text format for periodic sets:
//
//   modulus <k>
//   residues <r1>,<r2>,...        (one or more lines, concatenated)
//   | bitmap <hex>                (exactly one line)
//
// Hex bitmaps list bytes in increasing order, two digits per byte; bit j of
// byte i (least significant first) stands for residue 8*i + j.

#include "sumdens/periodic_set.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <string_view>

namespace sumdens {

inline std::string to_hex_bitmap(const ResidueSet& h) {
  if (!h.is_dense()) throw std::invalid_argument("hex bitmap needs a dense modulus");
  static constexpr char kDigits[] = "0123456789abcdef";
  const Bitmap& bits = h.bitmap();
  const std::size_t nbytes = (bits.size() + 7) / 8;
  std::string out;
  out.reserve(nbytes * 2);
  for (std::size_t i = 0; i < nbytes; ++i) {
    const auto word = bits.words()[i / 8];
    const auto byte = static_cast<unsigned>((word >> (8 * (i % 8))) & 0xFFU);
    out.push_back(kDigits[byte >> 4U]);
    out.push_back(kDigits[byte & 0xFU]);
  }
  return out;
}

inline ResidueSet from_hex_bitmap(const Integer& modulus, std::string_view hex) {
  if (!is_dense_modulus(modulus)) throw std::invalid_argument("hex bitmap needs a dense modulus");
  const std::size_t m = ResidueSet::dense_size(modulus);
  if (hex.size() != 2 * ((m + 7) / 8))
    throw std::invalid_argument("hex bitmap has " + std::to_string(hex.size()) + " digits, expected " +
                                std::to_string(2 * ((m + 7) / 8)));
  auto digit = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
  };
  Bitmap bits(m);
  for (std::size_t i = 0; i < hex.size() / 2; ++i) {
    const unsigned byte = (digit(hex[2 * i]) << 4U) | digit(hex[2 * i + 1]);
    for (unsigned j = 0; j < 8; ++j) {
      if (((byte >> j) & 1U) == 0) continue;
      const std::size_t r = 8 * i + j;
      if (r >= m) throw std::invalid_argument("hex bitmap sets a bit past the modulus");
      bits.set(r);
    }
  }
  return ResidueSet::from_bitmap(modulus, std::move(bits));
}

inline void write_periodic(std::ostream& os, const PeriodicSet& p) {
  os << "modulus " << p.modulus() << "\nresidues ";
  bool first = true;
  p.residues().for_each([&](const Integer& r) {
    if (!first) os << ',';
    os << r;
    first = false;
  });
  os << '\n';
}

inline std::string format_periodic(const PeriodicSet& p) {
  std::ostringstream os;
  write_periodic(os, p);
  return os.str();
}

inline PeriodicSet read_periodic(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line() || line.rfind("modulus ", 0) != 0)
    throw std::invalid_argument("periodic set: first line must be 'modulus <k>'");
  const Integer k = parse_integer(line.substr(8));
  if (k < 1) throw std::invalid_argument("periodic set: modulus must be positive");

  std::vector<Integer> residues;
  bool saw_residues = false;
  while (next_line()) {
    if (line.rfind("bitmap ", 0) == 0) {
      if (saw_residues) throw std::invalid_argument("periodic set: cannot mix 'bitmap' and 'residues'");
      auto hex = std::string_view(line).substr(7);
      ResidueSet h = from_hex_bitmap(k, hex);
      if (next_line()) throw std::invalid_argument("periodic set: trailing content after bitmap");
      return PeriodicSet(std::move(h));
    }
    if (line.rfind("residues", 0) != 0) throw std::invalid_argument("periodic set: unexpected line '" + line + "'");
    saw_residues = true;
    std::string_view rest = std::string_view(line).substr(8);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      auto token = rest.substr(0, comma);
      while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
      while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
      Integer r = parse_integer(token);
      if (r < 0 || r >= k) throw std::invalid_argument("periodic set: residue " + r.str() + " out of range");
      residues.push_back(std::move(r));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return make_periodic(k, std::span<const Integer>(residues));
}

inline PeriodicSet parse_periodic(const std::string& text) {
  std::istringstream is(text);
  return read_periodic(is);
}

}  // namespace sumdens
