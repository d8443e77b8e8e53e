#pragma once

// Tower documents: deterministic field order, H stored as run-length pairs
// [start, length] or as a hex bitmap, whichever is shorter.

#include "sumdens/periodic_io.hpp"
#include "sumdens/tower.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace sumdens {

inline constexpr const char* kTowerSchema = "sumdens.tower/1";

namespace detail {

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> runs_of(const Bitmap& bits) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
  bits.for_each_set([&](std::size_t r) {
    if (!runs.empty() && runs.back().first + runs.back().second == r)
      ++runs.back().second;
    else
      runs.emplace_back(r, 1);
  });
  return runs;
}

inline nlohmann::ordered_json encode_residues(const ResidueSet& H) {
  const auto runs = runs_of(H.bitmap());
  const std::size_t hex_chars = 2 * ((H.bitmap().size() + 7) / 8);
  nlohmann::ordered_json j;
  // A run costs roughly two numbers and punctuation in the document.
  if (runs.size() * 24 <= hex_chars) {
    j["rle"] = nlohmann::ordered_json::array();
    for (auto [s, len] : runs) j["rle"].push_back({s, len});
  } else {
    j["bitmap"] = to_hex_bitmap(H);
  }
  return j;
}

inline ResidueSet decode_residues(const nlohmann::ordered_json& j, const Integer& modulus) {
  if (j.contains("bitmap")) return from_hex_bitmap(modulus, j.at("bitmap").get<std::string>());
  if (!j.contains("rle")) throw std::invalid_argument("tower: H needs 'rle' or 'bitmap'");
  const std::size_t m = ResidueSet::dense_size(modulus);
  Bitmap bits(m);
  for (const auto& run : j.at("rle")) {
    if (!run.is_array() || run.size() != 2) throw std::invalid_argument("tower: rle entries are [start, length]");
    const auto s = run[0].get<std::uint64_t>();
    const auto len = run[1].get<std::uint64_t>();
    if (len == 0 || s >= m || len > m - s) throw std::invalid_argument("tower: rle run out of range");
    for (std::uint64_t r = s; r < s + len; ++r) bits.set(static_cast<std::size_t>(r));
  }
  return ResidueSet::from_bitmap(modulus, std::move(bits));
}

inline Rational rational_field(const nlohmann::ordered_json& j, const char* key) {
  return parse_rational(j.at(key).get<std::string>());
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Tower& t) {
  nlohmann::ordered_json j;
  j["schema"] = kTowerSchema;
  j["config"] = t.config;
  j["alpha"] = to_string(t.alpha);
  j["oracle"] = t.oracle;
  j["exact"] = t.exact;
  j["depth"] = t.depth;
  j["warnings"] = t.warnings;
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& lv : t.levels) {
    nlohmann::ordered_json e;
    e["n"] = lv.n;
    e["k_chosen"] = lv.k_chosen ? nlohmann::ordered_json(*lv.k_chosen) : nlohmann::ordered_json(nullptr);
    e["h"] = to_u64(lv.h);
    e["H"] = detail::encode_residues(lv.H);
    e["densityA"] = to_string(lv.densityA);
    e["L"] = to_string(lv.L);
    e["U"] = to_string(lv.U);
    j["levels"].push_back(std::move(e));
  }
  return j;
}

inline Tower tower_from_json(const nlohmann::ordered_json& j) {
  if (j.value("schema", "") != kTowerSchema)
    throw std::invalid_argument("tower: expected schema " + std::string(kTowerSchema));
  Tower t;
  t.config = j.value("config", nlohmann::ordered_json::object());
  t.alpha = detail::rational_field(j, "alpha");
  if (t.alpha < 0 || t.alpha > 1) throw std::invalid_argument("tower: alpha outside [0, 1]");
  t.oracle = j.at("oracle").get<std::string>();
  t.exact = j.at("exact").get<bool>();
  t.depth = j.at("depth").get<unsigned>();
  if (j.contains("warnings")) t.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& e : j.at("levels")) {
    Level lv;
    lv.n = e.at("n").get<unsigned>();
    if (lv.n < 1 || lv.n > kHardMaxDepth) throw std::invalid_argument("tower: level index out of range");
    lv.modulus = factorial(lv.n);
    const auto& k = e.at("k_chosen");
    if (!k.is_null()) {
      if (!k.is_number_unsigned()) throw std::invalid_argument("tower: k_chosen must be a non-negative integer");
      lv.k_chosen = k.get<unsigned>();
    }
    const auto& h = e.at("h");
    if (!h.is_number_unsigned()) throw std::invalid_argument("tower: h must be a non-negative integer");
    lv.h = Integer(h.get<std::uint64_t>());
    if (lv.h >= lv.modulus) throw std::invalid_argument("tower: h outside [0, n!)");
    lv.H = detail::decode_residues(e.at("H"), lv.modulus);
    lv.densityA = detail::rational_field(e, "densityA");
    lv.L = detail::rational_field(e, "L");
    lv.U = detail::rational_field(e, "U");
    t.levels.push_back(std::move(lv));
  }
  if (!t.levels.empty() && t.levels.size() != t.depth)
    throw std::invalid_argument("tower: depth does not match the number of levels");
  return t;
}

inline std::string dump_tower(const Tower& t) { return to_json(t).dump(2) + "\n"; }

inline Tower parse_tower(const std::string& text) {
  return tower_from_json(nlohmann::ordered_json::parse(text));
}

inline void save_tower(const Tower& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << dump_tower(t);
}

inline Tower load_tower(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tower(ss.str());
}

}  // namespace sumdens
