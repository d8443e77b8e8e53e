#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sumdens {

/// A computation would exceed the configured memory budget or a hard depth cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact certificate failed, or an internal consistency check of the
/// construction did not hold.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residue sets with modulus at or below this are dense bitmaps; above it they
/// are sorted member lists. 11! fits, 12! does not.
inline constexpr std::uint64_t kDenseModulusThreshold = std::uint64_t{1} << 28;

inline constexpr std::uint64_t kDefaultMemoryCapBytes = std::uint64_t{1} << 30;

namespace detail {

inline std::uint64_t initial_memory_cap() {
  if (const char* env = std::getenv("SUMDENS_MEMORY_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultMemoryCapBytes;
}

inline std::atomic<std::uint64_t>& memory_cap_storage() {
  static std::atomic<std::uint64_t> cap{initial_memory_cap()};
  return cap;
}

}  // namespace detail

/// Upper bound on the bytes any single materialized residue set may occupy.
/// Defaults to 1 GiB; SUMDENS_MEMORY_CAP overrides it at startup.
inline std::uint64_t memory_cap() { return detail::memory_cap_storage().load(std::memory_order_relaxed); }
inline void set_memory_cap(std::uint64_t bytes) { detail::memory_cap_storage().store(bytes, std::memory_order_relaxed); }

inline void require_memory(std::uint64_t bytes, const char* what) {
  if (bytes > memory_cap())
    throw ResourceError(std::string(what) + " needs " + std::to_string(bytes) + " bytes, over the memory cap of " +
                        std::to_string(memory_cap()));
}

}  // namespace sumdens
