#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lord {

/// Selector id: position of a selector in the global order O (0-based).
using SelectorId = std::int32_t;

/// Frequencies and supports are 64-bit so multi-million-row inputs cannot overflow.
using Count = std::int64_t;

inline constexpr SelectorId kNoSelector = -1;

/// Base class for all engine errors. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or API misuse (exit code 1).
struct UsageError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input data (exit code 2).
struct DataError : Error {
  using Error::Error;
};

/// Violated internal invariant; indicates a bug, not a user mistake.
struct InternalError : Error {
  using Error::Error;
};

/// Shortest decimal representation of `v` that parses back to the same double.
std::string repr_double(double v);

/// Deterministic, implementation-independent PRNG used wherever reproducible
/// shuffles are required (stdlib distributions differ across platforms).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace lord
