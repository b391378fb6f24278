#pragma once

// Shared plumbing: error taxonomy, deterministic RNG, small bit helpers.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qcongest {

// All library errors derive from SimError so callers can map the whole
// family onto one exit path. Subclasses mirror the failure classes the
// operations document: capacity (resource caps), address (bad register or
// qubit reference), state (object in the wrong state for the call),
// parameter (bad argument value), connectivity (graph not connected or
// malformed), contract (caller-supplied callable broke its promise),
// bandwidth (a message exceeded the per-edge word size).
struct SimError : std::runtime_error {
  explicit SimError(const std::string& what) : std::runtime_error(what) {}
};
struct CapacityError : SimError {
  using SimError::SimError;
};
struct AddressError : SimError {
  using SimError::SimError;
};
struct StateError : SimError {
  using SimError::SimError;
};
struct ParameterError : SimError {
  using SimError::SimError;
};
struct ConnectivityError : SimError {
  using SimError::SimError;
};

struct ParseError : SimError {
  using SimError::SimError;
};
struct ContractError : SimError {
  using SimError::SimError;
};
struct BandwidthError : SimError {
  using SimError::SimError;
};

// Deterministic RNG wrapper. mt19937_64 itself is fully specified by the
// standard; the standard *distributions* are not, so uniforms are derived
// here from raw 64-bit draws only. Identical (seed, stream) gives identical
// draw sequences on every conforming implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(seed, stream)) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); rejection sampling keeps it exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ParameterError("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  bool coin(double p) { return u01() < p; }

 private:
  // splitmix64 finalizer; decorrelates (seed, stream) pairs.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

inline int ceil_log2(std::uint64_t n) {
  int bits = 0;
  std::uint64_t v = 1;
  while (v < n) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

}  // namespace qcongest
