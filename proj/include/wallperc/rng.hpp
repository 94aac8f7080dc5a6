#pragma once

#include <cmath>
#include <cstdint>

namespace wallperc {

// Stateless 64-bit finalizer (murmur3 variant). All randomness in the library
// is derived from it, so any (seed, stream, counter) triple maps to the same
// draw no matter which thread asks for it.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

// Stream derivation: state0 = mix64(seed ^ mix64(stream + golden_gamma)).
// This is the stated mixing function for (seed, cut index), (seed, replica
// index) and (seed, sample index) stream seeding.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Counter-based generator: splitmix64 walk from a mixed (seed, stream) state.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix_seed(seed, stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs of it
  // are finite and exponential draws are strictly positive.
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Inverse-transform exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // Standard normal via Box-Muller; the spare draw is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wallperc
