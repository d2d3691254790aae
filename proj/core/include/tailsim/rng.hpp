#pragma once

// Deterministic random numbers. std::random distributions are not
// bit-reproducible across standard libraries, so trials use splitmix64
// directly; the stream depends only on the seed.

#include <cstdint>

namespace tailsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Fixed derivation of independent per-trial seeds from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1)) ^ (salt * 0xd1342543de82ef95ULL);
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [-a, a).
  double symmetric(double a) { return uniform(-a, a); }

 private:
  std::uint64_t state_;
};

// Hash-based lattice noise value for heightfield terrain; pure in its inputs.
inline double lattice_noise(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  std::uint64_t s = seed;
  s ^= static_cast<std::uint64_t>(ix) * 0x8cb92ba72f3d8dd7ULL;
  s ^= static_cast<std::uint64_t>(iy) * 0xd1342543de82ef95ULL;
  splitmix64(s);
  const double u = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;  // uniform in [-1, 1), zero mean
}

}  // namespace tailsim
