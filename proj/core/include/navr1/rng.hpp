#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace navr1 {

// xoshiro256** seeded through splitmix64. Distributions are implemented by
// hand because the std:: ones are not bit-stable across standard libraries,
// and every artifact output must be byte-identical under a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  // Standard normal via Box-Muller (one value per two uniforms; no cache).
  double normal();
  // Index sampled proportionally to weights (need not be normalized).
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; mixing is order-sensitive so (a,b) and (b,a)
  // give different streams.
  Rng fork(std::uint64_t a, std::uint64_t b = 0) const;

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

}  // namespace navr1
