#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace langvar {

// Deterministic randomness for everything that must be reproducible across
// runs and platforms: corpus splits, window shuffles, NP randomization.
//
// The generator is splitmix64 (Steele, Lea & Flood 2014). Normative spec,
// so that an independent implementation can reproduce every permutation:
//
//   next():  state += 0x9E3779B97F4A7C15
//            z = state
//            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//            return z ^ (z >> 31)
//
// Stream seeds are derived by folding context words (user seed, sequence
// length, window index, sentence id, ...) left to right:
//
//   acc_0 = 0x51A1C9E3F0B3DE2D
//   acc_i = mix64(acc_{i-1} ^ (w_i + 0x9E3779B97F4A7C15))
//
// where mix64 is the splitmix64 output function (the z-steps above).
//
// Bounded draws use rejection sampling, permutations use Fisher-Yates from
// the high index down; both are spelled out in the function bodies below
// and are part of the format contract.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kSeedSalt = 0x51A1C9E3F0B3DE2Dull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t acc = kSeedSalt;
  for (std::uint64_t w : words) acc = mix64(acc ^ (w + kGolden));
  return acc;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform draw in [0, n). Unbiased via rejection of the partial cycle.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates permutation of {0..n-1} drawn from a fresh stream.
// p is a gather map: output[i] = input[p[i]].
inline std::vector<std::size_t> random_permutation(std::uint64_t seed, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

}  // namespace langvar
