#ifndef TRANSCLIME_RNG_HPP_
#define TRANSCLIME_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace transclime {

// SplitMix64 step, used to derive independent stream seeds:
// derive_seed(s, k) = splitmix64(s + (k+1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic random source. The generator is std::mt19937_64, whose
// output sequence is pinned by the C++ standard, so identical seeds
// reproduce identical draws on every platform. Derived quantities use
// fixed transforms:
//   uniform01: ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
//   uniform_below(k): 64-bit draw reduced modulo k with rejection
//   normal: inverse-CDF transform of uniform01
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double uniform01();
  double uniform(double lo, double hi);
  bool bernoulli(double prob);
  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  double normal();

  // Fisher-Yates shuffle with uniform_below draws, high index first.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace transclime

#endif  // TRANSCLIME_RNG_HPP_
