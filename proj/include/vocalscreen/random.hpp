#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace vocalscreen {

// SplitMix64 (Steele, Lea & Flood). The whole project draws randomness from
// this generator so shuffles and synthetic audio are identical on every
// platform; std:: distributions are implementation-defined and are not used.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform in (0, 1], safe as a log argument.
  double uniform_open();
  // Uniform in [0, bound). Uses next() % bound; the bias is below 2^-40 for
  // any bound this project uses.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller (one draw per call, the sine branch is discarded).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  // Exponential with the given rate.
  double exponential(double rate);

 private:
  std::uint64_t state_;
};

// Mixes a seed with a stream index so independent workers get decorrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Fisher-Yates: for i = n-1 down to 1, swap(items[i], items[rng.below(i + 1)]).
template <typename T>
void shuffle(std::span<T> items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace vocalscreen
