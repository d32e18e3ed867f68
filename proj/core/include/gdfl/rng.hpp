#ifndef GDFL_RNG_HPP
#define GDFL_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace gdfl {

// Seeded generator with portable draws. The standard distributions are
// implementation-defined, so bounded integers and unit reals are derived
// from the raw mt19937_64 stream directly to keep results identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  // Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform real in [-scale, scale).
  double symmetric(double scale) { return (2.0 * unit() - 1.0) * scale; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gdfl

#endif  // GDFL_RNG_HPP
