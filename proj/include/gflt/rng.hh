#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace gflt {

// Deterministic random stream. Every draw site constructs its own stream from
// (seed, tag), so the values produced at one site never depend on how many
// draws happened elsewhere. mt19937_64 is bit-exact across standard library
// implementations; the uniform/normal transforms below are spelled out here
// because the std::*_distribution classes are not.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view tag) : gen_(mix(seed, tag)) {}

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform double in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // complex with independent standard-normal real and imaginary parts
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::string_view tag) {
    // FNV-1a over the tag, then one splitmix64 step to decorrelate seeds
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    std::uint64_t z = seed ^ h;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gflt
