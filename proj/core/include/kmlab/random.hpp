#pragma once

#include <cstdint>
#include <random>

namespace kmlab {

/// Derives independent substream seeds from one master seed so parallel and
/// serial execution draw identical numbers.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master + (index + 1) * 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// mt19937_64 with a platform-independent uniform-double mapping.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        const double u01 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u01;
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace kmlab
