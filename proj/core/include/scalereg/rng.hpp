#pragma once

#include <cmath>
#include <cstdint>

namespace scalereg {

// Splittable counter-style generator (splitmix64 core). Each (seed, stream)
// pair yields an independent, scheduling-invariant stream, so Monte Carlo
// cells can run on any worker and still reproduce bit-identically.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        next_u64();
        next_u64();
    }

    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        s ^= 0x9e3779b97f4a7c15ull + (stream << 6) + (stream >> 2);
        s += stream * 0xbf58476d1ce4e5b9ull;
        return Rng(s);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1]
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // uniform in [lo, hi]
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; avoids std::normal_distribution so the
    // stream is identical across standard library implementations
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace scalereg
