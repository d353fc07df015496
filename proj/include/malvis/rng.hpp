#ifndef MALVIS_RNG_HPP
#define MALVIS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace malvis {

// Deterministic random source. mt19937_64 supplies the raw stream; all
// distributions are implemented here rather than with <random>'s
// distribution templates, whose output is not pinned by the standard.
// Identical seeds therefore give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n). Multiply-shift map of the raw 64-bit
    // draw; bias is negligible for the n used here (< 2^32).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

    // Uniform double in [0, 1), 53 bits of precision.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Standard normal via Box-Muller (cosine branch only, so one draw
    // consumes exactly two raw values).
    double normal() {
        double u1 = unit();
        double u2 = unit();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Random permutation of {0, ..., n-1}.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace malvis

#endif  // MALVIS_RNG_HPP
