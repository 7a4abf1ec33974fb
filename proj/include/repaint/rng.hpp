#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

#include "repaint/hash.hpp"

namespace repaint {

// Deterministic RNG with platform-stable output. mt19937_64 is bit-exact by
// the standard; we avoid std::uniform_*_distribution (implementation-defined)
// and derive values from raw 64-bit draws instead.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}
    explicit DetRng(std::initializer_list<std::string_view> seed_parts)
        : eng_(stable_seed(seed_parts)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform double in [0, 1), 53 bits of precision.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double symmetric() { return unit() * 2.0 - 1.0; }

    // Uniform index in [0, n). Modulo bias is irrelevant at our scales and
    // keeps the draw sequence simple to reproduce by hand.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[below(items.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace repaint
