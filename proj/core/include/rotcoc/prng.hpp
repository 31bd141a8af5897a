#pragma once

#include "rotcoc/numeric.hpp"

#include <cstdint>

namespace rotcoc {

// splitmix64: tiny, platform-independent stream. All sampling in the library
// goes through this so that a fixed seed gives byte-identical artifacts.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

    // Uniform rational p/q with 1 <= p < q = den.
    Rat rational(std::uint64_t den) {
        return Rat(Int(1 + below(den - 1)), Int(den));
    }

private:
    std::uint64_t state_;
};

}  // namespace rotcoc
