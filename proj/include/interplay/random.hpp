#pragma once

#include <cstdint>
#include <random>

namespace interplay {

/// Seed of stream `index` under `master`. Depends only on the pair, so parallel
/// schedules cannot change what any stream produces.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

/// Uniform reals from mt19937_64. The mapping is fixed here rather than left to
/// std::uniform_real_distribution, whose output differs between standard libraries.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [lo, hi).
    double operator()(double lo, double hi) {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * unit;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace interplay
