#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fogsim {

/// Named, independently seeded random stream. Uniform draws are built from the
/// raw 64-bit output so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    Rng(std::uint64_t root_seed, std::string_view stream, std::uint64_t index = 0);

    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace fogsim
