#include "fogsim/rng.hpp"

namespace fogsim {

namespace {

std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

Rng::Rng(std::uint64_t root_seed, std::string_view stream, std::uint64_t index)
    : engine_(splitmix(splitmix(root_seed) ^ fnv1a(stream) ^ splitmix(index + 0x51ed270b27f4a1c3ULL)))
{
}

} // namespace fogsim
