#include "selffin/random.hpp"

#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace selffin {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double CounterNormal::uniform(std::uint64_t path, std::uint64_t step) const noexcept {
    const std::uint64_t h = mix(mix(mix(seed_) ^ path) ^ (step * 0xd1b54a32d192ed03ULL));
    // top 53 bits, centred in their cell so 0 and 1 are unreachable
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double CounterNormal::operator()(std::uint64_t path, std::uint64_t step) const {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform(path, step));
}

}  // namespace selffin
