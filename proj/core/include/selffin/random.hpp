#pragma once

#include <cstdint>

namespace selffin {

/// Counter-based standard normal stream: the variate for (seed, path, step)
/// is a pure function of those three integers, so paths can be generated in
/// any order or on any thread with identical results.
class CounterNormal {
public:
    explicit CounterNormal(std::uint64_t seed) noexcept : seed_(seed) {}

    /// Uniform in the open interval (0, 1).
    double uniform(std::uint64_t path, std::uint64_t step) const noexcept;

    /// Standard normal by inverse CDF of `uniform(path, step)`.
    double operator()(std::uint64_t path, std::uint64_t step) const;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace selffin
