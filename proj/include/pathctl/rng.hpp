#pragma once

// Counter-based random numbers for reproducible parallel Monte Carlo.
//
// Every Gaussian draw is a pure function of (seed, stream, step, column), so
// an ensemble produces the same numbers no matter how its paths are split
// across threads or in which order they are evaluated.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace pathctl::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3").
inline Counter philox4x32(Counter ctr, Key key) noexcept
{
    constexpr std::uint32_t kMulA = 0xD2511F53u;
    constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    for (int round = 0; round < 10; ++round) {
        const std::uint64_t prod_a = std::uint64_t{kMulA} * ctr[0];
        const std::uint64_t prod_b = std::uint64_t{kMulB} * ctr[2];
        const auto hi_a = static_cast<std::uint32_t>(prod_a >> 32);
        const auto lo_a = static_cast<std::uint32_t>(prod_a);
        const auto hi_b = static_cast<std::uint32_t>(prod_b >> 32);
        const auto lo_b = static_cast<std::uint32_t>(prod_b);
        ctr = {hi_b ^ ctr[1] ^ key[0], lo_b, hi_a ^ ctr[3] ^ key[1], lo_a};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

/// SplitMix64 finalizer, used to fold (seed, stream) into a Philox key.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Open-interval uniform in (0, 1) from the top 52 bits of a 64-bit word;
/// the half-step offset keeps both end points out of reach.
constexpr double to_unit_open(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// A keyed stream of independent standard normals indexed by (step, column).
class NormalStream
{
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    {
        const std::uint64_t k = splitmix64(seed ^ splitmix64(stream_id + 0x632BE59BD9B4E019ull));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    /// Standard normal for (step, column). Columns come in Box-Muller pairs
    /// drawn from one Philox block.
    double operator()(std::uint64_t step, std::uint64_t column) const noexcept
    {
        const std::uint64_t pair = column / 2;
        const Counter out = philox4x32({static_cast<std::uint32_t>(step),
                                        static_cast<std::uint32_t>(step >> 32),
                                        static_cast<std::uint32_t>(pair),
                                        static_cast<std::uint32_t>(pair >> 32)},
                                       key_);
        const double u1 = to_unit_open((std::uint64_t{out[0]} << 32) | out[1]);
        const double u2 = to_unit_open((std::uint64_t{out[2]} << 32) | out[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return (column % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
    }

  private:
    Key key_{};
};

}  // namespace pathctl::rng
