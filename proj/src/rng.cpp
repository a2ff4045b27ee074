// SPDX-License-Identifier: Apache-2.0

#include "pdnn/rng.hpp"

#include <cmath>
#include <numbers>

namespace pdnn
{

namespace
{

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) noexcept
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(const StreamKey &key) noexcept
{
    // Two independent hash chains over the key: one becomes the Philox key,
    // the other the upper half of the counter.
    std::uint64_t a = splitmix64(key.root_seed);
    std::uint64_t b = splitmix64(key.root_seed ^ 0x5851f42d4c957f2dull);
    const std::uint64_t words[4] = {static_cast<std::uint64_t>(key.domain), key.indices[0], key.indices[1],
                                    key.indices[2]};
    for (std::uint64_t w : words)
    {
        a = splitmix64(a ^ splitmix64(w));
        b = splitmix64(b + splitmix64(w ^ 0xa0761d6478bd642full));
    }
    key_ = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
    prefix_lo_ = static_cast<std::uint32_t>(b);
    prefix_hi_ = static_cast<std::uint32_t>(b >> 32);
}

void RandomStream::refill() noexcept
{
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(counter_lo_), static_cast<std::uint32_t>(counter_lo_ >> 32),
                                  prefix_lo_, prefix_hi_};
    buffer_ = Philox4x32::block(ctr, key_);
    ++counter_lo_;
    buffered_ = 4;
}

std::uint32_t RandomStream::next_u32() noexcept
{
    if (buffered_ == 0)
        refill();
    return buffer_[static_cast<std::size_t>(4 - buffered_--)];
}

std::uint64_t RandomStream::next_u64() noexcept
{
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double RandomStream::uniform() noexcept
{
    // 53-bit mantissa, shifted by half an ulp so 0 is never produced.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::uniform_phase() noexcept
{
    constexpr double pi = std::numbers::pi;
    for (;;)
    {
        const double v = -pi + 2.0 * pi * uniform();
        if (v > -pi && v < pi)
            return v;
    }
}

double RandomStream::normal() noexcept
{
    if (has_cached_normal_)
    {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::complex<double> RandomStream::complex_normal() noexcept
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 * 0.5, im * std::numbers::sqrt2 * 0.5};
}

std::uint64_t RandomStream::below(std::uint64_t n) noexcept
{
    // Lemire's rejection method, exact for every n.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold)
        {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

} // namespace pdnn
