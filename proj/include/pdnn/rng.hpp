// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams.
//
// Every random quantity in a simulation is addressed by a StreamKey
// (root seed, domain tag, up to three indices). The key is hashed into a
// Philox-4x32-10 key and counter prefix, so any stream can be constructed
// directly without advancing any other stream. Monte Carlo work can then be
// partitioned across workers in any order and still reproduce bit-for-bit.

#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace pdnn
{

enum class StreamDomain : std::uint32_t
{
    channel = 1,
    noise = 2,
    init = 3,
    baseline = 4,
    symbol = 5,
};

struct StreamKey
{
    std::uint64_t root_seed = 0;
    StreamDomain domain = StreamDomain::channel;
    std::array<std::uint64_t, 3> indices{0, 0, 0};

    friend bool operator==(const StreamKey &, const StreamKey &) = default;
};

// Philox-4x32 with 10 rounds (Salmon et al., SC'11).
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// A single random stream. Cheap to construct and copy; owns no shared state.
class RandomStream
{
  public:
    explicit RandomStream(const StreamKey &key) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    // Uniform on the open interval (0, 1).
    double uniform() noexcept;
    // Uniform on (-pi, pi); endpoints are never returned.
    double uniform_phase() noexcept;
    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() noexcept;
    // CN(0, 1): real and imaginary parts each N(0, 1/2).
    std::complex<double> complex_normal() noexcept;
    // Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) noexcept;

    // Number of 128-bit blocks consumed so far.
    std::uint64_t blocks_used() const noexcept { return counter_lo_; }

  private:
    void refill() noexcept;

    Philox4x32::Key key_{};
    std::uint32_t prefix_hi_ = 0;
    std::uint32_t prefix_lo_ = 0;
    std::uint64_t counter_lo_ = 0;
    Philox4x32::Counter buffer_{};
    int buffered_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

inline RandomStream stream(const StreamKey &key) noexcept { return RandomStream(key); }

} // namespace pdnn
