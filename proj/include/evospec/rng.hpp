#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace evospec {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key and the upper half of the 128-bit counter holds
/// a stream index, so (seed, stream) pairs name independent substreams that
/// can be generated in any order or on any thread with identical output.
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

    result_type operator()() noexcept;

    /// One raw block for a given key and counter (exposed for known-answer tests).
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> buffer_{};
    int next_ = 4;
};

/// SplitMix64 mix of (seed, tag); used to give unrelated consumers of one
/// user seed disjoint key spaces.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Standard normal draws from substream (seed, stream).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}

    double operator()() { return dist_(engine_); }
    void fill(std::span<double> out) {
        for (double& v : out) v = dist_(engine_);
    }
    Philox4x32& engine() noexcept { return engine_; }

private:
    Philox4x32 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

// Seed-domain tags.
inline constexpr std::uint64_t kBootstrapTag = 0xB007'5742'0000'0001ULL;
inline constexpr std::uint64_t kSimulationTag = 0x5133'0000'0000'0002ULL;
inline constexpr std::uint64_t kRestartTag = 0x4E57'0000'0000'0003ULL;

}  // namespace evospec
