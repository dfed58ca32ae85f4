#ifndef SERF_PHILOX_HPP
#define SERF_PHILOX_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace serf {

/// Philox4x64-10 counter-based random generator.
///
/// Stateless core: each 256-bit output block is a pure function of
/// (key, counter), so independent streams are obtained by partitioning the
/// counter space. Constants are the standard Philox 4x64 round constants;
/// output matches the reference generator (same as numpy.random.Philox).
class Philox4x64 {
public:
    using Block = std::array<std::uint64_t, 4>;

    explicit Philox4x64(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    /// Jump directly to a block index (stream partitioning).
    void set_counter(std::uint64_t c0, std::uint64_t c1 = 0,
                     std::uint64_t c2 = 0, std::uint64_t c3 = 0) {
        counter_ = {c0, c1, c2, c3};
        buffer_pos_ = 4;
    }

    static Block block(const std::array<std::uint64_t, 2>& key, Block ctr) {
        std::array<std::uint64_t, 2> k = key;
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, k);
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        return ctr;
    }

    std::uint64_t next_u64() {
        if (buffer_pos_ >= 4) {
            buffer_ = block(key_, counter_);
            increment_counter();
            buffer_pos_ = 0;
        }
        return buffer_[buffer_pos_++];
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_exponential(double rate) {
        return -std::log(next_double_open()) / rate;
    }

    /// Uniform integer in [0, n) by rejection-free scaling (n << 2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n));
    }

    /// Standard normal via Box-Muller (one value per call; pairs drawn fresh).
    double next_normal() {
        const double u = next_double_open();
        const double v = next_double();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(kTau * v);
    }

private:
    static constexpr double kTau = 6.28318530717958647692;
    static constexpr std::uint64_t kMul0 = 0xD2B74407B1CE6E93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
        const unsigned __int128 product =
            static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
        hi = static_cast<std::uint64_t>(product >> 64);
        lo = static_cast<std::uint64_t>(product);
    }

    static Block single_round(const Block& ctr, const std::array<std::uint64_t, 2>& k) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        return {hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0};
    }

    void increment_counter() {
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;
        }
    }

    std::array<std::uint64_t, 2> key_;
    Block counter_;
    Block buffer_{};
    int buffer_pos_ = 4;
};

}  // namespace serf

#endif
