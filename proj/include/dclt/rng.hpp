#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dclt {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw, SC'11).
 *
 * The 64-bit key is the user seed and the 128-bit counter is split into a
 * 64-bit stream index (high half) and a 64-bit block index (low half). Two
 * generators built from the same (seed, stream) produce identical sequences,
 * and different streams never overlap, which lets workers sample disjoint
 * chunks of a run without coordination.
 */
class Philox4x32
{
  public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    // Next 64 random bits.
    result_type operator()();

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    // Uniform on (0, 1); never returns 0 so log() is safe.
    double uniform_open();

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();

    // The raw 10-round bijection.
    static Block bijection(Block counter, Key key);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    Block buffer_{};
    int buffered_words_ = 0;  // 32-bit words left in buffer_
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent seeds from (seed, tag).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace dclt
