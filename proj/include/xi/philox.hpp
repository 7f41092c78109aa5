#pragma once

#include <array>
#include <cstdint>

namespace xi {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The generator is a pure function of a 128-bit counter and a 64-bit key.
/// Streams are addressed by putting the stream id in the upper half of the
/// counter, so any (seed, stream, block) triple can be evaluated directly
/// without stepping through earlier outputs.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// A named random stream: master seed plus stream id.
///
/// Block `b` of the stream is Philox(counter = {b_lo, b_hi, id_lo, id_hi},
/// key = {seed_lo, seed_hi}); each block yields 128 random bits.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t id = 0;

    [[nodiscard]] Philox4x32::Counter block(std::uint64_t index) const noexcept {
        return Philox4x32::generate(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
             static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)},
            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    }

    /// Uniform 64-bit word at position `index` (two words per block).
    [[nodiscard]] std::uint64_t word(std::uint64_t index) const noexcept {
        const auto b = block(index / 2);
        const unsigned off = static_cast<unsigned>(index % 2) * 2;
        return (std::uint64_t{b[off + 1]} << 32) | b[off];
    }
};

/// Sequential reader of 2-bit directions from a stream.
///
/// Direction `j` comes from bits [2*(j%64), 2*(j%64)+2) of block j/64, so the
/// walk step at index j depends only on (seed, id, j).
class DirectionCursor {
  public:
    DirectionCursor() = default;
    DirectionCursor(RngStream stream, std::uint64_t position) noexcept
        : stream_(stream), position_(position) {
        load();
    }

    /// Direction in {0,1,2,3} for the current position; advances by one.
    unsigned next() noexcept {
        if (remaining_ == 0) load();
        const auto dir = static_cast<unsigned>(bits_lo_ & 3u);
        bits_lo_ = (bits_lo_ >> 2) | (bits_hi_ << 62);
        bits_hi_ >>= 2;
        --remaining_;
        ++position_;
        return dir;
    }

    [[nodiscard]] std::uint64_t position() const noexcept { return position_; }

  private:
    void load() noexcept {
        const auto b = stream_.block(position_ / 64);
        bits_lo_ = (std::uint64_t{b[1]} << 32) | b[0];
        bits_hi_ = (std::uint64_t{b[3]} << 32) | b[2];
        const unsigned skip = static_cast<unsigned>(position_ % 64);
        // shift the 128-bit buffer right by 2*skip bits
        for (unsigned i = 0; i < skip; ++i) {
            bits_lo_ = (bits_lo_ >> 2) | (bits_hi_ << 62);
            bits_hi_ >>= 2;
        }
        remaining_ = 64 - skip;
    }

    RngStream stream_{};
    std::uint64_t position_ = 0;
    std::uint64_t bits_lo_ = 0;
    std::uint64_t bits_hi_ = 0;
    unsigned remaining_ = 0;
};

}  // namespace xi
