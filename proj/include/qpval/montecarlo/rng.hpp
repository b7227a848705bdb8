#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qpval::mc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key)
    {
        constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

// (seed, stream) names an independent family of substreams; each substream (e.g. a path index)
// is an independent sequence of draws.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Sequential draws from one substream. Counter layout: (draw block, substream, stream lo, stream hi);
// key = seed.
class Stream {
public:
    Stream(RngSpec spec, std::uint32_t substream)
        : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
          ctr_{0, substream, static_cast<std::uint32_t>(spec.stream), static_cast<std::uint32_t>(spec.stream >> 32)}
    {
    }

    std::uint32_t next_u32()
    {
        if (pos_ == 4) {
            buf_ = Philox4x32::block(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Antithetic mode reflects every draw: uniforms become 1 - u and normals change sign.
    void set_antithetic(bool on) { antithetic_ = on; }

    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform()
    {
        const double u = raw_uniform();
        return antithetic_ ? 1.0 - u : u;
    }

    double normal()
    {
        const double z = raw_normal();
        return antithetic_ ? -z : z;
    }

    double exponential() { return -std::log(uniform()); }

private:
    double raw_uniform()
    {
        const std::uint64_t hi = next_u32(), lo = next_u32();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double raw_normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = raw_uniform(), u2 = raw_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
    bool antithetic_ = false;
};

} // namespace qpval::mc
