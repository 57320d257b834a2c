#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace obprm {

// Hand-rolled generators instead of <random> distributions: the standard
// leaves distribution output implementation-defined, and the experiment
// contract is bit-identical results for a given (seed, stream_id) on any
// platform and any worker count.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256** stream, seeded through splitmix64.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed_material) {
        std::uint64_t sm = seed_material;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; the spare value is cached so draws stay reproducible.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Master seed plus a stream-id path -> independent reproducible stream.
// Identical (seed, path) always yields the identical sequence.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const { return master_; }

    RngStream stream(std::initializer_list<std::uint64_t> path) const {
        std::uint64_t material = master_;
        for (std::uint64_t id : path) {
            std::uint64_t s = material ^ (id + 0x632BE59BD9B4E019ull);
            material = splitmix64(s);
        }
        return RngStream(material);
    }

    RngStream stream(std::uint64_t a) const { return stream({a}); }
    RngStream stream(std::uint64_t a, std::uint64_t b) const { return stream({a, b}); }
    RngStream stream(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
        return stream({a, b, c});
    }

    // Derive a child master seed (e.g. one per replication).
    std::uint64_t derive_seed(std::uint64_t id) const {
        std::uint64_t s = master_ ^ (id + 0xD1B54A32D192ED03ull);
        return splitmix64(s);
    }

private:
    std::uint64_t master_;
};

// Stream-id tags for the independent random consumers of an experiment.
namespace stream_tag {
inline constexpr std::uint64_t kObprmRay = 1;
inline constexpr std::uint64_t kSegmentDrop = 2;
inline constexpr std::uint64_t kReplication = 3;
inline constexpr std::uint64_t kCroftonLine = 4;
}  // namespace stream_tag

}  // namespace obprm
