#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ergotrope {

// Deterministic RNG stream addressed by (master seed, stream id).
//
// All randomness in the library flows through this wrapper so that results
// are bit-identical across platforms and thread schedules: mt19937_64 output
// is specified by the standard, and the distribution helpers below avoid
// std::uniform_real_distribution (whose mapping is implementation-defined).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::seed_seq seq{master_seed & 0xffffffffu, master_seed >> 32,
                          stream_id & 0xffffffffu,  stream_id >> 32,
                          std::uint64_t{0x9e3779b9}};
        gen_.seed(seq);
    }

    std::uint64_t bits() { return gen_(); }

    // uniform on [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // index sampled from the probability vector `weights` (need not be
    // normalized exactly; the last bucket absorbs rounding)
    int discrete(std::span<const double> weights) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    bool fair_bit() { return (gen_() >> 63) != 0; }

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace ergotrope
