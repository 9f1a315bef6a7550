#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evt {

// Identifies one reproducible random stream. Streams with the same master
// seed and different indices are independent for practical purposes; the
// same spec always replays the same sequence, on any platform, because all
// variate transforms below are written out explicitly instead of relying on
// implementation-defined std distributions.
struct StreamSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

// Stateless 64-bit mixer; used to derive well-separated master seeds for
// independent runs (e.g. one per table cell) from a single user seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class RngStream {
public:
    explicit RngStream(const StreamSpec& spec) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(spec.master_seed & 0xffffffffu),
            static_cast<std::uint32_t>(spec.master_seed >> 32),
            static_cast<std::uint32_t>(spec.stream_index & 0xffffffffu),
            static_cast<std::uint32_t>(spec.stream_index >> 32),
        };
        engine_.seed(seq);
    }

    std::uint64_t next_raw() { return engine_(); }

    // Uniform on the open interval (0,1): never returns 0 or 1, so logs and
    // reciprocals of the result are always finite.
    double uniform01() {
        return (static_cast<double>(next_raw() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unit-mean exponential.
    double exponential() { return -std::log(uniform01()); }

    // Standard normal via the Marsaglia polar method; pairs are generated
    // and the spare is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace evt
