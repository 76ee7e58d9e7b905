#ifndef RWALK_RNG_HPP
#define RWALK_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rwalk {

// SplitMix64 finalizer; bijective on 64-bit words.  Used to derive stream
// keys so that (master_seed, stream_id) pairs map to well-separated states.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic pseudo-random stream (xoshiro256++ core, SplitMix64 seeded).
//
// Every stream is keyed by (master_seed, stream_id).  Replication j of a run
// owns stream (seed, j) and nothing else, so replications are reproducible
// in isolation and results cannot depend on worker scheduling.  All variates
// are generated from explicit integer arithmetic; nothing here depends on
// libstdc++ distribution internals, so sequences are stable across
// platforms and compilers.
class RandomStream {
  public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        // Affine map in stream_id is injective for a fixed seed; mix64 then
        // decorrelates neighbouring ids before SplitMix64 expansion.
        std::uint64_t key =
            mix64(master_seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
        std::uint64_t sm = key;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
        if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 &&
            state_[3] == 0) {
            state_[0] = 1;  // all-zero state is the one forbidden point
        }
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Bernoulli(p) via a single uniform; callers rely on the "one uniform
    // per draw, compared as u < p" convention for reproducibility.
    bool next_bernoulli(double p) { return next_uniform() < p; }

    // Standard normal variate via the polar (Marsaglia) method.  The
    // second value of each accepted pair is discarded so that the stream
    // position never depends on call history.
    double next_gaussian() {
        for (;;) {
            double u = 2.0 * next_uniform() - 1.0;
            double v = 2.0 * next_uniform() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    // Symmetric Beta(a, a) variate, a > 0.  Johnk's method below a = 1,
    // Cheng's BB rejection above; both consume only uniforms so remain
    // platform-stable.  Rejection consumes a variable number of uniforms.
    double next_beta_symmetric(double a) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("beta shape must be positive");
        }
        if (a == 1.0) return next_uniform();
        if (a < 1.0) return johnk(a);
        return cheng_bb(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    double positive_uniform() {
        double u = next_uniform();
        while (u == 0.0) u = next_uniform();
        return u;
    }

    double johnk(double a) {
        for (;;) {
            double x = std::pow(positive_uniform(), 1.0 / a);
            double y = std::pow(positive_uniform(), 1.0 / a);
            if (x + y <= 1.0 && x + y > 0.0) return x / (x + y);
        }
    }

    double cheng_bb(double a) {
        // Symmetric case of Cheng (1978) algorithm BB.
        const double alpha = 2.0 * a;
        const double beta = std::sqrt((alpha - 2.0) / (2.0 * a * a - alpha));
        const double gamma = a + 1.0 / beta;
        const double log4 = 1.3862943611198906;
        for (;;) {
            double u1 = positive_uniform();
            if (u1 >= 1.0) continue;
            double u2 = positive_uniform();
            double v = beta * std::log(u1 / (1.0 - u1));
            double w = a * std::exp(v);
            double z = u1 * u1 * u2;
            double r = gamma * v - log4;
            double s = a + r - w;
            if (s + 2.6094379124341003 >= 5.0 * z ||
                s >= std::log(z) ||
                r + alpha * std::log(alpha / (a + w)) >= std::log(z)) {
                return w / (a + w);
            }
        }
    }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace rwalk

#endif
