#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace cvxs {

/// Deterministic pseudo-random stream (xoshiro256** with splitmix64 seeding).
///
/// Every random decision in the project flows through this class so runs are
/// bit-reproducible across platforms and the four-word state can be embedded
/// in saved bundles and restored exactly.
class Rng {
public:
    using State = std::array<std::uint64_t, 4>;

    explicit Rng(std::uint64_t seed) {
        // splitmix64 expansion; never yields the all-zero state
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    static Rng from_state(const State& s) {
        Rng r(0);
        r.state_ = s;
        return r;
    }

    const State& state() const noexcept { return state_; }

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

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), unbiased. n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal() {
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Ascending [0, n) then shuffled; the common row-ordering helper.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        shuffle(order);
        return order;
    }

    /// Independent child stream. Forking advances this stream by one draw.
    Rng fork() { return Rng(next_u64()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    State state_{};
};

} // namespace cvxs
