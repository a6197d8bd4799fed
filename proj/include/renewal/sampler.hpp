#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "renewal/dist.hpp"

namespace renewal {

/**
 * Counter-based 64-bit generator: draw n of a stream is the SplitMix64
 * finalizer applied to key + (n + 1) * 0x9E3779B97F4A7C15, where key is
 * derived from the seed. Output depends only on (seed, draw index), so it is
 * bit-exact across platforms and can jump to any position in O(1).
 */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    // Uniform on (0, 1] with 53-bit resolution.
    double uniform() noexcept;

    void jump_to(std::uint64_t counter) noexcept { counter_ = counter; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed of replica `index` of a run seeded with `base_seed`.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

// Packed 0/1 sequence; bit i holds X_{i+1}.
class BinarySequence {
public:
    BinarySequence() = default;
    explicit BinarySequence(std::size_t length)
        : length_(length), words_((length + 63) / 64, 0) {}

    std::size_t size() const noexcept { return length_; }
    bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    std::size_t count_ones() const noexcept;

    // Calls f(i) for every set bit i in increasing order.
    template <class F>
    void for_each_one(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
    }

    std::uint64_t seed = 0;
    std::uint64_t model_id = 0;
    std::size_t renewal_count = 0;

    friend bool operator==(const BinarySequence& a, const BinarySequence& b) {
        return a.length_ == b.length_ && a.words_ == b.words_;
    }

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

// Cumulative tables for the delay S1 and the waiting time S2, shared read-only
// by any number of generators.
struct SamplingTables {
    explicit SamplingTables(const WaitingTimeDistribution& w);

    // cdf[s - 1] = P[S <= s]; the last entry is exactly 1.
    std::vector<double> delay_cdf;
    std::vector<double> waiting_cdf;
};

// Smallest s with u <= cdf[s - 1].
std::size_t inverse_cdf(std::span<const double> cdf, double u) noexcept;

// Single-owner sampling state.
class GeneratorState {
public:
    GeneratorState(std::shared_ptr<const SamplingTables> tables, std::uint64_t seed)
        : tables_(std::move(tables)), rng_(seed) {}

    std::size_t sample_first_waiting() noexcept;
    std::size_t sample_waiting() noexcept;

    CounterRng& rng() noexcept { return rng_; }

private:
    std::shared_ptr<const SamplingTables> tables_;
    CounterRng rng_;
};

// Stationary delayed renewal sequence of the given length.
BinarySequence generate(const WaitingTimeDistribution& w, std::size_t length, std::uint64_t seed,
                        std::uint64_t model_id = 0);

BinarySequence generate(std::shared_ptr<const SamplingTables> tables, std::size_t length,
                        std::uint64_t seed, std::uint64_t model_id = 0);

// Replica k is generate(..., derive_stream_seed(base_seed, k)); results are
// ordered by k whatever the thread count.
std::vector<BinarySequence> generate_replicas(const WaitingTimeDistribution& w,
                                              std::size_t length, std::uint64_t base_seed,
                                              std::size_t replicas, unsigned threads = 1,
                                              std::uint64_t model_id = 0);

// Runs fn(k) for k in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& fn);

}  // namespace renewal

#include "renewal/detail/parallel.hpp"
