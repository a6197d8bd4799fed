#include "renewal/sampler.hpp"

#include <algorithm>

#include "renewal/numeric.hpp"

namespace renewal {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed) noexcept : key_(splitmix64(seed + kGolden)) {}

std::uint64_t CounterRng::next() noexcept {
    ++counter_;
    return splitmix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base_seed) ^ splitmix64(index + 0xD1B54A32D192ED03ull));
}

std::size_t BinarySequence::count_ones() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

SamplingTables::SamplingTables(const WaitingTimeDistribution& w) {
    const std::size_t support = w.max_support();
    waiting_cdf.resize(support);
    delay_cdf.resize(support);
    CompensatedSum wait;
    CompensatedSum delay;
    const double mu = w.mean();
    for (std::size_t s = 1; s <= support; ++s) {
        wait += w.density(s);
        delay += w.tail(s - 1) / mu;
        waiting_cdf[s - 1] = std::min(wait.value(), 1.0);
        delay_cdf[s - 1] = std::min(delay.value(), 1.0);
    }
    waiting_cdf.back() = 1.0;
    delay_cdf.back() = 1.0;
}

std::size_t inverse_cdf(std::span<const double> cdf, double u) noexcept {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const auto index = static_cast<std::size_t>(it - cdf.begin());
    return std::min(index, cdf.size() - 1) + 1;
}

std::size_t GeneratorState::sample_first_waiting() noexcept {
    return inverse_cdf(tables_->delay_cdf, rng_.uniform());
}

std::size_t GeneratorState::sample_waiting() noexcept {
    return inverse_cdf(tables_->waiting_cdf, rng_.uniform());
}

BinarySequence generate(std::shared_ptr<const SamplingTables> tables, std::size_t length,
                        std::uint64_t seed, std::uint64_t model_id) {
    BinarySequence seq(length);
    seq.seed = seed;
    seq.model_id = model_id;
    GeneratorState state(std::move(tables), seed);
    std::size_t time = state.sample_first_waiting();
    std::size_t count = 0;
    while (time <= length) {
        seq.set(time - 1);
        ++count;
        time += state.sample_waiting();
    }
    seq.renewal_count = count;
    return seq;
}

BinarySequence generate(const WaitingTimeDistribution& w, std::size_t length, std::uint64_t seed,
                        std::uint64_t model_id) {
    return generate(std::make_shared<const SamplingTables>(w), length, seed, model_id);
}

std::vector<BinarySequence> generate_replicas(const WaitingTimeDistribution& w,
                                              std::size_t length, std::uint64_t base_seed,
                                              std::size_t replicas, unsigned threads,
                                              std::uint64_t model_id) {
    auto tables = std::make_shared<const SamplingTables>(w);
    std::vector<BinarySequence> out(replicas);
    parallel_for(replicas, threads, [&](std::size_t k) {
        out[k] = generate(tables, length, derive_stream_seed(base_seed, k), model_id);
    });
    return out;
}

}  // namespace renewal
