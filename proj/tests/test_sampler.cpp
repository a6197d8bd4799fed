#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "renewal/dist.hpp"
#include "renewal/renewal_inverse.hpp"
#include "renewal/sampler.hpp"

using namespace renewal;

namespace {

WaitingTimeDistribution geometric2() {
    const double h[] = {0.5};
    return markov_family(0, h, 0.5);
}

WaitingTimeDistribution gamma2_model() {
    const CovarianceSpec spec{0.5, 0.25, PowerLogPhi{2.0}};
    return invert_autocovariance(covariance_from_spec(spec, 20'000)).distribution;
}

std::size_t code_of(const BinarySequence& x, std::size_t from, std::size_t len) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < len; ++i) code |= static_cast<std::size_t>(x[from + i]) << i;
    return code;
}

}  // namespace

TEST_CASE("rng: splitmix64 reference value and counter jumps") {
    // First output of the reference SplitMix64 stream seeded with 0.
    CHECK(splitmix64(0x9E3779B97F4A7C15ull) == 0xE220A8397B1DCDAFull);
    CounterRng a(123);
    std::vector<std::uint64_t> draws;
    for (int i = 0; i < 10; ++i) draws.push_back(a.next());
    CounterRng b(123);
    b.jump_to(6);
    CHECK(b.next() == draws[6]);
    CHECK(a.counter() == 10);
    CounterRng u(5);
    for (int i = 0; i < 100'000; ++i) {
        const double x = u.uniform();
        CHECK_UNARY(x > 0.0 && x <= 1.0);
    }
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
}

TEST_CASE("inverse_cdf tie rule") {
    const SamplingTables tables(geometric2());
    CHECK(tables.delay_cdf.front() == doctest::Approx(0.5));
    CHECK(inverse_cdf(tables.delay_cdf, 0.5) == 1);
    const double at1 = tables.delay_cdf.front();
    CHECK(inverse_cdf(tables.delay_cdf, at1) == 1);
    CHECK(inverse_cdf(tables.delay_cdf, std::nextafter(at1, 1.0)) == 2);
    CHECK(inverse_cdf(tables.waiting_cdf, 1.0) == tables.waiting_cdf.size());
    CHECK(tables.waiting_cdf.back() == 1.0);
    CHECK(tables.delay_cdf.back() == 1.0);
}

TEST_CASE("deterministic waiting time") {
    const double one[] = {1.0};
    const auto w = from_density(one);
    auto tables = std::make_shared<const SamplingTables>(w);
    GeneratorState g(tables, 9);
    for (int i = 0; i < 100; ++i) {
        CHECK(g.sample_waiting() == 1);
        CHECK(g.sample_first_waiting() == 1);
    }
    const auto x = generate(w, 1000, 3);
    CHECK(x.count_ones() == 1000);
}

TEST_CASE("waiting-time draws for gamma = 2 polynomial tail") {
    const auto w = polynomial_tail(2.0, 1.0);
    auto tables = std::make_shared<const SamplingTables>(w);
    GeneratorState g(tables, 2024);
    const std::size_t n = 1'000'000;
    long double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += static_cast<long double>(g.sample_waiting());
    const double mean = static_cast<double>(sum / n);
    const double sd = std::sqrt(w.second_moment() - w.mean() * w.mean());
    CHECK(std::fabs(mean - w.mean()) < 3.0 * sd / 1000.0);
}

TEST_CASE("generate: fraction of ones") {
    const auto x = generate(geometric2(), 1'000'000, 11);
    CHECK(std::fabs(static_cast<double>(x.count_ones()) / 1e6 - 0.5) < 0.002);

    const auto w = gamma2_model();
    const auto y = generate(w, 1'000'000, 12);
    const double mu = w.mean();
    const double v0 = w.second_moment() / (mu * mu * mu) - 1.0 / mu;
    CHECK(std::fabs(static_cast<double>(y.count_ones()) / 1e6 - 1.0 / mu) < 4.0 * std::sqrt(v0 / 1e6));
}

TEST_CASE("generate: provenance fields and determinism") {
    const auto w = gamma2_model();
    const auto a = generate(w, 5000, 77, 0xabc);
    const auto b = generate(w, 5000, 77, 0xabc);
    CHECK(a == b);
    CHECK(a.seed == 77);
    CHECK(a.model_id == 0xabc);
    CHECK(a.renewal_count >= a.count_ones());
    CHECK_FALSE(a == generate(w, 5000, 78));
    // Bits past the length stay clear.
    const auto words = a.words();
    CHECK((words.back() >> (5000 % 64)) == 0);
}

TEST_CASE("generate_replicas: streams, order and threads") {
    const auto w = gamma2_model();
    const auto r1 = generate_replicas(w, 1000, 7, 2);
    const auto r2 = generate_replicas(w, 1000, 7, 2);
    REQUIRE(r1.size() == 2);
    CHECK(r1[0] == r2[0]);
    CHECK(r1[1] == r2[1]);
    CHECK_FALSE(r1[0] == r1[1]);
    const auto single = generate_replicas(w, 1000, 7, 1);
    CHECK(single[0] == generate(w, 1000, derive_stream_seed(7, 0)));
    const auto threaded = generate_replicas(w, 1000, 7, 16, 4);
    const auto serial = generate_replicas(w, 1000, 7, 16, 1);
    for (std::size_t k = 0; k < 16; ++k) CHECK(threaded[k] == serial[k]);
}

TEST_CASE("replica means follow the i.i.d. CLT variance") {
    const auto reps = generate_replicas(geometric2(), 10'000, 99, 100, 2);
    std::vector<double> z;
    for (const auto& x : reps) z.push_back(std::sqrt(1e4) * (static_cast<double>(x.count_ones()) / 1e4 - 0.5));
    double m = 0, v = 0;
    for (double e : z) m += e;
    m /= z.size();
    for (double e : z) v += (e - m) * (e - m);
    v /= (z.size() - 1);
    CHECK(std::fabs(v - 0.25) < 0.25 * 0.25);
}

TEST_CASE("length-3 patterns of the fair coin") {
    const auto tables = std::make_shared<const SamplingTables>(geometric2());
    std::array<std::size_t, 8> counts{};
    const std::size_t n = 1'000'000;
    for (std::size_t k = 0; k < n; ++k) ++counts[code_of(generate(tables, 3, derive_stream_seed(5, k)), 0, 3)];
    const double sigma = std::sqrt(n * 0.125 * 0.875);
    for (auto c : counts) CHECK(std::fabs(c - n * 0.125) < 4.0 * sigma);
}

TEST_CASE("stationarity, reversibility and regeneration of short blocks") {
    const double head[] = {0.1, 0.45};
    const std::vector<WaitingTimeDistribution> models = {markov_family(1, head, 0.5),
                                                         polynomial_tail(2.0, 1.0), gamma2_model()};
    const std::size_t n = 100'000;
    for (const auto& w : models) {
        const oracle::Chain chain(w);
        const auto tables = std::make_shared<const SamplingTables>(w);
        // counts[h][code] for blocks (X_{1+h}, ..., X_{4+h}).
        std::vector<std::array<std::size_t, 16>> counts(6);
        std::array<std::array<std::size_t, 4>, 4> split{};  // (x1 x2 | x4 x5) given x3 = 1
        std::size_t hits = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto x = generate(tables, 9, derive_stream_seed(31, k));
            for (std::size_t h = 0; h <= 5; ++h) ++counts[h][code_of(x, h, 4)];
            if (x[2]) {
                ++hits;
                ++split[code_of(x, 0, 2)][code_of(x, 3, 2)];
            }
        }
        for (std::size_t h = 0; h <= 5; ++h) {
            for (std::size_t code = 0; code < 16; ++code) {
                const auto bits = oracle::bits_of(code, 4);
                const double p = static_cast<double>(chain.prob(bits));
                const double sigma = std::sqrt(n * p * (1 - p));
                CHECK(std::fabs(counts[h][code] - n * p) <= 4.0 * sigma + 1.0);
            }
        }
        for (std::size_t code = 0; code < 16; ++code) {
            std::size_t rev = 0;
            for (int i = 0; i < 4; ++i) rev |= ((code >> i) & 1u) << (3 - i);
            const double a = counts[0][code], b = counts[0][rev];
            CHECK(std::fabs(a - b) <= 4.0 * std::sqrt(a + b) + 1.0);
        }
        // Regeneration: given X_3 = 1, the blocks before and after are independent.
        std::array<double, 4> past{}, future{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                past[i] += split[i][j];
                future[j] += split[i][j];
            }
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double expected = past[i] * future[j] / hits;
                const double pij = expected / hits;
                CHECK(std::fabs(split[i][j] - expected) <= 4.0 * std::sqrt(hits * pij * (1 - pij)) + 1.0);
            }
        }
    }
}
