#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "renewal/dist.hpp"
#include "renewal/sampler.hpp"

namespace renewal {

using Pattern = std::span<const std::uint8_t>;

inline constexpr std::size_t kExactPatternCap = 64;

// pi_t(x) = P[X_1 = x_1, ..., X_t = x_t], evaluated in log space.
double joint_probability(const WaitingTimeDistribution& w, Pattern x,
                         std::size_t cap = kExactPatternCap);
// ln pi_t(x); -infinity for impossible patterns.
double log_joint_probability(const WaitingTimeDistribution& w, Pattern x,
                             std::size_t cap = kExactPatternCap);

struct LogLikelihood {
    double value = 0.0;          // ln pi_t(x), nats
    double aep_statistic = 0.0;  // -(mu / t) value
};

// Streaming evaluation over the gaps between ones. A gap of zero probability
// raises ZeroProbability naming the offending position.
LogLikelihood log_likelihood(const WaitingTimeDistribution& w, const BinarySequence& x);

// Number of steps back from the end of `history` (natural time order, most
// recent symbol last) to the most recent one: 1 if the last symbol is 1,
// nullopt if there is no 1.
std::optional<std::size_t> context_length(Pattern history);

// P[next symbol = 1 | history], history in natural order, most recent last.
// With l = context_length(history): p(l) / Q(l - 1), or for an all-zero history
// of length t: Q(t) / sum_{s >= t} Q(s).
double conditional_next_prob(const WaitingTimeDistribution& w, Pattern history);

struct EntropySummary {
    double H_p = 0.0;
    double entropy_rate = 0.0;  // H_p / mu
    double H_pi_t = 0.0;
    std::size_t t = 0;
};

EntropySummary entropy_summary(const WaitingTimeDistribution& w, std::size_t t);

// mu ln mu + (1 - mu) ln(mu - 1), the largest entropy at mean mu.
double max_entropy_bound(double mu);

// p(s) = mu^-s (mu - 1)^(s - 1).
WaitingTimeDistribution max_entropy_distribution(double mu, const TruncationOptions& options = {});

struct TypicalSetCount {
    std::uint64_t count = 0;
    double mass = 0.0;
};

// Strings x of length t with |(mu/t) ln pi_t(x) + H(p)| <= epsilon, by exhaustive
// enumeration (t <= 20).
TypicalSetCount typical_set_count(const WaitingTimeDistribution& w, std::size_t t, double epsilon);

}  // namespace renewal
