#include "renewal/likelihood.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "renewal/error.hpp"
#include "renewal/numeric.hpp"

namespace renewal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace

double log_joint_probability(const WaitingTimeDistribution& w, Pattern x, std::size_t cap) {
    const std::size_t t = x.size();
    if (t == 0) return 0.0;
    if (t > cap) {
        throw Error(ErrorCode::PatternTooLong,
                    "pattern of length " + std::to_string(t) + " exceeds cap " +
                        std::to_string(cap));
    }
    const double log_mu = std::log(w.mean());
    std::size_t first = 0;  // 1-based position of the first one
    std::size_t previous = 0;
    CompensatedSum acc(-log_mu);
    for (std::size_t i = 1; i <= t; ++i) {
        if (!x[i - 1]) continue;
        const double factor = first == 0 ? w.tail(i - 1) : w.density(i - previous);
        if (!(factor > 0.0)) return kNegInf;
        acc += std::log(factor);
        if (first == 0) first = i;
        previous = i;
    }
    if (first == 0) return -log_mu + safe_log(w.tail_sum_from(t));
    const double last = w.tail(t - previous);
    if (!(last > 0.0)) return kNegInf;
    acc += std::log(last);
    return acc.value();
}

double joint_probability(const WaitingTimeDistribution& w, Pattern x, std::size_t cap) {
    return std::exp(log_joint_probability(w, x, cap));
}

LogLikelihood log_likelihood(const WaitingTimeDistribution& w, const BinarySequence& x) {
    const std::size_t t = x.size();
    if (t == 0) throw Error(ErrorCode::ConfigError, "empty sequence");
    const double mu = w.mean();
    CompensatedSum acc(-std::log(mu));
    std::size_t previous = 0;  // 1-based position of the last one seen
    auto add = [&](double prob, std::size_t position) {
        if (!(prob > 0.0)) {
            throw Error(ErrorCode::ZeroProbability,
                        "zero-probability gap ending at position " + std::to_string(position));
        }
        acc += std::log(prob);
    };
    x.for_each_one([&](std::size_t i) {
        const std::size_t pos = i + 1;
        add(previous == 0 ? w.tail(pos - 1) : w.density(pos - previous), pos);
        previous = pos;
    });
    if (previous == 0) {
        add(w.tail_sum_from(t), t);
    } else {
        add(w.tail(t - previous), t);
    }
    LogLikelihood out;
    out.value = acc.value();
    out.aep_statistic = -(mu / static_cast<double>(t)) * out.value;
    return out;
}

std::optional<std::size_t> context_length(Pattern history) {
    for (std::size_t l = 1; l <= history.size(); ++l) {
        if (history[history.size() - l]) return l;
    }
    return std::nullopt;
}

double conditional_next_prob(const WaitingTimeDistribution& w, Pattern history) {
    const auto l = context_length(history);
    double num = 0.0;
    double den = 0.0;
    if (!l) {
        num = w.tail(history.size());
        den = w.tail_sum_from(history.size());
    } else {
        num = w.density(*l);
        den = w.tail(*l - 1);
    }
    if (!(den > 0.0) || !(log_joint_probability(w, history, history.size()) > kNegInf)) {
        throw Error(ErrorCode::ImpossibleHistory, "history has zero probability");
    }
    return num / den;
}

EntropySummary entropy_summary(const WaitingTimeDistribution& w, std::size_t t) {
    if (t == 0) throw Error(ErrorCode::ConfigError, "entropy_summary needs t >= 1");
    const double mu = w.mean();
    CompensatedSum hp;
    for (std::size_t s = 1; s <= w.max_support(); ++s) hp += -xlogx(w.density(s));

    CompensatedSum tail_term;
    CompensatedSum gap_term;
    for (std::size_t s = 1; s <= t; ++s) {
        tail_term += xlogx(w.tail(s - 1));
        if (s < t) gap_term += static_cast<double>(t - s) * xlogx(w.density(s));
    }
    EntropySummary out;
    out.t = t;
    out.H_p = hp.value();
    out.entropy_rate = out.H_p / mu;
    out.H_pi_t = std::log(mu) - xlogx(w.tail_sum_from(t)) / mu - 2.0 * tail_term.value() / mu -
                 gap_term.value() / mu;
    return out;
}

double max_entropy_bound(double mu) {
    if (!(mu >= 1.0)) throw Error(ErrorCode::InvalidMean, "mean must be >= 1");
    return xlogx(mu) - xlogx(mu - 1.0);
}

WaitingTimeDistribution max_entropy_distribution(double mu, const TruncationOptions& options) {
    if (!(mu >= 1.0) || !std::isfinite(mu)) {
        throw Error(ErrorCode::InvalidMean, "mean must be >= 1, got " + std::to_string(mu));
    }
    const double head = 1.0 / mu;
    return markov_family(0, std::span<const double>(&head, 1), 1.0 - head, options);
}

TypicalSetCount typical_set_count(const WaitingTimeDistribution& w, std::size_t t,
                                  double epsilon) {
    if (t == 0 || t > 20) {
        throw Error(ErrorCode::PatternTooLong, "typical-set enumeration needs 1 <= t <= 20");
    }
    const double mu = w.mean();
    const double hp = entropy_summary(w, 1).H_p;
    TypicalSetCount out;
    CompensatedSum mass;
    std::vector<std::uint8_t> x(t);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << t); ++code) {
        for (std::size_t i = 0; i < t; ++i) x[i] = (code >> i) & 1u;
        const double lp = log_joint_probability(w, x, t);
        if (lp == kNegInf) continue;
        if (std::fabs(mu / static_cast<double>(t) * lp + hp) <= epsilon) {
            ++out.count;
            mass += std::exp(lp);
        }
    }
    out.mass = mass.value();
    return out;
}

}  // namespace renewal
