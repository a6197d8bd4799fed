#include "renewal/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renewal/error.hpp"
#include "renewal/numeric.hpp"

namespace renewal {

std::string_view to_string(EstimationTarget target) noexcept {
    switch (target) {
    case EstimationTarget::WaitingTime: return "p";
    case EstimationTarget::Autocovariance: return "rho";
    case EstimationTarget::InverseMean: return "inv_mu";
    }
    return "unknown";
}

double empirical_mean(const BinarySequence& x, std::size_t window,
                      const WindowObservable& observable) {
    const std::size_t t = x.size();
    if (window == 0 || window > t) {
        throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(window) +
                                                   " does not fit a sequence of length " +
                                                   std::to_string(t));
    }
    std::vector<std::uint8_t> buffer(window);
    CompensatedSum acc;
    for (std::size_t n = 0; n + window <= t; ++n) {
        for (std::size_t k = 0; k < window; ++k) buffer[k] = x[n + k] ? 1 : 0;
        acc += observable(buffer);
    }
    return acc.value() / static_cast<double>(t - window + 1);
}

std::vector<std::uint64_t> gap_histogram(const BinarySequence& x, std::size_t max_gap) {
    std::vector<std::uint64_t> hist(max_gap + 1, 0);
    std::size_t previous = 0;
    bool seen = false;
    x.for_each_one([&](std::size_t i) {
        if (seen) {
            const std::size_t gap = i - previous;
            if (gap <= max_gap) ++hist[gap];
        }
        previous = i;
        seen = true;
    });
    return hist;
}

std::uint64_t count_pairs(const BinarySequence& x, std::size_t tau) {
    const std::size_t t = x.size();
    if (tau >= t) return 0;
    const auto words = x.words();
    const std::size_t limit = t - tau;  // positions n (0-based) in [0, limit)
    const std::size_t word_shift = tau / 64;
    const unsigned bit_shift = static_cast<unsigned>(tau % 64);
    std::uint64_t count = 0;
    for (std::size_t w = 0; w * 64 < limit; ++w) {
        const std::size_t src = w + word_shift;
        std::uint64_t shifted = words[src] >> bit_shift;
        if (bit_shift != 0 && src + 1 < words.size()) shifted |= words[src + 1] << (64 - bit_shift);
        std::uint64_t both = words[w] & shifted;
        const std::size_t remaining = limit - w * 64;
        if (remaining < 64) both &= (std::uint64_t{1} << remaining) - 1;
        count += static_cast<std::uint64_t>(std::popcount(both));
    }
    return count;
}

double waiting_time_variance(const WaitingTimeDistribution& model, std::size_t s) {
    const double mu = model.mean();
    const double p = model.density(s);
    return mu * p - 2.0 * static_cast<double>(s) * p * p + p * p * model.second_moment() / mu;
}

double autocov_variance(const WaitingTimeDistribution& model, const CovarianceSequence& c,
                        std::size_t tau) {
    if (c.horizon() < tau) throw Error(ErrorCode::HorizonInsufficient, "c does not reach tau");
    const double mu = model.mean();
    const double m2 = model.second_moment();
    if (tau == 0) return m2 / (mu * mu * mu) - 1.0 / mu;
    // cov[Z_0, Z_n] = mu^2 c_n^2 c_{tau-n} - c_tau^2 for 0 <= n < tau and
    // mu^2 c_tau^2 rho_{n-tau} for n >= tau; the second group is summed with
    // sum_{n>=0} rho_n = (m2 - mu) / (2 mu^3).
    const double ct = c.c[tau];
    CompensatedSum acc(ct * ct * m2 / mu - ct);
    for (std::size_t n = 0; n < tau; ++n) {
        acc += 2.0 * (mu * mu * c.c[n] * c.c[n] * c.c[tau - n] - ct * ct);
    }
    return acc.value();
}

namespace {

constexpr double kTailShare = 1e-9;

struct LimitValue {
    double value = 0.0;
    double tail_share = 0.0;  // share of sum rho_t^2 from the last decade
};

LimitValue variance_limit(const WaitingTimeDistribution& model, const CovarianceSequence& c) {
    const double mu = model.mean();
    const double c0 = 1.0 / mu;
    const double sum_rho = (model.second_moment() - mu) / (2.0 * mu * mu * mu);
    const std::size_t horizon = c.horizon();
    CompensatedSum sum_sq;
    CompensatedSum late;
    for (std::size_t t = 1; t <= horizon; ++t) {
        const double sq = c.rho[t] * c.rho[t];
        sum_sq += sq;
        if (t >= horizon / 10) late += sq;
    }
    LimitValue out;
    out.value = c0 * c0 * (1.0 - 6.0 * c0 + 5.0 * c0 * c0) + 8.0 * c0 * c0 * sum_rho +
                2.0 * sum_sq.value();
    out.tail_share = sum_sq.value() > 0.0 ? late.value() / sum_sq.value() : 0.0;
    return out;
}

}  // namespace

double autocov_variance_limit(const WaitingTimeDistribution& model, const CovarianceSequence& c) {
    const LimitValue v = variance_limit(model, c);
    if (v.tail_share > kTailShare) {
        throw Error(ErrorCode::HorizonInsufficient,
                    "sum of rho_t^2 not converged at T = " + std::to_string(c.horizon()));
    }
    return v.value;
}

namespace {

EstimationReport finish(EstimationReport r, double z) {
    r.variance_v = std::max(r.variance_v, 0.0);
    r.half_width = z * std::sqrt(r.variance_v / static_cast<double>(r.sample_length));
    return r;
}

}  // namespace

EstimationReport estimate_waiting_time(const BinarySequence& x,
                                       const WaitingTimeDistribution& model, std::size_t s,
                                       double z) {
    const std::size_t t = x.size();
    if (s == 0 || t <= s + 1) {
        throw Error(ErrorCode::WindowTooLarge, "need 1 <= s and t > s + 1");
    }
    const auto hist = gap_histogram(x, s);
    EstimationReport r;
    r.target = EstimationTarget::WaitingTime;
    r.index = s;
    r.sample_length = t;
    r.estimate = model.mean() * static_cast<double>(hist[s]) / static_cast<double>(t - s);
    r.true_value = model.density(s);
    r.variance_v = waiting_time_variance(model, s);
    return finish(r, z);
}

EstimationReport estimate_autocov(const BinarySequence& x, const WaitingTimeDistribution& model,
                                  const CovarianceSequence& c, std::size_t tau, double z) {
    const std::size_t t = x.size();
    if (t <= tau + 1) throw Error(ErrorCode::WindowTooLarge, "need t > tau + 1");
    const double mu = model.mean();
    EstimationReport r;
    r.target = EstimationTarget::Autocovariance;
    r.index = tau;
    r.sample_length = t;
    r.estimate = static_cast<double>(count_pairs(x, tau)) / static_cast<double>(t - tau) -
                 1.0 / (mu * mu);
    r.true_value = c.rho[tau];
    r.variance_v = autocov_variance(model, c, tau);
    if (const LimitValue v = variance_limit(model, c); v.tail_share <= kTailShare) {
        r.sigma_sq = v.value;
    }
    return finish(r, z);
}

EstimationReport estimate_inverse_mean(const BinarySequence& x,
                                       const WaitingTimeDistribution& model, double z) {
    const double mu = model.mean();
    EstimationReport r;
    r.target = EstimationTarget::InverseMean;
    r.sample_length = x.size();
    r.estimate = static_cast<double>(x.count_ones()) / static_cast<double>(x.size());
    r.true_value = 1.0 / mu;
    r.variance_v = model.second_moment() / (mu * mu * mu) - 1.0 / mu;
    return finish(r, z);
}

SecondMomentIdentity second_moment_identity(const WaitingTimeDistribution& model,
                                            std::size_t horizon) {
    if (!model.second_moment_finite()) {
        throw Error(ErrorCode::SecondMomentInfinite, "law has an infinite second moment");
    }
    const double mu = model.mean();
    const CovarianceSequence c = solve_renewal(model, horizon);
    CompensatedSum total;
    CompensatedSum last_decade;
    const std::size_t decade_start = horizon / 10;
    for (std::size_t t = 0; t <= horizon; ++t) {
        total += c.rho[t];
        if (t >= decade_start && t > 0) last_decade += c.rho[t];
    }
    SecondMomentIdentity out;
    out.lhs = model.second_moment();
    out.rhs = mu + 2.0 * mu * mu * mu * total.value();
    out.relative_gap = std::fabs(out.lhs - out.rhs) / out.lhs;
    const double sum = total.value();
    out.tail_remainder = sum != 0.0 ? std::fabs(last_decade.value() / sum) : 0.0;
    if (out.tail_remainder > kTailShare) {
        throw Error(ErrorCode::HorizonInsufficient,
                    "sum of rho_t not converged at T = " + std::to_string(horizon));
    }
    return out;
}

MixingBoundSequence alpha_mixing_bound(const WaitingTimeDistribution& model, std::size_t horizon,
                                       double tail_tolerance) {
    if (horizon < 1) throw Error(ErrorCode::ConfigError, "mixing bound needs a horizon >= 1");
    const double mu = model.mean();
    const CovarianceSequence c = solve_renewal(model, horizon + 1);
    const auto& rho = c.rho;

    std::vector<double> term(horizon + 2, 0.0);  // term[n] for n = 1..horizon
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double first = std::fabs(rho[n + 1] - rho[n]);
        const double second = static_cast<double>(n) *
                              std::fabs((rho[n + 1] - rho[n]) - (rho[n] - rho[n - 1]));
        term[n] = 3.0 * mu * mu * first + 4.0 * mu * mu * second;
    }

    MixingBoundSequence out;
    out.bounds.assign(horizon + 1, 0.0);
    CompensatedSum suffix;
    for (std::size_t t = horizon; t >= 1; --t) {
        suffix += term[t];
        out.bounds[t] = suffix.value();
    }
    const std::size_t decade_start = std::max<std::size_t>(horizon / 10, 1);
    const double at_one = out.bounds[1];
    if (at_one > 0.0 && out.bounds[decade_start] > tail_tolerance * at_one && horizon >= 10) {
        throw Error(ErrorCode::HorizonInsufficient,
                    "mixing-bound tail sums not converged at T = " + std::to_string(horizon));
    }
    CompensatedSum partial;
    CompensatedSum late;
    for (std::size_t t = 1; t <= horizon; ++t) {
        partial += out.bounds[t];
        if (t >= decade_start) late += out.bounds[t];
    }
    out.partial_sum = partial.value();
    out.last_decade_fraction = out.partial_sum > 0.0 ? late.value() / out.partial_sum : 0.0;
    return out;
}

std::vector<double> clt_standardize(std::span<const double> means, double v, double truth,
                                    std::size_t t) {
    if (!(v > 0.0)) throw Error(ErrorCode::DegenerateVariance, "CLT variance is zero");
    const double scale = std::sqrt(static_cast<double>(t) / v);
    std::vector<double> out(means.size());
    std::transform(means.begin(), means.end(), out.begin(),
                   [&](double m) { return (m - truth) * scale; });
    return out;
}

double cross_covariance_Cij(const WaitingTimeDistribution& model, const CovarianceSequence& c,
                            std::size_t i, std::size_t j, std::size_t t) {
    if (i == 0 || j == 0 || t == 0) throw Error(ErrorCode::ConfigError, "need i, j, t >= 1");
    if (c.horizon() < i + j + t - 2) {
        throw Error(ErrorCode::HorizonInsufficient, "rho must reach i + j + t - 2");
    }
    auto p = [&](std::size_t k) { return k == 0 ? -1.0 : model.density(k); };
    CompensatedSum acc;
    for (std::size_t u = 1; u <= i; ++u) {
        for (std::size_t v = 1; v <= j; ++v) acc += p(i - u) * c.rho[u + t + v - 2] * p(j - v);
    }
    return acc.value();
}

}  // namespace renewal
