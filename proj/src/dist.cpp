#include "renewal/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "renewal/error.hpp"
#include "renewal/numeric.hpp"

namespace renewal {

namespace {

constexpr double kNegativeTolerance = 1e-12;
constexpr double kMassTolerance = 1e-9;

std::vector<double> suffix_sums(std::span<const double> values) {
    std::vector<double> out(values.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = values.size(); i-- > 0;) {
        acc += values[i];
        out[i] = acc.value();
    }
    return out;
}

// Grow a closed-form tail until it drops below eps_tail (or the cap), folding
// what remains into the last bin.
std::vector<double> tabulate_tail(const std::function<double(std::size_t)>& tail,
                                  const TruncationOptions& options) {
    std::vector<double> q{1.0};
    for (std::size_t t = 1;; ++t) {
        const double value = tail(t);
        q.push_back(value);
        if (value < options.eps_tail || t >= options.max_support) break;
    }
    return q;
}

}  // namespace

WaitingTimeDistribution::WaitingTimeDistribution(std::vector<double> density,
                                                 std::vector<double> tail, TailFamily family,
                                                 double residual, bool second_moment_finite)
    : density_(std::move(density)),
      tail_(std::move(tail)),
      residual_(residual),
      second_moment_finite_(second_moment_finite),
      family_(family) {
    tail_sums_ = suffix_sums(tail_);
    tail_sums_.pop_back();
    mean_ = tail_sums_.front();

    CompensatedSum m2;
    for (std::size_t t = 0; t < tail_.size(); ++t) {
        m2 += (2.0 * static_cast<double>(t) + 1.0) * tail_[t];
    }
    second_moment_ = m2.value();

    std::size_t g = 0;
    for (std::size_t s = 1; s < density_.size(); ++s) {
        if (density_[s] > 0.0) g = std::gcd(g, s);
    }
    aperiodic_ = g == 1;
}

WaitingTimeDistribution from_tail_table(std::vector<double> tail, TailFamily family) {
    if (tail.size() < 2) throw Error(ErrorCode::ZeroDistribution, "tail table needs Q(0) and Q(1)");
    tail.front() = 1.0;
    const std::size_t last = tail.size() - 1;
    const double residual = tail[last];
    tail[last] = 0.0;

    std::vector<double> density(tail.size(), 0.0);
    for (std::size_t s = 1; s <= last; ++s) density[s] = tail[s - 1] - tail[s];

    bool m2_finite = true;
    if (const auto* poly = std::get_if<PolynomialFamily>(&family)) m2_finite = poly->gamma > 1.0;
    return WaitingTimeDistribution(std::move(density), std::move(tail), family, residual,
                                   m2_finite);
}

WaitingTimeDistribution from_density(std::span<const double> table,
                                     const TruncationOptions& options) {
    std::vector<double> p(table.size() + 1, 0.0);
    CompensatedSum total;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double v = table[i];
        if (!(v >= -kNegativeTolerance)) {
            throw Error(ErrorCode::NegativeMass,
                        "p(" + std::to_string(i + 1) + ") = " + std::to_string(v));
        }
        p[i + 1] = std::max(v, 0.0);
        total += p[i + 1];
    }
    const double mass = total.value();
    if (!(mass > 0.0)) throw Error(ErrorCode::ZeroDistribution, "table has no mass");
    if (mass > 1.0 + kMassTolerance) {
        throw Error(ErrorCode::MassMismatch, "table mass " + std::to_string(mass) + " exceeds 1");
    }
    for (double& v : p) v /= mass;

    // Drop trailing zeros so the table ends on the support.
    std::size_t end = p.size() - 1;
    while (end > 1 && p[end] == 0.0) --end;
    p.resize(end + 1);

    std::vector<double> q = suffix_sums(std::span<const double>(p).subspan(1));
    // q[t] now holds Q(t) for t = 0..end, with q[end] = 0.
    q.front() = 1.0;

    std::size_t cut = end;
    for (std::size_t t = 1; t < end; ++t) {
        if (q[t] < options.eps_tail || t >= options.max_support) {
            cut = t;
            break;
        }
    }
    const double residual = q[cut];
    p.resize(cut + 1);
    q.resize(cut + 1);
    p[cut] = q[cut - 1];
    q[cut] = 0.0;
    return WaitingTimeDistribution(std::move(p), std::move(q), TableFamily{}, residual, true);
}

WaitingTimeDistribution from_density(const std::function<double(std::size_t)>& density,
                                     const TruncationOptions& options) {
    std::vector<double> p{0.0};
    CompensatedSum cumulative;
    CompensatedSum partial_mean;
    std::vector<double> mean_at_decade;  // partial means at s = 10, 100, ...
    std::size_t next_decade = 10;
    for (std::size_t s = 1;; ++s) {
        const double v = density(s);
        if (!(v >= -kNegativeTolerance)) {
            throw Error(ErrorCode::NegativeMass,
                        "p(" + std::to_string(s) + ") = " + std::to_string(v));
        }
        p.push_back(std::max(v, 0.0));
        cumulative += p.back();
        partial_mean += static_cast<double>(s) * p.back();
        if (s == next_decade) {
            mean_at_decade.push_back(partial_mean.value());
            next_decade *= 10;
        }
        if (cumulative.value() > 1.0 + kMassTolerance) {
            throw Error(ErrorCode::MassMismatch, "declared density sums past 1");
        }
        if (1.0 - cumulative.value() < options.eps_tail) break;
        if (s >= options.max_support) {
            // Partial means growing by a non-shrinking amount per decade signal
            // a tail no lighter than 1/t.
            const std::size_t k = mean_at_decade.size();
            if (k >= 3) {
                const double last = mean_at_decade[k - 1] - mean_at_decade[k - 2];
                const double prev = mean_at_decade[k - 2] - mean_at_decade[k - 3];
                if (last >= 0.5 * prev) {
                    throw Error(ErrorCode::InfiniteMean,
                                "partial means do not settle by s = " + std::to_string(s));
                }
            }
            break;
        }
    }
    const std::size_t cut = p.size() - 1;
    const double residual = std::max(0.0, 1.0 - cumulative.value());
    std::vector<double> q = suffix_sums(std::span<const double>(p).subspan(1));
    for (double& v : q) v += residual;
    q.front() = 1.0;
    p[cut] = q[cut - 1];
    q[cut] = 0.0;
    return WaitingTimeDistribution(std::move(p), std::move(q), TableFamily{}, residual, true);
}

WaitingTimeDistribution markov_family(std::size_t order, std::span<const double> head,
                                      double lambda, const TruncationOptions& options) {
    if (head.size() != order + 1) {
        throw Error(ErrorCode::MassMismatch, "head must list p(1..order+1)");
    }
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw Error(ErrorCode::InvalidLambda, "lambda must lie in [0, 1), got " +
                                                  std::to_string(lambda));
    }
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (!(head[i] >= 0.0)) {
            throw Error(ErrorCode::NegativeMass, "head entry " + std::to_string(i + 1));
        }
    }
    const double anchor = head.back();
    const double geometric_mass = anchor / (1.0 - lambda);
    CompensatedSum total;
    for (std::size_t i = 0; i < order; ++i) total += head[i];
    total += geometric_mass;
    const double mass = total.value();
    if (std::fabs(mass - 1.0) > kMassTolerance) {
        throw Error(ErrorCode::MassMismatch, "head plus geometric tail has mass " +
                                                 std::to_string(mass));
    }

    // Q(t) for t <= order from the head, geometric beyond.
    std::vector<double> head_tail(order + 1, 0.0);
    {
        CompensatedSum acc(geometric_mass);
        head_tail[order] = geometric_mass;
        for (std::size_t t = order; t-- > 0;) {
            acc += head[t];  // head[t] is p(t + 1)
            head_tail[t] = acc.value();
        }
    }
    auto tail = [&](std::size_t t) {
        if (t <= order) return head_tail[t] / mass;
        return geometric_mass * std::pow(lambda, static_cast<double>(t - order)) / mass;
    };
    std::vector<double> q = tabulate_tail(tail, options);
    const std::size_t cut = q.size() - 1;
    const double residual = q[cut];
    std::vector<double> p(cut + 1, 0.0);
    for (std::size_t s = 1; s <= cut; ++s) {
        p[s] = s <= order + 1
                   ? head[s - 1] / mass
                   : anchor * std::pow(lambda, static_cast<double>(s - order - 1)) / mass;
    }
    p[cut] = q[cut - 1];
    q[cut] = 0.0;
    return WaitingTimeDistribution(std::move(p), std::move(q), MarkovFamily{order, lambda},
                                   residual, true);
}

WaitingTimeDistribution polynomial_tail(double gamma, double scale,
                                        const TruncationOptions& options) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::InvalidExponent, "gamma must be > 0, got " + std::to_string(gamma));
    }
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw Error(ErrorCode::TailExceedsOne, "scale must lie in (0, 1], got " +
                                                   std::to_string(scale));
    }
    auto tail = [&](std::size_t t) {
        return std::min(1.0, scale * std::pow(1.0 + static_cast<double>(t), -gamma - 1.0));
    };
    return from_tail_table(tabulate_tail(tail, options), PolynomialFamily{gamma, scale});
}

WaitingTimeDistribution stretched_exp_tail(double beta, double kappa,
                                           const TruncationOptions& options) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw Error(ErrorCode::InvalidExponent, "beta must lie in (0, 1], got " +
                                                    std::to_string(beta));
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::InvalidExponent, "kappa must be > 0");
    }
    auto tail = [&](std::size_t t) {
        return std::exp(-kappa * std::pow(static_cast<double>(t), beta));
    };
    return from_tail_table(tabulate_tail(tail, options), StretchedFamily{beta, kappa});
}

DelayDistribution stationary_delay(const WaitingTimeDistribution& w) {
    std::vector<double> d(w.max_support() + 1, 0.0);
    for (std::size_t s = 1; s <= w.max_support(); ++s) d[s] = w.tail(s - 1) / w.mean();
    return DelayDistribution(std::move(d));
}

}  // namespace renewal
