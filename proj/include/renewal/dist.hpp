#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace renewal {

// Where a waiting-time law came from. Asymptotic comparators dispatch on this.
struct TableFamily {};
struct MarkovFamily {
    std::size_t order = 0;
    double lambda = 0.0;
};
struct PolynomialFamily {
    double gamma = 0.0;
    double scale = 1.0;
};
struct StretchedFamily {
    double beta = 1.0;
    double kappa = 1.0;
};
struct InvertedFamily {};

using TailFamily =
    std::variant<TableFamily, MarkovFamily, PolynomialFamily, StretchedFamily, InvertedFamily>;

struct TruncationOptions {
    // Stop growing the table once the residual tail mass falls below this.
    double eps_tail = 1e-12;
    std::size_t max_support = 1'000'000;
};

/**
 * Law p(s), s >= 1, of the waiting time between consecutive ones, stored as a
 * truncated table together with its tail Q(t) = P[S > t].
 *
 * The table ends at max_support() = T. Whatever mass lies beyond T in the
 * source law is folded into p(T), so Q(T) = 0 and the table sums to one.
 * Immutable after construction.
 */
class WaitingTimeDistribution {
public:
    std::size_t max_support() const noexcept { return density_.size() - 1; }

    // p(s); zero for s = 0 and s > max_support().
    double density(std::size_t s) const noexcept {
        return s < density_.size() ? density_[s] : 0.0;
    }
    // Q(t); zero for t >= max_support().
    double tail(std::size_t t) const noexcept { return t < tail_.size() ? tail_[t] : 0.0; }
    // Sum of Q(s) over s >= t.
    double tail_sum_from(std::size_t t) const noexcept {
        return t < tail_sums_.size() ? tail_sums_[t] : 0.0;
    }

    // Index 0 holds p(0) = 0.
    std::span<const double> densities() const noexcept { return density_; }
    std::span<const double> tails() const noexcept { return tail_; }

    double mean() const noexcept { return mean_; }
    double second_moment() const noexcept { return second_moment_; }
    // False when the source law has an infinite second moment; the table value
    // is then only the truncated sum.
    bool second_moment_finite() const noexcept { return second_moment_finite_; }
    // Source tail mass folded into the last bin.
    double residual_mass() const noexcept { return residual_; }
    bool aperiodic() const noexcept { return aperiodic_; }
    const TailFamily& family() const noexcept { return family_; }

    friend WaitingTimeDistribution from_density(std::span<const double>, const TruncationOptions&);
    friend WaitingTimeDistribution from_density(const std::function<double(std::size_t)>&,
                                                const TruncationOptions&);
    friend WaitingTimeDistribution markov_family(std::size_t, std::span<const double>, double,
                                                 const TruncationOptions&);
    friend WaitingTimeDistribution polynomial_tail(double, double, const TruncationOptions&);
    friend WaitingTimeDistribution stretched_exp_tail(double, double, const TruncationOptions&);
    friend WaitingTimeDistribution from_tail_table(std::vector<double>, TailFamily);

private:
    WaitingTimeDistribution(std::vector<double> density, std::vector<double> tail,
                            TailFamily family, double residual, bool second_moment_finite);

    std::vector<double> density_;
    std::vector<double> tail_;
    std::vector<double> tail_sums_;
    double mean_ = 0.0;
    double second_moment_ = 0.0;
    double residual_ = 0.0;
    bool second_moment_finite_ = true;
    bool aperiodic_ = true;
    TailFamily family_;
};

// Law of the first waiting time that makes the binary sequence stationary:
// P[S1 = s] = Q(s - 1) / mean.
class DelayDistribution {
public:
    explicit DelayDistribution(std::vector<double> density) : density_(std::move(density)) {}

    double density(std::size_t s) const noexcept {
        return s < density_.size() ? density_[s] : 0.0;
    }
    // Index 0 holds 0.
    std::span<const double> densities() const noexcept { return density_; }
    std::size_t max_support() const noexcept { return density_.size() - 1; }

private:
    std::vector<double> density_;
};

// Table p(1), p(2), ... (element 0 is p(1)); normalized and truncated.
WaitingTimeDistribution from_density(std::span<const double> table,
                                     const TruncationOptions& options = {});

// Density given as a function s -> p(s) of a law declared to sum to one. The
// table grows until the residual mass drops below eps_tail; InfiniteMean is
// raised when the cap is hit and the partial means are still not settling.
WaitingTimeDistribution from_density(const std::function<double(std::size_t)>& density,
                                     const TruncationOptions& options = {});

// p(1..order+1) = head, then p(order + 1 + s) = lambda^s p(order + 1).
WaitingTimeDistribution markov_family(std::size_t order, std::span<const double> head,
                                      double lambda, const TruncationOptions& options = {});

// Q(t) = min(1, scale (1 + t)^(-gamma - 1)).
WaitingTimeDistribution polynomial_tail(double gamma, double scale,
                                        const TruncationOptions& options = {});

// Q(t) = exp(-kappa t^beta), beta in (0, 1].
WaitingTimeDistribution stretched_exp_tail(double beta, double kappa,
                                           const TruncationOptions& options = {});

// Build from a complete tail table Q(0..T) with Q(0) = 1. Densities are the
// differences of consecutive entries and Q(T) is folded into p(T).
WaitingTimeDistribution from_tail_table(std::vector<double> tail, TailFamily family);

DelayDistribution stationary_delay(const WaitingTimeDistribution& w);

}  // namespace renewal
