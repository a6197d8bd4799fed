#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renewal/dist.hpp"
#include "renewal/renewal_direct.hpp"
#include "renewal/sampler.hpp"

namespace renewal {

// Observable of a window of w consecutive symbols.
using WindowObservable = std::function<double(std::span<const std::uint8_t>)>;

// (1 / (t - w + 1)) * sum of the observable over all complete windows.
double empirical_mean(const BinarySequence& x, std::size_t window,
                      const WindowObservable& observable);

enum class EstimationTarget { WaitingTime, Autocovariance, InverseMean };

std::string_view to_string(EstimationTarget target) noexcept;

struct EstimationReport {
    EstimationTarget target = EstimationTarget::WaitingTime;
    std::size_t index = 0;  // s or tau
    double estimate = 0.0;
    double true_value = 0.0;
    double variance_v = 0.0;  // CLT variance per step
    double half_width = 0.0;  // z * sqrt(v / t)
    std::size_t sample_length = 0;
    // Large-lag limit of the autocovariance variance; set for the
    // autocovariance target when c reaches far enough for it to converge.
    std::optional<double> sigma_sq;
};

// Number of consecutive ones exactly s apart, for s = 0..max_gap.
std::vector<std::uint64_t> gap_histogram(const BinarySequence& x, std::size_t max_gap);

// Number of n <= t - tau with x_n = x_{n + tau} = 1.
std::uint64_t count_pairs(const BinarySequence& x, std::size_t tau);

// v_s = mu p(s) - 2 s p(s)^2 + p(s)^2 sum_n n^2 p(n) / mu.
double waiting_time_variance(const WaitingTimeDistribution& model, std::size_t s);

// CLT variance of the x_1 x_{tau+1} empirical mean. c must reach index tau.
double autocov_variance(const WaitingTimeDistribution& model, const CovarianceSequence& c,
                        std::size_t tau);

// tau -> infinity limit of autocov_variance. HorizonInsufficient when more
// than 1e-9 of sum rho_t^2 comes from the last decade of c.
double autocov_variance_limit(const WaitingTimeDistribution& model, const CovarianceSequence& c);

// Estimate of p(s) from the observable mu x_1 (1 - x_2) ... (1 - x_s) x_{s+1},
// with mu taken from the model.
EstimationReport estimate_waiting_time(const BinarySequence& x,
                                       const WaitingTimeDistribution& model, std::size_t s,
                                       double z = 2.0);

// Estimate of rho_tau from the observable x_1 x_{tau+1} - 1/mu^2. The model
// covariance c is reused across calls and must reach tau.
EstimationReport estimate_autocov(const BinarySequence& x, const WaitingTimeDistribution& model,
                                  const CovarianceSequence& c, std::size_t tau, double z = 2.0);

// Estimate of 1/mu from the x_1 observable, with variance v_0.
EstimationReport estimate_inverse_mean(const BinarySequence& x,
                                       const WaitingTimeDistribution& model, double z = 2.0);

struct SecondMomentIdentity {
    double lhs = 0.0;  // sum s^2 p(s)
    double rhs = 0.0;  // mu + 2 mu^3 sum_{t >= 0} rho_t
    double relative_gap = 0.0;
    // Share of sum rho_t contributed by the last decade [T/10, T] of the horizon.
    double tail_remainder = 0.0;
};

// HorizonInsufficient when the last decade carries more than 1e-9 of sum rho_t.
SecondMomentIdentity second_moment_identity(const WaitingTimeDistribution& model,
                                            std::size_t horizon = 100'000);

struct MixingBoundSequence {
    std::vector<double> bounds;  // bounds[t] for t = 1..T; bounds[0] unused
    double partial_sum = 0.0;
    // Share of partial_sum contributed by t in [T/10, T].
    double last_decade_fraction = 0.0;
};

// Upper bounds on the alpha-mixing coefficients,
//   alpha_t <= 3 mu^2 sum_{n>=t} |rho_{n+1} - rho_n| + 4 mu^2 sum_{n>=t} n |rho_{n+1} - 2 rho_n + rho_{n-1}|,
// with the sums cut at the horizon. HorizonInsufficient is raised when more
// than `tail_tolerance` of the t = 1 sums comes from the last decade.
MixingBoundSequence alpha_mixing_bound(const WaitingTimeDistribution& model, std::size_t horizon,
                                       double tail_tolerance = 1e-9);

// (mean - truth) * sqrt(t / v) for each replica mean.
std::vector<double> clt_standardize(std::span<const double> means, double v, double truth,
                                    std::size_t t);

// sum_{u<=i} sum_{v<=j} p(i-u) rho_{u+t+v-2} p(j-v), with p(0) = -1.
double cross_covariance_Cij(const WaitingTimeDistribution& model, const CovarianceSequence& c,
                            std::size_t i, std::size_t j, std::size_t t);

}  // namespace renewal
