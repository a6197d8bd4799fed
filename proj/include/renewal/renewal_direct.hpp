#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "renewal/dist.hpp"

namespace renewal {

// Pair correlation c_t = E[X_1 X_{t+1}] and autocovariance rho_t = c_t - c_0^2
// for t = 0..horizon.
struct CovarianceSequence {
    std::vector<double> c;
    std::vector<double> rho;

    std::size_t horizon() const noexcept { return c.empty() ? 0 : c.size() - 1; }
};

// (1 / mu^3) * sum_{n > t} Q(n) for t = 0..horizon.
struct TailProxySequence {
    std::vector<double> values;
};

/**
 * Forward solution of the renewal equation c_t = sum_{s=1..t} p(s) c_{t-s},
 * c_0 = 1/mu.
 *
 * The recursion is run on the centred sequence,
 *   rho_t = sum_{s=1..t} p(s) rho_{t-s} - c_0^2 Q(t),
 * which is the same equation after substituting sum_{s<=t} p(s) = 1 - Q(t).
 * Working with rho keeps full relative precision when rho_t is many orders of
 * magnitude below c_0^2.
 */
CovarianceSequence solve_renewal(const WaitingTimeDistribution& w, std::size_t horizon);

TailProxySequence tail_proxy(const WaitingTimeDistribution& w, std::size_t horizon);

// Leading-order rho_t for the built-in polynomial and stretched-exponential
// (beta < 1) tail families. Throws UnsupportedFamily otherwise.
double asymptotic_autocov(const WaitingTimeDistribution& w, double t);

// Smallest M such that p(M + 1 + s) = lambda^s p(M + 1) for all s >= 1, with
// lambda in [0, 1), checked to relative tolerance tol. A truncated table has to
// show at least eight geometric ratios before its folded last bin.
std::optional<std::size_t> markov_order_check(const WaitingTimeDistribution& w,
                                              double tol = 1e-9);

}  // namespace renewal
