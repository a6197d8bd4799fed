#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "renewal/dist.hpp"
#include "renewal/renewal_direct.hpp"

namespace renewal {

// phi(t) = gamma ln(1 + t), giving rho_t = m (1 + t)^(-gamma).
struct PowerLogPhi {
    double gamma = 1.0;
};
// phi(t) = kappa t^beta, giving rho_t = m exp(-kappa t^beta).
struct StretchedPhi {
    double kappa = 1.0;
    double beta = 1.0;
};
using Phi = std::variant<PowerLogPhi, StretchedPhi>;

double evaluate(const Phi& phi, double t);
// exp(-phi(t)), evaluated without going through phi for the power-log case.
double decay(const Phi& phi, double t);

// c_0 = xi and c_t = xi^2 + m exp(-phi(t)) for t >= 1.
struct CovarianceSpec {
    double xi = 0.5;
    double m = 0.25;
    Phi phi = PowerLogPhi{};
};

CovarianceSequence covariance_from_spec(const CovarianceSpec& spec, std::size_t horizon);

// Wrap a raw table c_0..c_T; rho is filled as c_t - c_0^2.
CovarianceSequence covariance_from_values(std::vector<double> c);

struct KaluzaReport {
    bool ok = true;
    std::optional<std::size_t> first_violation;
};

// c_{t-1} c_{t+1} >= c_t^2 - tol for 1 <= t <= T-1.
KaluzaReport kaluza_check(const CovarianceSequence& c, double tol = 1e-12);

struct InversionOptions {
    // Negative densities down to -clip_tol * c_0 are rounding noise.
    double clip_tol = 1e-10;
    // Largest tail mass left at the horizon that may be folded into the last bin.
    double mass_tol = 1e-8;
    double kaluza_tol = 1e-12;
    // |c_T - c_0^2| above this is reported as a warning.
    double limit_tol = 1e-6;
    double mean_tol = 1e-6;
    // Continue a tail whose last decade is geometric instead of failing.
    bool extrapolate = true;
    // Continue a short-but-drained tail so the table mean matches 1/c_0.
    bool close_tail = true;
    TruncationOptions extension{};
    // The table is cut where Q falls below this, before it reaches subnormals.
    double tail_floor = 1e-250;
};

struct InversionResult {
    WaitingTimeDistribution distribution;
    double clipped_mass = 0.0;
    // Smallest density before clipping, in units of c_0.
    double min_raw_density = 0.0;
    std::size_t horizon = 0;
    bool kaluza_ok = true;
    bool limit_ok = true;
    bool extrapolated = false;
    // |mean - 1/c_0|.
    double mean_error = 0.0;
    std::vector<std::string> warnings{};
};

/**
 * Waiting-time law whose renewal equation reproduces c.
 *
 * The recursion p(1) = c_1/c_0, p(t+1) = (c_{t+1} - sum_{s<=t} p(s) c_{t+1-s})/c_0
 * is evaluated in its tail form
 *   c_0 Q(t) = - sum_{s<t} Q(s) (rho_{t-s} - rho_{t-s-1}),
 * the same recursion with p summed into Q = 1 - sum p. For a Kaluza input the
 * increments are non-positive, so every term is non-negative and deep tails keep
 * full relative precision.
 */
InversionResult invert_autocovariance(const CovarianceSequence& c,
                                      const InversionOptions& options = {});

}  // namespace renewal
