#include "renewal/renewal_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renewal/error.hpp"
#include "renewal/numeric.hpp"

namespace renewal {

double evaluate(const Phi& phi, double t) {
    if (const auto* pl = std::get_if<PowerLogPhi>(&phi)) return pl->gamma * std::log1p(t);
    const auto& st = std::get<StretchedPhi>(phi);
    return st.kappa * std::pow(t, st.beta);
}

double decay(const Phi& phi, double t) {
    if (const auto* pl = std::get_if<PowerLogPhi>(&phi)) return std::pow(1.0 + t, -pl->gamma);
    return std::exp(-evaluate(phi, t));
}

CovarianceSequence covariance_from_spec(const CovarianceSpec& spec, std::size_t horizon) {
    const double xi = spec.xi;
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw Error(ErrorCode::SpecViolation, "xi must lie in (0, 1], got " + std::to_string(xi));
    }
    const double m_max = xi * (1.0 - xi);
    if (!(spec.m >= 0.0 && spec.m <= m_max * (1.0 + 1e-12))) {
        throw Error(ErrorCode::SpecViolation, "m must lie in [0, xi (1 - xi)], got " +
                                                  std::to_string(spec.m));
    }
    if (const auto* pl = std::get_if<PowerLogPhi>(&spec.phi)) {
        if (!(pl->gamma > 0.0)) throw Error(ErrorCode::SpecViolation, "gamma must be > 0");
    } else {
        const auto& st = std::get<StretchedPhi>(spec.phi);
        if (!(st.kappa > 0.0)) throw Error(ErrorCode::SpecViolation, "kappa must be > 0");
        if (!(st.beta > 0.0 && st.beta <= 1.0)) {
            throw Error(ErrorCode::SpecViolation, "beta must lie in (0, 1]");
        }
    }

    // phi(0) = 0, non-decreasing and concave on the grid.
    std::vector<double> phi(horizon + 2);
    for (std::size_t t = 0; t < phi.size(); ++t) phi[t] = evaluate(spec.phi, static_cast<double>(t));
    if (phi[0] != 0.0) throw Error(ErrorCode::SpecViolation, "phi(0) must be 0");
    for (std::size_t t = 1; t + 1 < phi.size(); ++t) {
        if (phi[t] < phi[t - 1] || phi[t + 1] - 2.0 * phi[t] + phi[t - 1] > 1e-12) {
            throw Error(ErrorCode::SpecViolation, "phi not concave at t = " + std::to_string(t));
        }
    }

    CovarianceSequence out;
    out.c.resize(horizon + 1);
    out.rho.resize(horizon + 1);
    out.c[0] = xi;
    out.rho[0] = xi - xi * xi;
    for (std::size_t t = 1; t <= horizon; ++t) {
        out.rho[t] = spec.m * decay(spec.phi, static_cast<double>(t));
        out.c[t] = xi * xi + out.rho[t];
    }
    return out;
}

CovarianceSequence covariance_from_values(std::vector<double> c) {
    if (c.empty()) throw Error(ErrorCode::ConfigError, "empty covariance table");
    CovarianceSequence out;
    const double c0_sq = c[0] * c[0];
    out.rho.resize(c.size());
    for (std::size_t t = 0; t < c.size(); ++t) out.rho[t] = c[t] - c0_sq;
    out.c = std::move(c);
    return out;
}

KaluzaReport kaluza_check(const CovarianceSequence& c, double tol) {
    for (std::size_t t = 0; t < c.c.size(); ++t) {
        if (!(c.c[t] > 0.0)) {
            throw Error(ErrorCode::NonPositiveEntry, "c_" + std::to_string(t) + " is not positive");
        }
    }
    // c_t = a + rho_t with a = c_0^2, so
    // c_{t-1} c_{t+1} - c_t^2 = a (rho_{t-1} + rho_{t+1} - 2 rho_t) + rho_{t-1} rho_{t+1} - rho_t^2.
    const double a = c.c[0] * c.c[0];
    const auto& r = c.rho;
    for (std::size_t t = 1; t + 1 < c.c.size(); ++t) {
        const double gap = a * ((r[t - 1] - r[t]) - (r[t] - r[t + 1])) +
                           (r[t - 1] * r[t + 1] - r[t] * r[t]);
        if (gap < -tol) return {false, t};
    }
    return {};
}

namespace {

// Beyond the horizon the tail is unknown except for its sum, which the mean
// identity sum_t Q(t) = 1/c_0 fixes. Continue Q geometrically with that sum
// instead of folding Q(T) into p(T).
void close_tail(std::vector<double>& q, double mean, const TruncationOptions& limits) {
    const double qt = q.back();
    CompensatedSum head;
    for (std::size_t t = 0; t + 1 < q.size(); ++t) head += q[t];
    const double rest = mean - head.value();  // sum_{t >= T} Q(t)
    if (!(qt > 0.0) || !(rest > qt * (1.0 + 1e-9)) || rest < 1e-14 * mean) return;
    const double ratio = 1.0 - qt / rest;
    while (q.back() * ratio / (1.0 - ratio) > 1e-17 * mean && q.size() <= limits.max_support) {
        q.push_back(q.back() * ratio);
    }
}

}  // namespace

InversionResult invert_autocovariance(const CovarianceSequence& c,
                                      const InversionOptions& options) {
    const std::size_t horizon = c.horizon();
    if (horizon < 1) throw Error(ErrorCode::HorizonTooShort, "need at least c_0 and c_1");

    InversionResult result{.distribution = from_tail_table({1.0, 0.0}, InvertedFamily{})};
    result.horizon = horizon;

    const KaluzaReport kaluza = kaluza_check(c, options.kaluza_tol);
    result.kaluza_ok = kaluza.ok;
    if (!kaluza.ok) {
        result.warnings.push_back("input is not Kaluza at t = " +
                                  std::to_string(*kaluza.first_violation));
    }

    const double c0 = c.c[0];
    std::vector<double> decrement(horizon + 1, 0.0);  // rho_{k-1} - rho_k
    for (std::size_t k = 1; k <= horizon; ++k) decrement[k] = c.rho[k - 1] - c.rho[k];

    std::vector<double> q{1.0};
    q.reserve(horizon + 1);
    for (std::size_t t = 1; t <= horizon; ++t) {
        CompensatedSum acc;
        for (std::size_t s = 0; s < t; ++s) acc += q[s] * decrement[t - s];
        const double value = acc.value() / c0;
        q.push_back(value);
        if (std::fabs(value) < options.tail_floor) break;
    }

    // Densities from the tail, with clipping of rounding-level negatives.
    const double clip = options.clip_tol * c0;
    std::vector<double> p(q.size(), 0.0);
    bool clipped = false;
    double min_density = 0.0;
    for (std::size_t s = 1; s < q.size(); ++s) {
        p[s] = q[s - 1] - q[s];
        min_density = std::min(min_density, p[s]);
        if (p[s] < 0.0) {
            if (p[s] < -clip) {
                throw Error(ErrorCode::NotRenewable,
                            "p(" + std::to_string(s) + ") = " + std::to_string(p[s]));
            }
            result.clipped_mass += -p[s];
            p[s] = 0.0;
            clipped = true;
        }
    }
    result.min_raw_density = min_density / c0;
    if (q.back() < -clip) {
        throw Error(ErrorCode::NotRenewable, "densities sum past one by the horizon");
    }
    if (clipped) {
        // Rebuild the tail from the clipped densities.
        CompensatedSum acc(std::max(q.back(), 0.0));
        for (std::size_t t = q.size() - 1; t-- > 0;) {
            acc += p[t + 1];
            q[t] = acc.value();
        }
        const double total = q.front();
        for (double& v : q) v /= total;
    }

    if (q.back() > options.mass_tol) {
        const std::size_t last = q.size() - 1;
        const std::size_t from = last - std::max<std::size_t>(last / 10, 3);
        bool geometric = options.extrapolate && last >= 6;
        double lo = 1.0, hi = 0.0;
        for (std::size_t t = from; geometric && t < last; ++t) {
            if (!(q[t] > 0.0)) {
                geometric = false;
                break;
            }
            const double r = q[t + 1] / q[t];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        geometric = geometric && hi < 1.0 && lo > 0.0 && (hi - lo) <= 1e-6 * hi;
        if (!geometric) {
            throw Error(ErrorCode::HorizonTooShort,
                        "tail mass " + std::to_string(q.back()) + " left at T = " +
                            std::to_string(last));
        }
        const double ratio = q[last] / q[last - 1];
        while (q.back() >= options.extension.eps_tail && q.size() <= options.extension.max_support) {
            q.push_back(q.back() * ratio);
        }
        result.extrapolated = true;
        result.warnings.push_back("tail extended geometrically with ratio " + std::to_string(ratio));
    }

    if (!result.extrapolated && options.close_tail) close_tail(q, 1.0 / c0, options.extension);

    result.distribution = from_tail_table(std::move(q), InvertedFamily{});
    result.mean_error = std::fabs(result.distribution.mean() - 1.0 / c0);
    if (result.mean_error > options.mean_tol) {
        result.warnings.push_back("mean misses 1/c_0 by " + std::to_string(result.mean_error));
    }
    result.limit_ok = std::fabs(c.rho.back()) < options.limit_tol;
    if (!result.limit_ok) result.warnings.push_back("c_T has not settled at c_0^2");
    return result;
}

}  // namespace renewal
