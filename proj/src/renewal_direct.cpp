#include "renewal/renewal_direct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renewal/error.hpp"
#include "renewal/numeric.hpp"

namespace renewal {

CovarianceSequence solve_renewal(const WaitingTimeDistribution& w, std::size_t horizon) {
    const auto p = w.densities();
    const std::size_t support = w.max_support();
    const double c0 = 1.0 / w.mean();
    const double c0_sq = c0 * c0;

    CovarianceSequence out;
    out.rho.assign(horizon + 1, 0.0);
    out.c.assign(horizon + 1, 0.0);
    out.rho[0] = c0 - c0_sq;
    out.c[0] = c0;
    for (std::size_t t = 1; t <= horizon; ++t) {
        CompensatedSum acc(-c0_sq * w.tail(t));
        const std::size_t top = std::min(t, support);
        const double* rho = out.rho.data() + t;
        for (std::size_t s = 1; s <= top; ++s) acc += p[s] * rho[-static_cast<std::ptrdiff_t>(s)];
        out.rho[t] = acc.value();
        out.c[t] = c0_sq + out.rho[t];
    }
    return out;
}

TailProxySequence tail_proxy(const WaitingTimeDistribution& w, std::size_t horizon) {
    const double mu = w.mean();
    const double scale = 1.0 / (mu * mu * mu);
    TailProxySequence out;
    out.values.resize(horizon + 1);
    for (std::size_t t = 0; t <= horizon; ++t) out.values[t] = scale * w.tail_sum_from(t + 1);
    return out;
}

double asymptotic_autocov(const WaitingTimeDistribution& w, double t) {
    if (!(t >= 1.0)) throw Error(ErrorCode::ConfigError, "asymptotic comparator needs t >= 1");
    if (!w.aperiodic()) throw Error(ErrorCode::UnsupportedFamily, "law is periodic");
    const double mu3 = std::pow(w.mean(), 3);
    if (const auto* poly = std::get_if<PolynomialFamily>(&w.family())) {
        return poly->scale / (poly->gamma * mu3 * std::pow(t, poly->gamma));
    }
    if (const auto* str = std::get_if<StretchedFamily>(&w.family())) {
        if (str->beta >= 1.0) {
            throw Error(ErrorCode::UnsupportedFamily, "stretched comparator needs beta < 1");
        }
        const double stretched = std::pow(t, str->beta);
        return std::pow(t, 1.0 - str->beta) / (mu3 * str->beta * str->kappa) *
               std::exp(-str->kappa * stretched);
    }
    throw Error(ErrorCode::UnsupportedFamily, "no closed-form asymptotics for this family");
}

std::optional<std::size_t> markov_order_check(const WaitingTimeDistribution& w, double tol) {
    const std::size_t support = w.max_support();
    const bool truncated = w.residual_mass() > 0.0;
    // Last index whose density belongs to the source law.
    const std::size_t end = truncated ? support - 1 : support;
    constexpr std::size_t kMinRatios = 8;

    auto close = [tol](double a, double b) {
        return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
    };

    for (std::size_t order = 0; order + 1 <= end; ++order) {
        const std::size_t anchor = order + 1;
        const std::size_t ratios = end - anchor;
        if (truncated && ratios < kMinRatios) break;
        const double base = w.density(anchor);
        const double lambda = base > 0.0 ? w.density(anchor + 1) / base : 0.0;
        if (!(lambda < 1.0)) continue;
        bool geometric = true;
        for (std::size_t s = anchor; s < end && geometric; ++s) {
            geometric = close(w.density(s + 1), lambda * w.density(s));
        }
        if (geometric) return order;
    }
    return std::nullopt;
}

}  // namespace renewal
