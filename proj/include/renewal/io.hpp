#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "renewal/dist.hpp"
#include "renewal/estimators.hpp"
#include "renewal/renewal_direct.hpp"
#include "renewal/renewal_inverse.hpp"
#include "renewal/sampler.hpp"

namespace renewal {

using json = nlohmann::json;

// A waiting-time law built from a JSON model descriptor.
//
//   {"family": "geometric",  "mean": 2}
//   {"family": "markov",     "order": M, "head": [p(1), ..., p(M+1)], "lambda": l}
//   {"family": "polynomial", "gamma": g, "scale": a}
//   {"family": "stretched",  "beta": b, "kappa": k}
//   {"family": "table",      "p": [p(1), p(2), ...]}
//   {"family": "inverse",    "xi": x, "m": m, "phi": {"kind": "power_log", "gamma": g},
//                            "horizon": T}
//   {"family": "inverse",    "c": [c_0, c_1, ...]}
//
// "phi" may also be {"kind": "stretched", "kappa": k, "beta": b}. Optional
// "eps_tail" and "max_support" override the truncation defaults.
struct Model {
    WaitingTimeDistribution distribution;
    json descriptor;
    std::uint64_t id = 0;
    std::optional<InversionResult> inversion;
};

Model build_model(const json& descriptor);
Model load_model(const std::filesystem::path& path);

// FNV-1a 64 of the canonical (sorted-key, compact) descriptor text.
std::uint64_t model_id(const json& descriptor);
std::string hex_id(std::uint64_t id);

CovarianceSpec parse_covariance_spec(const json& j);

// s,p
void write_density_csv(std::ostream& out, const WaitingTimeDistribution& w);
// t,c_t,rho_t,tail_proxy_t
void write_autocov_csv(std::ostream& out, const CovarianceSequence& c,
                       std::span<const double> proxy);
// target,index,estimate,truth,v,half_width,t
void write_estimates_csv(std::ostream& out, std::span<const EstimationReport> reports);

// Reads c_t from a CSV whose header names a "c_t" (or second) column.
std::vector<double> read_covariance_csv(std::istream& in);

// "RBSQ1", u64 little-endian length, packed bits LSB-first, JSON trailer.
void write_sequence_binary(const std::filesystem::path& path, const BinarySequence& x);
BinarySequence read_sequence_binary(const std::filesystem::path& path);
void write_sequence_text(const std::filesystem::path& path, const BinarySequence& x);
BinarySequence read_sequence_text(const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace renewal
