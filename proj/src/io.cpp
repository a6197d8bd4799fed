#include "renewal/io.hpp"

#include <cctype>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "renewal/error.hpp"

namespace renewal {

namespace {

double get_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw Error(ErrorCode::ConfigError, std::string("model descriptor needs numeric \"") +
                                                key + "\"");
    }
    return j.at(key).get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw Error(ErrorCode::ConfigError, std::string("model descriptor needs array \"") +
                                                key + "\"");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw Error(ErrorCode::ConfigError, std::string(key) + " must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

TruncationOptions truncation_from(const json& j) {
    TruncationOptions t;
    if (j.contains("eps_tail")) t.eps_tail = get_number(j, "eps_tail");
    if (j.contains("max_support")) t.max_support = j.at("max_support").get<std::size_t>();
    return t;
}

}  // namespace

std::uint64_t model_id(const json& descriptor) {
    const std::string text = descriptor.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex_id(std::uint64_t id) {
    std::array<char, 17> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + 16, id, 16);
    std::string s(buf.data(), end);
    return std::string(16 - s.size(), '0') + s;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

CovarianceSpec parse_covariance_spec(const json& j) {
    CovarianceSpec spec;
    spec.xi = get_number(j, "xi");
    spec.m = get_number(j, "m");
    if (!j.contains("phi") || !j.at("phi").is_object()) {
        throw Error(ErrorCode::ConfigError, "covariance spec needs a \"phi\" object");
    }
    const json& phi = j.at("phi");
    const std::string kind = phi.value("kind", "");
    if (kind == "power_log") {
        spec.phi = PowerLogPhi{get_number(phi, "gamma")};
    } else if (kind == "stretched") {
        spec.phi = StretchedPhi{get_number(phi, "kappa"), get_number(phi, "beta")};
    } else {
        throw Error(ErrorCode::ConfigError, "unknown phi kind \"" + kind + "\"");
    }
    return spec;
}

Model build_model(const json& descriptor) {
    if (!descriptor.is_object() || !descriptor.contains("family") ||
        !descriptor.at("family").is_string()) {
        throw Error(ErrorCode::ConfigError, "model descriptor needs a string \"family\"");
    }
    const std::string family = descriptor.at("family").get<std::string>();
    const TruncationOptions trunc = truncation_from(descriptor);
    std::optional<InversionResult> inversion;

    auto make = [&]() -> WaitingTimeDistribution {
        if (family == "geometric") {
            const double mu = get_number(descriptor, "mean");
            if (!(mu >= 1.0)) throw Error(ErrorCode::InvalidMean, "geometric mean must be >= 1");
            const double head[] = {1.0 / mu};
            return markov_family(0, head, 1.0 - 1.0 / mu, trunc);
        }
        if (family == "markov") {
            const auto head = get_array(descriptor, "head");
            const auto order = descriptor.value("order", head.empty() ? 0 : head.size() - 1);
            return markov_family(order, head, get_number(descriptor, "lambda"), trunc);
        }
        if (family == "polynomial") {
            return polynomial_tail(get_number(descriptor, "gamma"),
                                   descriptor.contains("scale") ? get_number(descriptor, "scale")
                                                                : 1.0,
                                   trunc);
        }
        if (family == "stretched") {
            return stretched_exp_tail(get_number(descriptor, "beta"),
                                      descriptor.contains("kappa")
                                          ? get_number(descriptor, "kappa")
                                          : 1.0,
                                      trunc);
        }
        if (family == "table") {
            const auto p = get_array(descriptor, "p");
            return from_density(p, trunc);
        }
        if (family == "inverse") {
            CovarianceSequence c;
            if (descriptor.contains("c")) {
                c = covariance_from_values(get_array(descriptor, "c"));
            } else {
                const std::size_t horizon = descriptor.value("horizon", std::size_t{20'000});
                c = covariance_from_spec(parse_covariance_spec(descriptor), horizon);
            }
            InversionOptions opts;
            if (descriptor.contains("clip_tol")) opts.clip_tol = get_number(descriptor, "clip_tol");
            inversion = invert_autocovariance(c, opts);
            return inversion->distribution;
        }
        throw Error(ErrorCode::UnsupportedFamily, "unknown family \"" + family + "\"");
    };

    try {
        WaitingTimeDistribution w = make();
        return Model{std::move(w), descriptor, model_id(descriptor), std::move(inversion)};
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open model file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return build_model(j);
}

void write_density_csv(std::ostream& out, const WaitingTimeDistribution& w) {
    out << "s,p\n";
    for (std::size_t s = 1; s <= w.max_support(); ++s) {
        out << s << ',' << format_double(w.density(s)) << '\n';
    }
}

void write_autocov_csv(std::ostream& out, const CovarianceSequence& c,
                       std::span<const double> proxy) {
    out << "t,c_t,rho_t,tail_proxy_t\n";
    for (std::size_t t = 0; t < c.c.size(); ++t) {
        out << t << ',' << format_double(c.c[t]) << ',' << format_double(c.rho[t]) << ','
            << (t < proxy.size() ? format_double(proxy[t]) : std::string()) << '\n';
    }
}

void write_estimates_csv(std::ostream& out, std::span<const EstimationReport> reports) {
    out << "target,index,estimate,truth,v,half_width,t\n";
    for (const auto& r : reports) {
        out << to_string(r.target) << ',' << r.index << ',' << format_double(r.estimate) << ','
            << format_double(r.true_value) << ',' << format_double(r.variance_v) << ','
            << format_double(r.half_width) << ',' << r.sample_length << '\n';
    }
}

std::vector<double> read_covariance_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ConfigError, "empty covariance CSV");
    std::size_t column = 1;
    {
        std::stringstream header(line);
        std::string name;
        for (std::size_t k = 0; std::getline(header, name, ','); ++k) {
            if (name == "c_t" || name == "c") column = k;
        }
    }
    std::vector<double> c;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        for (std::size_t k = 0; k <= column; ++k) {
            if (!std::getline(row, cell, ',')) {
                throw Error(ErrorCode::ConfigError, "short row in covariance CSV: " + line);
            }
        }
        try {
            c.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "bad number in covariance CSV: " + cell);
        }
    }
    return c;
}

void write_sequence_binary(const std::filesystem::path& path, const BinarySequence& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write("RBSQ1", 5);
    std::array<char, 8> len{};
    for (int k = 0; k < 8; ++k) len[k] = static_cast<char>((x.size() >> (8 * k)) & 0xff);
    out.write(len.data(), 8);
    const std::size_t nbytes = (x.size() + 7) / 8;
    std::vector<char> bytes(nbytes, 0);
    const auto words = x.words();
    for (std::size_t b = 0; b < nbytes; ++b) {
        bytes[b] = static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xff);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(nbytes));
    const json trailer = {{"seed", x.seed}, {"model_id", hex_id(x.model_id)}};
    out << trailer.dump();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

BinarySequence read_sequence_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::array<char, 5> magic{};
    in.read(magic.data(), 5);
    if (std::string(magic.data(), 5) != "RBSQ1") {
        throw Error(ErrorCode::IoError, path.string() + " is not an RBSQ1 file");
    }
    std::array<unsigned char, 8> len{};
    in.read(reinterpret_cast<char*>(len.data()), 8);
    std::uint64_t length = 0;
    for (int k = 0; k < 8; ++k) length |= std::uint64_t{len[k]} << (8 * k);
    BinarySequence x(length);
    const std::size_t nbytes = (length + 7) / 8;
    std::vector<unsigned char> bytes(nbytes);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(nbytes));
    if (!in) throw Error(ErrorCode::IoError, path.string() + " is truncated");
    auto words = x.words();
    for (std::size_t b = 0; b < nbytes; ++b) {
        words[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
    }
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!rest.empty()) {
        const json trailer = json::parse(rest, nullptr, false);
        if (trailer.is_object()) {
            x.seed = trailer.value("seed", std::uint64_t{0});
            x.model_id = std::stoull(trailer.value("model_id", std::string("0")), nullptr, 16);
        }
    }
    return x;
}

void write_sequence_text(const std::filesystem::path& path, const BinarySequence& x) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    std::string line(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) line[i] = '1';
    }
    out << line << '\n';
}

BinarySequence read_sequence_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::string bits;
    char ch;
    while (in.get(ch)) {
        if (ch == '0' || ch == '1') {
            bits.push_back(ch);
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw Error(ErrorCode::IoError, path.string() + ": unexpected character in 0/1 text");
        }
    }
    BinarySequence x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') x.set(i);
    }
    return x;
}

}  // namespace renewal
