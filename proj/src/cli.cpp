#include "renewal/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "renewal/error.hpp"
#include "renewal/estimators.hpp"
#include "renewal/likelihood.hpp"

namespace renewal {

namespace fs = std::filesystem;

namespace {

struct Context {
    json config;
    fs::path out;
    std::ostream& log;
    std::vector<fs::path> written;
    std::vector<std::uint64_t> seeds;

    std::ofstream open(const std::string& name) {
        fs::path path = out / name;
        std::ofstream f(path);
        if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        written.push_back(path);
        return f;
    }

    void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }

    template <class T>
    T get(const char* key, T fallback) const {
        return config.contains(key) && !config.at(key).is_null() ? config.at(key).get<T>()
                                                                   : fallback;
    }

    template <class T>
    T require(const char* key) const {
        if (!config.contains(key) || config.at(key).is_null()) {
            throw Error(ErrorCode::ConfigError, std::string("action \"") +
                                                    config.value("action", "") + "\" needs " +
                                                    key);
        }
        return config.at(key).get<T>();
    }

    Model model() const {
        if (!config.contains("model") || !config.at("model").is_object()) {
            throw Error(ErrorCode::ConfigError, "this action needs --model");
        }
        return build_model(config.at("model"));
    }

    std::uint64_t seed() const { return get<std::uint64_t>("seed", 1); }
    unsigned threads() const { return get<unsigned>("threads", 1); }
};

std::size_t positive_length(const Context& ctx) {
    const auto t = ctx.require<std::size_t>("length");
    if (t < 1) throw Error(ErrorCode::ConfigError, "length must be >= 1");
    return t;
}

BinarySequence input_sequence(const fs::path& path) {
    std::ifstream probe(path, std::ios::binary);
    char magic[5] = {};
    probe.read(magic, 5);
    if (probe && std::string(magic, 5) == "RBSQ1") return read_sequence_binary(path);
    return read_sequence_text(path);
}

void do_generate(Context& ctx) {
    const Model m = ctx.model();
    const std::size_t t = positive_length(ctx);
    const auto replicas = ctx.get<std::size_t>("replicas", 1);
    const bool text = ctx.get<bool>("text", false);
    std::vector<BinarySequence> seqs;
    if (replicas == 1) {
        seqs.push_back(generate(m.distribution, t, ctx.seed(), m.id));
    } else {
        seqs = generate_replicas(m.distribution, t, ctx.seed(), replicas, ctx.threads(), m.id);
    }
    for (std::size_t k = 0; k < seqs.size(); ++k) {
        const std::string stem = replicas == 1 ? "sequence" : "sequence_" + std::to_string(k);
        const fs::path path = ctx.out / (stem + ".rbsq");
        write_sequence_binary(path, seqs[k]);
        ctx.written.push_back(path);
        if (text) {
            write_sequence_text(ctx.out / (stem + ".txt"), seqs[k]);
            ctx.written.push_back(ctx.out / (stem + ".txt"));
        }
        ctx.seeds.push_back(seqs[k].seed);
    }
    ctx.log << "generated " << seqs.size() << " sequence(s) of length " << t << '\n';
}

void do_autocov(Context& ctx) {
    const Model m = ctx.model();
    const auto horizon = ctx.get<std::size_t>("horizon", 2000);
    const CovarianceSequence c = solve_renewal(m.distribution, horizon);
    const TailProxySequence proxy = tail_proxy(m.distribution, horizon);
    auto f = ctx.open("autocov.csv");
    write_autocov_csv(f, c, proxy.values);
    json summary = {{"mean", m.distribution.mean()},
                    {"second_moment", m.distribution.second_moment()},
                    {"aperiodic", m.distribution.aperiodic()},
                    {"horizon", horizon}};
    if (auto order = markov_order_check(m.distribution)) summary["markov_order"] = *order;
    ctx.write_json("autocov.json", summary);
}

void do_invert(Context& ctx) {
    CovarianceSequence c;
    const auto horizon = ctx.get<std::size_t>("horizon", 20'000);
    if (ctx.config.contains("spec") && ctx.config.at("spec").is_object()) {
        c = covariance_from_spec(parse_covariance_spec(ctx.config.at("spec")), horizon);
    } else if (ctx.config.contains("csv") && ctx.config.at("csv").is_string()) {
        std::ifstream in(ctx.config.at("csv").get<std::string>());
        if (!in) throw Error(ErrorCode::ConfigError, "cannot open covariance CSV");
        c = covariance_from_values(read_covariance_csv(in));
    } else {
        throw Error(ErrorCode::ConfigError, "invert needs --spec or --csv");
    }
    InversionOptions opts;
    opts.clip_tol = ctx.get<double>("clip_tol", opts.clip_tol);
    const InversionResult r = invert_autocovariance(c, opts);
    auto f = ctx.open("density.csv");
    write_density_csv(f, r.distribution);
    ctx.write_json("invert.json", {{"mean", r.distribution.mean()},
                                   {"clipped_mass", r.clipped_mass},
                                   {"min_raw_density", r.min_raw_density},
                                   {"horizon", r.horizon},
                                   {"kaluza_ok", r.kaluza_ok},
                                   {"limit_ok", r.limit_ok},
                                   {"extrapolated", r.extrapolated},
                                   {"mean_error", r.mean_error},
                                   {"warnings", r.warnings}});
    ctx.log << "mean " << format_double(r.distribution.mean()) << '\n';
}

void do_entropy(Context& ctx) {
    const Model m = ctx.model();
    const std::size_t t = positive_length(ctx);
    const EntropySummary e = entropy_summary(m.distribution, t);
    ctx.write_json("entropy.json",
                   {{"H_p", e.H_p}, {"rate", e.entropy_rate}, {"H_pi_t", e.H_pi_t}, {"t", t}});
}

void do_loglik(Context& ctx) {
    const Model m = ctx.model();
    BinarySequence x;
    if (ctx.config.contains("input") && ctx.config.at("input").is_string()) {
        x = input_sequence(ctx.config.at("input").get<std::string>());
    } else {
        x = generate(m.distribution, positive_length(ctx), ctx.seed(), m.id);
        ctx.seeds.push_back(x.seed);
    }
    const LogLikelihood ll = log_likelihood(m.distribution, x);
    const EntropySummary e = entropy_summary(m.distribution, x.size());
    ctx.write_json("loglik.json", {{"H_p", e.H_p},
                                   {"rate", e.entropy_rate},
                                   {"H_pi_t", e.H_pi_t},
                                   {"log_likelihood", ll.value},
                                   {"aep_statistic", ll.aep_statistic},
                                   {"t", x.size()}});
}

std::vector<EstimationReport> estimate_all(const BinarySequence& x, const Model& m,
                                           std::size_t s_max, std::size_t tau_max) {
    std::vector<EstimationReport> out;
    const std::size_t t = x.size();
    for (std::size_t s = 1; s <= s_max && s + 1 < t; ++s) {
        out.push_back(estimate_waiting_time(x, m.distribution, s));
    }
    const CovarianceSequence c = solve_renewal(m.distribution, tau_max);
    for (std::size_t tau = 0; tau <= tau_max && tau + 1 < t; ++tau) {
        out.push_back(estimate_autocov(x, m.distribution, c, tau));
    }
    return out;
}

void do_estimate(Context& ctx) {
    const Model m = ctx.model();
    const auto s_max = ctx.get<std::size_t>("s_max", 20);
    const auto tau_max = ctx.get<std::size_t>("tau_max", 20);
    if (ctx.config.contains("input") && ctx.config.at("input").is_string()) {
        const BinarySequence x = input_sequence(ctx.config.at("input").get<std::string>());
        auto f = ctx.open("estimates.csv");
        write_estimates_csv(f, estimate_all(x, m, s_max, tau_max));
        return;
    }
    const std::size_t t = positive_length(ctx);
    const auto replicas = ctx.get<std::size_t>("replicas", 1);
    auto tables = std::make_shared<const SamplingTables>(m.distribution);
    std::vector<std::vector<EstimationReport>> results(replicas);
    const std::uint64_t base = ctx.seed();
    parallel_for(replicas, ctx.threads(), [&](std::size_t k) {
        const std::uint64_t seed = replicas == 1 ? base : derive_stream_seed(base, k);
        results[k] = estimate_all(generate(tables, t, seed, m.id), m, s_max, tau_max);
    });
    for (std::size_t k = 0; k < replicas; ++k) {
        ctx.seeds.push_back(replicas == 1 ? base : derive_stream_seed(base, k));
        auto f = ctx.open(replicas == 1 ? "estimates.csv"
                                        : "estimates_" + std::to_string(k) + ".csv");
        write_estimates_csv(f, results[k]);
    }
}

void do_mixing(Context& ctx) {
    const Model m = ctx.model();
    const auto horizon = ctx.get<std::size_t>("horizon", 10'000);
    const MixingBoundSequence b = alpha_mixing_bound(m.distribution, horizon);
    auto f = ctx.open("mixing.csv");
    f << "t,bound\n";
    for (std::size_t t = 1; t < b.bounds.size(); ++t) {
        f << t << ',' << format_double(b.bounds[t]) << '\n';
    }
    ctx.write_json("mixing.json", {{"partial_sum", b.partial_sum},
                                   {"last_decade_fraction", b.last_decade_fraction},
                                   {"horizon", horizon}});
}

// The four figure models: c_t = 1/4 + (1/4) exp(-phi(t)).
struct FigureModel {
    std::string name;
    json descriptor;
};

std::vector<FigureModel> figure_models(std::size_t horizon) {
    auto inverse = [&](json phi) {
        return json{{"family", "inverse"}, {"xi", 0.5}, {"m", 0.25}, {"phi", std::move(phi)},
                    {"horizon", horizon}};
    };
    return {
        {"gamma2", inverse({{"kind", "power_log"}, {"gamma", 2.0}})},
        {"gamma4", inverse({{"kind", "power_log"}, {"gamma", 4.0}})},
        {"beta0.5", inverse({{"kind", "stretched"}, {"kappa", 1.0}, {"beta", 0.5}})},
        {"beta1", inverse({{"kind", "stretched"}, {"kappa", 1.0}, {"beta", 1.0}})},
    };
}

void do_figures(Context& ctx) {
    const bool desk = ctx.get<bool>("desk_scale", false);
    const auto horizon = ctx.get<std::size_t>("horizon", 20'000);
    const auto t_max = ctx.get<std::size_t>("t_max", 2000);
    const auto s_max = ctx.get<std::size_t>("s_max", 100);
    const auto tau_max = ctx.get<std::size_t>("tau_max", 100);
    const std::vector<std::size_t> lengths =
        desk ? std::vector<std::size_t>{100'000, 1'000'000}
             : std::vector<std::size_t>{1'000'000, 100'000'000};

    const auto specs = figure_models(horizon);
    std::vector<Model> models;
    for (const auto& fm : specs) models.push_back(build_model(fm.descriptor));

    for (int fig = 0; fig < 2; ++fig) {
        auto f = ctx.open("fig" + std::to_string(fig + 1) + "_autocov.csv");
        f << "model,t,c_t,rho_t,tail_proxy_t\n";
        for (int k = 2 * fig; k < 2 * fig + 2; ++k) {
            const auto c = solve_renewal(models[k].distribution, t_max);
            const auto proxy = tail_proxy(models[k].distribution, t_max);
            for (std::size_t t = 0; t <= t_max; ++t) {
                f << specs[k].name << ',' << t << ',' << format_double(c.c[t]) << ','
                  << format_double(c.rho[t]) << ',' << format_double(proxy.values[t]) << '\n';
            }
        }
    }

    // Sequences are indexed (model, length) and seeded from derived streams.
    const std::size_t jobs = models.size() * lengths.size();
    std::vector<std::vector<EstimationReport>> results(jobs);
    std::vector<std::uint64_t> seeds(jobs);
    for (std::size_t j = 0; j < jobs; ++j) seeds[j] = derive_stream_seed(ctx.seed(), j);
    parallel_for(jobs, ctx.threads(), [&](std::size_t j) {
        const Model& m = models[j / lengths.size()];
        const BinarySequence x = generate(m.distribution, lengths[j % lengths.size()], seeds[j], m.id);
        results[j] = estimate_all(x, m, s_max, tau_max);
    });
    ctx.seeds.insert(ctx.seeds.end(), seeds.begin(), seeds.end());

    const char* names[4] = {"fig3_waiting_polynomial.csv", "fig4_waiting_stretched.csv",
                            "fig5_autocov_polynomial.csv", "fig6_autocov_stretched.csv"};
    for (int fig = 0; fig < 4; ++fig) {
        const auto target =
            fig < 2 ? EstimationTarget::WaitingTime : EstimationTarget::Autocovariance;
        const int first_model = 2 * (fig % 2);
        auto f = ctx.open(names[fig]);
        f << "model,target,index,estimate,truth,v,half_width,t\n";
        for (int k = first_model; k < first_model + 2; ++k) {
            for (std::size_t l = 0; l < lengths.size(); ++l) {
                for (const auto& r : results[k * lengths.size() + l]) {
                    if (r.target != target) continue;
                    f << specs[k].name << ',' << to_string(r.target) << ',' << r.index << ','
                      << format_double(r.estimate) << ',' << format_double(r.true_value) << ','
                      << format_double(r.variance_v) << ',' << format_double(r.half_width) << ','
                      << r.sample_length << '\n';
                }
            }
        }
    }
}

void write_provenance(Context& ctx) {
    std::vector<std::string> outputs;
    for (const auto& p : ctx.written) outputs.push_back(p.filename().string());
    json prov = {{"config", ctx.config},
                 {"config_hash", hex_id(model_id(ctx.config))},
                 {"seeds", ctx.seeds},
                 {"library_version", kLibraryVersion},
                 {"outputs", outputs}};
    const std::string name = "provenance_" + ctx.config.value("action", "run") + ".json";
    std::ofstream f(ctx.out / name);
    if (!f) throw Error(ErrorCode::IoError, "cannot write provenance");
    f << prov.dump(2) << '\n';
    ctx.written.push_back(ctx.out / name);
}

}  // namespace

std::vector<fs::path> execute(const json& config, std::ostream& log) {
    if (!config.is_object() || !config.contains("action")) {
        throw Error(ErrorCode::ConfigError, "config needs an action");
    }
    Context ctx{config, fs::path(config.value("out", std::string("."))), log, {}, {}};
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + ctx.out.string());

    const std::string action = config.at("action").get<std::string>();
    try {
        if (action == "generate") do_generate(ctx);
        else if (action == "autocov") do_autocov(ctx);
        else if (action == "invert") do_invert(ctx);
        else if (action == "entropy") do_entropy(ctx);
        else if (action == "loglik") do_loglik(ctx);
        else if (action == "estimate") do_estimate(ctx);
        else if (action == "mixing") do_mixing(ctx);
        else if (action == "figures") do_figures(ctx);
        else throw Error(ErrorCode::ConfigError, "unknown action \"" + action + "\"");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    write_provenance(ctx);
    return ctx.written;
}

std::vector<fs::path> replay(const fs::path& provenance, const fs::path& out, std::ostream& log) {
    std::ifstream in(provenance);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + provenance.string());
    json prov;
    try {
        in >> prov;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    if (!prov.contains("config")) throw Error(ErrorCode::ConfigError, "no config in provenance");
    json config = prov.at("config");
    if (!out.empty()) config["out"] = out.string();
    return execute(config, log);
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"Stationary renewal binary sequences: simulation, inversion, estimation"};
    app.require_subcommand(1);

    std::string model_file, spec_file, csv_file, input_file, out_dir = ".", provenance_file;
    std::uint64_t seed = 1;
    std::size_t length = 0, replicas = 1, horizon = 0, s_max = 0, tau_max = 0;
    unsigned threads = 1;
    bool desk = false, text = false;
    double clip_tol = 0.0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--model", model_file, "model descriptor JSON file");
        sub->add_option("--seed", seed, "64-bit seed");
        sub->add_option("--length", length, "sequence length t")->check(CLI::PositiveNumber);
        sub->add_option("--replicas", replicas, "number of replicas")->check(CLI::PositiveNumber);
        sub->add_option("--horizon", horizon, "solver horizon T");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--desk-scale", desk, "use t in {1e5, 1e6}");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* gen = app.add_subcommand("generate", "sample sequences");
    common(gen);
    gen->add_flag("--text", text, "also write 0/1 text files");
    auto* autocov = app.add_subcommand("autocov", "solve the renewal equation");
    common(autocov);
    auto* inv = app.add_subcommand("invert", "waiting-time law from a covariance");
    common(inv);
    inv->add_option("--spec", spec_file, "covariance spec JSON");
    inv->add_option("--csv", csv_file, "covariance CSV with a c_t column");
    inv->add_option("--clip-tol", clip_tol, "clip tolerance relative to c_0");
    auto* ent = app.add_subcommand("entropy", "entropy of p and of pi_t");
    common(ent);
    auto* ll = app.add_subcommand("loglik", "log-likelihood and AEP statistic");
    common(ll);
    ll->add_option("--input", input_file, "sequence file (RBSQ1 or 0/1 text)");
    auto* est = app.add_subcommand("estimate", "estimate p(s) and rho_tau with CLT bands");
    common(est);
    est->add_option("--input", input_file, "sequence file (RBSQ1 or 0/1 text)");
    est->add_option("--s-max", s_max, "largest s");
    est->add_option("--tau-max", tau_max, "largest tau");
    auto* mix = app.add_subcommand("mixing", "alpha-mixing bound");
    common(mix);
    auto* fig = app.add_subcommand("figures", "data behind the six figures");
    common(fig);
    fig->add_option("--s-max", s_max, "largest s");
    fig->add_option("--tau-max", tau_max, "largest tau");
    auto* rep = app.add_subcommand("replay", "re-run a provenance file");
    rep->add_option("provenance", provenance_file, "provenance JSON")->required();
    rep->add_option("--out", out_dir, "output directory");

    auto fail = [&](const std::string& code, const std::string& message, int status) {
        err << json{{"error", code}, {"message", message}, {"exit_code", status}}.dump() << '\n';
        return status;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, log, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, log, err);
    } catch (const CLI::ParseError& e) {
        return fail("ConfigError", e.what(), kExitConfig);
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == rep) {
            replay(provenance_file, rep->count("--out") ? fs::path(out_dir) : fs::path(), log);
            return kExitOk;
        }
        json config = {{"action", sub->get_name()}, {"seed", seed}, {"out", out_dir},
                       {"threads", threads}, {"replicas", replicas}, {"desk_scale", desk}};
        auto read_json = [](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path);
            try {
                return json::parse(in);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::ConfigError, path + ": " + e.what());
            }
        };
        if (!model_file.empty()) config["model"] = read_json(model_file);
        if (!spec_file.empty()) config["spec"] = read_json(spec_file);
        if (!csv_file.empty()) config["csv"] = fs::absolute(csv_file).string();
        if (!input_file.empty()) config["input"] = fs::absolute(input_file).string();
        if (length > 0) config["length"] = length;
        if (horizon > 0) config["horizon"] = horizon;
        if (s_max > 0) config["s_max"] = s_max;
        if (tau_max > 0) config["tau_max"] = tau_max;
        if (clip_tol > 0.0) config["clip_tol"] = clip_tol;
        if (text) config["text"] = true;
        execute(config, log);
        return kExitOk;
    } catch (const Error& e) {
        return fail(std::string(to_string(e.code())), e.what(),
                    e.is_config_error() ? kExitConfig : kExitNumerical);
    } catch (const std::exception& e) {
        return fail("InternalError", e.what(), kExitNumerical);
    }
}

}  // namespace renewal
