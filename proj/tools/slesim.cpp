// slesim: SLE trace generation and stochastic Taylor error experiments.

#include "sle/errors.hpp"
#include "sle/experiments.hpp"
#include "sle/format.hpp"
#include "sle/iter_integrals.hpp"
#include "sle/parallel.hpp"
#include "sle/trace.hpp"
#include "sle/vf_algebra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    unsigned threads = 0;
    bool force = false;
};

// Doubles go through the strict round-trip parser rather than CLI11's conversion.
CLI::Option* add_double(CLI::App* app, const std::string& name, double& target, const std::string& help) {
    return app
        ->add_option_function<std::string>(
            name, [&target](const std::string& text) { target = sle::parse_double(text); }, help)
        ->type_name("FLOAT")
        ->default_str(sle::format_double(target));
}

CLI::Option* add_doubles(CLI::App* app, const std::string& name, std::vector<double>& target,
                         const std::string& help) {
    return app->add_option_function<std::vector<std::string>>(
        name,
        [&target](const std::vector<std::string>& texts) {
            target.clear();
            for (const auto& t : texts) target.push_back(sle::parse_double(t));
        },
        help)
        ->type_name("FLOAT");
}

const std::map<std::string, sle::Truncation> kTruncations = {{"length", sle::Truncation::ByLength},
                                                              {"degree", sle::Truncation::ByDegree}};
const std::map<std::string, sle::IntegralConvention> kIntegrals = {
    {"stratonovich", sle::IntegralConvention::Stratonovich}, {"ito2", sle::IntegralConvention::Ito2}};

void add_reference_options(CLI::App* app, sle::ReferenceOptions& ref) {
    app->add_option("--ref-substeps", ref.substeps, "initial reference NV steps")->capture_default_str();
    add_double(app, "--ref-tol", ref.tolerance, "relative doubling tolerance of the reference");
    app->add_option("--ref-max-substeps", ref.max_substeps, "reference step budget")->capture_default_str();
}

/// Files of one run; refuses to replace existing files unless forced.
class Outputs {
public:
    Outputs(const Globals& g, std::vector<std::string> names) : force_(g.force) {
        const fs::path dir(g.out_dir);
        for (const auto& n : names) paths_.push_back(dir / n);
        for (const auto& p : paths_) {
            if (!force_ && fs::exists(p)) {
                throw sle::ValidationError("refusing to overwrite " + p.string() + " (use --force)");
            }
        }
        fs::create_directories(dir);
    }

    std::ofstream open(std::size_t i) const {
        std::ofstream out(paths_.at(i), std::ios::binary | std::ios::trunc);
        if (!out) throw sle::ValidationError("cannot write " + paths_[i].string());
        return out;
    }

    json list() const {
        json j = json::array();
        for (const auto& p : paths_) j.push_back(p.string());
        return j;
    }

private:
    bool force_;
    std::vector<fs::path> paths_;
};

json run_echo(const std::string& command, const Globals& g, const std::vector<std::string>& argv) {
    return {{"command", command},
            {"seed", g.seed},
            {"threads", sle::thread_count()},
            {"precision", "binary64, shortest round-trip decimal"},
            {"argv", argv}};
}

void write_json(const Outputs& out, std::size_t i, const json& j) { out.open(i) << j.dump(2) << '\n'; }

json report_summary(const sle::ExperimentReport& report) {
    json j = {{"rows", report.rows.size()}};
    if (report.fit) j["fit"] = {{"slope", report.fit->slope}, {"r_squared", report.fit->r_squared}};
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j;
}

/// Shared tail for the four experiment subcommands.
Outputs report_outputs(const Globals& g, const std::string& name) { return Outputs(g, {name + ".csv", name + ".json"}); }

json emit_report(const sle::ExperimentReport& report, const Outputs& out, const json& echo, double seconds) {
    {
        auto csv = out.open(0);
        report.write_csv(csv);
    }
    json side = report.sidecar(seconds);
    side["run"] = echo;
    write_json(out, 1, side);
    return {{"outputs", out.list()}, {"summary", report_summary(report)}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLE trace simulation and stochastic Taylor error experiments", "slesim"};
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);

    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out", g.out_dir, "output directory")->envname("SLESIM_OUT_DIR")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = hardware concurrency)")->capture_default_str();
    app.add_flag("--force", g.force, "overwrite existing output files");

    std::function<json(const json&)> run;

    // trace
    sle::TraceOptions trace_opts;
    int width = 800;
    int height = 600;
    auto* trace_cmd = app.add_subcommand("trace", "adaptive SLE trace: CSV, SVG and JSON stats");
    add_double(trace_cmd, "--kappa", trace_opts.kappa, "SLE parameter");
    add_double(trace_cmd, "--T", trace_opts.horizon, "capacity time horizon");
    add_double(trace_cmd, "--tol", trace_opts.tolerance, "maximum gap between consecutive points");
    trace_cmd->add_option("--initial-steps", trace_opts.initial_steps, "uniform starting grid")->capture_default_str();
    trace_cmd->add_option("--max-depth", trace_opts.max_depth, "bisection limit per interval")->capture_default_str();
    trace_cmd->add_flag("--shift", trace_opts.apply_shift, "translate by sqrt(kappa) B(T)");
    trace_cmd->add_option("--width", width, "SVG width")->capture_default_str();
    trace_cmd->add_option("--height", height, "SVG height")->capture_default_str();
    trace_cmd->callback([&] {
        run = [&](const json& echo) {
            const Outputs out(g, {"trace.csv", "trace.svg", "trace.json"});
            const auto start = std::chrono::steady_clock::now();
            const auto trace = sle::build_trace(g.seed, trace_opts);
            const double seconds = seconds_since(start);
            {
                auto csv = out.open(0);
                sle::write_trace_csv(trace, csv);
            }
            out.open(1) << sle::render_svg(trace, width, height);
            json side = {{"name", "trace"},
                         {"config",
                          {{"kappa", trace_opts.kappa},
                           {"T", trace_opts.horizon},
                           {"tol", trace_opts.tolerance},
                           {"initial_steps", trace_opts.initial_steps},
                           {"max_depth", trace_opts.max_depth},
                           {"shift", trace_opts.apply_shift},
                           {"width", width},
                           {"height", height}}},
                         {"seed", g.seed},
                         {"stats", sle::trace_stats_json(trace)},
                         {"runtime_seconds", seconds},
                         {"run", echo}};
            write_json(out, 2, side);
            return json{{"outputs", out.list()}, {"summary", sle::trace_stats_json(trace)}};
        };
    });

    // scaling
    sle::EpsilonScalingOptions scaling_opts;
    auto* scaling_cmd = app.add_subcommand("scaling", "L2 error of the truncated expansion against eps");
    add_doubles(scaling_cmd, "--eps", scaling_opts.eps_list, "decreasing eps values (default 2^-3 .. 2^-7)");
    add_double(scaling_cmd, "--delta", scaling_opts.delta, "horizon t = eps^(2 + delta)");
    scaling_cmd->add_option("--r", scaling_opts.r, "truncation level")->capture_default_str();
    add_double(scaling_cmd, "--kappa", scaling_opts.kappa, "SLE parameter");
    scaling_cmd->add_option("--replicas", scaling_opts.replicas, "Monte Carlo replicas")->capture_default_str();
    scaling_cmd->add_option("--truncation", scaling_opts.truncation, "length | degree")
        ->transform(CLI::CheckedTransformer(kTruncations));
    scaling_cmd->add_option("--integrals", scaling_opts.integrals, "stratonovich | ito2")
        ->transform(CLI::CheckedTransformer(kIntegrals));
    add_reference_options(scaling_cmd, scaling_opts.reference);
    scaling_cmd->callback([&] {
        run = [&](const json& echo) {
            scaling_opts.seed = g.seed;
            const auto out = report_outputs(g, "epsilon_scaling");
            const auto start = std::chrono::steady_clock::now();
            const auto report = sle::epsilon_scaling(scaling_opts);
            return emit_report(report, out, echo, seconds_since(start));
        };
    });

    // divergence
    sle::DivergenceOptions divergence_opts;
    std::vector<std::string> word_texts;
    std::size_t max_length = 4;
    auto* divergence_cmd = app.add_subcommand("divergence", "per-word L2 magnitudes at t = eps^(2 - delta)");
    add_double(divergence_cmd, "--eps", divergence_opts.eps, "starting point eps i");
    add_double(divergence_cmd, "--delta", divergence_opts.delta, "horizon t = eps^(2 - delta)");
    divergence_cmd->add_option("--words", word_texts, "words over {0,1} (default: all up to --max-length)");
    divergence_cmd->add_option("--max-length", max_length, "longest default word")->capture_default_str();
    add_double(divergence_cmd, "--kappa", divergence_opts.kappa, "SLE parameter");
    divergence_cmd->add_option("--replicas", divergence_opts.replicas, "Monte Carlo replicas")
        ->capture_default_str();
    divergence_cmd->add_option("--resolution", divergence_opts.resolution, "path steps per replica")
        ->capture_default_str();
    add_double(divergence_cmd, "--spread", divergence_opts.spread, "local exponent uses eps / s, eps, eps * s");
    divergence_cmd->callback([&] {
        run = [&](const json& echo) {
            divergence_opts.seed = g.seed;
            divergence_opts.words.clear();
            if (word_texts.empty()) {
                sle::require(max_length >= 1 && max_length <= sle::kIntegralLevelCap, "max-length out of range");
                for (std::size_t len = 1; len <= max_length; ++len) {
                    for (auto& w : sle::words_of_length(len)) divergence_opts.words.push_back(std::move(w));
                }
            } else {
                for (const auto& t : word_texts) divergence_opts.words.push_back(sle::MultiIndex::parse(t));
            }
            const auto out = report_outputs(g, "divergence_probe");
            const auto start = std::chrono::steady_clock::now();
            const auto report = sle::divergence_probe(divergence_opts);
            return emit_report(report, out, echo, seconds_since(start));
        };
    });

    // moments
    sle::MomentOptions moment_opts;
    double z0_re = 0.0;
    double z0_im = 1.0;
    auto* moments_cmd = app.add_subcommand("moments", "second moment of Z under NV stepping");
    add_double(moments_cmd, "--kappa", moment_opts.kappa, "SLE parameter");
    add_double(moments_cmd, "--z0-re", z0_re, "starting point, real part");
    add_double(moments_cmd, "--z0-im", z0_im, "starting point, imaginary part");
    add_double(moments_cmd, "--T", moment_opts.horizon, "time horizon");
    moments_cmd->add_option("--steps", moment_opts.steps, "NV steps")->capture_default_str();
    moments_cmd->add_option("--replicas", moment_opts.replicas, "Monte Carlo replicas")->capture_default_str();
    moments_cmd->callback([&] {
        run = [&](const json& echo) {
            moment_opts.seed = g.seed;
            moment_opts.z0 = sle::HalfPlanePoint(z0_re, z0_im);
            const auto out = report_outputs(g, "moment_preservation");
            const auto start = std::chrono::steady_clock::now();
            const auto report = sle::moment_preservation(moment_opts);
            return emit_report(report, out, echo, seconds_since(start));
        };
    });

    // compare
    sle::ComparisonOptions compare_opts;
    auto* compare_cmd = app.add_subcommand("compare", "Euler, Taylor r = 2, 3 and NV one-step errors");
    add_double(compare_cmd, "--kappa", compare_opts.kappa, "SLE parameter");
    add_double(compare_cmd, "--eps", compare_opts.eps, "starting point eps i");
    add_doubles(compare_cmd, "--horizons", compare_opts.horizons, "step sizes (default eps^2.5, eps^2, eps^1.5)");
    compare_cmd->add_option("--replicas", compare_opts.replicas, "Monte Carlo replicas")->capture_default_str();
    compare_cmd->add_flag("--zero-noise", compare_opts.zero_noise, "deterministic drift-only check");
    add_reference_options(compare_cmd, compare_opts.reference);
    compare_cmd->callback([&] {
        run = [&](const json& echo) {
            compare_opts.seed = g.seed;
            const auto out = report_outputs(g, "scheme_comparison");
            const auto start = std::chrono::steady_clock::now();
            const auto report = sle::scheme_comparison(compare_opts);
            return emit_report(report, out, echo, seconds_since(start));
        };
    });

    // taylor-terms
    std::size_t level = 2;
    auto* terms_cmd = app.add_subcommand("taylor-terms", "composed vector fields for every word of length r");
    terms_cmd->add_option("--r", level, "word length")->capture_default_str();
    terms_cmd->callback([&] {
        run = [&](const json& echo) {
            const Outputs out(g, {"taylor_terms.csv", "taylor_terms.json"});
            const auto entries = sle::enumerate_level(level);
            {
                auto csv = out.open(0);
                csv << "word,coeff_num,coeff_den,a_power,z_power\n";
                for (const auto& [word, term] : entries) {
                    csv << word.str() << ',' << term.coeff.numerator() << ',' << term.coeff.denominator() << ','
                        << term.a_power << ',' << term.z_power << '\n';
                }
            }
            std::size_t nonzero = 0;
            for (const auto& e : entries) nonzero += !e.term.is_zero();
            write_json(out, 1, {{"name", "taylor_terms"}, {"config", {{"r", level}}}, {"run", echo}});
            return json{{"outputs", out.list()}, {"summary", {{"rows", entries.size()}, {"nonzero", nonzero}}}};
        };
    });

    // integrals
    double int_horizon = 1.0;
    std::size_t int_steps = 256;
    std::size_t int_length = 3;
    sle::IntegralConvention int_convention = sle::IntegralConvention::Stratonovich;
    auto* integrals_cmd = app.add_subcommand("integrals", "iterated integrals of one sampled path");
    add_double(integrals_cmd, "--T", int_horizon, "time horizon");
    integrals_cmd->add_option("--steps", int_steps, "uniform path steps")->capture_default_str();
    integrals_cmd->add_option("--r", int_length, "longest word")->capture_default_str();
    integrals_cmd->add_option("--integrals", int_convention, "stratonovich | ito2")
        ->transform(CLI::CheckedTransformer(kIntegrals));
    integrals_cmd->callback([&] {
        run = [&](const json& echo) {
            const Outputs out(g, {"integrals.csv", "integrals.json"});
            const auto path = sle::BrownianPath::sample_uniform(int_horizon, int_steps, g.seed);
            const auto table = sle::compute_table(path, int_horizon, int_length, int_convention);
            {
                auto csv = out.open(0);
                table.write_csv(csv);
            }
            write_json(out, 1,
                       {{"name", "integrals"},
                        {"config", {{"T", int_horizon}, {"steps", int_steps}, {"r", int_length}}},
                        {"seed", g.seed},
                        {"run", echo}});
            return json{{"outputs", out.list()}, {"summary", {{"rows", table.entries().size()}}}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const sle::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        sle::set_thread_count(g.threads);
        const std::vector<std::string> args(argv + 1, argv + argc);
        const std::string command = app.get_subcommands().front()->get_name();
        json result = run(run_echo(command, g, args));
        result["command"] = command;
        result["seed"] = g.seed;
        std::cout << result.dump() << '\n';
        return 0;
    } catch (const sle::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const sle::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 2;
    }
}
