#include "sle/experiments.hpp"

#include "sle/brownian.hpp"
#include "sle/errors.hpp"
#include "sle/iter_integrals.hpp"
#include "sle/parallel.hpp"
#include "sle/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sle {

namespace {

struct Moments {
    double mean = 0.0;
    double std_error = 0.0;
};

Moments mean_and_error(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    Moments out;
    out.mean = pairwise_sum(values) / n;
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - out.mean) * (values[i] - out.mean);
    out.std_error = values.size() > 1 ? std::sqrt(pairwise_sum(dev) / (n - 1.0) / n) : 0.0;
    return out;
}

/// sqrt(E[e^2]) and its delta-method standard error.
Moments root_mean_square(std::span<const double> errors) {
    std::vector<double> squares(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) squares[i] = errors[i] * errors[i];
    const Moments m = mean_and_error(squares);
    const double rms = std::sqrt(m.mean);
    return {rms, rms > 0.0 ? m.std_error / (2.0 * rms) : 0.0};
}

nlohmann::json reference_json(const ReferenceOptions& r) {
    return {{"substeps", r.substeps}, {"tolerance", r.tolerance}, {"max_substeps", r.max_substeps}};
}

const char* truncation_name(Truncation t) { return t == Truncation::ByLength ? "by_length" : "by_degree"; }

const char* integrals_name(IntegralConvention c) {
    return c == IntegralConvention::Stratonovich ? "stratonovich" : "ito2";
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

} // namespace

std::vector<double> default_eps_grid() { return {0.125, 0.0625, 0.03125, 0.015625, 0.0078125}; }

ExperimentReport epsilon_scaling(const EpsilonScalingOptions& options) {
    require(options.delta > 0.0, "delta must be positive");
    require(!options.eps_list.empty(), "eps list is empty");
    for (std::size_t i = 0; i < options.eps_list.size(); ++i) {
        require(options.eps_list[i] > 0.0 && options.eps_list[i] < 1.0, "eps values must lie in (0, 1)");
        require(i == 0 || options.eps_list[i] < options.eps_list[i - 1], "eps list must be decreasing");
    }
    require(options.replicas >= 2, "need at least two replicas");

    SchemeConfig cfg;
    cfg.kappa = options.kappa;
    cfg.convention = Convention::Normalized;
    cfg.truncation = options.truncation;
    cfg.integrals = options.integrals;
    const std::size_t table_length = max_word_length(options.r, options.truncation);

    ExperimentReport report;
    report.name = "epsilon_scaling";
    report.seed = options.seed;
    report.columns = {"eps", "t", "l2_error", "std_error", "error_over_eps", "max_reference_change",
                      "unconverged_references"};
    report.config = {{"eps", options.eps_list},       {"delta", options.delta},
                     {"r", options.r},                {"kappa", options.kappa},
                     {"replicas", options.replicas},  {"truncation", truncation_name(options.truncation)},
                     {"integrals", integrals_name(options.integrals)},
                     {"reference", reference_json(options.reference)}};
    if (options.replicas < 100) report.notes.emplace_back("fewer than 100 replicas: fit may be unstable");

    std::vector<double> eps_column;
    std::vector<double> error_column;
    for (double eps : options.eps_list) {
        const double t = std::pow(eps, 2.0 + options.delta);
        const Complex z0(0.0, eps);
        std::vector<double> errors(options.replicas);
        std::vector<double> changes(options.replicas);
        std::vector<char> converged(options.replicas);
        parallel_for(options.replicas, [&](std::size_t i) {
            auto path = BrownianPath::sample_uniform(t, options.reference.substeps, stream_seed(options.seed, i));
            const auto ref = converged_reference(z0, path, t, cfg, options.reference.tolerance,
                                                 options.reference.max_substeps);
            const auto table = compute_table(path, t, table_length, options.integrals);
            errors[i] = std::abs(ref.value - taylor_step(z0, table, options.r, cfg));
            changes[i] = ref.relative_change;
            converged[i] = ref.converged;
        });
        const Moments rms = root_mean_square(errors);
        const auto unconverged = std::count(converged.begin(), converged.end(), 0);
        report.rows.push_back({eps, t, rms.mean, rms.std_error, rms.mean / eps,
                               *std::max_element(changes.begin(), changes.end()),
                               static_cast<std::int64_t>(unconverged)});
        eps_column.push_back(eps);
        error_column.push_back(rms.mean);
        if (unconverged > 0) {
            report.notes.push_back("eps " + std::to_string(eps) + ": " + std::to_string(unconverged) +
                                   " reference solutions did not reach the tolerance");
        }
    }
    report.fit = fit_log_log(eps_column, error_column);
    return report;
}

ExperimentReport divergence_probe(const DivergenceOptions& options) {
    require(options.delta > 0.0, "delta must be positive");
    require(options.eps > 0.0 && options.eps < 1.0, "eps must lie in (0, 1)");
    require(options.spread > 1.0 && options.eps * options.spread < 1.0, "eps * spread must stay below 1");
    require(options.replicas >= 2, "need at least two replicas");
    require(options.kappa > 0.0, "kappa must be positive");

    ExperimentReport report;
    report.name = "divergence_probe";
    report.seed = options.seed;
    report.columns = {"word",     "m",         "n",           "degree",         "predicted_exponent",
                      "estimate", "std_error", "exponent_at_eps", "local_exponent"};
    std::vector<std::string> word_names;
    for (const auto& w : options.words) word_names.push_back(w.str());
    report.config = {{"eps", options.eps},           {"delta", options.delta},
                     {"words", word_names},          {"kappa", options.kappa},
                     {"replicas", options.replicas}, {"resolution", options.resolution},
                     {"spread", options.spread}};

    std::vector<MultiIndex> words;
    std::vector<LaurentTerm> terms;
    for (const auto& w : options.words) {
        LaurentTerm term = compose(w);
        if (term.is_zero()) {
            report.notes.push_back("word '" + w.str() + "' skipped: composed vector field is zero");
            continue;
        }
        words.push_back(w);
        terms.push_back(term);
    }
    std::size_t longest = 0;
    for (const auto& w : words) longest = std::max(longest, w.length());

    const std::vector<double> eps_values = {options.eps / options.spread, options.eps, options.eps * options.spread};
    // estimates[j][w]
    std::vector<std::vector<Moments>> estimates(eps_values.size(), std::vector<Moments>(words.size()));
    for (std::size_t j = 0; j < eps_values.size(); ++j) {
        const double eps = eps_values[j];
        const double horizon = std::pow(eps, 2.0 - options.delta);
        std::vector<std::vector<double>> values(words.size(), std::vector<double>(options.replicas));
        parallel_for(options.replicas, [&](std::size_t i) {
            // Independent streams per eps, so the local slope carries genuine Monte Carlo error.
            const auto path = BrownianPath::sample_uniform(horizon, options.resolution,
                                                           stream_seed(stream_seed(options.seed, j), i));
            const auto table = compute_table(path, path.horizon(), longest);
            for (std::size_t w = 0; w < words.size(); ++w) values[w][i] = table.entry(words[w]);
        });
        for (std::size_t w = 0; w < words.size(); ++w) {
            const double field = std::abs(eval_term(terms[w], Complex(0.0, eps), options.kappa));
            for (double& v : values[w]) v *= field;
            estimates[j][w] = root_mean_square(values[w]);
        }
    }

    for (std::size_t w = 0; w < words.size(); ++w) {
        const Rational deg = degree(words[w]);
        const double deg_value = boost::rational_cast<double>(deg);
        const Moments& at_eps = estimates[1][w];
        std::vector<double> ys;
        for (std::size_t j = 0; j < eps_values.size(); ++j) ys.push_back(estimates[j][w].mean);
        const auto local = fit_log_log(eps_values, ys);
        report.rows.push_back({words[w].str(), as_int(words[w].time_count()), as_int(words[w].noise_count()),
                               deg_value, 1.0 - options.delta * deg_value, at_eps.mean, at_eps.std_error,
                               std::log(at_eps.mean) / std::log(options.eps),
                               local ? local->slope : std::numeric_limits<double>::quiet_NaN()});
    }
    return report;
}

ExperimentReport moment_preservation(const MomentOptions& options) {
    require(options.kappa >= 0.0, "kappa must be nonnegative");
    require(options.horizon > 0.0, "horizon must be positive");
    require(options.steps >= 1, "need at least one step");
    require(options.replicas >= 2, "need at least two replicas");

    const std::size_t n = options.steps;
    const double h = options.horizon / static_cast<double>(n);
    // squares[k * replicas + i] = Z_{t_k}^2 for replica i.
    std::vector<Complex> squares((n + 1) * options.replicas);
    parallel_for(options.replicas, [&](std::size_t i) {
        const auto path = BrownianPath::sample_uniform(options.horizon, n, stream_seed(options.seed, i));
        Complex z = options.z0;
        squares[i] = z * z;
        for (std::size_t k = 0; k < n; ++k) {
            z = nv_step(z, path.time(k + 1) - path.time(k), path.value(k + 1) - path.value(k), options.kappa);
            squares[(k + 1) * options.replicas + i] = z * z;
        }
    });

    ExperimentReport report;
    report.name = "moment_preservation";
    report.seed = options.seed;
    report.columns = {"k",         "t",         "mean_re",  "mean_im",  "target_re",
                      "target_im", "std_error_re", "std_error_im", "deviation_se"};
    report.config = {{"kappa", options.kappa},
                     {"z0", {options.z0.re(), options.z0.im()}},
                     {"T", options.horizon},
                     {"steps", n},
                     {"replicas", options.replicas}};

    const Complex z0 = options.z0;
    std::vector<double> re(options.replicas);
    std::vector<double> im(options.replicas);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = k == n ? options.horizon : static_cast<double>(k) * h;
        for (std::size_t i = 0; i < options.replicas; ++i) {
            re[i] = squares[k * options.replicas + i].real();
            im[i] = squares[k * options.replicas + i].imag();
        }
        const Moments mre = mean_and_error(re);
        const Moments mim = mean_and_error(im);
        const Complex target = z0 * z0 + (options.kappa - 4.0) * t;
        auto sigmas = [](double diff, double se) {
            if (se > 0.0) return std::abs(diff) / se;
            return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
        };
        const double dev = std::max(sigmas(mre.mean - target.real(), mre.std_error),
                                    sigmas(mim.mean - target.imag(), mim.std_error));
        report.rows.push_back({as_int(k), t, mre.mean, mim.mean, target.real(), target.imag(), mre.std_error,
                               mim.std_error, dev});
    }
    return report;
}

ExperimentReport scheme_comparison(const ComparisonOptions& options) {
    require(options.eps > 0.0 && options.eps < 1.0, "eps must lie in (0, 1)");
    require(options.replicas >= 2, "need at least two replicas");
    std::vector<double> horizons = options.horizons;
    if (horizons.empty()) {
        horizons = {std::pow(options.eps, 2.5), std::pow(options.eps, 2.0), std::pow(options.eps, 1.5)};
    }
    for (double h : horizons) require(h > 0.0, "horizons must be positive");

    SchemeConfig cfg;
    cfg.kappa = options.kappa;
    cfg.convention = Convention::Normalized;
    const Complex z0(0.0, options.eps);

    ExperimentReport report;
    report.name = "scheme_comparison";
    report.seed = options.seed;
    report.columns = {"horizon", "euler_error", "taylor2_error", "taylor3_error", "nv_error"};
    report.config = {{"kappa", options.kappa},          {"eps", options.eps},
                     {"horizons", horizons},            {"replicas", options.replicas},
                     {"zero_noise", options.zero_noise}, {"reference", reference_json(options.reference)}};

    for (double horizon : horizons) {
        std::vector<double> euler(options.replicas), t2(options.replicas), t3(options.replicas),
            nv(options.replicas);
        parallel_for(options.replicas, [&](std::size_t i) {
            Complex ref;
            BrownianPath path = BrownianPath::sample_uniform(horizon, options.reference.substeps,
                                                             stream_seed(options.seed, i));
            if (options.zero_noise) {
                const auto times = path.times();
                path = BrownianPath::from_samples({times.begin(), times.end()},
                                                  std::vector<double>(times.size(), 0.0));
                ref = nv_solve(z0, path, horizon, cfg);
            } else {
                ref = converged_reference(z0, path, horizon, cfg, options.reference.tolerance,
                                          options.reference.max_substeps)
                          .value;
            }
            const auto table = compute_table(path, horizon, 3);
            const double dB = path.value_at(horizon);
            euler[i] = std::abs(ref - euler_step(z0, horizon, dB, cfg));
            t2[i] = std::abs(ref - taylor_step(z0, table, 2, cfg));
            t3[i] = std::abs(ref - taylor_step(z0, table, 3, cfg));
            nv[i] = std::abs(ref - nv_step(z0, horizon, dB, cfg));
        });
        report.rows.push_back({horizon, root_mean_square(euler).mean, root_mean_square(t2).mean,
                               root_mean_square(t3).mean, root_mean_square(nv).mean});
    }
    return report;
}

} // namespace sle
