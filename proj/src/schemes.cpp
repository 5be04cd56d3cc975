#include "sle/schemes.hpp"

#include "sle/errors.hpp"
#include "sle/format.hpp"

#include <cmath>

namespace sle {

double drift_constant(const SchemeConfig& cfg) {
    require(cfg.kappa > 0.0, "kappa must be positive");
    return cfg.convention == Convention::Normalized ? 2.0 / cfg.kappa : 2.0;
}

double noise_coefficient(const SchemeConfig& cfg) {
    return cfg.convention == Convention::Normalized ? 1.0 : std::sqrt(cfg.kappa);
}

Complex flow_drift(Complex z, double t) { return sqrt_upper(z * z - 4.0 * t); }

Complex flow_drift(Complex z, double t, const SchemeConfig& cfg) {
    return sqrt_upper(z * z - 2.0 * drift_constant(cfg) * t);
}

Complex flow_noise(Complex z, double u, double kappa) { return z + std::sqrt(kappa) * u; }

Complex flow_noise(Complex z, double u, const SchemeConfig& cfg) { return z + noise_coefficient(cfg) * u; }

Complex nv_step(Complex z, double h, double dB, double kappa) {
    const Complex half = sqrt_upper(z * z - 2.0 * h) + std::sqrt(kappa) * dB;
    return sqrt_upper(half * half - 2.0 * h);
}

Complex nv_step(Complex z, double h, double dB, const SchemeConfig& cfg) {
    const double shift = drift_constant(cfg) * h;
    const Complex half = sqrt_upper(z * z - shift) + noise_coefficient(cfg) * dB;
    return sqrt_upper(half * half - shift);
}

Complex euler_step(Complex z, double h, double dB, const SchemeConfig& cfg) {
    if (z == Complex(0.0)) throw NumericalError("Euler step evaluated at the pole z = 0");
    return z - drift_constant(cfg) / z * h + noise_coefficient(cfg) * dB;
}

Complex milstein_correction(Complex, double h, double dB, const SchemeConfig& cfg) {
    const double sigma = noise_coefficient(cfg);
    const double sigma_prime = 0.0;
    return 0.5 * sigma * sigma_prime * (dB * dB - h);
}

Complex milstein_step(Complex z, double h, double dB, const SchemeConfig& cfg) {
    return euler_step(z, h, dB, cfg) + milstein_correction(z, h, dB, cfg);
}

std::size_t max_word_length(std::size_t r, Truncation truncation) {
    return truncation == Truncation::ByLength ? r : 2 * r;
}

std::vector<MultiIndex> admissible_words(std::size_t r, Truncation truncation) {
    const std::size_t longest = max_word_length(r, truncation);
    require(longest <= kIntegralLevelCap, "truncation level " + std::to_string(r) + " exceeds cap");
    auto words = words_up_to(longest);
    if (truncation == Truncation::ByLength) return words;
    std::vector<MultiIndex> out;
    const Rational bound(static_cast<std::int64_t>(r));
    for (auto& w : words) {
        if (degree(w) <= bound) out.push_back(std::move(w));
    }
    return out;
}

Complex taylor_step(Complex z, const IteratedIntegralTable& table, std::size_t r, const SchemeConfig& cfg) {
    require(cfg.kappa > 0.0, "kappa must be positive");
    require(table.max_length() >= max_word_length(r, cfg.truncation), "integral table too short for truncation");
    Complex sum(0.0);
    for (const auto& word : admissible_words(r, cfg.truncation)) {
        const LaurentTerm term = compose(word);
        if (term.is_zero()) continue;
        Complex value;
        if (cfg.convention == Convention::Normalized) {
            value = eval_term(term, z, cfg.kappa);
        } else {
            // Standard fields are V0 = -2/z (a = 2 at kappa = 1) and V1 = sqrt(kappa).
            value = eval_term(term, z, 1.0) * std::pow(cfg.kappa, 0.5 * static_cast<double>(word.noise_count()));
        }
        sum += value * table.entry(word);
    }
    return sum;
}

Complex nv_solve(Complex z0, const BrownianPath& path, double t, const SchemeConfig& cfg) {
    const auto last = path.find(t);
    require(last.has_value(), "time " + format_double(t) + " is not a sample of the path");
    Complex z = z0;
    for (std::size_t i = 0; i < *last; ++i) {
        z = nv_step(z, path.time(i + 1) - path.time(i), path.value(i + 1) - path.value(i), cfg);
    }
    return z;
}

HalfPlanePoint reference_solve(HalfPlanePoint z0, const BrownianPath& path, double t, std::size_t substeps,
                               const SchemeConfig& cfg) {
    const auto last = path.find(t);
    require(last.has_value(), "time " + format_double(t) + " is not a sample of the path");
    require(*last >= substeps, "path has " + std::to_string(*last) + " intervals in [0, t], need " +
                                   std::to_string(substeps));
    return HalfPlanePoint(nv_solve(z0, path, t, cfg));
}

ReferenceResult converged_reference(Complex z0, BrownianPath& path, double t, const SchemeConfig& cfg,
                                    double relative_tolerance, std::size_t max_substeps) {
    require(relative_tolerance > 0.0, "tolerance must be positive");
    auto last = path.find(t);
    require(last.has_value(), "time " + format_double(t) + " is not a sample of the path");

    ReferenceResult result;
    result.substeps = *last;
    result.value = nv_solve(z0, path, t, cfg);
    while (2 * result.substeps <= max_substeps) {
        path.bisect_leading(result.substeps);
        result.substeps *= 2;
        const Complex next = nv_solve(z0, path, path.time(result.substeps), cfg);
        const double scale = std::abs(next);
        result.relative_change = scale > 0.0 ? std::abs(next - result.value) / scale : std::abs(next - result.value);
        result.value = next;
        if (result.relative_change < relative_tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace sle
