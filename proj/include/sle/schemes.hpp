#pragma once

// One-step maps for the backward Loewner SDE in two normalisations:
//
//   Normalized:  dZ = -(2/kappa)/Z dt + dB
//   Standard:    dZ = -2/Z dt + sqrt(kappa) dB
//
// If Z solves the standard form then Z / sqrt(kappa) solves the normalized
// form on the same time axis with the same Brownian increments.

#include "sle/brownian.hpp"
#include "sle/halfplane.hpp"
#include "sle/iter_integrals.hpp"
#include "sle/vf_algebra.hpp"

#include <cstddef>
#include <vector>

namespace sle {

enum class Convention { Normalized, Standard };

enum class Truncation {
    /// Words of length <= r.
    ByLength,
    /// Words with degree m + n/2 <= r.
    ByDegree,
};

struct SchemeConfig {
    double kappa = 2.0;
    Convention convention = Convention::Normalized;
    Truncation truncation = Truncation::ByLength;
    IntegralConvention integrals = IntegralConvention::Stratonovich;
};

/// c in the drift field -c / z.
double drift_constant(const SchemeConfig& cfg);
/// Coefficient of dB.
double noise_coefficient(const SchemeConfig& cfg);

/// Exact drift flow of V0 = -2/z for time t: sqrt(z^2 - 4t).
Complex flow_drift(Complex z, double t);
/// Exact drift flow in the configured normalisation: sqrt(z^2 - 2 c t).
Complex flow_drift(Complex z, double t, const SchemeConfig& cfg);

/// Exact noise flow: z + sqrt(kappa) u.
Complex flow_noise(Complex z, double u, double kappa);
Complex flow_noise(Complex z, double u, const SchemeConfig& cfg);

/// Strang-split step, half drift / full noise / half drift, in closed form:
/// sqrt((sqrt(z^2 - 2h) + sqrt(kappa) dB)^2 - 2h).
Complex nv_step(Complex z, double h, double dB, double kappa);
Complex nv_step(Complex z, double h, double dB, const SchemeConfig& cfg);

/// z + drift(z) h + noise dB. Throws NumericalError at z = 0.
Complex euler_step(Complex z, double h, double dB, const SchemeConfig& cfg);

/// (1/2) V1 V1' (dB^2 - h); the noise field is constant so this vanishes.
Complex milstein_correction(Complex z, double h, double dB, const SchemeConfig& cfg);
Complex milstein_step(Complex z, double h, double dB, const SchemeConfig& cfg);

/// Words entering the r-truncated expansion under cfg.truncation.
std::vector<MultiIndex> admissible_words(std::size_t r, Truncation truncation);

/// Longest admissible word for truncation level r.
std::size_t max_word_length(std::size_t r, Truncation truncation);

/// Truncated stochastic Taylor approximation
///   sum_I  V_{i1} ... V_{ik} Id(z) * X^I
/// over admissible words, with the integrals read from `table`.
Complex taylor_step(Complex z, const IteratedIntegralTable& table, std::size_t r, const SchemeConfig& cfg);

/// NV stepping over every sample of `path` in [0, t].
Complex nv_solve(Complex z0, const BrownianPath& path, double t, const SchemeConfig& cfg);

/// nv_solve after checking the path has at least `substeps` intervals in [0, t].
HalfPlanePoint reference_solve(HalfPlanePoint z0, const BrownianPath& path, double t, std::size_t substeps,
                               const SchemeConfig& cfg);

struct ReferenceResult {
    Complex value;
    /// |last - previous| / |last| for the final doubling.
    double relative_change = 0.0;
    std::size_t substeps = 0;
    bool converged = false;
};

/// Reference solution with doubling self-consistency: bisects every interval
/// of the path in [0, t] until successive NV solutions agree to
/// `relative_tolerance` or `max_substeps` is reached. Refines `path` in place.
ReferenceResult converged_reference(Complex z0, BrownianPath& path, double t, const SchemeConfig& cfg,
                                    double relative_tolerance, std::size_t max_substeps);

} // namespace sle
