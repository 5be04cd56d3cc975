#pragma once

#include "sle/halfplane.hpp"
#include "sle/report.hpp"
#include "sle/schemes.hpp"
#include "sle/vf_algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sle {

/// Dyadic grid 2^-3 ... 2^-7.
std::vector<double> default_eps_grid();

/// Reference solutions: start from `substeps` uniform NV steps, double until
/// the relative change drops below `tolerance` or `max_substeps` is reached.
struct ReferenceOptions {
    std::size_t substeps = 64;
    double tolerance = 1e-5;
    std::size_t max_substeps = std::size_t{1} << 14;
};

struct EpsilonScalingOptions {
    std::vector<double> eps_list = default_eps_grid();
    double delta = 0.5;
    std::size_t r = 2;
    double kappa = 2.0;
    std::size_t replicas = 1000;
    std::uint64_t seed = 0;
    Truncation truncation = Truncation::ByLength;
    IntegralConvention integrals = IntegralConvention::Stratonovich;
    ReferenceOptions reference;
};

/// L2 one-step error of the r-truncated Taylor approximation from z0 = eps i
/// at t = eps^(2 + delta), normalized convention, with a log-log fit of
/// error against eps.
ExperimentReport epsilon_scaling(const EpsilonScalingOptions& options);

struct DivergenceOptions {
    double eps = 1.0 / 64.0;
    double delta = 0.5;
    std::vector<MultiIndex> words;
    double kappa = 2.0;
    std::size_t replicas = 2000;
    std::size_t resolution = 256;
    std::uint64_t seed = 0;
    /// The local exponent is fitted over eps / spread, eps, eps * spread.
    double spread = 2.0;
};

/// ||V_I Id(eps i) X^I_{0, eps^(2 - delta)}||_L2 per word, with two exponent
/// estimates: log(estimate) / log(eps) at eps alone, and the local log-log
/// slope over three nearby eps values. Words whose composition vanishes are
/// skipped with a note.
ExperimentReport divergence_probe(const DivergenceOptions& options);

struct MomentOptions {
    double kappa = 2.0;
    HalfPlanePoint z0{0.0, 1.0};
    double horizon = 1.0;
    std::size_t steps = 16;
    std::size_t replicas = 100000;
    std::uint64_t seed = 0;
};

/// Sample mean of Z^2 under NV stepping (standard convention) against the
/// exact second moment z0^2 + (kappa - 4) t_k.
ExperimentReport moment_preservation(const MomentOptions& options);

struct ComparisonOptions {
    double kappa = 2.0;
    double eps = 1.0 / 32.0;
    std::vector<double> horizons;
    std::size_t replicas = 1000;
    std::uint64_t seed = 0;
    bool zero_noise = false;
    ReferenceOptions reference;
};

/// L2 one-step errors of Euler, Taylor r = 2, 3 and NV against the reference
/// from z0 = eps i, normalized convention.
ExperimentReport scheme_comparison(const ComparisonOptions& options);

} // namespace sle
