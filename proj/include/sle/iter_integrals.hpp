#pragma once

#include "sle/brownian.hpp"
#include "sle/vf_algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>

namespace sle {

enum class IntegralConvention {
    Stratonovich,
    /// Stratonovich except that the (1,1) entry carries the Ito correction -t/2.
    /// Longer words are left in Stratonovich form.
    Ito2,
};

/// Iterated integrals of the space-time path X = (t, B) over [0, horizon] for
/// every word up to a fixed length.
class IteratedIntegralTable {
public:
    IteratedIntegralTable(double horizon, std::size_t max_length, std::size_t resolution,
                          std::map<MultiIndex, double> entries)
        : horizon_(horizon), max_length_(max_length), resolution_(resolution), entries_(std::move(entries)) {}

    double horizon() const { return horizon_; }
    std::size_t max_length() const { return max_length_; }
    /// Number of path segments integrated over.
    std::size_t resolution() const { return resolution_; }
    const std::map<MultiIndex, double>& entries() const { return entries_; }

    /// Throws ValidationError for words longer than max_length().
    double entry(const MultiIndex& word) const;

    /// `word,value` rows.
    void write_csv(std::ostream& out) const;

private:
    double horizon_;
    std::size_t max_length_;
    std::size_t resolution_;
    std::map<MultiIndex, double> entries_;
};

inline constexpr std::size_t kIntegralLevelCap = 12;

/// Signature of the piecewise-linear interpolation of the samples in [0, t],
/// truncated at word length r. Exact for that lift (Chen's identity over the
/// linear segments). t must be a sample time of the path.
IteratedIntegralTable compute_table(const BrownianPath& path, double t, std::size_t r,
                                    IntegralConvention convention = IntegralConvention::Stratonovich);

struct L2Estimate {
    double norm = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of ||X^I_{0,t}||_{L2} over independent paths sampled
/// with `resolution` uniform steps on [0, t].
L2Estimate l2_norm_estimate(const MultiIndex& word, double t, std::size_t replicas, std::size_t resolution,
                            std::uint64_t seed);

struct L2ScalingEstimate {
    L2Estimate at_t;
    L2Estimate at_one;
    double ratio = 0.0;
    /// log(ratio) / log(t); compare against degree(word).
    double exponent = 0.0;
    double exponent_std_error = 0.0;
};

/// ||X^I_{0,t}|| against ||X^I_{0,1}|| on the same seed stream: each horizon-t
/// path is the Brownian rescaling of the matching horizon-1 path.
L2ScalingEstimate l2_scaling_estimate(const MultiIndex& word, double t, std::size_t replicas,
                                      std::size_t resolution, std::uint64_t seed);

} // namespace sle
