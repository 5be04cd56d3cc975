#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace sle {

/// Samples of a standard Brownian motion on a strictly increasing time grid
/// starting at (0, 0).
///
/// The grid can be refined by Brownian-bridge midpoint insertion. Every sample
/// carries a key, and the bridge variate for the midpoint of two neighbouring
/// samples is a function of their keys only. Refinement is therefore
/// reproducible regardless of the order in which intervals get bisected.
///
/// After freeze() the path is read-only and may be shared between threads.
class BrownianPath {
public:
    /// Grid t_k = k T / n with independent N(0, T/n) increments.
    static BrownianPath sample_uniform(double horizon, std::size_t steps, std::uint64_t seed);

    /// Wraps existing samples. times[0] must be 0 with value 0.
    static BrownianPath from_samples(std::vector<double> times, std::vector<double> values,
                                     std::uint64_t seed = 0);

    std::size_t size() const { return times_.size(); }
    double horizon() const { return times_.back(); }
    std::span<const double> times() const { return times_; }
    std::span<const double> values() const { return values_; }
    double time(std::size_t i) const { return times_[i]; }
    double value(std::size_t i) const { return values_[i]; }

    /// Index of the sample at exactly time t, if any.
    std::optional<std::size_t> find(double t) const;

    /// B(t) at a sampled time. Throws ValidationError otherwise.
    double value_at(double t) const;

    /// B(t) - B(s) for sampled s and t (either order).
    double increment(double s, double t) const;

    /// Bisects [t_i, t_{i+1}] with a bridge sample; returns the new index (i + 1).
    std::size_t insert_midpoint(std::size_t i);

    /// Bisects each of the first `intervals` intervals in one pass; same
    /// samples as calling insert_midpoint on each of them.
    void bisect_leading(std::size_t intervals);

    /// Path with times t / c and values B(t) / sqrt(c).
    BrownianPath rescale(double c) const;

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    /// Frozen copy.
    BrownianPath snapshot() const;

    /// `t,B` rows, round-trip precision.
    void write_csv(std::ostream& out) const;
    static BrownianPath read_csv(std::istream& in, std::uint64_t seed = 0);

private:
    BrownianPath() = default;

    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<std::uint64_t> keys_;
    bool frozen_ = false;
};

} // namespace sle
