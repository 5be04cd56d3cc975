#pragma once

#include "sle/brownian.hpp"
#include "sle/halfplane.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sle {

/// One backward Loewner map over [t_i, t_{i+1}], h = t_{i+1} - t_i, driven by
/// the reversed increment dB = B(t_i) - B(t_{i+1}).
Complex slit_map(Complex z, double h, double dB, double kappa);

struct TraceOptions {
    double horizon = 1.0;
    double kappa = 8.0 / 3.0;
    std::size_t initial_steps = 64;
    double tolerance = 0.01;
    std::size_t max_depth = 40;
    bool apply_shift = false;
};

struct TraceStats {
    std::size_t refinement_depth_max = 0;
    /// Map applications in the final (read-only) evaluation pass.
    std::uint64_t map_evaluations = 0;
    /// Map applications spent while searching for the partition.
    std::uint64_t adaptive_evaluations = 0;
    std::size_t bisections = 0;
};

struct TraceResult {
    std::vector<double> times;
    std::vector<Complex> points;
    double tolerance = 0.0;
    double kappa = 0.0;
    bool shift_applied = false;
    TraceStats stats;

    std::size_t size() const { return points.size(); }
};

/// Discretised SLE trace: z_k = f_0 o f_1 o ... o f_{k-1}(0) on an adaptively
/// bisected partition of [0, horizon] until every |z_{k+1} - z_k| < tolerance.
///
/// The partition starts as the samples of `path` in [0, horizon], which must
/// contain the uniform grid of `initial_steps` intervals. Bisections are
/// written back into `path`, so a second call on the same path starts from
/// the partition found by the first.
///
/// Throws NumericalError if an interval needs more than max_depth bisections.
TraceResult build_trace(BrownianPath& path, const TraceOptions& options);

/// Convenience: fresh uniform path from `seed`.
TraceResult build_trace(std::uint64_t seed, const TraceOptions& options);

/// `t,re,im` rows, round-trip precision.
void write_trace_csv(const TraceResult& trace, std::ostream& out);

nlohmann::json trace_stats_json(const TraceResult& trace);

/// SVG 1.1 document: the trace as a polyline over the real axis, scaled to fit.
std::string render_svg(const TraceResult& trace, int width, int height);

} // namespace sle
