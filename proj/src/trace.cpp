#include "sle/trace.hpp"

#include "sle/errors.hpp"
#include "sle/format.hpp"
#include "sle/parallel.hpp"
#include "sle/schemes.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sle {

Complex slit_map(Complex z, double h, double dB, double kappa) { return nv_step(z, h, dB, kappa); }

namespace {

// f_0 o ... o f_{k-1}(0) over the first k intervals of the path.
Complex compose_to(const BrownianPath& path, std::size_t k, double kappa) {
    Complex w(0.0);
    for (std::size_t i = k; i-- > 0;) {
        w = slit_map(w, path.time(i + 1) - path.time(i), path.value(i) - path.value(i + 1), kappa);
    }
    return w;
}

void check_initial_grid(const BrownianPath& path, const TraceOptions& options) {
    const double step = options.horizon / static_cast<double>(options.initial_steps);
    const double slack = 1e-12 * options.horizon;
    for (std::size_t k = 1; k < options.initial_steps; ++k) {
        const double t = static_cast<double>(k) * step;
        const auto times = path.times();
        auto it = std::lower_bound(times.begin(), times.end(), t - slack);
        if (it == times.end() || std::abs(*it - t) > slack) {
            throw ValidationError("path is not sampled on the initial grid (missing t = " + format_double(t) + ")");
        }
    }
}

} // namespace

TraceResult build_trace(BrownianPath& path, const TraceOptions& options) {
    require(options.kappa >= 0.0 && std::isfinite(options.kappa), "kappa must be nonnegative");
    require(options.initial_steps >= 1, "initial_steps must be positive");
    require(options.tolerance > 0.0, "tolerance must be positive");
    require(path.horizon() >= options.horizon, "path horizon " + format_double(path.horizon()) +
                                                   " is shorter than " + format_double(options.horizon));
    const auto end = path.find(options.horizon);
    require(end.has_value(), "horizon " + format_double(options.horizon) + " is not a sample of the path");
    check_initial_grid(path, options);

    TraceResult result;
    result.tolerance = options.tolerance;
    result.kappa = options.kappa;
    result.shift_applied = options.apply_shift;

    // Left-to-right sweep. Bisecting interval k leaves z_0..z_k untouched, so
    // only the candidate z_{k+1} is recomputed.
    std::size_t last = *end;
    std::vector<std::size_t> depth(last, 0);
    Complex current(0.0);
    for (std::size_t k = 0; k < last;) {
        const Complex candidate = compose_to(path, k + 1, options.kappa);
        result.stats.adaptive_evaluations += k + 1;
        if (std::abs(candidate - current) < options.tolerance) {
            current = candidate;
            ++k;
            continue;
        }
        if (depth[k] >= options.max_depth) {
            throw NumericalError("refinement depth " + std::to_string(options.max_depth) +
                                 " exceeded on interval [" + format_double(path.time(k)) + ", " +
                                 format_double(path.time(k + 1)) + "]");
        }
        path.insert_midpoint(k);
        ++depth[k];
        depth.insert(depth.begin() + static_cast<std::ptrdiff_t>(k) + 1, depth[k]);
        result.stats.refinement_depth_max = std::max(result.stats.refinement_depth_max, depth[k]);
        ++result.stats.bisections;
        ++last;
    }

    // Partition fixed: every point is an independent composition.
    const BrownianPath frozen = path.snapshot();
    result.times.assign(frozen.times().begin(), frozen.times().begin() + static_cast<std::ptrdiff_t>(last) + 1);
    result.points.resize(last + 1);
    parallel_for(last + 1, [&](std::size_t k) { result.points[k] = compose_to(frozen, k, options.kappa); });
    result.stats.map_evaluations = static_cast<std::uint64_t>(last) * (last + 1) / 2;

    if (options.apply_shift) {
        const double shift = std::sqrt(options.kappa) * frozen.value(last);
        for (auto& z : result.points) z += shift;
    }
    return result;
}

TraceResult build_trace(std::uint64_t seed, const TraceOptions& options) {
    auto path = BrownianPath::sample_uniform(options.horizon, options.initial_steps, seed);
    return build_trace(path, options);
}

void write_trace_csv(const TraceResult& trace, std::ostream& out) {
    out << "t,re,im\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << format_double(trace.times[k]) << ',' << format_double(trace.points[k].real()) << ','
            << format_double(trace.points[k].imag()) << '\n';
    }
}

nlohmann::json trace_stats_json(const TraceResult& trace) {
    return {
        {"points", trace.size()},
        {"kappa", trace.kappa},
        {"tolerance", trace.tolerance},
        {"shift_applied", trace.shift_applied},
        {"refinement_depth_max", trace.stats.refinement_depth_max},
        {"bisections", trace.stats.bisections},
        {"map_evaluations", trace.stats.map_evaluations},
        {"adaptive_evaluations", trace.stats.adaptive_evaluations},
    };
}

std::string render_svg(const TraceResult& trace, int width, int height) {
    require(!trace.points.empty(), "cannot render an empty trace");
    require(width > 0 && height > 0, "image size must be positive");

    double x_min = 0.0, x_max = 0.0, y_max = 0.0;
    for (const auto& z : trace.points) {
        x_min = std::min(x_min, z.real());
        x_max = std::max(x_max, z.real());
        y_max = std::max(y_max, z.imag());
    }
    // Uniform scale, with the real axis at the bottom and the trace centred horizontally.
    const double margin = 10.0;
    const double span_x = std::max(x_max - x_min, 1e-12);
    const double span_y = std::max(y_max, 1e-12);
    const double scale = std::min((width - 2 * margin) / span_x, (height - 2 * margin) / span_y);
    const double x_mid = 0.5 * (x_min + x_max);
    const double baseline = height - margin;

    auto coord = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"0\" y1=\"" << coord(baseline) << "\" x2=\"" << width << "\" y2=\"" << coord(baseline)
        << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n"
        << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
    for (std::size_t k = 0; k < trace.points.size(); ++k) {
        const auto& z = trace.points[k];
        if (k) svg << ' ';
        svg << coord(0.5 * width + (z.real() - x_mid) * scale) << ',' << coord(baseline - z.imag() * scale);
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

} // namespace sle
