#include "sle/brownian.hpp"

#include "sle/errors.hpp"
#include "sle/format.hpp"
#include "sle/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace sle {

double standard_normal(std::uint64_t key) {
    CounterRng rng(key);
    std::normal_distribution<double> normal(0.0, 1.0);
    return normal(rng);
}

namespace {

double bridge_midpoint(double left, double right, double h, std::uint64_t key) {
    return 0.5 * (left + right) + std::sqrt(0.25 * h) * standard_normal(key);
}

} // namespace

BrownianPath BrownianPath::sample_uniform(double horizon, std::size_t steps, std::uint64_t seed) {
    require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
    require(steps > 0, "need at least one step");

    BrownianPath path;
    path.times_.resize(steps + 1);
    path.values_.resize(steps + 1);
    path.keys_.resize(steps + 1);

    const double dt = horizon / static_cast<double>(steps);
    const double scale = std::sqrt(dt);
    const std::uint64_t base = mix64(seed);
    double b = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        path.keys_[k] = combine_keys(base, k);
        if (k > 0) b += scale * standard_normal(combine_keys(path.keys_[k - 1], ~path.keys_[k]));
        path.times_[k] = k == steps ? horizon : static_cast<double>(k) * dt;
        path.values_[k] = b;
    }
    return path;
}

BrownianPath BrownianPath::from_samples(std::vector<double> times, std::vector<double> values,
                                        std::uint64_t seed) {
    require(!times.empty() && times.size() == values.size(), "times and values must match");
    require(times.front() == 0.0 && values.front() == 0.0, "path must start at (0, 0)");
    for (std::size_t i = 1; i < times.size(); ++i) {
        require(times[i] > times[i - 1], "times must be strictly increasing");
    }
    BrownianPath path;
    path.times_ = std::move(times);
    path.values_ = std::move(values);
    path.keys_.resize(path.times_.size());
    const std::uint64_t base = mix64(seed);
    for (std::size_t k = 0; k < path.keys_.size(); ++k) path.keys_[k] = combine_keys(base, k);
    return path;
}

std::optional<std::size_t> BrownianPath::find(double t) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - times_.begin());
}

double BrownianPath::value_at(double t) const {
    auto i = find(t);
    if (!i) throw ValidationError("time " + format_double(t) + " is not a sample of the path");
    return values_[*i];
}

double BrownianPath::increment(double s, double t) const { return value_at(t) - value_at(s); }

std::size_t BrownianPath::insert_midpoint(std::size_t i) {
    if (frozen_) throw std::logic_error("cannot refine a frozen Brownian path");
    require(i + 1 < times_.size(), "interval index out of range");

    const double t0 = times_[i];
    const double t1 = times_[i + 1];
    const double mid = 0.5 * (t0 + t1);
    if (!(mid > t0 && mid < t1)) throw NumericalError("interval too small to bisect at " + format_double(t0));

    const std::uint64_t key = combine_keys(keys_[i], keys_[i + 1]);
    const double value = bridge_midpoint(values_[i], values_[i + 1], t1 - t0, key);

    const auto at = static_cast<std::ptrdiff_t>(i + 1);
    times_.insert(times_.begin() + at, mid);
    values_.insert(values_.begin() + at, value);
    keys_.insert(keys_.begin() + at, key);
    return i + 1;
}

void BrownianPath::bisect_leading(std::size_t intervals) {
    if (frozen_) throw std::logic_error("cannot refine a frozen Brownian path");
    require(intervals < times_.size(), "interval count out of range");

    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::uint64_t> keys;
    const std::size_t total = times_.size() + intervals;
    times.reserve(total);
    values.reserve(total);
    keys.reserve(total);
    for (std::size_t i = 0; i < times_.size(); ++i) {
        times.push_back(times_[i]);
        values.push_back(values_[i]);
        keys.push_back(keys_[i]);
        if (i < intervals) {
            const double mid = 0.5 * (times_[i] + times_[i + 1]);
            if (!(mid > times_[i] && mid < times_[i + 1])) {
                throw NumericalError("interval too small to bisect at " + format_double(times_[i]));
            }
            const std::uint64_t key = combine_keys(keys_[i], keys_[i + 1]);
            times.push_back(mid);
            values.push_back(bridge_midpoint(values_[i], values_[i + 1], times_[i + 1] - times_[i], key));
            keys.push_back(key);
        }
    }
    times_ = std::move(times);
    values_ = std::move(values);
    keys_ = std::move(keys);
}

BrownianPath BrownianPath::rescale(double c) const {
    require(c > 0.0 && std::isfinite(c), "rescale factor must be positive");
    BrownianPath out;
    out.times_.resize(size());
    out.values_.resize(size());
    out.keys_ = keys_;
    const double root = std::sqrt(c);
    for (std::size_t k = 0; k < size(); ++k) {
        out.times_[k] = times_[k] / c;
        out.values_[k] = values_[k] / root;
    }
    return out;
}

BrownianPath BrownianPath::snapshot() const {
    BrownianPath copy = *this;
    copy.freeze();
    return copy;
}

void BrownianPath::write_csv(std::ostream& out) const {
    out << "t,B\n";
    for (std::size_t k = 0; k < size(); ++k) {
        out << format_double(times_[k]) << ',' << format_double(values_[k]) << '\n';
    }
}

BrownianPath BrownianPath::read_csv(std::istream& in, std::uint64_t seed) {
    std::string line;
    if (!std::getline(in, line) || line != "t,B") throw ValidationError("expected header `t,B`");
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("malformed row: " + line);
        times.push_back(parse_double(line.substr(0, comma)));
        values.push_back(parse_double(line.substr(comma + 1)));
    }
    return from_samples(std::move(times), std::move(values), seed);
}

} // namespace sle
