#include "sle/iter_integrals.hpp"

#include "sle/errors.hpp"
#include "sle/format.hpp"
#include "sle/parallel.hpp"
#include "sle/random.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace sle {

double IteratedIntegralTable::entry(const MultiIndex& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) {
        throw ValidationError("word '" + word.str() + "' exceeds table length " + std::to_string(max_length_));
    }
    return it->second;
}

void IteratedIntegralTable::write_csv(std::ostream& out) const {
    out << "word,value\n";
    for (const auto& word : words_up_to(max_length_)) {
        out << word.str() << ',' << format_double(entries_.at(word)) << '\n';
    }
}

IteratedIntegralTable compute_table(const BrownianPath& path, double t, std::size_t r,
                                    IntegralConvention convention) {
    require(r <= kIntegralLevelCap, "level " + std::to_string(r) + " exceeds cap");
    const auto last = path.find(t);
    require(last.has_value(), "horizon " + format_double(t) + " is not a sample time of the path");
    require(*last >= 1, "need at least two samples in [0, t]");

    // level[k][w]: word w of length k, first letter in the most significant bit.
    std::vector<std::vector<double>> level(r + 1);
    for (std::size_t k = 0; k <= r; ++k) level[k].assign(std::size_t{1} << k, 0.0);
    level[0][0] = 1.0;

    // seg[l][w]: signature of one linear segment, dt^m dB^n / l!.
    std::vector<std::vector<double>> seg(r + 1);
    for (std::size_t l = 0; l <= r; ++l) seg[l].resize(std::size_t{1} << l);

    for (std::size_t i = 0; i < *last; ++i) {
        const double dt = path.time(i + 1) - path.time(i);
        const double db = path.value(i + 1) - path.value(i);
        seg[0][0] = 1.0;
        for (std::size_t l = 1; l <= r; ++l) {
            const double scale = 1.0 / static_cast<double>(l);
            for (std::size_t w = 0; w < seg[l].size(); ++w) {
                // Extend the length-(l-1) word by its last letter.
                seg[l][w] = seg[l - 1][w >> 1] * ((w & 1U) ? db : dt) * scale;
            }
        }
        // Chen: S_new[u v] = sum S_old[u] seg[v]; high levels first so lower ones are still old.
        for (std::size_t k = r; k >= 1; --k) {
            for (std::size_t w = 0; w < level[k].size(); ++w) {
                double acc = level[k][w];
                for (std::size_t j = 0; j < k; ++j) {
                    const std::size_t tail = k - j;
                    acc += level[j][w >> tail] * seg[tail][w & ((std::size_t{1} << tail) - 1)];
                }
                level[k][w] = acc;
            }
        }
    }

    std::map<MultiIndex, double> entries;
    for (std::size_t k = 0; k <= r; ++k) {
        auto words = words_of_length(k);
        for (std::size_t w = 0; w < words.size(); ++w) entries.emplace(std::move(words[w]), level[k][w]);
    }
    if (convention == IntegralConvention::Ito2 && r >= 2) entries[MultiIndex{1, 1}] -= 0.5 * t;

    return IteratedIntegralTable(t, r, *last, std::move(entries));
}

namespace {

L2Estimate summarize(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    std::vector<double> squares(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) squares[i] = values[i] * values[i];
    const double mean_sq = pairwise_sum(squares) / n;
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (squares[i] - mean_sq) * (squares[i] - mean_sq);
    const double var_sq = values.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
    const double norm = std::sqrt(mean_sq);
    const double se_mean_sq = std::sqrt(var_sq / n);
    return {norm, norm > 0.0 ? se_mean_sq / (2.0 * norm) : 0.0};
}

} // namespace

L2Estimate l2_norm_estimate(const MultiIndex& word, double t, std::size_t replicas, std::size_t resolution,
                            std::uint64_t seed) {
    require(replicas >= 2, "need at least two replicas");
    require(t > 0.0, "horizon must be positive");
    require(resolution >= 1, "resolution must be positive");
    std::vector<double> values(replicas);
    parallel_for(replicas, [&](std::size_t i) {
        const auto path = BrownianPath::sample_uniform(t, resolution, stream_seed(seed, i));
        values[i] = compute_table(path, path.horizon(), word.length()).entry(word);
    });
    return summarize(values);
}

L2ScalingEstimate l2_scaling_estimate(const MultiIndex& word, double t, std::size_t replicas,
                                      std::size_t resolution, std::uint64_t seed) {
    require(replicas >= 100, "need at least 100 replicas");
    require(t > 0.0 && t != 1.0, "horizon must be positive and different from 1");
    require(resolution >= 1, "resolution must be positive");

    std::vector<double> at_one(replicas);
    std::vector<double> at_t(replicas);
    parallel_for(replicas, [&](std::size_t i) {
        const auto unit = BrownianPath::sample_uniform(1.0, resolution, stream_seed(seed, i));
        const auto scaled = unit.rescale(1.0 / t);
        at_one[i] = compute_table(unit, unit.horizon(), word.length()).entry(word);
        at_t[i] = compute_table(scaled, scaled.horizon(), word.length()).entry(word);
    });

    L2ScalingEstimate out;
    out.at_one = summarize(at_one);
    out.at_t = summarize(at_t);
    out.ratio = out.at_t.norm / out.at_one.norm;
    out.exponent = std::log(out.ratio) / std::log(t);
    const double rel_t = out.at_t.std_error / out.at_t.norm;
    const double rel_one = out.at_one.std_error / out.at_one.norm;
    out.exponent_std_error = std::sqrt(rel_t * rel_t + rel_one * rel_one) / std::abs(std::log(t));
    return out;
}

} // namespace sle
