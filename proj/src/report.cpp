#include "sle/report.hpp"

#include "sle/errors.hpp"
#include "sle/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace sle {

std::optional<LogLogFit> fit_log_log(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "fit needs matching abscissae and ordinates");
    if (std::set<double>(x.begin(), x.end()).size() < 3) return std::nullopt;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        const double dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::size_t ExperimentReport::column(const std::string& column_name) const {
    auto it = std::find(columns.begin(), columns.end(), column_name);
    require(it != columns.end(), "report '" + name + "' has no column '" + column_name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double ExperimentReport::number(std::size_t row, const std::string& column_name) const {
    const Cell& cell = rows.at(row).at(column(column_name));
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
    throw ValidationError("column '" + column_name + "' is not numeric");
}

const std::string& ExperimentReport::text(std::size_t row, const std::string& column_name) const {
    return std::get<std::string>(rows.at(row).at(column(column_name)));
}

void ExperimentReport::write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            std::visit(
                [&out](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out << format_double(v);
                    else out << v;
                },
                row[c]);
        }
        out << '\n';
    }
}

nlohmann::json ExperimentReport::sidecar(std::optional<double> runtime_seconds) const {
    nlohmann::json j;
    j["name"] = name;
    j["config"] = config;
    j["seed"] = seed;
    if (fit) {
        j["fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r_squared", fit->r_squared}};
    } else {
        j["fit"] = nullptr;
    }
    j["notes"] = notes;
    if (runtime_seconds) j["runtime_seconds"] = *runtime_seconds;
    return j;
}

} // namespace sle
