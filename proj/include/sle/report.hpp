#pragma once

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sle {

using Cell = std::variant<std::int64_t, double, std::string>;

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (log x, log y). nullopt with fewer than three
/// distinct abscissae or any nonpositive value.
std::optional<LogLogFit> fit_log_log(std::span<const double> x, std::span<const double> y);

struct ExperimentReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::optional<LogLogFit> fit;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> notes;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& column_name) const;
    const std::string& text(std::size_t row, const std::string& column_name) const;

    void write_csv(std::ostream& out) const;
    /// Config, seed, fit and notes; runtime only when given.
    nlohmann::json sidecar(std::optional<double> runtime_seconds = std::nullopt) const;
};

} // namespace sle
