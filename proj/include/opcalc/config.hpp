#pragma once

#include "opcalc/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opcalc {

/// Everything a batch run needs. ν is never stored; it follows from p.
struct RunConfig {
    ProblemParams params{};

    int n_theta = 32;
    int n_t = 64;
    double T = 16.0;

    std::optional<double> nu_prime;
    int n_nodes = 200;
    double s_max = 2000.0;

    double root_tol = 1e-12;
    double fp_tol = 1e-8;
    double quad_tol = 1e-8;
    double decay_tol = 1e-10;

    std::uint64_t seed = 20240601;
    std::string output_dir = "out";

    [[nodiscard]] TemporalGrid temporal_grid() const { return {T, n_t}; }
    [[nodiscard]] AngularGrid angular_grid() const { return {params.omega, n_theta}; }

    /// Throws ConfigError (line 0) on out-of-range values.
    void validate() const;

    /// Resolved settings as ("section.key", value) in a fixed order, for echoing into outputs.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Bad configuration text or value. line() is 1-based, or 0 when the problem is not tied to a line.
class ConfigError : public DomainError {
public:
    ConfigError(int line, const std::string& what);
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

/// Line-oriented grammar:
///
///     # comment            (also ; comment)
///     [section]
///     key = value
///
/// Sections are problem, grid, contour, tolerances and run. Blank config means all defaults.
/// Angles accept `pi` forms: `pi`, `pi/2`, `3*pi/4`, `0.5*pi`.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies one `section.key=value` override on top of a parsed config.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace opcalc
