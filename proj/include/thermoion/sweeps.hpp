#pragma once

// Figure data generation and single-point reports behind the command-line
// front end.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoion/thermometry.hpp"

namespace thermoion {

enum class Command { fig2, fig4, fig5, fig6, point };
enum class OutputFormat { csv, json };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

struct GridSpec {
    double min{0};
    double max{1};
    int steps{2};

    /// "min:max:steps"; requires steps >= 2 and min < max.
    static GridSpec parse(std::string_view text);
    void validate() const;
    /// steps equally spaced values, endpoints included.
    std::vector<double> values() const;
};

/// Unset optionals take the command's defaults.
struct SweepRequest {
    Command command{Command::point};
    double omega{4e6};
    OmegaConvention convention{OmegaConvention::angular};
    std::optional<double> t1;
    std::optional<double> t2;
    std::optional<double> theta;
    std::optional<std::vector<double>> r_values;
    int k_max{default_k_max};
    /// fig2: first grid is r, second theta. fig4: theta. fig5/fig6: T2.
    std::vector<GridSpec> grids;
    OutputFormat format{OutputFormat::csv};
    std::string output_path;
};

inline constexpr double fig2_temperature = 2.8e-5;
inline constexpr double default_t1 = 2.8e-5;
inline constexpr double default_t2 = 2.08e-5;
inline const std::vector<double> default_r_values{0.0, 0.25, 0.5};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Columns r, theta, separability_margin; r is the slow index.
Table run_fig2(const SweepRequest& req);
/// Columns theta, r, f11, f22, f12; one curve per r value.
Table run_fig4(const SweepRequest& req);
/// Columns t2, r, f11, f22, f12 at theta = pi/4 unless overridden.
Table run_fig5(const SweepRequest& req);
/// As run_fig5 at theta = pi/2.
Table run_fig6(const SweepRequest& req);

Table run_figure(const SweepRequest& req);

struct PointReport {
    TrapConfig config;
    double nbar1{0};
    double nbar2{0};
    ProbeCoefficients coefficients;
    std::vector<double> p1;  ///< P1(0..9)
    FisherMatrix fisher;
    CramerRaoBounds bounds;
    double separability_margin{0};
};

/// Uses t1, t2 defaults of fig4, theta = 0 and the first r value (default 0).
PointReport run_point(const SweepRequest& req);
/// csv renders (quantity, value) rows.
std::string render(const PointReport& report, OutputFormat format);

/// Full-precision (17 significant digit) rendering.
std::string format_number(double x);
std::string render(const Table& table, OutputFormat format);

/// Writes to `path`, or to stdout when it is empty or "-". Throws IoError.
void write_output(const std::string& text, const std::string& path);

} // namespace thermoion
