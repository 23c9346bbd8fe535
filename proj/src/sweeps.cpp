#include "thermoion/sweeps.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "thermoion/errors.hpp"
#include "thermoion/gaussian.hpp"
#include "thermoion/separability.hpp"

namespace thermoion {

namespace {

constexpr double pi = std::numbers::pi;

const GridSpec fig2_r_grid{0.0, 1.0, 60};
const GridSpec fig2_theta_grid{0.0, pi, 60};
const GridSpec fig4_theta_grid{0.0, 2 * pi, 400};
const GridSpec t2_grid{0.5e-5, 4e-5, 200};

constexpr int point_probabilities = 10;

GridSpec grid_or(const SweepRequest& req, std::size_t i, const GridSpec& fallback)
{
    if (i < req.grids.size()) {
        req.grids[i].validate();
        return req.grids[i];
    }
    return fallback;
}

TrapConfig base_config(const SweepRequest& req, double theta_default)
{
    TrapConfig cfg;
    cfg.omega = req.omega;
    cfg.convention = req.convention;
    cfg.t1 = req.t1.value_or(default_t1);
    cfg.t2 = req.t2.value_or(default_t2);
    cfg.theta = req.theta.value_or(theta_default);
    cfg.k_max = req.k_max;
    cfg.validate();
    return cfg;
}

const std::vector<double>& r_values(const SweepRequest& req)
{
    const auto& rs = req.r_values ? *req.r_values : default_r_values;
    if (rs.empty())
        throw DomainError("r: at least one value is required");
    return rs;
}

Table fisher_table(const SweepRequest& req, const char* axis_name, SweepAxis axis,
                   const GridSpec& grid, double theta_default)
{
    TrapConfig cfg = base_config(req, theta_default);
    const std::vector<double> xs = grid.values();
    Table out;
    out.columns = {axis_name, "r", "f11", "f22", "f12"};
    for (double r : r_values(req)) {
        cfg.r = r;
        const std::vector<FisherMatrix> fs = fisher_sweep(cfg, axis, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            out.rows.push_back({xs[i], r, fs[i].f11, fs[i].f22, fs[i].f12});
    }
    return out;
}

double evolved_separability_margin(double nbar1, double nbar2, double r, double theta)
{
    const auto input = product_state(thermal_cov(nbar1),
                                     squeezed_thermal_cov(SqueezedThermalSpecd{nbar2, r}));
    return separability_margin(evolve_beam_splitter(input, BeamSplitterParamsd::coupling(theta)));
}

nlohmann::ordered_json to_json_number(double x)
{
    // JSON has no infinities; unbounded quantities are emitted as null.
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

} // namespace

std::optional<Command> parse_command(std::string_view name)
{
    if (name == "fig2")
        return Command::fig2;
    if (name == "fig4")
        return Command::fig4;
    if (name == "fig5")
        return Command::fig5;
    if (name == "fig6")
        return Command::fig6;
    if (name == "point")
        return Command::point;
    return std::nullopt;
}

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::fig2: return "fig2";
    case Command::fig4: return "fig4";
    case Command::fig5: return "fig5";
    case Command::fig6: return "fig6";
    case Command::point: return "point";
    }
    return "point";
}

GridSpec GridSpec::parse(std::string_view text)
{
    const std::string s(text);
    GridSpec g;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &g.min, &g.max, &g.steps, &tail) != 3)
        throw DomainError("grid: expected min:max:steps, got '" + s + "'");
    g.validate();
    return g;
}

void GridSpec::validate() const
{
    if (!(std::isfinite(min) && std::isfinite(max) && min < max))
        throw DomainError("grid: min must be below max");
    if (steps < 2)
        throw DomainError("grid: steps must be >= 2");
}

std::vector<double> GridSpec::values() const
{
    validate();
    std::vector<double> out(static_cast<std::size_t>(steps));
    const double h = (max - min) / (steps - 1);
    for (int i = 0; i < steps; ++i)
        out[static_cast<std::size_t>(i)] = min + i * h;
    out.back() = max;
    return out;
}

Table run_fig2(const SweepRequest& req)
{
    const double t1 = req.t1.value_or(fig2_temperature);
    const double t2 = req.t2.value_or(fig2_temperature);
    TrapConfig cfg;
    cfg.omega = req.omega;
    cfg.convention = req.convention;
    cfg.t1 = t1;
    cfg.t2 = t2;
    cfg.validate();
    const double w = cfg.angular_frequency();
    const double nbar1 = occupation_from_temperature(t1, w);
    const double nbar2 = occupation_from_temperature(t2, w);

    const std::vector<double> rs = grid_or(req, 0, fig2_r_grid).values();
    const std::vector<double> thetas = grid_or(req, 1, fig2_theta_grid).values();
    Table out;
    out.columns = {"r", "theta", "separability_margin"};
    out.rows.reserve(rs.size() * thetas.size());
    for (double r : rs)
        for (double theta : thetas)
            out.rows.push_back({r, theta, evolved_separability_margin(nbar1, nbar2, r, theta)});
    return out;
}

Table run_fig4(const SweepRequest& req)
{
    return fisher_table(req, "theta", SweepAxis::theta, grid_or(req, 0, fig4_theta_grid), 0.0);
}

Table run_fig5(const SweepRequest& req)
{
    return fisher_table(req, "t2", SweepAxis::t2, grid_or(req, 0, t2_grid), pi / 4);
}

Table run_fig6(const SweepRequest& req)
{
    return fisher_table(req, "t2", SweepAxis::t2, grid_or(req, 0, t2_grid), pi / 2);
}

Table run_figure(const SweepRequest& req)
{
    switch (req.command) {
    case Command::fig2: return run_fig2(req);
    case Command::fig4: return run_fig4(req);
    case Command::fig5: return run_fig5(req);
    case Command::fig6: return run_fig6(req);
    case Command::point: break;
    }
    throw DomainError("run_figure: point is not a figure command");
}

PointReport run_point(const SweepRequest& req)
{
    const auto& rs = req.r_values ? *req.r_values : std::vector<double>{0.0};
    if (rs.size() != 1)
        throw DomainError("r: point takes exactly one value");
    PointReport out;
    out.config = base_config(req, 0.0);
    out.config.r = rs.front();
    out.config.validate();

    const double w = out.config.angular_frequency();
    out.nbar1 = occupation_from_temperature(out.config.t1, w);
    out.nbar2 = occupation_from_temperature(out.config.t2, w);
    out.coefficients = probe_coefficients(out.config);
    out.p1.resize(point_probabilities);
    probe_probabilities<double>(out.coefficients.a, out.coefficients.b, out.p1);
    out.fisher = fisher_matrix(out.config);
    out.bounds = cramer_rao(out.fisher);
    out.separability_margin =
        evolved_separability_margin(out.nbar1, out.nbar2, out.config.r, out.config.theta);
    return out;
}

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render(const Table& table, OutputFormat format)
{
    if (format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["columns"] = table.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
                obj[table.columns[i]] = to_json_number(row[i]);
            rows.push_back(std::move(obj));
        }
        j["rows"] = std::move(rows);
        return j.dump(1) + "\n";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string render(const PointReport& p, OutputFormat format)
{
    if (format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["omega"] = p.config.angular_frequency();
        j["t1"] = p.config.t1;
        j["t2"] = p.config.t2;
        j["r"] = p.config.r;
        j["theta"] = p.config.theta;
        j["k_max"] = p.config.k_max;
        j["nbar1"] = p.nbar1;
        j["nbar2"] = p.nbar2;
        j["a"] = p.coefficients.a;
        j["b"] = p.coefficients.b;
        j["p1"] = p.p1;
        j["fisher"] = {{"f11", p.fisher.f11}, {"f22", p.fisher.f22}, {"f12", p.fisher.f12}};
        j["cramer_rao"] = {
            {"printed", {{"t1", to_json_number(p.bounds.t1_printed)},
                         {"t2", to_json_number(p.bounds.t2_printed)}}},
            {"standard", {{"t1", to_json_number(p.bounds.t1_standard)},
                          {"t2", to_json_number(p.bounds.t2_standard)}}},
        };
        j["separability_margin"] = p.separability_margin;
        return j.dump(1) + "\n";
    }
    std::vector<std::pair<std::string, double>> rows{
        {"omega", p.config.angular_frequency()},
        {"t1", p.config.t1},
        {"t2", p.config.t2},
        {"r", p.config.r},
        {"theta", p.config.theta},
        {"k_max", static_cast<double>(p.config.k_max)},
        {"nbar1", p.nbar1},
        {"nbar2", p.nbar2},
        {"a", p.coefficients.a},
        {"b", p.coefficients.b},
    };
    for (std::size_t k = 0; k < p.p1.size(); ++k)
        rows.emplace_back("p1_" + std::to_string(k), p.p1[k]);
    rows.insert(rows.end(), {
                                {"f11", p.fisher.f11},
                                {"f22", p.fisher.f22},
                                {"f12", p.fisher.f12},
                                {"crb_printed_t1", p.bounds.t1_printed},
                                {"crb_printed_t2", p.bounds.t2_printed},
                                {"crb_standard_t1", p.bounds.t1_standard},
                                {"crb_standard_t2", p.bounds.t2_standard},
                                {"separability_margin", p.separability_margin},
                            });
    std::ostringstream os;
    os << "quantity,value\n";
    for (const auto& [name, value] : rows)
        os << name << ',' << format_number(value) << '\n';
    return os.str();
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        if (!std::cout)
            throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    file << text;
    file.close();
    if (!file)
        throw IoError("failed writing '" + path + "'");
}

} // namespace thermoion
