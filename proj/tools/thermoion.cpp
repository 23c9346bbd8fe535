// thermoion: figure data and single-point reports for two-ion phonon thermometry.
//
//   thermoion fig2|fig4|fig5|fig6|point [options]
//
// Exit status: 0 ok, 2 usage, 3 numeric or truncation failure, 4 I/O failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermoion/errors.hpp"
#include "thermoion/sweeps.hpp"

namespace {

enum ExitCode { ok = 0, usage = 2, numeric = 3, io = 4 };

int run(const thermoion::SweepRequest& req)
{
    using namespace thermoion;
    const std::string text = req.command == Command::point
                                 ? render(run_point(req), req.format)
                                 : render(run_figure(req), req.format);
    write_output(text, req.output_path);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace thermoion;

    CLI::App app{"Phonon-number thermometry of two coupled trapped ions"};
    app.set_config("--config", "", "INI or TOML file with option defaults; flags override it");

    std::string command;
    SweepRequest req;
    std::optional<double> t1;
    std::optional<double> t2;
    std::optional<double> theta;
    std::vector<double> r_values;
    std::vector<std::string> grids;
    std::string format = "csv";
    std::string convention = "angular";

    app.add_option("command", command, "fig2, fig4, fig5, fig6 or point")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig4", "fig5", "fig6", "point"}));
    app.add_option("--omega", req.omega, "trap frequency (rad/s, or Hz with ordinary convention)")
        ->check(CLI::PositiveNumber);
    app.add_option("--t1", t1, "temperature of ion 1 (K)");
    app.add_option("--t2", t2, "temperature of ion 2 (K)");
    app.add_option("--r", r_values, "squeezing parameters, comma separated")->delimiter(',');
    app.add_option("--theta", theta, "mixing angle g t (rad)");
    app.add_option("--kmax", req.k_max, "phonon-number cutoff")->check(CLI::PositiveNumber);
    app.add_option("--grid", grids,
                   "min:max:steps; fig2 takes r then theta, fig4 theta, fig5/fig6 T2");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", req.output_path, "output file (stdout if omitted)");
    app.add_option("--omega-convention", convention, "angular or ordinary")
        ->check(CLI::IsMember({"angular", "ordinary"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        req.command = *parse_command(command);
        req.t1 = t1;
        req.t2 = t2;
        req.theta = theta;
        if (!r_values.empty())
            req.r_values = r_values;
        for (const auto& g : grids)
            req.grids.push_back(GridSpec::parse(g));
        req.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        req.convention =
            convention == "ordinary" ? OmegaConvention::ordinary : OmegaConvention::angular;
        return run(req);
    } catch (const DomainError& e) {
        std::cerr << "thermoion: " << e.what() << "\n\n" << app.help();
        return usage;
    } catch (const IoError& e) {
        std::cerr << "thermoion: " << e.what() << '\n';
        return io;
    } catch (const TruncationError& e) {
        std::cerr << "thermoion: " << e.what() << '\n';
        return numeric;
    } catch (const std::exception& e) {
        std::cerr << "thermoion: " << e.what() << '\n';
        return numeric;
    }
}
