#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <thermoion/sweeps.hpp>

using namespace thermoion;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
namespace fs = std::filesystem;

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(THERMOION_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "thermoion_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

SweepRequest request(Command c)
{
    SweepRequest req;
    req.command = c;
    return req;
}

std::size_t column(const Table& t, const std::string& name)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name)
            return i;
    FAIL("missing column " << name);
    return 0;
}

} // namespace

TEST_CASE("grid specification")
{
    const auto g = GridSpec::parse("0:1:5");
    CHECK(g.min == 0.0);
    CHECK(g.max == 1.0);
    CHECK(g.steps == 5);
    const auto v = g.values();
    REQUIRE(v.size() == 5);
    CHECK(v[1] == 0.25);
    CHECK(v.back() == 1.0);

    CHECK(GridSpec::parse("5e-6:4e-5:200").values().size() == 200);
    CHECK_THROWS_AS(GridSpec::parse("0:1"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("0:1:1"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("1:0:4"), DomainError);
    CHECK_THROWS_AS(GridSpec::parse("0:1:4x"), DomainError);
}

TEST_CASE("fig2 table")
{
    const Table t = run_fig2(request(Command::fig2));
    REQUIRE(t.columns == std::vector<std::string>{"r", "theta", "separability_margin"});
    REQUIRE(t.rows.size() == 3600);

    double best = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        if (row[0] == 0.0)
            CHECK(row[2] >= -1e-12);
        if (row[0] == 1.0)
            best = std::min(best, row[2]);
        // theta -> pi - theta within each r block of 60
        const auto& mirror = t.rows[i - i % 60 + (59 - i % 60)];
        CHECK(row[2] == Approx(mirror[2]).epsilon(1e-9).scale(1.0));
    }
    CHECK(best < 0);

    SweepRequest custom = request(Command::fig2);
    custom.grids = {GridSpec::parse("0:0.5:3"), GridSpec::parse("0:1:4")};
    CHECK(run_fig2(custom).rows.size() == 12);
}

TEST_CASE("fig4 table")
{
    const Table t = run_fig4(request(Command::fig4));
    REQUIRE(t.columns == std::vector<std::string>{"theta", "r", "f11", "f22", "f12"});
    REQUIRE(t.rows.size() == 1200);
    // r = 0 curve: f11 is largest at theta = 0 and pi.
    double best = -1;
    double best_theta = -1;
    for (const auto& row : t.rows)
        if (row[1] == 0.0 && row[2] > best) {
            best = row[2];
            best_theta = row[0];
        }
    const double step = 2 * pi / 399;
    const double to_multiple = std::abs(best_theta - pi * std::round(best_theta / pi));
    CHECK(to_multiple <= step);
}

TEST_CASE("fig5 and fig6 tables")
{
    const Table f5 = run_fig5(request(Command::fig5));
    REQUIRE(f5.columns == std::vector<std::string>{"t2", "r", "f11", "f22", "f12"});
    CHECK(f5.rows.size() == 600);
    CHECK(f5.rows.front()[0] == 0.5e-5);
    CHECK(f5.rows[199][0] == 4e-5);

    const Table f6 = run_fig6(request(Command::fig6));
    const auto i11 = column(f6, "f11");
    const auto i12 = column(f6, "f12");
    for (const auto& row : f6.rows) {
        CHECK(std::abs(row[i11]) < 1e-12);
        CHECK(std::abs(row[i12]) < 1e-12);
    }

    SweepRequest one = request(Command::fig5);
    one.r_values = std::vector<double>{0.1};
    one.theta = 0.3;
    const Table t = run_fig5(one);
    CHECK(t.rows.size() == 200);
    TrapConfig cfg;
    cfg.theta = 0.3;
    cfg.r = 0.1;
    cfg.t2 = t.rows[17][0];
    CHECK(t.rows[17][3] == fisher_matrix(cfg).f22);
}

TEST_CASE("point report")
{
    SweepRequest req = request(Command::point);
    req.theta = 0.0;
    CHECK(run_point(req).fisher.f22 == 0.0);

    req.theta = pi / 2;
    const auto p = run_point(req);
    for (int k = 0; k < 10; ++k)
        CHECK(p.p1[k] == Approx(std::pow(p.nbar2, k) / std::pow(1 + p.nbar2, k + 1)).epsilon(1e-12));
    CHECK(p.bounds.t2_standard == Approx(1 / p.fisher.f22).epsilon(1e-15));

    const std::string csv = render(p, OutputFormat::csv);
    CHECK(csv.rfind("quantity,value\n", 0) == 0);
    CHECK(csv.find("crb_printed_t2,") != std::string::npos);
    CHECK(csv.find("p1_9,") != std::string::npos);
    const std::string json = render(p, OutputFormat::json);
    CHECK(json.find("\"separability_margin\"") != std::string::npos);
    CHECK(json.find("\"p1\"") != std::string::npos);

    // f22 = 0 at theta = 0 makes the ion-2 bound unbounded.
    req.theta = 0.0;
    CHECK(render(run_point(req), OutputFormat::json).find("\"t2\": null") != std::string::npos);

    req.r_values = std::vector<double>{0.1, 0.2};
    CHECK_THROWS_AS(run_point(req), DomainError);
}

TEST_CASE("rendering")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    Table t;
    t.columns = {"x", "y"};
    t.rows = {{1.0 / 3, 2.0}};
    CHECK(render(t, OutputFormat::csv) == "x,y\n0.33333333333333331,2\n");
    const std::string json = render(t, OutputFormat::json);
    CHECK(json.find("\"columns\"") != std::string::npos);
    CHECK(json.find("0.3333333333333333") != std::string::npos);
}

TEST_CASE("write_output")
{
    const auto path = scratch("write.txt");
    write_output("abc\n", path.string());
    CHECK(slurp(path) == "abc\n");
    CHECK_THROWS_AS(write_output("x", "/nonexistent-dir/out.csv"), IoError);
}

TEST_CASE("command-line binary")
{
    SUBCASE("usage errors")
    {
        CHECK(run_cli("fig5 --bogus") == 2);
        CHECK(run_cli("fig9") == 2);
        CHECK(run_cli("") == 2);
        CHECK(run_cli("fig4 --grid 0:1") == 2);
        CHECK(run_cli("fig4 --format xml") == 2);
        CHECK(run_cli("point --t1 -1") == 2);
        CHECK(run_cli("--help") == 0);
    }
    SUBCASE("numeric and I/O errors")
    {
        CHECK(run_cli("point --kmax 2 --theta 1 --t2 4e-5") == 3);
        CHECK(run_cli("fig6 --out /nonexistent-dir/f6.csv") == 4);
    }
    SUBCASE("deterministic output")
    {
        const auto a = scratch("fig2_a.csv");
        const auto b = scratch("fig2_b.csv");
        REQUIRE(run_cli("fig2 --out " + a.string()) == 0);
        REQUIRE(run_cli("fig2 --out " + b.string()) == 0);
        const std::string text = slurp(a);
        CHECK(text == slurp(b));
        CHECK(text.rfind("r,theta,separability_margin\n", 0) == 0);

        const auto c = scratch("fig5.json");
        REQUIRE(run_cli("fig5 --r 0,0.3 --format json --out " + c.string()) == 0);
        CHECK(slurp(c).find("\"f22\"") != std::string::npos);
    }
    SUBCASE("config file with flag override")
    {
        const auto cfg = scratch("point.ini");
        std::ofstream(cfg) << "theta=1.5707963267948966\nt2=3e-5\n";
        const auto from_file = scratch("point_file.csv");
        const auto overridden = scratch("point_flag.csv");
        REQUIRE(run_cli("point --config " + cfg.string() + " --out " + from_file.string()) == 0);
        REQUIRE(run_cli("point --config " + cfg.string() + " --t2 2e-5 --out " +
                        overridden.string()) == 0);
        CHECK(slurp(from_file).find("t2,3.0000000000000001e-05") != std::string::npos);
        CHECK(slurp(from_file).find("theta,1.5707963267948966") != std::string::npos);
        CHECK(slurp(overridden).find("t2,2.0000000000000002e-05") != std::string::npos);
    }
}
