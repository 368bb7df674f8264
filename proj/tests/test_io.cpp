#include "sqt/figures.hpp"
#include "sqt/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace sqt;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<io::Scenario> parse(const std::string& text)
{
    std::istringstream in(text);
    return io::parse_scenarios(in);
}

} // namespace

TEST_CASE("scenario parsing", "[io]")
{
    const auto s = parse("[a]\nmode = EIT\nC = 100\nrho = 0.5\nsigma = 0.001\ngamma_E = 15\nr = 0.5\n"
                         "[b]\nmode = general\nC = 10\nrho = 2\nsigma = 0.01\nr = 0.8\ndelta_bar = 3\n"
                         "sweep_axis = gamma_E\nsweep_start = 0.01\nsweep_stop = 100\nsweep_count = 5\n"
                         "sweep_spacing = log\ntrack_optimal_conditions = true\nn_atoms = 1000\n");
    REQUIRE(s.size() == 2);
    CHECK(s[0].name == "a");
    CHECK(s[0].mode == io::Mode::EIT);
    CHECK(s[0].params.C == 100.0);
    CHECK(s[0].params.gamma_E == 15.0);
    CHECK_FALSE(s[0].sweep.has_value());
    CHECK(s[0].n_atoms == kDefaultAtomNumber);

    CHECK(s[1].mode == io::Mode::General);
    CHECK(s[1].track_optimal_conditions);
    CHECK(s[1].n_atoms == 1000.0);
    REQUIRE(s[1].sweep.has_value());
    const auto g = s[1].sweep->grid();
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 100.0);
    CHECK_THAT(g[2], WithinRel(1.0, 1e-14));
    CHECK_THAT(s[1].system().n_atoms, WithinRel(1000.0, 0.0));
}

TEST_CASE("scenario errors", "[io]")
{
    CHECK_THROWS_WITH(parse("[a]\nC = 1\nkappa = 3\n"), ContainsSubstring("kappa"));
    CHECK_THROWS_WITH(parse("[a]\nC = 1\nsweep_axis = kappa\nsweep_start = 1\nsweep_stop = 2\nsweep_count = 3\n"),
                      ContainsSubstring("kappa"));
    CHECK_THROWS_WITH(parse("[a]\nC = abc\n"), ContainsSubstring("C"));
    CHECK_THROWS_WITH(parse("[a]\nC = -1\n"), ContainsSubstring("C"));
    CHECK_THROWS_WITH(parse("[a]\nmode = EIT\nC = 1\ndelta_bar = 2\n"), ContainsSubstring("EIT"));
    CHECK_THROWS_WITH(parse("[a]\nmode = Raman\nC = 1\n"), ContainsSubstring("Raman"));
    CHECK_THROWS_AS(parse("[a]\nmode = fancy\n"), ValidationError);
    CHECK_THROWS_AS(parse("[a]\nC = 1\nsweep_axis = r\nsweep_start = 0\nsweep_stop = 1\nsweep_count = 1\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse("[a]\nC = 1\nsweep_axis = r\nsweep_start = 0\nsweep_stop = 1\nsweep_count = 3\n"
                          "sweep_spacing = log\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse("[a]\nC = 1\ntrack_optimal_conditions = maybe\n"), ValidationError);
    CHECK_THROWS_AS(parse("C = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse("[a\nC = 1\n"), ValidationError);
}

TEST_CASE("bundled sample scenarios parse", "[io]")
{
    std::ifstream in(SQT_SOURCE_DIR "/samples/scenarios.ini");
    REQUIRE(in);
    const auto s = io::parse_scenarios(in);
    CHECK(s.size() >= 3);
}

TEST_CASE("number formatting", "[io]")
{
    CHECK(io::fmt(0.1) == "0.1");
    CHECK(io::fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(io::fmt(1e-20) == "1e-20");
    CHECK(io::fmt(std::nan("")) == "nan");
    CHECK(io::fmt(std::optional<double>{}) == "nan");
    CHECK(io::fmt(200.0) == "200");

    std::ostringstream os;
    io::CsvWriter w(os);
    w.comment("hello");
    const std::vector<std::string> h{"x", "y", "z"};
    w.header(h);
    w.row(1.5, std::string("ok"), std::optional<double>{});
    CHECK(os.str() == "# hello\nx,y,z\n1.5,ok,nan\n");
}

TEST_CASE("figure output is deterministic", "[io][figures]")
{
    figures::FigureOptions one, many;
    many.jobs = 4;
    std::ostringstream a, b;
    figures::run_figure("fig3", a, one);
    figures::run_figure("fig3", b, many);
    CHECK(a.str() == b.str());

    std::istringstream lines(a.str());
    std::string line;
    std::size_t comments = 0, rows = 0;
    bool header = false;
    while (std::getline(lines, line)) {
        if (line.starts_with("#")) {
            CHECK_FALSE(header);
            ++comments;
        } else if (!header) {
            header = true;
            CHECK(line == "gamma_E,eta_exact,eta_lf,eta_lossless,eta_numeric,regime,status");
        } else {
            ++rows;
        }
    }
    CHECK(comments >= 2);
    CHECK(rows == 80);
    CHECK_THAT(a.str(), ContainsSubstring(std::string(kVersion)));

    std::ostringstream c;
    CHECK_THROWS_AS(figures::run_figure("fig9", c), ValidationError);
}

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
        if (line.starts_with("#"))
            continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("figure contents", "[io][figures]")
{
    std::ostringstream f3;
    figures::run_figure("fig3", f3);
    const auto r3 = csv_rows(f3.str());
    double best = 0.0, near15 = 0.0, dist = 1e300;
    for (const auto& r : r3) {
        const double g = std::stod(r[0]), e = std::stod(r[1]);
        best = std::max(best, e);
        if (std::abs(std::log(g / 15.0)) < dist) {
            dist = std::abs(std::log(g / 15.0));
            near15 = e;
        }
        CHECK(r[6] == "ok");
        CHECK_THAT(std::stod(r[4]), WithinRel(e, 1e-9));
    }
    CHECK_THAT(near15, WithinAbs(0.970, 1e-3));
    CHECK(best - near15 < 1e-3);

    std::ostringstream f2;
    figures::run_figure("fig2", f2);
    const auto r2 = csv_rows(f2.str());
    REQUIRE(r2.size() == 122);
    const auto& first = r2.front();
    const auto& last = r2[60];
    CHECK(first[0] == "0");
    CHECK(last[0] == "1000");
    CHECK(first[1] == "0");
    CHECK(last[1] == "0");
    for (const auto& r : {first, last}) {
        CHECK_THAT(std::stod(r[3]), WithinAbs(200.0 / 201.0, 1e-3));
        CHECK(r[6] == "ok");
    }
    // resonant point includes the cavity bandwidth correction
    CHECK_THAT(std::stod(first[2]), WithinRel(analytic::eta_eit_lossless(100.0, 15.0, 0.5), 1e-9));
    CHECK_THAT(std::stod(last[2]), WithinAbs(200.0 / 201.0, 1e-3));

    std::ostringstream f4;
    figures::run_figure("fig4", f4);
    const auto r4 = csv_rows(f4.str());
    REQUIRE(r4.size() == 242);
    CHECK(r4[60][0] == "0");
    CHECK(r4[60][1] == "EIT");
    CHECK(r4[181][1] == "Raman");
    for (std::size_t i = 0; i < 121; ++i) {
        CHECK(r4[i][0] == r4[i + 121][0]);
        CHECK_THAT(std::stod(r4[i][2]), WithinAbs(std::stod(r4[120 - i][2]), 1e-6));
        CHECK_THAT(std::stod(r4[121 + i][2]), WithinAbs(std::stod(r4[241 - i][2]), 1e-6));
    }
}

TEST_CASE("readout figures", "[io][figures]")
{
    for (const char* id : {"readout_flat", "readout_matched"}) {
        std::ostringstream os;
        figures::run_figure(id, os);
        CHECK(os.str().find('\n') != std::string::npos);
        CHECK(os.str().find("nan") == std::string::npos);
    }
}

TEST_CASE("comparison records", "[io][compare]")
{
    figures::ComparePoint p;
    p.mode = io::Mode::EIT;
    p.params = {100.0, 0.5, 1e-3, 15.0, 0.0, 0.0, 0.0, 0.5};
    const auto j = figures::compare_point(p);
    for (const char* k : {"point", "eta_integration", "eta_lyapunov_like", "eta_closed", "min_variance_integration",
                          "min_variance_lyapunov", "eta_abs_dev", "numeric_rel_dev", "closed_rel_dev", "max_rel_dev", "pass"})
        CHECK(j.contains(k));
    CHECK(j["pass"].get<bool>());
    CHECK_THAT(j["eta_closed"].get<double>(), WithinAbs(0.97011, 1e-5));

    p.mode = io::Mode::General;
    p.params.gamma_E = 0.0;
    p.params.sigma = 0.0; // marginal spin
    const auto bad = figures::compare_point(p);
    CHECK_FALSE(bad["pass"].get<bool>());
    CHECK(bad.contains("error"));

    const auto pts = figures::random_points(7, 4);
    const auto again = figures::random_points(7, 4);
    REQUIRE(pts.size() == 4);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(pts[i].params.C == again[i].params.C);
    const auto report = figures::compare_report(pts, 2);
    CHECK(report["points"].size() == 4);
    CHECK(report["pass"].get<bool>());
}

TEST_CASE("scenario expansion", "[io][compare]")
{
    const auto s = parse("[t]\nC = 100\nrho = 0.5\nsigma = 0.001\ngamma_E = 15\nr = 0.5\ndelta_bar = 10\n"
                         "track_optimal_conditions = true\n");
    const auto pts = figures::scenario_points(s[0]);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].params.delta_c_bar != 0.0);

    const auto sw = parse("[t]\nC = 10\nrho = 2\nsigma = 0.01\nr = 0.8\nsweep_axis = gamma_E\nsweep_start = 1\n"
                          "sweep_stop = 3\nsweep_count = 3\n");
    const auto grid = figures::scenario_points(sw[0]);
    REQUIRE(grid.size() == 3);
    CHECK(grid[1].params.gamma_E == 2.0);
}
