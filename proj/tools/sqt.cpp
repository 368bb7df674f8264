// Command-line front end: figure data, sweeps, oracle comparisons and readout.

#include "sqt/sqt.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

namespace {

// Opens --out if given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close()
    {
        if (file_) {
            file_->close();
            if (!*file_)
                throw std::runtime_error("write failed");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<sqt::io::Scenario> load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config '" + path + "'");
    return sqt::io::parse_scenarios(in);
}

sqt::CovarianceMethod parse_method(const std::string& m)
{
    if (m == "lyapunov") return sqt::CovarianceMethod::Lyapunov;
    if (m == "integration") return sqt::CovarianceMethod::Integration;
    throw sqt::ValidationError("unknown method '" + m + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Squeezing transfer between a squeezed vacuum and cavity Lambda atoms"};
    app.set_version_flag("--version", sqt::kVersion);
    app.require_subcommand(1);

    std::string out_path;
    unsigned jobs = 1;
    double tolerance = 1e-12;

    // figure
    auto* fig = app.add_subcommand("figure", "emit the CSV data behind a figure");
    std::string fig_id;
    std::string fig_method = "lyapunov";
    fig->add_option("id", fig_id, "fig2 | fig3 | fig4 | readout_flat | readout_matched")->required();
    fig->add_option("--out", out_path, "output CSV (default stdout)");
    fig->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    fig->add_option("--method", fig_method, "lyapunov | integration")->check(CLI::IsMember({"lyapunov", "integration"}));
    fig->add_option("--tolerance", tolerance, "relative quadrature tolerance");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare integration, steady-state and closed-form results");
    std::string config;
    std::uint64_t seed = 20040101;
    std::size_t random_count = 50;
    cmp->add_option("--config", config, "scenario file; without it a seeded random batch is used");
    cmp->add_option("--seed", seed, "seed for the random batch");
    cmp->add_option("--count", random_count, "size of the random batch");
    cmp->add_option("--out", out_path, "output JSON (default stdout)");
    cmp->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    cmp->add_option("--tolerance", tolerance, "relative quadrature tolerance");

    // sweep
    auto* sw = app.add_subcommand("sweep", "run the sweeps defined in a scenario file");
    std::string sweep_method = "lyapunov";
    sw->add_option("--config", config, "scenario file")->required();
    sw->add_option("--out", out_path, "output CSV (default stdout)");
    sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sw->add_option("--method", sweep_method, "lyapunov | integration")->check(CLI::IsMember({"lyapunov", "integration"}));
    sw->add_option("--tolerance", tolerance, "relative quadrature tolerance");

    // readout
    auto* rd = app.add_subcommand("readout", "evaluate the retrieval noise power and efficiency");
    sqt::readout::ReadoutConfig rc;
    bool fourier_limited = false;
    bool optimize = false;
    rd->add_option("--a", rc.a, "integration time times gt0");
    rd->add_option("--b", rc.b, "analyzer bandwidth over gt0");
    rd->add_flag("--fourier-limited", fourier_limited, "set b = 2 pi / a");
    rd->add_option("--zeta", rc.zeta, "local-oscillator decay over gt0 (0 = flat)");
    rd->add_option("--r-at", rc.R_at, "stored atomic squeezing 1 - min variance");
    rd->add_option("--t", rc.t_delay, "gt0 * t since pump switch-on");
    rd->add_flag("--optimize", optimize, "report the best Fourier-limited flat-LO setting");
    rd->add_option("--out", out_path, "output JSON (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        sqt::IntegrationOptions io;
        io.rel_tol = tolerance;

        if (*fig) {
            Output out(out_path);
            sqt::figures::FigureOptions fo;
            fo.jobs = jobs;
            fo.method = parse_method(fig_method);
            fo.integration = io;
            sqt::figures::run_figure(fig_id, out.stream(), fo);
            out.close();
            return 0;
        }

        if (*cmp) {
            std::vector<sqt::figures::ComparePoint> points;
            if (config.empty()) {
                points = sqt::figures::random_points(seed, random_count);
            } else {
                for (const auto& s : load(config))
                    for (const auto& p : sqt::figures::scenario_points(s))
                        points.push_back(p);
            }
            auto report = sqt::figures::compare_report(points, jobs, io);
            if (config.empty())
                report["seed"] = seed;
            Output out(out_path);
            out.stream() << report.dump(2) << '\n';
            out.close();
            if (!report["pass"].get<bool>()) {
                for (const auto& p : report["points"])
                    if (!p["pass"].get<bool>())
                        std::cerr << "comparison failed: " << p.dump() << '\n';
                return 1;
            }
            return 0;
        }

        if (*sw) {
            Output out(out_path);
            sqt::io::CsvWriter csv(out.stream());
            csv.comment(std::string("sqtransfer ") + sqt::kVersion);
            const std::vector<std::string> cols{"scenario", "axis", "value", "eta", "theta_sq", "min_variance",
                                                "status"};
            bool header_written = false;
            for (const auto& s : load(config)) {
                if (!s.sweep) {
                    std::cerr << "scenario '" << s.name << "' has no sweep; skipped\n";
                    continue;
                }
                csv.comment(s.name + ": " + sqt::io::describe(s.params) + " mode=" + sqt::io::to_string(s.mode)
                            + " track_optimal_conditions=" + (s.track_optimal_conditions ? "true" : "false"));
                if (!header_written) {
                    csv.header(cols);
                    header_written = true;
                }
                sqt::SweepOptions so;
                so.track_optimal_conditions = s.track_optimal_conditions;
                so.method = parse_method(sweep_method);
                so.integration = io;
                so.jobs = jobs;
                const auto grid = s.sweep->grid();
                for (const auto& r : sqt::efficiency_sweep(s.system(), s.sweep->axis, grid, so))
                    csv.row(s.name, sqt::to_string(s.sweep->axis), r.value, r.eta, r.theta_sq, r.min_variance,
                            r.status);
            }
            out.close();
            return 0;
        }

        if (*rd) {
            nlohmann::json j;
            if (optimize) {
                const auto o = sqt::readout::optimize_flat_readout();
                j = {{"a", o.a}, {"b", o.b}, {"S", o.S}};
            } else {
                if (fourier_limited)
                    rc.b = 2.0 * std::numbers::pi / rc.a;
                const auto p = sqt::readout::noise_power(rc);
                const auto mu = sqt::readout::readout_efficiency(rc.a, rc.b, rc.zeta);
                j = {{"a", rc.a},
                     {"b", rc.b},
                     {"zeta", rc.zeta},
                     {"R_at", rc.R_at},
                     {"t", rc.t_delay},
                     {"S", sqt::readout::signal_integral_S_matched(rc.a, rc.b, rc.zeta)},
                     {"N", sqt::readout::noise_floor_N(rc.a, rc.zeta)},
                     {"P_over_dw", p.p_over_dw},
                     {"R_out", p.r_out},
                     {"mu", mu.mu},
                     {"mu_asymptotic", mu.mu_asymptotic}};
            }
            Output out(out_path);
            out.stream() << j.dump(2) << '\n';
            out.close();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
