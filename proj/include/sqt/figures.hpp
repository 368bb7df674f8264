#pragma once

// Data behind the efficiency and readout figures, and the oracle comparison
// harness (numeric integration vs steady-state equation vs closed form).

#include "sqt/analytic.hpp"
#include "sqt/io.hpp"
#include "sqt/readout.hpp"
#include "sqt/spectra.hpp"
#include "sqt/version.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace sqt::figures {

// Shared figure parameters.
inline constexpr double kC = 100.0;
inline constexpr double kSigma = 1e-3;
inline constexpr double kRho = 0.5;
inline constexpr double kGammaE = 15.0;
/// e^{-2r} = 1/2
inline const double kSqueezeR = std::log(2.0) / 2.0;
/// Effective ground-state decay used for both schemes of the two-photon figure.
inline constexpr double kMatchedDecayOverGamma0 = 75.0;
/// One-photon detuning of the Raman curve. The residual asymmetry in the
/// two-photon detuning falls off as 1/delta_bar.
inline constexpr double kRamanDeltaBar = 2e6;

inline std::vector<double> log_grid(double lo, double hi, int n)
{
    return io::SweepSpec{SweepAxis::GammaE, lo, hi, n, true}.grid();
}

inline std::vector<double> linear_grid(double lo, double hi, int n)
{
    return io::SweepSpec{SweepAxis::GammaE, lo, hi, n, false}.grid();
}

inline void preamble(io::CsvWriter& csv, const std::string& figure, const std::string& params)
{
    csv.comment(std::string("sqtransfer ") + sqt::kVersion);
    csv.comment("figure=" + figure);
    csv.comment(params);
}

struct FigureOptions {
    unsigned jobs = 1;
    CovarianceMethod method = CovarianceMethod::Lyapunov;
    IntegrationOptions integration{};
};

/// Efficiency vs one-photon detuning under the optimal detuning conditions.
inline void fig2(std::ostream& os, const FigureOptions& opt = {})
{
    std::vector<double> grid{0.0};
    for (double v : log_grid(1e-2, 1e3, 60))
        grid.push_back(v);

    io::CsvWriter csv(os);
    preamble(csv, "fig2",
             "C=100 gamma_E=15 rho=0.5 r=" + io::fmt(kSqueezeR)
                 + " sigma in {0,0.001} track_optimal_conditions=true");
    const std::vector<std::string> cols{"delta_bar", "sigma", "eta_numeric", "eta_closed_form", "theta_sq",
                                        "theta_closed_form", "status"};
    csv.header(cols);

    for (double sigma : {0.0, kSigma}) {
        DimensionlessParams base{kC, kRho, sigma, kGammaE, 0.0, 0.0, 0.0, kSqueezeR};
        SweepOptions so;
        so.track_optimal_conditions = true;
        so.jobs = opt.jobs;
        so.method = opt.method;
        so.integration = opt.integration;
        const auto rows = efficiency_sweep(from_dimensionless(base), SweepAxis::DeltaBar, grid, so);
        for (const auto& r : rows)
            csv.row(r.value, sigma, r.eta, analytic::eta_delta_lf(kC, kGammaE, sigma, r.value), r.theta_sq,
                    analytic::squeezed_angle_lf(r.value), r.status);
    }
}

/// EIT efficiency vs pumping rate: exact, low-frequency and lossless forms.
inline void fig3(std::ostream& os, const FigureOptions& opt = {})
{
    const auto grid = log_grid(1e-3, 1e3, 80);
    io::CsvWriter csv(os);
    preamble(csv, "fig3", "C=100 sigma=0.001 rho=0.5 r=" + io::fmt(kSqueezeR) + " EIT");
    const std::vector<std::string> cols{"gamma_E", "eta_exact", "eta_lf", "eta_lossless",
                                        "eta_numeric", "regime", "status"};
    csv.header(cols);

    DimensionlessParams base{kC, kRho, kSigma, kGammaE, 0.0, 0.0, 0.0, kSqueezeR};
    SweepOptions so;
    so.jobs = opt.jobs;
    so.method = opt.method;
    so.integration = opt.integration;
    const auto rows = efficiency_sweep(from_dimensionless(base), SweepAxis::GammaE, grid, so);
    for (const auto& r : rows) {
        const double g = r.value;
        csv.row(g, analytic::eta_eit_exact(kC, g, kSigma, kRho), analytic::eta_eit_lf(kC, g, kSigma),
                analytic::eta_eit_lossless(kC, g, kRho), r.eta,
                analytic::to_string(analytic::classify_regime(kC, g, kSigma, kRho, analytic::Scheme::EIT)),
                r.status);
    }
}

/// Pump settings that give gt0 = kMatchedDecayOverGamma0 * gamma0 in each scheme.
inline DimensionlessParams fig4_point(analytic::Scheme scheme)
{
    const double Gamma = (kMatchedDecayOverGamma0 - 1.0) * kSigma;
    const double coop = 1.0 + 2.0 * kC;
    DimensionlessParams x{kC, kRho, kSigma, 0.0, 0.0, 0.0, 0.0, kSqueezeR};
    if (scheme == analytic::Scheme::EIT) {
        x.gamma_E = Gamma * coop;
    } else {
        x.delta_bar = kRamanDeltaBar;
        x.gamma_E = Gamma / coop * kRamanDeltaBar * kRamanDeltaBar;
    }
    return x;
}

/// Efficiency vs residual two-photon detuning in EIT and Raman at matched gt0.
inline void fig4(std::ostream& os, const FigureOptions& opt = {})
{
    const auto grid = linear_grid(-300.0, 300.0, 121);
    io::CsvWriter csv(os);
    preamble(csv, "fig4",
             "C=100 sigma=0.001 rho=0.5 exp(-2r)=0.5 gt0=75*gamma0 raman_delta_bar=" + io::fmt(kRamanDeltaBar));
    const std::vector<std::string> cols{"delta_tilde_over_gamma0", "scheme", "eta_numeric", "eta_closed_form",
                                        "theta_sq", "status"};
    csv.header(cols);

    const double Gamma = (kMatchedDecayOverGamma0 - 1.0) * kSigma;
    for (auto scheme : {analytic::Scheme::EIT, analytic::Scheme::Raman}) {
        std::vector<double> offsets;
        for (double x : grid)
            offsets.push_back(x * kSigma);
        SweepOptions so;
        so.track_optimal_conditions = true;
        so.jobs = opt.jobs;
        so.method = opt.method;
        so.integration = opt.integration;
        const auto rows =
            efficiency_sweep(from_dimensionless(fig4_point(scheme)), SweepAxis::Delta2ph, offsets, so);
        for (std::size_t i = 0; i < rows.size(); ++i)
            csv.row(grid[i], scheme == analytic::Scheme::EIT ? "EIT" : "Raman", rows[i].eta,
                    analytic::eta_lf_detuned(kC, Gamma, kSigma, offsets[i], kSqueezeR), rows[i].theta_sq,
                    rows[i].status);
    }
}

/// Flat-LO readout vs integration time a (Fourier-limited, R_at = 1/2, t = 0).
inline void readout_flat(std::ostream& os)
{
    io::CsvWriter csv(os);
    preamble(csv, "readout_flat", "zeta=0 b=2*pi/a R_at=0.5 t=0");
    const std::vector<std::string> cols{"a", "P_over_dw", "R_out", "mu"};
    csv.header(cols);
    for (double a : log_grid(0.05, 20.0, 100)) {
        readout::ReadoutConfig c;
        c.a = a;
        c.b = 2.0 * std::numbers::pi / a;
        c.zeta = 0.0;
        c.R_at = 0.5;
        const auto p = readout::noise_power(c);
        csv.row(a, p.p_over_dw, p.r_out, readout::readout_efficiency(c.a, c.b, c.zeta).mu);
    }
}

/// Temporally matched LO readout vs a for several LO decay parameters.
inline void readout_matched(std::ostream& os)
{
    io::CsvWriter csv(os);
    preamble(csv, "readout_matched", "b=2*pi/a R_at=0.5 t=0 zeta in {0.25,0.5,1,2,4}");
    const std::vector<std::string> cols{"a", "zeta", "P_over_dw", "R_out", "mu", "mu_asymptotic"};
    csv.header(cols);
    for (double zeta : {0.25, 0.5, 1.0, 2.0, 4.0})
        for (double a : log_grid(0.1, 100.0, 61)) {
            readout::ReadoutConfig c;
            c.a = a;
            c.b = 2.0 * std::numbers::pi / a;
            c.zeta = zeta;
            c.R_at = 0.5;
            const auto p = readout::noise_power(c);
            const auto mu = readout::readout_efficiency(c.a, c.b, c.zeta);
            csv.row(a, zeta, p.p_over_dw, p.r_out, mu.mu, mu.mu_asymptotic);
        }
}

inline void run_figure(const std::string& id, std::ostream& os, const FigureOptions& opt = {})
{
    if (id == "fig2") return fig2(os, opt);
    if (id == "fig3") return fig3(os, opt);
    if (id == "fig4") return fig4(os, opt);
    if (id == "readout_flat") return readout_flat(os);
    if (id == "readout_matched") return readout_matched(os);
    throw ValidationError("unknown figure '" + id + "'");
}

// ---------------------------------------------------------------------------
// Oracle comparison

inline constexpr double kNumericTolerance = 1e-8;
inline constexpr double kClosedFormTolerance = 1e-6;

struct ComparePoint {
    io::Mode mode = io::Mode::General;
    DimensionlessParams params;
    double n_atoms = kDefaultAtomNumber;
    double squeezed_quadrature_angle = 0.0;
};

inline double rel_dev(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline nlohmann::json point_json(const ComparePoint& p)
{
    const auto& x = p.params;
    return {{"mode", io::to_string(p.mode)}, {"C", x.C}, {"rho", x.rho}, {"sigma", x.sigma},
            {"gamma_E", x.gamma_E}, {"delta_bar", x.delta_bar}, {"delta_c_bar", x.delta_c_bar},
            {"delta_2ph_bar", x.delta_2ph_bar}, {"r", x.r}, {"n_atoms", p.n_atoms},
            {"squeezed_quadrature_angle", p.squeezed_quadrature_angle}};
}

inline nlohmann::json opt_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Compares both numeric routes (spin covariance and minimum variance) and,
/// for resonant EIT points, the exact closed form.
inline nlohmann::json compare_point(const ComparePoint& pt, const IntegrationOptions& io = {})
{
    nlohmann::json j;
    j["point"] = point_json(pt);
    try {
        SystemParams sp = from_dimensionless(pt.params, pt.n_atoms);
        sp.squeezed_quadrature_angle = pt.squeezed_quadrature_angle;
        const auto model = build_model(sp);
        const auto integ = covariance_by_integration(model, io);
        const auto lyap = covariance_by_lyapunov(model);

        const double cov_dev = (integ.spin_cov - lyap.spin_cov).norm() / lyap.spin_cov.norm();
        const double numeric_dev = std::max(cov_dev, rel_dev(integ.min_variance, lyap.min_variance));
        if (integ.efficiency && lyap.efficiency)
            j["eta_abs_dev"] = std::abs(*integ.efficiency - *lyap.efficiency);
        else
            j["eta_abs_dev"] = nullptr;

        std::optional<double> closed;
        const auto& x = pt.params;
        const bool resonant = x.delta_bar == 0.0 && x.delta_c_bar == 0.0 && x.delta_2ph_bar == 0.0
                              && pt.squeezed_quadrature_angle == 0.0;
        if (pt.mode == io::Mode::EIT && resonant && x.r > 0.0)
            closed = analytic::eta_eit_exact(x.C, x.gamma_E, x.sigma, x.rho);

        double closed_dev = 0.0;
        if (closed) {
            closed_dev = std::max(rel_dev(*closed, *integ.efficiency), rel_dev(*closed, *lyap.efficiency));
            j["eta_closed"] = *closed;
        } else {
            j["eta_closed"] = nullptr;
        }

        j["eta_integration"] = opt_json(integ.efficiency);
        j["eta_lyapunov_like"] = opt_json(lyap.efficiency);
        j["min_variance_integration"] = integ.min_variance;
        j["min_variance_lyapunov"] = lyap.min_variance;
        j["numeric_rel_dev"] = numeric_dev;
        j["closed_rel_dev"] = closed ? nlohmann::json(closed_dev) : nlohmann::json(nullptr);
        j["max_rel_dev"] = std::max(numeric_dev, closed_dev);
        j["pass"] = numeric_dev <= kNumericTolerance && closed_dev <= kClosedFormTolerance;
    } catch (const std::exception& e) {
        j["error"] = e.what();
        j["pass"] = false;
    }
    return j;
}

/// Random stable parameter points, reproducible for a given seed.
inline std::vector<ComparePoint> random_points(std::uint64_t seed, std::size_t count)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

    std::vector<ComparePoint> out;
    while (out.size() < count) {
        ComparePoint p;
        p.params.C = log_uniform(0.1, 500.0);
        p.params.rho = log_uniform(0.1, 10.0);
        p.params.sigma = log_uniform(1e-4, 0.1);
        p.params.gamma_E = log_uniform(1e-2, 100.0);
        p.params.delta_bar = uniform(-10.0, 10.0);
        p.params.delta_c_bar = uniform(-10.0, 10.0);
        p.params.delta_2ph_bar = uniform(-0.1, 0.1);
        p.params.r = uniform(0.0, 1.5);
        p.squeezed_quadrature_angle = uniform(0.0, std::numbers::pi);
        SystemParams sp = from_dimensionless(p.params, p.n_atoms);
        if (max_real_eigenvalue(build_model(sp)) < 0.0)
            out.push_back(p);
    }
    return out;
}

inline nlohmann::json compare_report(const std::vector<ComparePoint>& points, unsigned jobs,
                                     const IntegrationOptions& io = {})
{
    std::vector<nlohmann::json> results(points.size());
    parallel_for(points.size(), jobs, [&](std::size_t i) { results[i] = compare_point(points[i], io); });
    bool all = true;
    nlohmann::json arr = nlohmann::json::array();
    for (auto& r : results) {
        all = all && r["pass"].get<bool>();
        arr.push_back(std::move(r));
    }
    return {{"version", kVersion},
            {"numeric_tolerance", kNumericTolerance},
            {"closed_form_tolerance", kClosedFormTolerance},
            {"points", std::move(arr)},
            {"pass", all}};
}

/// Expands a scenario into comparison points (one per sweep grid value).
inline std::vector<ComparePoint> scenario_points(const io::Scenario& s)
{
    std::vector<ComparePoint> out;
    auto push = [&](const DimensionlessParams& x) {
        out.push_back({s.mode, x, s.n_atoms, s.squeezed_quadrature_angle});
    };
    if (!s.sweep) {
        DimensionlessParams x = s.params;
        if (s.track_optimal_conditions) {
            const auto c = analytic::optimal_conditions(x.C, 1.0 / x.rho, 1.0, x.gamma_E, x.delta_bar);
            x.delta_c_bar = c.delta_c;
            x.delta_2ph_bar = c.delta_2ph;
        }
        push(x);
        return out;
    }
    for (double v : s.sweep->grid())
        push(sweep_point(s.params, s.sweep->axis, v, s.track_optimal_conditions));
    return out;
}

} // namespace sqt::figures
