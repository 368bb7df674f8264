#pragma once

// Steady-state spin covariance of a LinearModel by two independent routes:
// frequency integration of the rational fluctuation spectrum, and the
// algebraic steady-state (Lyapunov) equation M S + S M^T + B Q B^T = 0.

#include "sqt/analytic.hpp"
#include "sqt/langevin.hpp"
#include "sqt/params.hpp"
#include "sqt/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sqt {

class UnstableSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CovarianceReport {
    Mat2 spin_cov = Mat2::Zero(); ///< (Jx, Jy) covariance over N/4
    double min_variance = 0.0;
    double squeezed_angle = 0.0; ///< in [0, pi)
    bool degenerate = false;     ///< equal eigenvalues; angle reported as 0
    std::optional<double> efficiency; ///< unset when r == 0
    double error_estimate = 0.0; ///< quadrature estimate on spin_cov (integration route)
};

inline CovarianceReport make_report(const Mat2& cov, double r_squeeze)
{
    CovarianceReport rep;
    rep.spin_cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Mat2> es(rep.spin_cov);
    const auto& ev = es.eigenvalues();
    rep.min_variance = ev(0);
    const double scale = std::max(1.0, std::abs(ev(1)));
    if (std::abs(ev(1) - ev(0)) <= 1e-12 * scale) {
        rep.degenerate = true;
        rep.squeezed_angle = 0.0;
    } else {
        const Eigen::Vector2d v = es.eigenvectors().col(0);
        double th = std::atan2(v(1), v(0));
        th = std::fmod(th, std::numbers::pi);
        if (th < 0.0)
            th += std::numbers::pi;
        if (th >= std::numbers::pi)
            th -= std::numbers::pi;
        rep.squeezed_angle = th;
    }
    if (r_squeeze > 0.0)
        rep.efficiency = (1.0 - rep.min_variance) / (-std::expm1(-2.0 * r_squeeze));
    return rep;
}

namespace detail {

// Atomic variables rescaled by 1/sqrt(N).
struct Balanced {
    Mat6 drift;
    Mat6 diffusion;
    double spin_scale; ///< multiply the balanced spin block by this to get cov/(N/4)
};

inline Balanced balance(const LinearModel& m)
{
    const double n = 4.0 * m.n_norm;
    const double s = 1.0 / std::sqrt(n);
    Eigen::Matrix<double, 6, 1> t;
    t << s, s, s, s, 1.0, 1.0;
    Balanced b;
    b.drift = t.asDiagonal() * m.drift * t.cwiseInverse().asDiagonal();
    b.diffusion = t.asDiagonal() * m.diffusion() * t.asDiagonal();
    b.spin_scale = n / m.n_norm;
    return b;
}

inline void require_stable(const LinearModel& m)
{
    const double re = max_real_eigenvalue(m);
    if (!(re < 0.0))
        throw UnstableSystemError("drift matrix is not stable (max real eigenvalue "
                                  + std::to_string(re) + ")");
}

// Spin rows of the state spectrum H D H^dagger, H = (-i w I - M)^{-1}.
inline Eigen::Matrix2cd spin_spectrum(const Mat6& drift, const Mat6& diffusion, double omega)
{
    using cd = std::complex<double>;
    const Eigen::Matrix<cd, 6, 6> k =
        cd(0.0, -omega) * Eigen::Matrix<cd, 6, 6>::Identity() - drift.cast<cd>();
    Eigen::Matrix<cd, 6, 2> e = Eigen::Matrix<cd, 6, 2>::Zero();
    e(0, 0) = 1.0;
    e(1, 1) = 1.0;
    const Eigen::Matrix<cd, 2, 6> h = k.transpose().partialPivLu().solve(e).transpose();
    return h * diffusion.cast<cd>() * h.adjoint();
}

} // namespace detail

struct IntegrationOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_intervals = 20000;
    double cutoff_factor = 100.0; ///< W = cutoff_factor * (largest rate in the drift)
    int points_per_decade = 3;
};

/// Spin covariance from (1/2pi) * integral over all w of the spin spectrum.
/// Integrates Re S(w) on [0, W] adaptively and adds a 1/w^2 + 1/w^4 tail
/// fitted at W and 2W.
inline CovarianceReport covariance_by_integration(const LinearModel& model,
                                                  const IntegrationOptions& opt = {})
{
    detail::require_stable(model);
    const auto bal = detail::balance(model);

    const auto eig = drift_eigenvalues(model);
    double fastest = model.drift.diagonal().cwiseAbs().maxCoeff();
    double slowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i) {
        fastest = std::max(fastest, std::abs(eig(i)));
        slowest = std::min(slowest, std::abs(eig(i).real()));
    }
    const double cutoff = opt.cutoff_factor * fastest;

    std::vector<double> breaks{0.0};
    const double lo = std::max(slowest / 10.0, cutoff * 1e-15);
    const int decades = static_cast<int>(std::ceil(std::log10(cutoff / lo)));
    const int n_geo = std::max(1, decades * opt.points_per_decade);
    for (int i = 0; i <= n_geo; ++i)
        breaks.push_back(lo * std::pow(cutoff / lo, static_cast<double>(i) / n_geo));
    for (int i = 0; i < 6; ++i) {
        const double w = std::abs(eig(i).imag());
        if (w > lo && w < cutoff)
            breaks.push_back(w);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.back() = cutoff;

    auto integrand = [&bal](double w) {
        const Eigen::Matrix2cd s = detail::spin_spectrum(bal.drift, bal.diffusion, w);
        return std::array<double, 3>{s(0, 0).real(), s(0, 1).real(), s(1, 1).real()};
    };

    quad::Options qo;
    qo.rel_tol = opt.rel_tol;
    qo.abs_tol = opt.abs_tol;
    qo.max_intervals = opt.max_intervals;
    const auto res = quad::integrate<3>(integrand, std::span<const double>(breaks), qo);

    // S(w) ~ c2/w^2 + c4/w^4 beyond the cutoff.
    const auto s1 = integrand(cutoff);
    const auto s2 = integrand(2.0 * cutoff);
    std::array<double, 3> total{};
    for (int k = 0; k < 3; ++k) {
        const double a1 = s1[k] * cutoff * cutoff;
        const double a2 = s2[k] * 4.0 * cutoff * cutoff;
        const double c4 = (a1 - a2) * cutoff * cutoff * 4.0 / 3.0;
        const double c2 = a1 - c4 / (cutoff * cutoff);
        const double tail = c2 / cutoff + c4 / (3.0 * cutoff * cutoff * cutoff);
        total[k] = (res.value[k] + tail) / std::numbers::pi;
    }

    Mat2 cov;
    cov << total[0], total[1], total[1], total[2];
    auto rep = make_report(bal.spin_scale * cov, model.r_squeeze);
    rep.error_estimate = bal.spin_scale * res.error / std::numbers::pi;
    return rep;
}

/// Full 6x6 steady covariance, solved as a 36x36 linear system in vec(S).
inline Mat6 steady_covariance(const LinearModel& model)
{
    detail::require_stable(model);
    const auto bal = detail::balance(model);
    using Mat36 = Eigen::Matrix<double, 36, 36>;
    const Mat6 id = Mat6::Identity();
    Mat36 k;
    // vec(M S + S M^T) = (I (x) M + M (x) I) vec(S), column-major vec
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            k.block<6, 6>(6 * i, 6 * j) = id(i, j) * bal.drift + bal.drift(i, j) * id;
    const Mat6 rhs = -bal.diffusion;
    const Eigen::Matrix<double, 36, 1> vec_rhs = Eigen::Map<const Eigen::Matrix<double, 36, 1>>(rhs.data());
    Eigen::FullPivLU<Mat36> lu(k);
    if (!lu.isInvertible())
        throw UnstableSystemError("steady-state covariance equation is singular");
    const Eigen::Matrix<double, 36, 1> v = lu.solve(vec_rhs);
    Mat6 s = Eigen::Map<const Mat6>(v.data());
    s = 0.5 * (s + s.transpose());

    // undo the balancing
    const double n = 4.0 * model.n_norm;
    const double root = std::sqrt(n);
    Eigen::Matrix<double, 6, 1> t;
    t << root, root, root, root, 1.0, 1.0;
    return t.asDiagonal() * s * t.asDiagonal();
}

inline CovarianceReport covariance_by_lyapunov(const LinearModel& model)
{
    const Mat6 s = steady_covariance(model);
    return make_report(s.block<2, 2>(0, 0) / model.n_norm, model.r_squeeze);
}

struct OutputSpectrumPoint {
    double omega;
    double amplitude; ///< spectrum of Ap_out
    double phase;     ///< spectrum of Aq_out
};

/// Output-field quadrature spectra. Vacuum input gives 1 at high frequency.
inline std::vector<OutputSpectrumPoint> output_spectrum(const LinearModel& model,
                                                        std::span<const double> omegas)
{
    detail::require_stable(model);
    using cd = std::complex<double>;
    const auto map = output_field_map(model);
    const Eigen::Matrix<cd, 6, 6> b = model.input_coupling.cast<cd>();
    const Eigen::Matrix<cd, 6, 6> q = model.input_psd.cast<cd>();
    std::vector<OutputSpectrumPoint> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        const Eigen::Matrix<cd, 6, 6> k =
            cd(0.0, -w) * Eigen::Matrix<cd, 6, 6>::Identity() - model.drift.cast<cd>();
        const Eigen::Matrix<cd, 6, 6> transfer = k.partialPivLu().solve(b);
        const Eigen::Matrix<cd, 2, 6> g = map.state_rows.cast<cd>() * transfer + map.input_rows.cast<cd>();
        const Eigen::Matrix2cd s = g * q * g.adjoint();
        out.push_back({w, s(0, 0).real(), s(1, 1).real()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { DeltaBar, GammaE, Delta2ph, DeltaC, R };

inline SweepAxis parse_axis(std::string_view name)
{
    if (name == "delta_bar") return SweepAxis::DeltaBar;
    if (name == "gamma_E") return SweepAxis::GammaE;
    if (name == "delta_2ph") return SweepAxis::Delta2ph;
    if (name == "delta_c") return SweepAxis::DeltaC;
    if (name == "r") return SweepAxis::R;
    throw ValidationError("unknown sweep axis '" + std::string(name) + "'");
}

inline std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::DeltaBar: return "delta_bar";
    case SweepAxis::GammaE: return "gamma_E";
    case SweepAxis::Delta2ph: return "delta_2ph";
    case SweepAxis::DeltaC: return "delta_c";
    case SweepAxis::R: return "r";
    }
    return "?";
}

enum class CovarianceMethod { Lyapunov, Integration };

struct SweepOptions {
    /// Set delta_c and delta_2ph from the optimal detuning conditions at each
    /// point. The delta_c / delta_2ph axes then sweep offsets from the optimum.
    bool track_optimal_conditions = false;
    CovarianceMethod method = CovarianceMethod::Lyapunov;
    IntegrationOptions integration{};
    unsigned jobs = 1;
};

struct SweepRow {
    double value = 0.0;
    std::optional<double> eta;
    double theta_sq = 0.0;
    double min_variance = 0.0;
    std::string status = "ok";
};

/// Applies one axis value (and optionally the optimal detunings) to a base point.
inline DimensionlessParams sweep_point(const DimensionlessParams& base, SweepAxis axis, double value,
                                       bool track_optimal)
{
    DimensionlessParams x = base;
    switch (axis) {
    case SweepAxis::DeltaBar: x.delta_bar = value; break;
    case SweepAxis::GammaE: x.gamma_E = value; break;
    case SweepAxis::Delta2ph: x.delta_2ph_bar = value; break;
    case SweepAxis::DeltaC: x.delta_c_bar = value; break;
    case SweepAxis::R: x.r = value; break;
    }
    if (track_optimal) {
        const auto opt = analytic::optimal_conditions(x.C, 1.0 / x.rho, 1.0, x.gamma_E, x.delta_bar);
        x.delta_c_bar = opt.delta_c + (axis == SweepAxis::DeltaC ? value : 0.0);
        x.delta_2ph_bar = opt.delta_2ph + (axis == SweepAxis::Delta2ph ? value : 0.0);
    }
    return x;
}

inline CovarianceReport covariance(const LinearModel& m, CovarianceMethod method,
                                   const IntegrationOptions& io = {})
{
    return method == CovarianceMethod::Lyapunov ? covariance_by_lyapunov(m)
                                                : covariance_by_integration(m, io);
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. fn must write only to slot i.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
{
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

inline std::vector<SweepRow> efficiency_sweep(const SystemParams& base, SweepAxis axis,
                                              std::span<const double> values,
                                              const SweepOptions& opt = {})
{
    const DimensionlessParams base_x = to_dimensionless(base);
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), opt.jobs, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = values[i];
        try {
            const auto x = sweep_point(base_x, axis, values[i], opt.track_optimal_conditions);
            SystemParams p = from_dimensionless(x, base.n_atoms);
            p.squeezed_quadrature_angle = base.squeezed_quadrature_angle;
            const auto rep = covariance(build_model(p), opt.method, opt.integration);
            row.eta = rep.efficiency;
            row.theta_sq = rep.squeezed_angle;
            row.min_variance = rep.min_variance;
        } catch (const UnstableSystemError&) {
            row.status = "unstable";
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
    });
    return rows;
}

} // namespace sqt
