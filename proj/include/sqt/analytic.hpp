#pragma once

// Closed-form transfer efficiencies, optimal detuning conditions and
// asymptotics. Rates are in units of gamma unless a name says otherwise:
// sigma = gamma0/gamma, gamma_E = Omega^2/gamma^2, rho = gamma/kappa,
// delta_bar = Delta/gamma.

#include "sqt/params.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace sqt::analytic {

enum class Scheme { EIT, Raman };

enum class Regime { I, II, III };

inline std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::I: return "I";
    case Regime::II: return "II";
    case Regime::III: return "III";
    }
    return "?";
}

/// Lossless limit 2C/(1+2C).
inline double eta_max(double C) { return 2.0 * C / (1.0 + 2.0 * C); }

/// Transfer efficiency for an effective pumping rate Gamma (over gamma).
inline double eta_general_lf(double C, double Gamma, double sigma)
{
    if (Gamma == 0.0)
        return 0.0;
    return eta_max(C) * Gamma / (sigma + Gamma);
}

/// Low-frequency EIT efficiency; effective pumping gamma_E/(1+2C).
inline double eta_eit_lf(double C, double gamma_E, double sigma)
{
    return eta_general_lf(C, gamma_E / (1.0 + 2.0 * C), sigma);
}

/// Low-frequency Raman efficiency; gamma_R = gamma Omega^2/Delta^2 over gamma.
inline double eta_raman_lf(double C, double gamma_R, double sigma)
{
    return eta_general_lf(C, (1.0 + 2.0 * C) * gamma_R, sigma);
}

/// Cavity and two-photon detunings (over gamma) that cancel the effective
/// detunings at one-photon detuning delta_bar.
struct DetuningConditions {
    double delta_c;
    double delta_2ph;
};

inline DetuningConditions optimal_conditions(double C, double kappa, double gamma, double gamma_E,
                                             double delta_bar)
{
    const double delta = delta_bar * gamma;
    const double g2 = gamma * gamma;
    const double d2 = delta * delta;
    const double Gamma_E = gamma_E * gamma;
    DetuningConditions out;
    out.delta_c = 2.0 * C * kappa * gamma * delta / (g2 + d2);
    out.delta_2ph = -Gamma_E * (gamma * d2 * delta + (1.0 - 2.0 * C) * g2 * gamma * delta)
                    / ((g2 + d2) * ((1.0 + 2.0 * C) * g2 + d2));
    return out;
}

/// Optimal efficiency at one-photon detuning delta_bar when the optimal
/// detuning conditions hold.
inline double eta_delta_lf(double C, double gamma_E, double sigma, double delta_bar)
{
    const double d2 = delta_bar * delta_bar;
    const double one = 1.0 + d2;
    const double coop = 1.0 + 2.0 * C + d2;
    const double num = 2.0 * C * gamma_E * one * one / coop;
    const double den = sigma * one * coop + gamma_E * (1.0 + (1.0 + 2.0 * C) * d2);
    if (num == 0.0)
        return 0.0;
    return num / den;
}

inline double squeezed_angle_lf(double delta_bar) { return std::atan(delta_bar); }

/// Efficiency including the cavity coupling frequency, resonant EIT.
inline double eta_eit_exact(double C, double gamma_E, double sigma, double rho)
{
    const double num = 2.0 * C * gamma_E;
    if (num == 0.0)
        return 0.0;
    const double first = num / ((1.0 + 2.0 * C) * sigma + gamma_E);
    const double a = 1.0 + rho + sigma * rho;
    const double b = 2.0 * C * (1.0 + rho)
                     + (1.0 + sigma) * (1.0 + rho + sigma * rho + sigma * rho * rho + gamma_E * rho * rho);
    return first * a / b;
}

/// Closed system (sigma = 0) limit of eta_eit_exact.
inline double eta_eit_lossless(double C, double gamma_E, double rho)
{
    return 2.0 * C / (1.0 + 2.0 * C + gamma_E * rho * rho / (1.0 + rho));
}

/// Low-frequency efficiency with a residual two-photon detuning delta_tilde
/// (over gamma). The spin reduces to a damped rotating 2D oscillator; its
/// steady covariance is solved in closed form. r is the input squeezing.
inline double eta_lf_detuned(double C, double Gamma, double sigma, double delta_tilde, double r)
{
    const double coop = 1.0 + 2.0 * C;
    const double decay = sigma + Gamma;
    // Normalized diffusion along the squeezed and anti-squeezed axes.
    const double coupling = 4.0 * C * Gamma / coop;
    const double noise = 2.0 * Gamma / coop + 2.0 * sigma;
    const double d1 = coupling * std::exp(-2.0 * r) + noise;
    const double d2 = coupling * std::exp(2.0 * r) + noise;

    const double y = delta_tilde * (d1 - d2) / (4.0 * (decay * decay + delta_tilde * delta_tilde));
    const double xx = (d1 - 2.0 * delta_tilde * y) / (2.0 * decay);
    const double zz = (d2 + 2.0 * delta_tilde * y) / (2.0 * decay);
    const double half_diff = 0.5 * (xx - zz);
    const double min_var = 0.5 * (xx + zz) - std::sqrt(half_diff * half_diff + y * y);
    return (1.0 - min_var) / (1.0 - std::exp(-2.0 * r));
}

struct OptimalPumping {
    double asymptotic; ///< (1+2C) sqrt(1+rho)/rho sqrt(sigma)
    double exact;      ///< argmax of eta_eit_exact
    double eta_at_exact;
};

inline OptimalPumping optimal_pumping(double C, double sigma, double rho)
{
    OptimalPumping out;
    out.asymptotic = (1.0 + 2.0 * C) * std::sqrt(1.0 + rho) / rho * std::sqrt(sigma);
    if (sigma == 0.0 || C == 0.0) {
        // monotone decreasing in gamma_E: the supremum is the gamma_E -> 0+ boundary
        out.exact = 0.0;
        out.eta_at_exact = sigma == 0.0 ? eta_max(C) : 0.0;
        return out;
    }
    // Maximize in log(gamma_E); 40 bits keeps the argmax to ~1e-12 relative.
    auto neg = [&](double lg) { return -eta_eit_exact(C, std::exp(lg), sigma, rho); };
    const double centre = std::log(out.asymptotic);
    auto [lg, f] = boost::math::tools::brent_find_minima(neg, centre - 12.0, centre + 12.0, 40);
    out.exact = std::exp(lg);
    out.eta_at_exact = -f;
    return out;
}

/// Maximum of eta_delta_lf over delta_bar > 0 (log-space Brent search).
struct DetuningOptimum {
    double delta_bar;
    double eta;
};

inline DetuningOptimum maximize_eta_delta(double C, double gamma_E, double sigma, double lo = 1e-3,
                                          double hi = 1e8)
{
    auto neg = [&](double ld) { return -eta_delta_lf(C, gamma_E, sigma, std::exp(ld)); };
    auto [ld, f] = boost::math::tools::brent_find_minima(neg, std::log(lo), std::log(hi), 40);
    return {std::exp(ld), -f};
}

/// Large-C, small-loss asymptotics of the best off-resonant operating point.
inline DetuningOptimum eta_delta_asymptotic_optimum(double C, double gamma_E, double sigma)
{
    return {std::sqrt(2.0 * C) * std::pow(gamma_E / sigma, 0.25),
            eta_max(C) * (1.0 - 2.0 * std::sqrt(sigma / gamma_E))};
}

struct DarkState {
    double min_variance;
    double amplitude_1; ///< coefficient of |1>
    double amplitude_2; ///< coefficient of |2>
};

/// Atomic variance when both modes carry a mean field and squeezing r1, r2.
inline DarkState dark_state_variance(double omega1, double omega2, double r1, double r2)
{
    const double w = omega1 * omega1 + omega2 * omega2;
    if (!(w > 0.0))
        throw ValidationError("dark_state_variance: Omega1^2 + Omega2^2 must be > 0");
    const double norm = std::sqrt(w);
    if (r1 == r2)
        return {std::exp(-2.0 * r1), -omega2 / norm, omega1 / norm};
    return {(omega2 * omega2 * std::exp(-2.0 * r1) + omega1 * omega1 * std::exp(-2.0 * r2)) / w,
            -omega2 / norm, omega1 / norm};
}

/// Regime from an effective pumping rate Gamma (over gamma), using factor-10
/// separations from gamma0 and from min(gamma, kappa).
inline Regime classify_regime(double Gamma, double sigma, double rho)
{
    const double fast = std::min(1.0, 1.0 / rho);
    if (Gamma > fast / 10.0)
        return Regime::III;
    if (Gamma < sigma / 10.0)
        return Regime::I;
    return Regime::II;
}

/// Regime for a pump gamma_E in the given scheme. Raman needs delta_bar != 0.
inline Regime classify_regime(double C, double gamma_E, double sigma, double rho, Scheme scheme,
                              double delta_bar = 0.0)
{
    double Gamma = gamma_E / (1.0 + 2.0 * C);
    if (scheme == Scheme::Raman) {
        if (delta_bar == 0.0)
            throw ValidationError("classify_regime: Raman scheme needs a non-zero delta_bar");
        Gamma = (1.0 + 2.0 * C) * gamma_E / (delta_bar * delta_bar);
    }
    return classify_regime(Gamma, sigma, rho);
}

} // namespace sqt::analytic
