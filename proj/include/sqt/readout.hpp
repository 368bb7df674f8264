#pragma once

// Retrieval of the stored spin squeezing onto the field leaving the cavity,
// detected by a homodyne/spectrum-analyzer chain.
//
// Dimensionless variables: a = T0 * gt0 (integration time), b = dw / gt0
// (analyzer bandwidth), zeta = local-oscillator decay over gt0, where
// gt0 = gamma0 + Gamma_E/(1+2C) is the effective ground-state decay.

#include "sqt/analytic.hpp"
#include "sqt/params.hpp"
#include "sqt/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace sqt::readout {

inline constexpr double kQuadAbsTol = 1e-10;

struct ReadoutConfig {
    double a = 1.3;
    double b = 2.0 * std::numbers::pi / 1.3;
    double zeta = 0.0;
    double R_at = 0.0;   ///< 1 - min spin variance when the pump is switched on
    double C = 100.0;
    double gamma_E = 15.0;
    double t_delay = 0.0; ///< gt0 * t since switch-on
};

inline void validate(const ReadoutConfig& c)
{
    for (auto [v, name] : {std::pair{c.a, "a"}, {c.b, "b"}})
        if (!(std::isfinite(v) && v > 0.0))
            throw ValidationError(std::string(name) + " must be > 0");
    if (!(c.zeta >= 0.0) || !std::isfinite(c.zeta))
        throw ValidationError("zeta must be >= 0");
    if (c.a * c.b < 2.0 * std::numbers::pi * (1.0 - 1e-12))
        throw ValidationError("a*b must be >= 2*pi (Fourier limit)");
    if (!(c.R_at >= 0.0 && c.R_at < 1.0))
        throw ValidationError("R_at must be in [0, 1)");
    if (!(c.t_delay >= 0.0))
        throw ValidationError("t_delay must be >= 0");
}

/// Warnings when (C, gamma_E, sigma, rho) is outside
/// gamma0 << Gamma_E/(1+2C) << gamma, kappa, where the kernel applies.
inline std::vector<std::string> regime_warnings(double C, double gamma_E, double sigma, double rho)
{
    std::vector<std::string> w;
    if (analytic::classify_regime(C, gamma_E, sigma, rho, analytic::Scheme::EIT) != analytic::Regime::II)
        w.emplace_back("effective pumping outside the good transfer regime; readout kernel is approximate");
    return w;
}

/// Smooth part of the output amplitude-quadrature correlation; the delta part
/// is handled analytically by the noise floor. Times in 1/gamma, result in gamma.
inline double correlation_kernel(double C, double gamma_E, double sigma, double R_at, double tau,
                                 double tau_prime)
{
    if (tau < 0.0 || tau_prime < 0.0)
        throw ValidationError("correlation_kernel: times must be >= 0");
    const double coop = 1.0 + 2.0 * C;
    const double gt0 = sigma + gamma_E / coop;
    return -4.0 * C * gamma_E / (coop * coop) * R_at * std::exp(-gt0 * (tau + tau_prime));
}

/// Analyzer signal integral with a local oscillator decaying at zeta * gt0.
inline double signal_integral_S_matched(double a, double b, double zeta)
{
    if (!(a > 0.0 && b > 0.0))
        throw ValidationError("signal integral: a and b must be > 0");
    const double z1 = 1.0 + zeta;
    const double e1 = std::exp(-a * z1);
    const double num0 = 1.0 + e1 * e1;
    auto f = [&](double w) { return (num0 - 2.0 * e1 * std::cos(a * w)) / (z1 * z1 + w * w); };
    quad::Options o;
    o.abs_tol = kQuadAbsTol;
    o.rel_tol = 1e-13;
    // even integrand: 2/(ab) * 2 * int_0^{b/2}
    return 4.0 / (a * b) * quad::integrate_scalar(f, 0.0, 0.5 * b, o);
}

/// Flat local oscillator.
inline double signal_integral_S(double a, double b) { return signal_integral_S_matched(a, b, 0.0); }

/// LO-weighted vacuum level (1 - e^{-2 zeta a})/(2 zeta a); 1 at zeta = 0.
inline double noise_floor_N(double a, double zeta)
{
    const double x = 2.0 * zeta * a;
    if (x == 0.0)
        return 1.0;
    return -std::expm1(-x) / x;
}

struct ReadoutEfficiency {
    double mu;
    double mu_asymptotic; ///< 4 zeta/(1+zeta)^2, the a >> 1 Fourier-limited value
};

inline ReadoutEfficiency readout_efficiency(double a, double b, double zeta)
{
    return {signal_integral_S_matched(a, b, zeta) / noise_floor_N(a, zeta),
            4.0 * zeta / ((1.0 + zeta) * (1.0 + zeta))};
}

struct NoisePower {
    double p_over_dw; ///< P(t)/dw
    double r_out;     ///< field squeezing S/N e^{-2 gt0 t} R_at
};

inline NoisePower noise_power(const ReadoutConfig& c)
{
    validate(c);
    const double s = signal_integral_S_matched(c.a, c.b, c.zeta);
    const double n = noise_floor_N(c.a, c.zeta);
    const double decay = std::exp(-2.0 * c.t_delay);
    return {n - s * decay * c.R_at, s / n * decay * c.R_at};
}

/// Squeezing left after storing for `delay` (1/gamma) with the pump off: the
/// transverse spin relaxes at gamma0, so excess variance decays at 2 gamma0.
inline double storage_decay(double R_at, double sigma, double delay)
{
    return R_at * std::exp(-2.0 * sigma * delay);
}

struct FlatOptimum {
    double a;
    double b;
    double S;
};

/// Best Fourier-limited flat-LO readout, maximizing S(a, 2 pi/a).
inline FlatOptimum optimize_flat_readout()
{
    auto neg = [](double a) { return -signal_integral_S(a, 2.0 * std::numbers::pi / a); };
    auto [a, f] = boost::math::tools::brent_find_minima(neg, 0.2, 10.0, 30);
    return {a, 2.0 * std::numbers::pi / a, -f};
}

} // namespace sqt::readout
