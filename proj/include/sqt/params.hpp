#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqt {

/// Raised when a parameter set violates a hard constraint. The message names the field.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical rates and detunings of the atom-cavity-field system.
///
/// All rates share one unit; gamma is conventionally 1. Detunings follow the
/// sign conventions of the fluctuation equations in langevin.hpp.
struct SystemParams {
    double gamma = 1.0;     ///< optical dipole decay
    double gamma0 = 0.0;    ///< ground-state coherence decay
    double kappa = 1.0;     ///< intracavity field decay
    double tau = 1.0;       ///< cavity round-trip time
    double g = 0.0;         ///< atom-field coupling of the squeezed mode
    double n_atoms = 1e6;
    double omega = 0.0;     ///< pump Rabi pulsation (real)
    double delta_1 = 0.0;   ///< one-photon detuning of the squeezed mode
    double delta_c = 0.0;   ///< cavity detuning
    double delta_2ph = 0.0; ///< two-photon detuning
    double r_squeeze = 0.0;
    double squeezed_quadrature_angle = 0.0; ///< 0 = amplitude quadrature squeezed
};

/// Dimensionless groups. Rates are carried both in absolute units and over gamma.
struct DerivedParams {
    double cooperativity = 0.0;
    double mirror_T = 0.0;
    double gamma_E_rate = 0.0;
    std::optional<double> gamma_R_rate;  ///< unset when delta_1 == 0
    double gamma_tilde0_eit = 0.0;
    std::optional<double> gamma_tilde0_raman;
    double rho = 0.0;
    double sigma = 0.0;
    double gamma_E_dimless = 0.0;
    double delta_bar = 0.0;
    double coupling_freq = 0.0;
};

/// The tuple the figures are parameterized by. All detunings over gamma.
struct DimensionlessParams {
    double C = 0.0;
    double rho = 1.0;
    double sigma = 0.0;
    double gamma_E = 0.0;
    double delta_bar = 0.0;
    double delta_c_bar = 0.0;
    double delta_2ph_bar = 0.0;
    double r = 0.0;
};

inline constexpr double kDefaultAtomNumber = 1e6;

namespace detail {

inline void require_finite(double v, const char* name)
{
    if (!std::isfinite(v))
        throw ValidationError(std::string(name) + " must be finite");
}

inline void require_positive(double v, const char* name)
{
    require_finite(v, name);
    if (!(v > 0.0))
        throw ValidationError(std::string(name) + " must be > 0");
}

inline void require_non_negative(double v, const char* name)
{
    require_finite(v, name);
    if (v < 0.0)
        throw ValidationError(std::string(name) + " must be >= 0");
}

} // namespace detail

/// Checks hard invariants (throws ValidationError) and returns soft warnings.
inline std::vector<std::string> validate(const SystemParams& p)
{
    using namespace detail;
    require_positive(p.gamma, "gamma");
    require_positive(p.kappa, "kappa");
    require_positive(p.tau, "tau");
    require_positive(p.n_atoms, "n_atoms");
    require_non_negative(p.g, "g");
    require_non_negative(p.omega, "omega");
    require_non_negative(p.gamma0, "gamma0");
    require_non_negative(p.r_squeeze, "r_squeeze");
    require_finite(p.delta_1, "delta_1");
    require_finite(p.delta_c, "delta_c");
    require_finite(p.delta_2ph, "delta_2ph");
    require_finite(p.squeezed_quadrature_angle, "squeezed_quadrature_angle");

    std::vector<std::string> warnings;
    if (p.gamma0 >= p.gamma)
        warnings.emplace_back("gamma0 is not small compared to gamma");
    return warnings;
}

inline DerivedParams derive(const SystemParams& p)
{
    validate(p);
    DerivedParams d;
    const double g2n = p.g * p.g * p.n_atoms;
    d.cooperativity = g2n / (2.0 * p.kappa * p.gamma * p.tau);
    d.mirror_T = 2.0 * p.kappa * p.tau;
    d.gamma_E_rate = p.omega * p.omega / p.gamma;
    d.gamma_tilde0_eit = p.gamma0 + d.gamma_E_rate / (1.0 + 2.0 * d.cooperativity);
    if (p.delta_1 != 0.0) {
        d.gamma_R_rate = p.gamma * p.omega * p.omega / (p.delta_1 * p.delta_1);
        d.gamma_tilde0_raman = p.gamma0 + (1.0 + 2.0 * d.cooperativity) * *d.gamma_R_rate;
    }
    d.rho = p.gamma / p.kappa;
    d.sigma = p.gamma0 / p.gamma;
    d.gamma_E_dimless = d.gamma_E_rate / p.gamma;
    d.delta_bar = p.delta_1 / p.gamma;
    d.coupling_freq = std::sqrt(2.0 * d.cooperativity / d.rho) * p.gamma;
    return d;
}

/// Concrete system with gamma = tau = 1 realizing a dimensionless tuple.
inline SystemParams from_dimensionless(const DimensionlessParams& x,
                                       double n_atoms = kDefaultAtomNumber)
{
    using namespace detail;
    require_non_negative(x.C, "C");
    require_positive(x.rho, "rho");
    require_non_negative(x.sigma, "sigma");
    require_non_negative(x.gamma_E, "gamma_E");
    require_non_negative(x.r, "r");
    require_positive(n_atoms, "n_atoms");

    SystemParams p;
    p.gamma = 1.0;
    p.tau = 1.0;
    p.kappa = 1.0 / x.rho;
    p.gamma0 = x.sigma;
    p.omega = std::sqrt(x.gamma_E);
    p.n_atoms = n_atoms;
    p.g = std::sqrt(2.0 * x.C * p.kappa * p.gamma * p.tau / n_atoms);
    p.delta_1 = x.delta_bar;
    p.delta_c = x.delta_c_bar;
    p.delta_2ph = x.delta_2ph_bar;
    p.r_squeeze = x.r;
    validate(p);
    return p;
}

inline DimensionlessParams to_dimensionless(const SystemParams& p)
{
    const DerivedParams d = derive(p);
    return {d.cooperativity,       d.rho,
            d.sigma,               d.gamma_E_dimless,
            p.delta_1 / p.gamma,   p.delta_c / p.gamma,
            p.delta_2ph / p.gamma, p.r_squeeze};
}

} // namespace sqt
