#pragma once

// Linearized fluctuation model for the ground-state coherence, the optical
// dipole of the squeezed transition and the squeezed cavity mode.
//
// Complex equations (rotating frames, pump Rabi pulsation Omega real):
//
//   dPr/dt = -(gamma0 - i delta) Pr + i Omega P2 + f_r
//   dP2/dt = -(gamma + i Delta) P2 + i Omega Pr + i g N A2 + F_2
//   dA2/dt = -(kappa + i Delta_c) A2 + i (g/tau) P2 + sqrt(2 kappa/tau) A2_in
//
// Real state x = (Jx, Jy, X2, Y2, Ap, Aq) with Pr = Jx + i Jy, P2 = X2 + i Y2,
// A2 = (Ap + i Aq)/2. Inputs u = (Ap_in, Aq_in, F2x, F2y, frx, fry).
// Field quadratures enter the dipole rows with gN/2 and are driven by it
// with 2g/tau.
//
// White-noise spectra (vacuum input = 1):
//   Ap_in, Aq_in : rotated diag(e^{-2r}, e^{+2r})
//   F2x, F2y     : N gamma / 2
//   frx, fry     : N gamma0 / 2

#include "sqt/params.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace sqt {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat2 = Eigen::Matrix2d;

namespace state {
inline constexpr int Jx = 0, Jy = 1, X2 = 2, Y2 = 3, Ap = 4, Aq = 5;
}
namespace input {
inline constexpr int Ap = 0, Aq = 1, F2x = 2, F2y = 3, frx = 4, fry = 5;
}

struct LinearModel {
    Mat6 drift = Mat6::Zero();
    Mat6 input_coupling = Mat6::Zero();
    Mat6 input_psd = Mat6::Zero();
    double n_norm = 0.0;   ///< |<Jz>|/2 = N/4, coherent-state spin variance
    double mirror_T = 0.0;
    double r_squeeze = 0.0;

    Mat6 diffusion() const { return input_coupling * input_psd * input_coupling.transpose(); }
};

inline LinearModel build_model(const SystemParams& p)
{
    validate(p);
    LinearModel m;
    Mat6& M = m.drift;
    Mat6& B = m.input_coupling;
    using namespace state;

    const double om = p.omega;
    const double gN2 = 0.5 * p.g * p.n_atoms;
    const double g2tau = 2.0 * p.g / p.tau;

    M(Jx, Jx) = -p.gamma0;
    M(Jx, Jy) = -p.delta_2ph;
    M(Jx, Y2) = -om;
    M(Jy, Jy) = -p.gamma0;
    M(Jy, Jx) = p.delta_2ph;
    M(Jy, X2) = om;

    M(X2, X2) = -p.gamma;
    M(X2, Y2) = p.delta_1;
    M(X2, Jy) = -om;
    M(X2, Aq) = -gN2;
    M(Y2, Y2) = -p.gamma;
    M(Y2, X2) = -p.delta_1;
    M(Y2, Jx) = om;
    M(Y2, Ap) = gN2;

    M(Ap, Ap) = -p.kappa;
    M(Ap, Aq) = p.delta_c;
    M(Ap, Y2) = -g2tau;
    M(Aq, Aq) = -p.kappa;
    M(Aq, Ap) = -p.delta_c;
    M(Aq, X2) = g2tau;

    const double in = std::sqrt(2.0 * p.kappa / p.tau);
    B(Ap, input::Ap) = in;
    B(Aq, input::Aq) = in;
    B(X2, input::F2x) = 1.0;
    B(Y2, input::F2y) = 1.0;
    B(Jx, input::frx) = 1.0;
    B(Jy, input::fry) = 1.0;

    const double c = std::cos(p.squeezed_quadrature_angle);
    const double s = std::sin(p.squeezed_quadrature_angle);
    Mat2 rot;
    rot << c, -s, s, c;
    const Mat2 sq = Eigen::Vector2d(std::exp(-2.0 * p.r_squeeze), std::exp(2.0 * p.r_squeeze)).asDiagonal();
    m.input_psd.block<2, 2>(input::Ap, input::Ap) = rot * sq * rot.transpose();
    m.input_psd(input::F2x, input::F2x) = p.n_atoms * p.gamma / 2.0;
    m.input_psd(input::F2y, input::F2y) = p.n_atoms * p.gamma / 2.0;
    m.input_psd(input::frx, input::frx) = p.n_atoms * p.gamma0 / 2.0;
    m.input_psd(input::fry, input::fry) = p.n_atoms * p.gamma0 / 2.0;

    m.n_norm = p.n_atoms / 4.0;
    m.mirror_T = 2.0 * p.kappa * p.tau;
    m.r_squeeze = p.r_squeeze;
    return m;
}

inline Eigen::Matrix<std::complex<double>, 6, 1> drift_eigenvalues(const LinearModel& m)
{
    Eigen::EigenSolver<Mat6> es(m.drift, false);
    return es.eigenvalues();
}

inline double max_real_eigenvalue(const LinearModel& m)
{
    return drift_eigenvalues(m).real().maxCoeff();
}

inline bool is_stable(const LinearModel& m) { return max_real_eigenvalue(m) < 0.0; }

/// Output quadratures (Ap_out, Aq_out) = state_rows * x + input_rows * u,
/// from A2_out = sqrt(T) A2 - A2_in.
struct OutputFieldMap {
    Eigen::Matrix<double, 2, 6> state_rows = Eigen::Matrix<double, 2, 6>::Zero();
    Eigen::Matrix<double, 2, 6> input_rows = Eigen::Matrix<double, 2, 6>::Zero();
};

inline OutputFieldMap output_field_map(const LinearModel& m)
{
    OutputFieldMap out;
    const double sqrt_t = std::sqrt(m.mirror_T);
    out.state_rows(0, state::Ap) = sqrt_t;
    out.state_rows(1, state::Aq) = sqrt_t;
    out.input_rows(0, input::Ap) = -1.0;
    out.input_rows(1, input::Aq) = -1.0;
    return out;
}

} // namespace sqt
