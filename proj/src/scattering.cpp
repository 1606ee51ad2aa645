#include "scatter1d/scattering.hpp"

#include <cmath>

#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

constexpr double kDetGuard = 1e-12;

}  // namespace

ScatterAmplitudes amplitudes_from_transfer(const TransferMatrix& t) {
    const Complex m22 = t.m.a22;
    if (std::abs(m22) <= kZeroGuard)
        throw Error(ErrorCode::SpectralSingularity,
                    "transfer matrix has m22 ~ 0: scattering amplitudes diverge",
                    std::abs(m22));
    ScatterAmplitudes a;
    a.k = t.k;
    a.reversed_k = t.reversed_k;
    a.r_l = -t.m.a21 / m22;
    a.t_l = t.m.det() / m22;
    a.r_r = t.m.a12 / m22;
    a.t_r = 1.0 / m22;
    return a;
}

TransferMatrix transfer_from_amplitudes(const ScatterAmplitudes& a) {
    if (std::abs(a.t_r) <= kZeroGuard)
        throw Error(ErrorCode::ZeroTransmission,
                    "zero right transmission: transfer matrix entries diverge",
                    std::abs(a.t_r));
    const Complex d = a.t_l * a.t_r - a.r_l * a.r_r;
    Mat2 m;
    m.a11 = d / a.t_r;
    m.a12 = a.r_r / a.t_r;
    m.a21 = -a.r_l / a.t_r;
    m.a22 = 1.0 / a.t_r;
    return make_transfer(a.k, m, a.reversed_k);
}

ScatteringMatrix smatrix_from_amplitudes(const ScatterAmplitudes& a) {
    return {a.k, a.reversed_k, a.t_l, a.r_r, a.r_l, a.t_r};
}

Dvalue d_value(const ScatterAmplitudes& a) {
    return {a.t_l * a.t_r - a.r_l * a.r_r};
}

JostAsymptotics jost_coefficients(const TransferMatrix& t) {
    const Complex d = t.m.det();
    if (std::abs(d) <= kDetGuard)
        throw Error(ErrorCode::SingularTransferMatrix,
                    "transfer matrix determinant ~ 0: cannot form left asymptotics",
                    std::abs(d));
    JostAsymptotics j;
    // psi_minus is e^{-ikx} to the left of the support; its right asymptotics
    // follow from propagating the coefficient vector (0, 1).
    j.psi_minus_right = {t.m.a12, t.m.a22};
    // psi_plus is e^{ikx} to the right of the support; its left asymptotics
    // solve M (a, b)^T = (1, 0)^T.
    j.psi_plus_left = {t.m.a22 / d, -t.m.a21 / d};
    return j;
}

}  // namespace scatter1d
