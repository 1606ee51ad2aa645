#pragma once

#include <utility>

#include "scatter1d/complex2.hpp"
#include "scatter1d/transfer.hpp"

namespace scatter1d {

/// |M22| guard below which T = 1/M22 is treated as divergent, and |D| guard
/// below which the k -> -k amplitude transform is treated as undefined.
inline constexpr double kZeroGuard = 1e-10;

/// Left/right reflection and transmission amplitudes at one wavenumber, with
/// incoming normalizations fixed to 1. Like TransferMatrix, a quadruple that
/// belongs to -k keeps k positive and sets reversed_k.
struct ScatterAmplitudes {
    double k{};
    bool reversed_k{false};
    Complex r_l{}, r_r{}, t_l{}, t_r{};

    double signed_k() const { return reversed_k ? -k : k; }
};

/// S maps (A-, B+) to (A+, B-): S = [[t_l, r_r], [r_l, t_r]], det S = D(k).
struct ScatteringMatrix {
    double k{};
    bool reversed_k{false};
    Complex s11{}, s12{}, s21{}, s22{};

    Complex det() const { return s11 * s22 - s12 * s21; }
};

/// D(k) = t_l t_r - r_l r_r. Real zeros are coherent-perfect-absorption
/// points; as M11/M22 it vanishes exactly where M11 does.
struct Dvalue {
    Complex d{};
};

/// R^l = -M21/M22, T^l = detM/M22, R^r = M12/M22, T^r = 1/M22.
/// Throws SpectralSingularity when |M22| <= kZeroGuard.
ScatterAmplitudes amplitudes_from_transfer(const TransferMatrix& m);

/// Inverse dictionary M = [[D/t_r, r_r/t_r], [-r_l/t_r, 1/t_r]]; round-trips
/// with amplitudes_from_transfer to ~1e-14 away from singularities.
TransferMatrix transfer_from_amplitudes(const ScatterAmplitudes& a);

ScatteringMatrix smatrix_from_amplitudes(const ScatterAmplitudes& a);

Dvalue d_value(const ScatterAmplitudes& a);

/// Asymptotic plane-wave coefficients of the two Jost solutions, each pair
/// ordered (coefficient of e^{+ikx}, coefficient of e^{-ikx}):
///   psi_minus -> e^{-ikx} as x -> -inf, so its right coefficients are
///                (M12, M22);
///   psi_plus  -> e^{+ikx} as x -> +inf, so its left coefficients are
///                (M22/detM, -M21/detM).
/// Free space reproduces (0,1) and (1,0); with det M = 1 the Wronskian
/// W[psi_minus, psi_plus] = 2ik M22 at both ends.
struct JostAsymptotics {
    std::pair<Complex, Complex> psi_minus_right{};
    std::pair<Complex, Complex> psi_plus_left{};
};

JostAsymptotics jost_coefficients(const TransferMatrix& m);

}  // namespace scatter1d
