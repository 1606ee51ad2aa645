#pragma once

#include "scatter1d/scattering.hpp"
#include "scatter1d/transfer.hpp"

namespace scatter1d {

/// The four discrete transforms on scattering data. On transfer matrices:
///   ReverseK:     M -> sigma1 M sigma1            (the matrix of -k)
///   Parity:       M -> sigma1 M^{-1} sigma1
///   TimeReversal: M -> sigma1 M* sigma1
///   PT:           M -> (M^{-1})*
/// PT == Parity after TimeReversal in either order; all four are involutions.
enum class Transform { ReverseK, Parity, TimeReversal, PT };

/// Parity/PT need |det M| above a guard to invert; ReverseK toggles the
/// reversed_k flag (the stored k stays positive).
TransferMatrix transform_transfer(const TransferMatrix& m, Transform t);

/// Amplitude-level action, with D = t_l t_r - r_l r_r of the input:
///   ReverseK:     r_l -> -r_r/D, t_l -> t_l/D, r_r -> -r_l/D, t_r -> t_r/D
///   Parity:       swap l <-> r
///   TimeReversal: r_l -> -conj(r_r)/conj(D), t_l -> conj(t_l)/conj(D), ...
///   PT:           r_l -> -conj(r_l)/conj(D), t_l -> conj(t_r)/conj(D), ...
/// ReverseK/TimeReversal/PT throw DegenerateD when |D| <= kZeroGuard.
ScatterAmplitudes transform_amplitudes(const ScatterAmplitudes& a, Transform t);

/// max|M* - sigma1 M sigma1| <= eps: the matrix is invariant under the
/// time-reversal transform (true for every real potential).
bool is_time_reversal_invariant(const TransferMatrix& m, double eps);

/// max|M* M - I| <= eps: invariance under the PT transform. Note this is a
/// matrix condition at one k; real but parity-asymmetric potentials fail it.
bool is_pt_symmetric_system(const TransferMatrix& m, double eps);

/// Scalar necessary conditions: time_reversal = |conj(M11) - M22| and
/// pt = |conj(M11) - M22/detM|. With det M = 1 the two coincide, so these do
/// not separate real from PT-symmetric systems; the matrix-level checks do.
struct SymmetryResiduals {
    double time_reversal{};
    double pt{};
};

SymmetryResiduals derived_symmetry_relations(const TransferMatrix& m);

}  // namespace scatter1d
