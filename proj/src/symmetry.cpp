#include "scatter1d/symmetry.hpp"

#include <cmath>
#include <limits>

#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

Complex require_d(const ScatterAmplitudes& a) {
    const Complex d = a.t_l * a.t_r - a.r_l * a.r_r;
    if (std::abs(d) <= kZeroGuard)
        throw Error(ErrorCode::DegenerateD,
                    "D(k) ~ 0: the k -> -k amplitude transform is undefined", std::abs(d));
    return d;
}

}  // namespace

TransferMatrix transform_transfer(const TransferMatrix& m, Transform t) {
    switch (t) {
        case Transform::ReverseK:
            return make_transfer(m.k, sigma1_conjugate(m.m), !m.reversed_k);
        case Transform::Parity:
            return make_transfer(m.k, sigma1_conjugate(m.m.inverse()), m.reversed_k);
        case Transform::TimeReversal:
            return make_transfer(m.k, sigma1_conjugate(m.m.conj()), m.reversed_k);
        case Transform::PT:
            return make_transfer(m.k, m.m.inverse().conj(), m.reversed_k);
    }
    throw Error(ErrorCode::UsageError, "unknown transform");
}

ScatterAmplitudes transform_amplitudes(const ScatterAmplitudes& a, Transform t) {
    ScatterAmplitudes out = a;
    switch (t) {
        case Transform::ReverseK: {
            const Complex d = require_d(a);
            out.reversed_k = !a.reversed_k;
            out.r_l = -a.r_r / d;
            out.t_l = a.t_l / d;
            out.r_r = -a.r_l / d;
            out.t_r = a.t_r / d;
            return out;
        }
        case Transform::Parity:
            out.r_l = a.r_r;
            out.r_r = a.r_l;
            out.t_l = a.t_r;
            out.t_r = a.t_l;
            return out;
        case Transform::TimeReversal: {
            const Complex dc = std::conj(require_d(a));
            out.r_l = -std::conj(a.r_r) / dc;
            out.t_l = std::conj(a.t_l) / dc;
            out.r_r = -std::conj(a.r_l) / dc;
            out.t_r = std::conj(a.t_r) / dc;
            return out;
        }
        case Transform::PT: {
            const Complex dc = std::conj(require_d(a));
            out.r_l = -std::conj(a.r_l) / dc;
            out.t_l = std::conj(a.t_r) / dc;
            out.r_r = -std::conj(a.r_r) / dc;
            out.t_r = std::conj(a.t_l) / dc;
            return out;
        }
    }
    throw Error(ErrorCode::UsageError, "unknown transform");
}

bool is_time_reversal_invariant(const TransferMatrix& m, double eps) {
    return max_abs_diff(m.m.conj(), sigma1_conjugate(m.m)) <= eps;
}

bool is_pt_symmetric_system(const TransferMatrix& m, double eps) {
    return max_abs_diff(m.m.conj() * m.m, Mat2::identity()) <= eps;
}

SymmetryResiduals derived_symmetry_relations(const TransferMatrix& m) {
    SymmetryResiduals r;
    r.time_reversal = std::abs(std::conj(m.m.a11) - m.m.a22);
    const Complex d = m.m.det();
    r.pt = std::abs(d) <= kZeroGuard
               ? std::numeric_limits<double>::quiet_NaN()
               : std::abs(std::conj(m.m.a11) - m.m.a22 / d);
    return r;
}

}  // namespace scatter1d
