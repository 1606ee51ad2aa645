#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace scatter1d {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// 2x2 complex matrix, row-major entries. This is the only linear algebra the
/// transfer/scattering formalism needs, so it stays a plain struct.
struct Mat2 {
    Complex a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    static Mat2 identity() { return {}; }

    Complex det() const { return a11 * a22 - a12 * a21; }

    Mat2 inverse() const {
        const Complex d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Mat2 conj() const {
        return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)};
    }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
                l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
    }
};

/// sigma1 * m * sigma1 (sigma1 = [[0,1],[1,0]]): swaps both indices.
inline Mat2 sigma1_conjugate(const Mat2& m) { return {m.a22, m.a21, m.a12, m.a11}; }

inline double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                    std::max(std::abs(m.a21), std::abs(m.a22)));
}

inline double max_abs_diff(const Mat2& l, const Mat2& r) {
    return std::max(std::max(std::abs(l.a11 - r.a11), std::abs(l.a12 - r.a12)),
                    std::max(std::abs(l.a21 - r.a21), std::abs(l.a22 - r.a22)));
}

inline bool all_finite(const Mat2& m) {
    auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(m.a11) && ok(m.a12) && ok(m.a21) && ok(m.a22);
}

}  // namespace scatter1d
