#pragma once

// Test-side oracles computed by methods independent of the library paths:
// direct matching systems solved by Gaussian elimination, closed-form
// amplitude formulas, and a right-to-left integrator. Production code builds
// transfer matrices left-to-right and reads amplitudes off matrix entries;
// nothing here touches those entries.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scatter1d/potential.hpp"

namespace oracles {

using Complex = std::complex<double>;

struct Amplitudes {
    Complex r_l{}, t_l{}, r_r{}, t_r{};
};

// Gaussian elimination with partial pivoting for small complex systems.
inline std::vector<Complex> solve_dense(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) == 0.0) throw std::runtime_error("singular oracle system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (size_t row = col + 1; row < n; ++row) {
            const Complex f = a[row][col] / a[col][col];
            for (size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    std::vector<Complex> x(n);
    for (size_t i = n; i-- > 0;) {
        Complex s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Closed-form amplitudes of g * delta(x - x0).
inline Amplitudes delta_amplitudes(Complex g, double x0, double k) {
    const Complex ig = Complex{0.0, 1.0} * g;
    const Complex denom = 2.0 * k + ig;
    const Complex r = -ig / denom;
    const Complex t = 2.0 * k / denom;
    const Complex ph = std::exp(Complex{0.0, 2.0 * k * x0});
    return {r * ph, t, r / ph, t};
}

namespace detail {

inline Complex branch_kappa(Complex v0, double k) {
    Complex kappa = std::sqrt(Complex{k * k, 0.0} - v0);
    if (kappa.imag() < 0.0 || (kappa.imag() == 0.0 && kappa.real() < 0.0)) kappa = -kappa;
    return kappa;
}

}  // namespace detail

// Single constant layer v0 on [a, b]: match psi and psi' at both edges.
// With unknown order (outer-left coefficient, alpha, beta, outer-right
// coefficient), incidence from the left and from the right share the same
// interface matrix; only the inhomogeneous side changes.
inline Amplitudes layer_amplitudes(Complex v0, double a, double b, double k) {
    const Complex i{0.0, 1.0};
    const Complex kap = detail::branch_kappa(v0, k);
    const Complex ea_p = std::exp(i * kap * a), ea_m = std::exp(-i * kap * a);
    const Complex eb_p = std::exp(i * kap * b), eb_m = std::exp(-i * kap * b);
    const Complex ka_p = std::exp(i * k * a), ka_m = std::exp(-i * k * a);
    const Complex kb_p = std::exp(i * k * b), kb_m = std::exp(-i * k * b);

    const std::vector<std::vector<Complex>> A = {
        {-ka_m, ea_p, ea_m, 0.0},
        {i * k * ka_m, i * kap * ea_p, -i * kap * ea_m, 0.0},
        {0.0, eb_p, eb_m, -kb_p},
        {0.0, i * kap * eb_p, -i * kap * eb_m, -i * k * kb_p},
    };

    Amplitudes out;
    {
        // e^{ikx} + r e^{-ikx} | alpha, beta | t e^{ikx}; unknowns (r, a, b, t)
        const auto x = solve_dense(A, {ka_p, i * k * ka_p, 0.0, 0.0});
        out.r_l = x[0];
        out.t_l = x[3];
    }
    {
        // t e^{-ikx} | alpha, beta | e^{-ikx} + r e^{ikx}; unknowns (t, a, b, r)
        const auto x = solve_dense(A, {0.0, 0.0, kb_m, -i * k * kb_m});
        out.t_r = x[0];
        out.r_r = x[3];
    }
    return out;
}

// Two delta spikes g1 at x1 < g2 at x2: continuity plus the derivative jump
// psi'(xj+) - psi'(xj-) = gj psi(xj) at each spike. Unknown order as above,
// so both incidence directions share the matrix.
inline Amplitudes two_delta_amplitudes(Complex g1, double x1, Complex g2, double x2, double k) {
    const Complex i{0.0, 1.0};
    const Complex ik = i * k;
    const Complex e1p = std::exp(ik * x1), e1m = std::exp(-ik * x1);
    const Complex e2p = std::exp(ik * x2), e2m = std::exp(-ik * x2);

    const std::vector<std::vector<Complex>> A = {
        {-e1m, e1p, e1m, 0.0},
        {(ik - g1) * e1m, ik * e1p, -ik * e1m, 0.0},
        {0.0, e2p, e2m, -e2p},
        {0.0, -ik * e2p, ik * e2m, (ik - g2) * e2p},
    };

    Amplitudes out;
    {
        // e^{ikx} + r e^{-ikx} | c+, c- | t e^{ikx}; unknowns (r, c+, c-, t)
        const auto x = solve_dense(A, {e1p, (g1 + ik) * e1p, 0.0, 0.0});
        out.r_l = x[0];
        out.t_l = x[3];
    }
    {
        // t e^{-ikx} | c+, c- | e^{-ikx} + r e^{ikx}; unknowns (t, c+, c-, r)
        const auto x = solve_dense(A, {0.0, 0.0, e2m, (g2 + ik) * e2m});
        out.t_r = x[0];
        out.r_r = x[3];
    }
    return out;
}

// Right-to-left integration of psi'' = (v - k^2) psi starting from a pure
// transmitted wave e^{ikx} at the right edge; decomposing the solution at the
// left edge into A e^{ikx} + B e^{-ikx} gives t_l = 1/A and r_l = B/A.
inline std::pair<Complex, Complex> backward_left_amplitudes(const scatter1d::Potential& p,
                                                            double k, double h) {
    std::vector<double> mesh;
    if (p.kind() == scatter1d::Potential::Kind::Layers) {
        for (const auto& t : p.layer_terms()) {
            mesh.push_back(t.a);
            mesh.push_back(t.b);
        }
        std::sort(mesh.begin(), mesh.end());
        mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
    } else {
        const auto& g = p.grid_data();
        const size_t n = g.values.size();
        const double d = (g.x_max - g.x_min) / static_cast<double>(n - 1);
        for (size_t j = 0; j + 1 < n; ++j) mesh.push_back(g.x_min + static_cast<double>(j) * d);
        mesh.push_back(g.x_max);
    }

    const Complex i{0.0, 1.0};
    const double x_r = mesh.back();
    Complex psi = std::exp(i * k * x_r);
    Complex dpsi = i * k * psi;
    const double k2 = k * k;
    const bool piecewise_const = p.kind() == scatter1d::Potential::Kind::Layers;

    for (size_t seg = mesh.size() - 1; seg > 0; --seg) {
        const double hi = mesh[seg], lo = mesh[seg - 1];
        const Complex v_mid = piecewise_const ? scatter1d::evaluate(p, 0.5 * (lo + hi)) : 0.0;
        const auto v_at = [&](double x) {
            return piecewise_const ? v_mid : scatter1d::evaluate(p, x);
        };
        const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / h - 1e-12)));
        const double hh = -(hi - lo) / steps;
        double x = hi;
        for (int s = 0; s < steps; ++s) {
            const auto f = [&](double xx, Complex u, Complex du) {
                return std::array<Complex, 2>{du, (v_at(xx) - k2) * u};
            };
            const auto f1 = f(x, psi, dpsi);
            const auto f2 = f(x + 0.5 * hh, psi + 0.5 * hh * f1[0], dpsi + 0.5 * hh * f1[1]);
            const auto f3 = f(x + 0.5 * hh, psi + 0.5 * hh * f2[0], dpsi + 0.5 * hh * f2[1]);
            const auto f4 = f(x + hh, psi + hh * f3[0], dpsi + hh * f3[1]);
            psi += hh / 6.0 * (f1[0] + 2.0 * f2[0] + 2.0 * f3[0] + f4[0]);
            dpsi += hh / 6.0 * (f1[1] + 2.0 * f2[1] + 2.0 * f3[1] + f4[1]);
            x += hh;
        }
    }

    const double x_l = mesh.front();
    const Complex ik = i * k;
    const Complex A = 0.5 * std::exp(-ik * x_l) * (psi + dpsi / ik);
    const Complex B = 0.5 * std::exp(ik * x_l) * (psi - dpsi / ik);
    return {B / A, 1.0 / A};  // (r_l, t_l)
}

}  // namespace oracles
