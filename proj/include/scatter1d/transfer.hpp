#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scatter1d/complex2.hpp"
#include "scatter1d/potential.hpp"

namespace scatter1d {

/// Transfer matrix at wavenumber k > 0: M maps the plane-wave coefficients
/// (A-, B-) of psi = A e^{ikx} + B e^{-ikx} on the left of the support to
/// (A+, B+) on the right. Entries are stored for the signed wavenumber
/// `reversed_k ? -k : k`; the stored k itself stays positive so downstream
/// preconditions never see a negative wavenumber. det M != 0 always; local
/// potentials give det M == 1 (checked in tests, not assumed here).
struct TransferMatrix {
    double k{};
    bool reversed_k{false};
    Mat2 m{};

    Complex det() const { return m.det(); }
    double signed_k() const { return reversed_k ? -k : k; }
};

/// Validates entries (finite, det != 0) and k > 0.
TransferMatrix make_transfer(double k, const Mat2& m, bool reversed_k = false);

struct AsymptoticCoeffs {
    Complex a_minus{}, b_minus{};  // coefficients of e^{ikx}, e^{-ikx} as x -> -inf
    Complex a_plus{}, b_plus{};    // same as x -> +inf
};

struct IntegratorConfig {
    double h{0.0};                // step size, 0 selects the automatic rule
    std::string method{"rk4"};    // classical fourth-order Runge-Kutta
};

/// Closed form for g * delta(x - x0). The x0 != 0 case conjugates the origin
/// matrix by diag(e^{ikx0}, e^{-ikx0}).
TransferMatrix transfer_delta(Complex g, double x0, double k);

/// Closed form for a constant layer v0 on [a, b] with interior wavenumber
/// kappa = sqrt(k^2 - v0), branch Im kappa >= 0 (Re kappa >= 0 on the real
/// axis). The propagator is even in kappa; at |kappa|(b-a) < 1e-8 the linear
/// interior solutions alpha + beta x are used explicitly.
TransferMatrix transfer_layer(Complex v0, double a, double b, double k);

/// RK4 integration of -psi'' + v psi = k^2 psi across the support of a grid
/// or layers model, with steps aligned to grid nodes / layer edges so the
/// right-hand side stays smooth within every step. Deltas are rejected: they
/// have no pointwise samples and always take the closed-form path.
TransferMatrix transfer_numeric(const Potential& p, double k,
                                const IntegratorConfig& cfg = {});

/// Composed closed-form matrix for a deltas or layers model (identity for an
/// empty model); grids take transfer_numeric instead.
TransferMatrix analytic_transfer(const Potential& p, double k);

/// Chains two pieces whose supports sit left-to-right (caller's
/// responsibility): returns m_right * m_left as a matrix product.
TransferMatrix compose(const TransferMatrix& m_left, const TransferMatrix& m_right);

AsymptoticCoeffs apply(const TransferMatrix& m, Complex a_minus, Complex b_minus);

/// (x, W) samples of the Wronskian of the two integrated basis solutions at
/// every accepted step. W is exactly -2ik for the true solutions; the drift
/// measures integrator error.
std::vector<std::pair<double, Complex>> wronskian_profile(const Potential& p, double k,
                                                          const IntegratorConfig& cfg = {});

/// min(0.01, 0.1/max(k,1), 0.1/sqrt(max|v| + 1)).
double default_step(const Potential& p, double k);

namespace detail {

// Builders valid for either sign of k (k != 0). These back the independent
// re-evaluation of amplitudes at -k; the public entry points require k > 0.
Mat2 delta_matrix(Complex g, double x0, double k);
Mat2 layer_matrix(Complex v0, double a, double b, double k);
Mat2 analytic_matrix(const Potential& p, double k);
Mat2 numeric_matrix(const Potential& p, double k, const IntegratorConfig& cfg);

}  // namespace detail

}  // namespace scatter1d
