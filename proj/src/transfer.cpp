#include "scatter1d/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

void require_positive_k(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw Error(ErrorCode::NonpositiveWavenumber, "wavenumber must be positive and finite");
}

void require_nonzero_k(double k) {
    if (k == 0.0 || !std::isfinite(k))
        throw Error(ErrorCode::NonpositiveWavenumber, "wavenumber must be nonzero and finite");
}

// Interior wavenumber sqrt(k^2 - v0), branch Im kappa >= 0 and Re kappa >= 0
// when Im kappa == 0. The layer propagator is even in kappa, so the branch
// only fixes the reported convention.
Complex interior_kappa(Complex v0, double k) {
    Complex kappa = std::sqrt(Complex{k * k, 0.0} - v0);
    if (kappa.imag() < 0.0 || (kappa.imag() == 0.0 && kappa.real() < 0.0)) kappa = -kappa;
    return kappa;
}

}  // namespace

TransferMatrix make_transfer(double k, const Mat2& m, bool reversed_k) {
    require_positive_k(k);
    if (!all_finite(m))
        throw Error(ErrorCode::SingularTransferMatrix, "transfer matrix entries must be finite");
    const Complex d = m.det();
    if (d == Complex{})
        throw Error(ErrorCode::SingularTransferMatrix, "transfer matrix must have det != 0", 0.0);
    return {k, reversed_k, m};
}

namespace detail {

Mat2 delta_matrix(Complex g, double x0, double k) {
    const Complex c = g / (2.0 * k) * kI;  // ig/2k
    // Matching at the origin: psi continuous, psi' jumps by g psi.
    Mat2 m{1.0 - c, -c, c, 1.0 + c};
    if (x0 != 0.0) {
        // Conjugation by diag(e^{ikx0}, e^{-ikx0}) re-centers the waves.
        const Complex ph = std::exp(Complex{0.0, 2.0 * k * x0});
        m.a12 /= ph;
        m.a21 *= ph;
    }
    return m;
}

Mat2 layer_matrix(Complex v0, double a, double b, double k) {
    const double len = b - a;
    const Complex kappa = interior_kappa(v0, k);
    const Complex z = kappa * len;

    // Fundamental matrix of psi'' = -kappa^2 psi over the layer, acting on
    // (psi, psi'). Even in kappa; at kappa -> 0 the interior solutions are
    // linear and the propagator is [[1, len], [0, 1]].
    Complex p11, p12, p21, p22;
    if (std::abs(z) < 1e-8) {
        p11 = 1.0;
        p12 = len;
        p21 = 0.0;
        p22 = 1.0;
    } else {
        const Complex c = std::cos(z);
        const Complex s = std::sin(z);
        p11 = c;
        p12 = s / kappa;
        p21 = -kappa * s;
        p22 = c;
    }

    // M = Winv(k, b) * P * W(k, a) where W(k, x) maps plane-wave coefficients
    // to (psi, psi').
    const Complex ik{0.0, k};
    const Complex ea = std::exp(Complex{0.0, k * a});
    const Complex eb = std::exp(Complex{0.0, k * b});

    // P * W(k,a) columns: column 1 from (e^{ika}, ik e^{ika}), column 2 from
    // (e^{-ika}, -ik e^{-ika}).
    const Complex u1 = (p11 + p12 * ik) * ea, w1 = (p21 + p22 * ik) * ea;
    const Complex u2 = (p11 - p12 * ik) / ea, w2 = (p21 - p22 * ik) / ea;

    // Winv(k,b) row action: A = e^{-ikb}(psi + psi'/(ik))/2, B = e^{ikb}(psi - psi'/(ik))/2.
    Mat2 m;
    m.a11 = 0.5 * (u1 + w1 / ik) / eb;
    m.a12 = 0.5 * (u2 + w2 / ik) / eb;
    m.a21 = 0.5 * (u1 - w1 / ik) * eb;
    m.a22 = 0.5 * (u2 - w2 / ik) * eb;
    return m;
}

Mat2 analytic_matrix(const Potential& p, double k) {
    Mat2 m = Mat2::identity();
    switch (p.kind()) {
        case Potential::Kind::Deltas:
            for (const auto& t : p.delta_terms()) m = delta_matrix(t.g, t.x, k) * m;
            break;
        case Potential::Kind::Layers:
            for (const auto& t : p.layer_terms()) m = layer_matrix(t.v, t.a, t.b, k) * m;
            break;
        case Potential::Kind::Grid:
            throw Error(ErrorCode::InvalidPotential,
                        "grid models have no closed-form transfer matrix; use transfer_numeric");
    }
    return m;
}

namespace {

struct State {
    Complex psi, dpsi;
};

// One classical RK4 step of psi'' = (v(x) - k^2) psi, with v given by vfun.
template <class VFun>
State rk4_step(const VFun& vfun, double k2, double x, double h, const State& s) {
    auto f = [&](double xx, const State& u) -> State {
        return {u.dpsi, (vfun(xx) - k2) * u.psi};
    };
    const State f1 = f(x, s);
    const State s2{s.psi + 0.5 * h * f1.psi, s.dpsi + 0.5 * h * f1.dpsi};
    const State f2 = f(x + 0.5 * h, s2);
    const State s3{s.psi + 0.5 * h * f2.psi, s.dpsi + 0.5 * h * f2.dpsi};
    const State f3 = f(x + 0.5 * h, s3);
    const State s4{s.psi + h * f3.psi, s.dpsi + h * f3.dpsi};
    const State f4 = f(x + h, s4);
    return {s.psi + h / 6.0 * (f1.psi + 2.0 * f2.psi + 2.0 * f3.psi + f4.psi),
            s.dpsi + h / 6.0 * (f1.dpsi + 2.0 * f2.dpsi + 2.0 * f3.dpsi + f4.dpsi)};
}

// Breakpoints where the right-hand side loses smoothness: layer edges or
// grid nodes. Steps never straddle one, so RK4 keeps full order.
std::vector<double> integration_mesh(const Potential& p) {
    std::vector<double> mesh;
    if (p.kind() == Potential::Kind::Layers) {
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
        mesh.reserve(n);
        for (size_t j = 0; j + 1 < n; ++j) mesh.push_back(g.x_min + static_cast<double>(j) * d);
        mesh.push_back(g.x_max);
    }
    return mesh;
}

struct IntegrationRun {
    State s1, s2;                                   // basis solutions
    std::vector<std::pair<double, Complex>> wronskian;  // (x, W) per accepted step
    double x_end{};
};

IntegrationRun integrate_basis(const Potential& p, double k, const IntegratorConfig& cfg,
                               bool record_wronskian) {
    if (p.kind() == Potential::Kind::Deltas)
        throw Error(ErrorCode::InvalidPotential,
                    "delta potentials cannot be integrated pointwise; use the closed forms");
    if (cfg.method != "rk4")
        throw Error(ErrorCode::UsageError, "unknown integrator method: " + cfg.method);

    const double kabs = std::abs(k);
    const double h = cfg.h > 0.0 ? cfg.h : default_step(p, kabs);
    const double kappa_max = std::sqrt(kabs * kabs + p.max_abs_value());
    if (h * std::max(kabs, kappa_max) > 0.5)
        throw Error(ErrorCode::StepTooLarge,
                    "integrator step too large for this wavenumber/potential", h);

    std::vector<double> mesh = integration_mesh(p);
    if (mesh.empty()) mesh.push_back(0.0);
    const double k2 = k * k;
    const double x0 = mesh.front();

    IntegrationRun run;
    const Complex e0 = std::exp(Complex{0.0, k * x0});
    run.s1 = {e0, Complex{0.0, k} * e0};
    run.s2 = {1.0 / e0, -Complex{0.0, k} / e0};

    auto wronskian = [](const State& a, const State& b) {
        return a.psi * b.dpsi - a.dpsi * b.psi;
    };
    if (record_wronskian) run.wronskian.emplace_back(x0, wronskian(run.s1, run.s2));

    // Layer values are constant inside a segment but jump at its edges, so
    // sample them once at the midpoint; grids are continuous and are
    // evaluated pointwise.
    const bool piecewise_const = p.kind() == Potential::Kind::Layers;
    for (size_t seg = 0; seg + 1 < mesh.size(); ++seg) {
        const double lo = mesh[seg], hi = mesh[seg + 1];
        const double len = hi - lo;
        if (len <= 0.0) continue;
        const Complex v_mid = piecewise_const ? evaluate(p, 0.5 * (lo + hi)) : Complex{};
        auto vfun = [&](double xx) { return piecewise_const ? v_mid : evaluate(p, xx); };
        const int steps = std::max(1, static_cast<int>(std::ceil(len / h - 1e-12)));
        const double hh = len / steps;
        for (int i = 0; i < steps; ++i) {
            const double x = lo + hh * i;
            run.s1 = rk4_step(vfun, k2, x, hh, run.s1);
            run.s2 = rk4_step(vfun, k2, x, hh, run.s2);
            if (record_wronskian)
                run.wronskian.emplace_back(x + hh, wronskian(run.s1, run.s2));
        }
    }
    run.x_end = mesh.back();
    return run;
}

}  // namespace

Mat2 numeric_matrix(const Potential& p, double k, const IntegratorConfig& cfg) {
    require_nonzero_k(k);
    const IntegrationRun run = integrate_basis(p, k, cfg, false);

    // Plane-wave matching at the right edge: A = e^{-ikx}(psi + psi'/(ik))/2,
    // B = e^{ikx}(psi - psi'/(ik))/2. Columns correspond to the (1,0), (0,1)
    // initial coefficient vectors.
    const Complex ik{0.0, k};
    const Complex e_end = std::exp(Complex{0.0, k * run.x_end});
    Mat2 m;
    m.a11 = 0.5 * (run.s1.psi + run.s1.dpsi / ik) / e_end;
    m.a21 = 0.5 * (run.s1.psi - run.s1.dpsi / ik) * e_end;
    m.a12 = 0.5 * (run.s2.psi + run.s2.dpsi / ik) / e_end;
    m.a22 = 0.5 * (run.s2.psi - run.s2.dpsi / ik) * e_end;
    return m;
}

}  // namespace detail

TransferMatrix transfer_delta(Complex g, double x0, double k) {
    require_positive_k(k);
    if (!std::isfinite(x0) || !std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw Error(ErrorCode::InvalidPotential, "delta parameters must be finite");
    return make_transfer(k, detail::delta_matrix(g, x0, k));
}

TransferMatrix transfer_layer(Complex v0, double a, double b, double k) {
    require_positive_k(k);
    if (!(a < b)) throw Error(ErrorCode::InvalidPotential, "layer requires a < b");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(v0.real()) ||
        !std::isfinite(v0.imag()))
        throw Error(ErrorCode::InvalidPotential, "layer parameters must be finite");
    return make_transfer(k, detail::layer_matrix(v0, a, b, k));
}

TransferMatrix transfer_numeric(const Potential& p, double k, const IntegratorConfig& cfg) {
    require_positive_k(k);
    return make_transfer(k, detail::numeric_matrix(p, k, cfg));
}

TransferMatrix analytic_transfer(const Potential& p, double k) {
    require_positive_k(k);
    return make_transfer(k, detail::analytic_matrix(p, k));
}

TransferMatrix compose(const TransferMatrix& m_left, const TransferMatrix& m_right) {
    const double tol = 1e-12 * std::max(1.0, m_left.k);
    if (std::abs(m_left.k - m_right.k) > tol || m_left.reversed_k != m_right.reversed_k)
        throw Error(ErrorCode::WavenumberMismatch,
                    "compose requires both factors at the same wavenumber");
    return make_transfer(m_left.k, m_right.m * m_left.m, m_left.reversed_k);
}

AsymptoticCoeffs apply(const TransferMatrix& m, Complex a_minus, Complex b_minus) {
    return {a_minus, b_minus, m.m.a11 * a_minus + m.m.a12 * b_minus,
            m.m.a21 * a_minus + m.m.a22 * b_minus};
}

std::vector<std::pair<double, Complex>> wronskian_profile(const Potential& p, double k,
                                                          const IntegratorConfig& cfg) {
    require_positive_k(k);
    return detail::integrate_basis(p, k, cfg, true).wronskian;
}

double default_step(const Potential& p, double k) {
    return std::min({0.01, 0.1 / std::max(k, 1.0), 0.1 / std::sqrt(p.max_abs_value() + 1.0)});
}

}  // namespace scatter1d
