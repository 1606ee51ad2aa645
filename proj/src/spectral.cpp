#include "scatter1d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "json.hpp"
#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat2 build_matrix(const Potential& p, double signed_k, const IntegratorConfig& cfg) {
    if (p.kind() == Potential::Kind::Grid) return detail::numeric_matrix(p, signed_k, cfg);
    return detail::analytic_matrix(p, signed_k);
}

// |D(k)| = |M11|/|M22| for CPA targets (stays finite at transmission
// singularities of -k), |M22(k)| for spectral singularities. Non-finite
// values (0/0 corners) map to +inf so minima detection stays ordered.
double target_magnitude(const Potential& p, double k, SpectralTarget target,
                        const IntegratorConfig& cfg) {
    const Mat2 m = build_matrix(p, k, cfg);
    double value;
    if (target == SpectralTarget::SpectralSingularity) {
        value = std::abs(m.a22);
    } else {
        value = std::abs(m.a11) / std::abs(m.a22);
    }
    return std::isfinite(value) ? value : kInf;
}

}  // namespace

std::vector<Bracket> scan_minima(const Potential& p, const KGrid& grid, SpectralTarget target,
                                 const IntegratorConfig& cfg, double gate) {
    if (!(grid.k_min > 0.0) || !(grid.k_max > grid.k_min) || grid.points < 3)
        throw Error(ErrorCode::UsageError,
                    "scan grid requires 0 < k_min < k_max and at least 3 points");

    const int n = grid.points;
    std::vector<double> ks(n), vals(n);
    const double dk = (grid.k_max - grid.k_min) / (n - 1);
    for (int i = 0; i < n; ++i) {
        ks[i] = grid.k_min + dk * i;
        vals[i] = target_magnitude(p, ks[i], target, cfg);
    }

    std::vector<Bracket> out;
    for (int i = 1; i + 1 < n; ++i) {
        if (vals[i] < vals[i - 1] && vals[i] < vals[i + 1] && vals[i] < gate)
            out.push_back({ks[i - 1], ks[i + 1], ks[i], vals[i]});
    }
    return out;
}

namespace {

struct GoldenState {
    double best_x{}, best_f{kInf};
    double lo{}, hi{};

    void offer(double x, double f) {
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
};

}  // namespace

RefineResult refine_zero(const Potential& p, const Bracket& bracket, SpectralTarget target,
                         const IntegratorConfig& cfg, double eps_accept) {
    if (!(bracket.k_lo > 0.0) || !(bracket.k_hi > bracket.k_lo))
        throw Error(ErrorCode::BracketInvalid, "bracket requires 0 < k_lo < k_hi");
    if (eps_accept <= 0.0)
        eps_accept = p.kind() == Potential::Kind::Grid ? kAcceptNumeric : kAcceptAnalytic;

    const auto phi = [&](double k) { return target_magnitude(p, k, target, cfg); };

    // Golden-section pass: |target| has a V-shaped kink at a simple zero, so
    // interval shrinking alone reaches the zero linearly in the width.
    constexpr double kGolden = 0.6180339887498949;
    GoldenState st;
    st.lo = bracket.k_lo;
    st.hi = bracket.k_hi;
    double x1 = st.hi - kGolden * (st.hi - st.lo);
    double x2 = st.lo + kGolden * (st.hi - st.lo);
    double f1 = phi(x1), f2 = phi(x2);
    st.offer(x1, f1);
    st.offer(x2, f2);
    const double width_tol = 1e-13 * std::max(1.0, bracket.k_hi);
    for (int it = 0; it < 200 && st.hi - st.lo > width_tol; ++it) {
        if (f1 <= f2) {
            st.hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = st.hi - kGolden * (st.hi - st.lo);
            f1 = phi(x1);
            st.offer(x1, f1);
        } else {
            st.lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = st.lo + kGolden * (st.hi - st.lo);
            f2 = phi(x2);
            st.offer(x2, f2);
        }
    }

    // Parabolic polish on the squared magnitude, which is smooth through the
    // zero; each successful fit roughly squares the accuracy.
    {
        double xa = st.lo, xb = st.best_x, xc = st.hi;
        if (xb <= xa || xb >= xc) xb = 0.5 * (xa + xc);
        double pa = phi(xa), pb = phi(xb), pc = phi(xc);
        st.offer(xa, pa);
        st.offer(xb, pb);
        st.offer(xc, pc);
        double ya = pa * pa, yb = pb * pb, yc = pc * pc;
        for (int it = 0; it < 40; ++it) {
            const double d1 = (xb - xa) * (yb - yc);
            const double d2 = (xb - xc) * (yb - ya);
            const double denom = 2.0 * (d1 - d2);
            if (denom == 0.0 || !std::isfinite(denom)) break;
            const double u = xb - ((xb - xa) * d1 - (xb - xc) * d2) / denom;
            if (!(u > bracket.k_lo) || !(u < bracket.k_hi)) break;
            const double min_sep = 1e-17 * std::max(1.0, std::abs(xb));
            if (std::abs(u - xa) < min_sep || std::abs(u - xb) < min_sep ||
                std::abs(u - xc) < min_sep)
                break;
            const double fu = phi(u);
            st.offer(u, fu);
            const double yu = fu * fu;
            if (u < xb) {
                if (yu <= yb) {
                    xc = xb, yc = yb;
                    xb = u, yb = yu;
                } else {
                    xa = u, ya = yu;
                }
            } else {
                if (yu <= yb) {
                    xa = xb, ya = yb;
                    xb = u, yb = yu;
                } else {
                    xc = u, yc = yu;
                }
            }
        }
    }

    if (st.best_f > eps_accept) return NoZero{st.best_x, st.best_f};

    SpectralPoint pt;
    pt.kind = target;
    pt.k0 = st.best_x;
    pt.residual = st.best_f;
    if (target == SpectralTarget::CPA) {
        const TransferMatrix m = make_transfer(pt.k0, build_matrix(p, pt.k0, cfg));
        const ScatterAmplitudes a = amplitudes_from_transfer(m);
        pt.mode = cpa_mode(smatrix_from_amplitudes(a), std::max(eps_accept, st.best_f));
    } else {
        double t_near = 0.0;
        bool have = false;
        for (const double edge : {bracket.k_lo, bracket.k_hi}) {
            try {
                const ScatterAmplitudes a =
                    amplitudes_from_transfer(make_transfer(edge, build_matrix(p, edge, cfg)));
                t_near = std::max({t_near, std::abs(a.t_l), std::abs(a.t_r)});
                have = true;
            } catch (const Error&) {
                // Edge already below the zero guard: skip it.
            }
        }
        if (have) pt.transmission_near = t_near;
    }
    return pt;
}

std::pair<Complex, Complex> cpa_mode(const ScatteringMatrix& s, double eps_accept) {
    const double abs_det = std::abs(s.det());
    if (abs_det > eps_accept)
        throw Error(ErrorCode::NonsingularS,
                    "scattering matrix determinant is above the acceptance threshold", abs_det);

    // Null vector from the row with the larger norm: (a, b) . v = 0 has
    // v = (-b, a). A vanishing S (both rows ~ 0) leaves v unconstrained; the
    // convention below then returns (1, 0).
    const double row1 = std::norm(s.s11) + std::norm(s.s12);
    const double row2 = std::norm(s.s21) + std::norm(s.s22);
    Complex v1, v2;
    if (row1 >= row2) {
        v1 = -s.s12;
        v2 = s.s11;
    } else {
        v1 = -s.s22;
        v2 = s.s21;
    }
    double norm = std::sqrt(std::norm(v1) + std::norm(v2));
    if (norm == 0.0) {
        v1 = 1.0;
        v2 = 0.0;
        norm = 1.0;
    }
    v1 /= norm;
    v2 /= norm;

    // Canonical phase: the larger component becomes real positive; ties go to
    // the first component.
    const Complex anchor = std::abs(v2) > std::abs(v1) ? v2 : v1;
    const double mag = std::abs(anchor);
    if (mag > 0.0) {
        const Complex rot = std::conj(anchor) / mag;
        v1 *= rot;
        v2 *= rot;
    }
    return {v1, v2};
}

namespace {

struct DesignSpace {
    Potential tmpl;
    bool real_only{};

    size_t dim() const {
        const size_t n = tmpl.kind() == Potential::Kind::Deltas ? tmpl.delta_terms().size()
                                                                : tmpl.layer_terms().size();
        return real_only ? n : 2 * n;
    }

    std::vector<double> initial() const {
        std::vector<double> x;
        const auto push = [&](Complex c) {
            x.push_back(c.real());
            if (!real_only) x.push_back(c.imag());
        };
        if (tmpl.kind() == Potential::Kind::Deltas)
            for (const auto& t : tmpl.delta_terms()) push(t.g);
        else
            for (const auto& t : tmpl.layer_terms()) push(t.v);
        return x;
    }

    Potential assemble(const std::vector<double>& x) const {
        size_t j = 0;
        const auto next = [&]() -> Complex {
            const double re = x[j++];
            const double im = real_only ? 0.0 : x[j++];
            return {re, im};
        };
        if (tmpl.kind() == Potential::Kind::Deltas) {
            std::vector<DeltaTerm> terms = tmpl.delta_terms();
            for (auto& t : terms) t.g = next();
            return Potential::deltas(std::move(terms));
        }
        std::vector<LayerTerm> terms = tmpl.layer_terms();
        for (auto& t : terms) t.v = next();
        return Potential::layers(std::move(terms));
    }
};

// Standard Nelder-Mead on f, returning the best vertex found.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex, int max_iter) {
    const size_t n = simplex.front().size();
    std::vector<double> fv(simplex.size());
    for (size_t i = 0; i < simplex.size(); ++i) fv[i] = f(simplex[i]);

    const auto order = [&] {
        std::vector<size_t> idx(simplex.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex.swap(s2);
        fv.swap(f2);
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        double diam = 0.0;
        for (size_t i = 1; i < simplex.size(); ++i)
            for (size_t d = 0; d < n; ++d)
                diam = std::max(diam, std::abs(simplex[i][d] - simplex[0][d]));
        if (diam < 1e-13 && fv.back() - fv.front() < 1e-30) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i + 1 < simplex.size(); ++i)
            for (size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
        for (size_t d = 0; d < n; ++d) centroid[d] /= static_cast<double>(simplex.size() - 1);

        const auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (size_t d = 0; d < n; ++d)
                x[d] = centroid[d] + coeff * (simplex.back()[d] - centroid[d]);
            return x;
        };

        const std::vector<double> xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fv.front()) {
            const std::vector<double> xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex.back() = xe;
                fv.back() = fe;
            } else {
                simplex.back() = xr;
                fv.back() = fr;
            }
        } else if (fr < fv[fv.size() - 2]) {
            simplex.back() = xr;
            fv.back() = fr;
        } else {
            const bool outside = fr < fv.back();
            const std::vector<double> xc = blend(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv.back())) {
                simplex.back() = xc;
                fv.back() = fc;
            } else {
                for (size_t i = 1; i < simplex.size(); ++i) {
                    for (size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return {simplex.front(), fv.front()};
}

}  // namespace

DesignOutcome design_cpa(const Potential& tmpl, double k_target, const DesignConfig& cfg) {
    if (!(k_target > 0.0) || !std::isfinite(k_target))
        throw Error(ErrorCode::NonpositiveWavenumber, "design wavenumber must be positive");
    const size_t n_elems = tmpl.kind() == Potential::Kind::Deltas   ? tmpl.delta_terms().size()
                           : tmpl.kind() == Potential::Kind::Layers ? tmpl.layer_terms().size()
                                                                    : 0;
    if (tmpl.kind() == Potential::Kind::Grid || n_elems < 2 || n_elems > 4)
        throw Error(ErrorCode::InvalidPotential,
                    "design templates must be deltas or layers with 2 to 4 elements");
    if (cfg.restarts < 1) throw Error(ErrorCode::UsageError, "design needs restarts >= 1");

    const DesignSpace space{tmpl, cfg.real_couplings};
    const auto objective = [&](const std::vector<double>& x) -> double {
        for (double v : x)
            if (!std::isfinite(v)) return kInf;
        try {
            const Mat2 m = detail::analytic_matrix(space.assemble(x), k_target);
            const double m22 = std::abs(m.a22);
            if (m22 == 0.0) return kInf;
            const double d = std::abs(m.a11) / m22;
            return std::isfinite(d) ? d * d : kInf;
        } catch (const Error&) {
            return kInf;
        }
    };

    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    const size_t dim = space.dim();
    std::vector<double> best_x = space.initial();
    double best_f = objective(best_x);
    int restarts_used = 0;

    for (int r = 0; r < cfg.restarts; ++r) {
        restarts_used = r + 1;
        const std::vector<double>& base = best_x;
        const double spread = r == 0 ? 0.6 : 1.2 * std::pow(0.55, r);

        std::vector<std::vector<double>> simplex;
        simplex.push_back(base);
        for (size_t i = 0; i < dim; ++i) {
            std::vector<double> v = base;
            for (size_t d = 0; d < dim; ++d) v[d] += spread * unit(rng);
            simplex.push_back(std::move(v));
        }

        auto [x, fx] = nelder_mead(objective, std::move(simplex),
                                   static_cast<int>(600 * dim));
        if (fx < best_f) {
            best_f = fx;
            best_x = std::move(x);
        }
        if (std::sqrt(best_f) <= 0.01 * cfg.eps_accept) break;
    }

    const double abs_d = std::sqrt(best_f);
    if (!(abs_d <= cfg.eps_accept))
        throw Error(ErrorCode::NotConverged,
                    "design did not reach the target |D| threshold", abs_d);
    return {space.assemble(best_x), abs_d, restarts_used};
}

std::string spectral_point_to_json_text(const SpectralPoint& pt) {
    nlohmann::json j;
    j["kind"] = pt.kind == SpectralTarget::CPA ? "cpa" : "spectral_singularity";
    j["k0"] = pt.k0;
    j["residual"] = pt.residual;
    if (pt.mode) {
        j["mode"] = {{"a_minus_re", pt.mode->first.real()},
                     {"a_minus_im", pt.mode->first.imag()},
                     {"b_plus_re", pt.mode->second.real()},
                     {"b_plus_im", pt.mode->second.imag()}};
    } else {
        j["mode"] = nullptr;
    }
    if (pt.transmission_near) {
        j["transmission_near"] = *pt.transmission_near;
    } else {
        j["transmission_near"] = nullptr;
    }
    return j.dump(2);
}

}  // namespace scatter1d
