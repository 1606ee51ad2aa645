#include "scatter1d/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Complex d_of(const ScatterAmplitudes& a) { return a.t_l * a.t_r - a.r_l * a.r_r; }

}  // namespace

std::pair<double, double> check_generalized_unitarity(const ScatterAmplitudes& at_k,
                                                      const ScatterAmplitudes& at_minus_k) {
    const double l = std::abs(at_minus_k.t_l * at_k.t_r + at_minus_k.r_l * at_k.r_l - 1.0);
    const double r = std::abs(at_minus_k.t_r * at_k.t_l + at_minus_k.r_r * at_k.r_r - 1.0);
    return {l, r};
}

std::pair<double, double> check_d_form_relations(
    const ScatterAmplitudes& at_k, const std::optional<ScatterAmplitudes>& at_minus_k) {
    const Complex d = d_of(at_k);
    if (at_minus_k) {
        const Complex b1 = at_minus_k->t_r * at_k.t_l + at_minus_k->r_l * at_k.r_l - 1.0;
        const Complex b2 = at_minus_k->t_l * at_k.t_r + at_minus_k->r_r * at_k.r_r - 1.0;
        return {std::abs(d * b1), std::abs(d * b2)};
    }
    // The -k quadruple diverges only when D(k) -> 0; multiplying out the
    // divergent factors leaves t_l t_r - r_l r_r - D for both branches.
    const double limit = std::abs(at_k.t_l * at_k.t_r - at_k.r_l * at_k.r_r - d);
    return {limit, limit};
}

std::pair<double, double> check_classic_unitarity(const ScatterAmplitudes& a) {
    const double l = std::abs(std::norm(a.r_l) + std::norm(a.t_l) - 1.0);
    const double r = std::abs(std::norm(a.r_r) + std::norm(a.t_r) - 1.0);
    return {l, r};
}

PseudoUnitarity check_pseudo_unitarity(const ScatterAmplitudes& a) {
    const double t2 = std::norm(a.t_l);
    const double rr = std::abs(a.r_l) * std::abs(a.r_r);
    const double plus = std::abs(t2 + rr - 1.0);
    const double minus = std::abs(t2 - rr - 1.0);
    return plus <= minus ? PseudoUnitarity{plus, +1} : PseudoUnitarity{minus, -1};
}

double PtRelationResiduals::max_phase() const {
    return std::max({phase_rl, phase_rr, phase_t});
}

double PtRelationResiduals::max_combined() const { return std::max(combined_l, combined_r); }

double PtRelationResiduals::max_moduli() const {
    return std::max({moduli_rl, moduli_rr, moduli_t});
}

PtRelationResiduals check_pt_relations(const ScatterAmplitudes& at_k,
                                       const ScatterAmplitudes& at_minus_k) {
    const Complex t = at_k.t_l;
    const double t_mag = std::abs(t);
    if (t_mag <= kZeroGuard)
        throw Error(ErrorCode::ZeroTransmission,
                    "transmission ~ 0: the transmission phase is undefined", t_mag);
    const Complex unit = std::conj(t) / t_mag;  // e^{-i tau}
    const Complex e_m2itau = unit * unit;

    PtRelationResiduals r;
    r.phase_rl = std::abs(at_minus_k.r_l + e_m2itau * at_k.r_r);
    r.phase_rr = std::abs(at_minus_k.r_r + e_m2itau * at_k.r_l);
    r.phase_t = std::abs(at_minus_k.t_l - std::conj(at_k.t_l));
    r.combined_l = std::abs(at_minus_k.r_l * at_k.t_l + at_k.r_r * at_minus_k.t_l);
    r.combined_r = std::abs(at_minus_k.r_r * at_k.t_l + at_k.r_l * at_minus_k.t_l);
    r.moduli_rl = std::abs(std::abs(at_minus_k.r_l) - std::abs(at_k.r_r));
    r.moduli_rr = std::abs(std::abs(at_minus_k.r_r) - std::abs(at_k.r_l));
    r.moduli_t = std::abs(std::abs(at_minus_k.t_l) - std::abs(at_k.t_l));
    return r;
}

std::pair<double, double> check_id1(const ScatterAmplitudes& at_k,
                                    const ScatterAmplitudes& at_minus_k) {
    const double t2 = std::norm(at_k.t_l);
    const double l = std::abs(at_k.r_l * at_minus_k.r_l + t2 - 1.0);
    const double r = std::abs(at_k.r_r * at_minus_k.r_r + t2 - 1.0);
    return {l, r};
}

RealPotentialResiduals check_real_potential_relations(const ScatterAmplitudes& at_k,
                                                      const ScatterAmplitudes& at_minus_k) {
    RealPotentialResiduals r;
    r.conj_r_l = std::abs(at_minus_k.r_l - std::conj(at_k.r_l));
    r.conj_r_r = std::abs(at_minus_k.r_r - std::conj(at_k.r_r));
    r.conj_t_l = std::abs(at_minus_k.t_l - std::conj(at_k.t_l));
    r.conj_t_r = std::abs(at_minus_k.t_r - std::conj(at_k.t_r));
    r.refl_moduli = std::abs(std::abs(at_k.r_l) - std::abs(at_k.r_r));
    return r;
}

double RealPotentialResiduals::max_conj() const {
    return std::max({conj_r_l, conj_r_r, conj_t_l, conj_t_r});
}

double check_mod_d(const ScatterAmplitudes& a) { return std::abs(std::abs(d_of(a)) - 1.0); }

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = {
        "gen_rel_l",        "gen_rel_r",
        "d_form_1",         "d_form_2",
        "classic_unitarity_l", "classic_unitarity_r",
        "pseudo_unitarity", "pt_phase",
        "pt_combined",      "pt_moduli",
        "id1_l",            "id1_r",
        "real_conjugation", "refl_moduli",
        "mod_d",            "reciprocity",
        "minus_k_consistency",
    };
    return names;
}

bool IdentityReport::all_applicable_pass() const {
    for (const auto& [name, entry] : applicability) {
        if (entry.state != Applicability::Applies) continue;
        const auto it = residuals.find(name);
        if (it == residuals.end()) return false;
        if (!(it->second <= tolerance)) return false;  // NaN fails
    }
    return true;
}

namespace {

Mat2 build_matrix(const Potential& p, double signed_k, const IntegratorConfig& cfg) {
    if (p.kind() == Potential::Kind::Grid) return detail::numeric_matrix(p, signed_k, cfg);
    return detail::analytic_matrix(p, signed_k);
}

std::string construction_of(const Potential& p) {
    switch (p.kind()) {
        case Potential::Kind::Deltas:
            return p.delta_terms().size() <= 1 ? "closed_form" : "composed_analytic";
        case Potential::Kind::Layers:
            return p.layer_terms().size() <= 1 ? "closed_form" : "composed_analytic";
        case Potential::Kind::Grid:
            return "numeric";
    }
    return "numeric";
}

void set_entry(IdentityReport& rep, const std::string& name, double residual,
               Applicability state, const std::string& reason = "") {
    rep.residuals[name] = residual;
    rep.applicability[name] = {state, reason};
}

}  // namespace

IdentityReport full_report(const Potential& p, double k, const IntegratorConfig& cfg,
                           double tol_override) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw Error(ErrorCode::NonpositiveWavenumber, "report wavenumber must be positive");

    IdentityReport rep;
    rep.k = k;
    rep.construction = construction_of(p);
    if (tol_override > 0.0) {
        rep.tolerance = tol_override;
    } else if (rep.construction == "closed_form") {
        rep.tolerance = kTolClosedForm;
    } else if (rep.construction == "composed_analytic") {
        rep.tolerance = kTolComposedAnalytic;
    } else {
        rep.tolerance = kTolNumeric;
    }

    const TransferMatrix m_plus = make_transfer(k, build_matrix(p, k, cfg), false);
    const TransferMatrix m_minus = make_transfer(k, build_matrix(p, -k, cfg), true);

    const ScatterAmplitudes a_k = amplitudes_from_transfer(m_plus);
    std::optional<ScatterAmplitudes> a_mk;
    try {
        a_mk = amplitudes_from_transfer(m_minus);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SpectralSingularity) throw;
    }

    const SymmetryClass sym = classify_symmetry(p);
    rep.amplitudes = a_k;
    rep.abs_d = std::abs(d_of(a_k));

    const Applicability real_state =
        sym.is_real ? Applicability::Applies : Applicability::NotApplicable;
    const std::string not_real = sym.is_real ? "" : "potential is not real";
    const Applicability pt_state =
        sym.is_pt_symmetric ? Applicability::Applies : Applicability::NotApplicable;
    const std::string not_pt = sym.is_pt_symmetric ? "" : "potential is not PT-symmetric";
    const Applicability real_or_pt_state = (sym.is_real || sym.is_pt_symmetric)
                                               ? Applicability::Applies
                                               : Applicability::NotApplicable;
    const std::string not_real_or_pt =
        (sym.is_real || sym.is_pt_symmetric) ? "" : "potential is neither real nor PT-symmetric";

    const bool d_degenerate = rep.abs_d <= kCpaGate;
    const std::string degenerate_reason = "D(k) ~ 0: quadruple at -k diverges";

    // k -> -k relations need the -k quadruple.
    if (a_mk && !d_degenerate) {
        const auto gen = check_generalized_unitarity(a_k, *a_mk);
        set_entry(rep, "gen_rel_l", gen.first, Applicability::Applies);
        set_entry(rep, "gen_rel_r", gen.second, Applicability::Applies);
    } else {
        set_entry(rep, "gen_rel_l", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "gen_rel_r", kNaN, Applicability::DegenerateD, degenerate_reason);
    }

    const auto dform = check_d_form_relations(a_k, a_mk);
    set_entry(rep, "d_form_1", dform.first, Applicability::Applies);
    set_entry(rep, "d_form_2", dform.second, Applicability::Applies);

    const auto classic = check_classic_unitarity(a_k);
    set_entry(rep, "classic_unitarity_l", classic.first, real_state, not_real);
    set_entry(rep, "classic_unitarity_r", classic.second, real_state, not_real);

    const PseudoUnitarity pseudo = check_pseudo_unitarity(a_k);
    set_entry(rep, "pseudo_unitarity", pseudo.residual, pt_state, not_pt);
    rep.pseudo_unitarity_sign = pseudo.sign;

    if (a_mk) {
        try {
            const PtRelationResiduals pt = check_pt_relations(a_k, *a_mk);
            set_entry(rep, "pt_phase", pt.max_phase(), pt_state, not_pt);
            set_entry(rep, "pt_combined", pt.max_combined(), pt_state, not_pt);
            set_entry(rep, "pt_moduli", pt.max_moduli(), pt_state, not_pt);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroTransmission) throw;
            const std::string reason = "transmission ~ 0 at k: phase undefined";
            set_entry(rep, "pt_phase", kNaN, Applicability::NotApplicable, reason);
            set_entry(rep, "pt_combined", kNaN, Applicability::NotApplicable, reason);
            set_entry(rep, "pt_moduli", kNaN, Applicability::NotApplicable, reason);
        }
        const auto id1 = check_id1(a_k, *a_mk);
        set_entry(rep, "id1_l", id1.first, real_or_pt_state, not_real_or_pt);
        set_entry(rep, "id1_r", id1.second, real_or_pt_state, not_real_or_pt);
        const RealPotentialResiduals real_rel = check_real_potential_relations(a_k, *a_mk);
        set_entry(rep, "real_conjugation", real_rel.max_conj(), real_state, not_real);
    } else {
        set_entry(rep, "pt_phase", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "pt_combined", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "pt_moduli", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "id1_l", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "id1_r", kNaN, Applicability::DegenerateD, degenerate_reason);
        set_entry(rep, "real_conjugation", kNaN, Applicability::DegenerateD, degenerate_reason);
    }

    set_entry(rep, "refl_moduli", std::abs(std::abs(a_k.r_l) - std::abs(a_k.r_r)), real_state,
              not_real);

    set_entry(rep, "mod_d", check_mod_d(a_k), real_or_pt_state, not_real_or_pt);
    set_entry(rep, "reciprocity", std::abs(a_k.t_l - a_k.t_r), Applicability::Applies);

    // Cross-check: the sigma1-transformed matrix must reproduce the
    // independently built -k quadruple. Scaled by the largest amplitude so
    // the check stays meaningful when the -k quadruple is large.
    if (a_mk && rep.abs_d > kZeroGuard) {
        const ScatterAmplitudes via_transform = transform_amplitudes(a_k, Transform::ReverseK);
        const double diff = std::max({std::abs(via_transform.r_l - a_mk->r_l),
                                      std::abs(via_transform.r_r - a_mk->r_r),
                                      std::abs(via_transform.t_l - a_mk->t_l),
                                      std::abs(via_transform.t_r - a_mk->t_r)});
        const double scale = std::max({1.0, std::abs(a_mk->r_l), std::abs(a_mk->r_r),
                                       std::abs(a_mk->t_l), std::abs(a_mk->t_r)});
        set_entry(rep, "minus_k_consistency", diff / scale, Applicability::Applies);
    } else {
        set_entry(rep, "minus_k_consistency", kNaN, Applicability::DegenerateD,
                  degenerate_reason);
    }

    return rep;
}

std::string report_to_json_text(const IdentityReport& r) {
    nlohmann::json j;
    j["k"] = r.k;
    j["tolerance"] = r.tolerance;
    j["construction"] = r.construction;
    j["abs_d"] = r.abs_d;
    j["pseudo_unitarity_sign"] = r.pseudo_unitarity_sign;
    j["amplitudes"] = {
        {"r_l_re", r.amplitudes.r_l.real()}, {"r_l_im", r.amplitudes.r_l.imag()},
        {"r_r_re", r.amplitudes.r_r.real()}, {"r_r_im", r.amplitudes.r_r.imag()},
        {"t_l_re", r.amplitudes.t_l.real()}, {"t_l_im", r.amplitudes.t_l.imag()},
        {"t_r_re", r.amplitudes.t_r.real()}, {"t_r_im", r.amplitudes.t_r.imag()},
    };
    nlohmann::json res = nlohmann::json::object();
    nlohmann::json app = nlohmann::json::object();
    for (const auto& name : identity_names()) {
        const auto rit = r.residuals.find(name);
        if (rit != r.residuals.end() && std::isfinite(rit->second)) {
            res[name] = rit->second;
        } else {
            res[name] = nullptr;
        }
        const auto ait = r.applicability.find(name);
        if (ait != r.applicability.end()) {
            const char* state = "applies";
            if (ait->second.state == Applicability::NotApplicable) state = "not_applicable";
            if (ait->second.state == Applicability::DegenerateD) state = "degenerate_d";
            app[name] = {{"state", state}, {"reason", ait->second.reason}};
        }
    }
    j["residuals"] = res;
    j["applicability"] = app;
    j["all_applicable_pass"] = r.all_applicable_pass();
    return j.dump(2);
}

}  // namespace scatter1d
