#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scatter1d/scattering.hpp"
#include "scatter1d/symmetry.hpp"

namespace scatter1d {

/// |D| at or below this gate marks the k -> -k relations as degenerate in
/// reports (coherent-perfect-absorption regime).
inline constexpr double kCpaGate = 1e-8;

/// Residual tolerance schedule by construction path.
inline constexpr double kTolClosedForm = 1e-12;       // single delta / single layer
inline constexpr double kTolComposedAnalytic = 1e-10; // products of closed forms
inline constexpr double kTolNumeric = 1e-6;           // RK4 integrator

/// All checkers take the quadruple at +k and, where needed, the one at -k
/// (obtained by independent re-evaluation, not by the ReverseK transform).
/// Returns are residual magnitudes; 0 means the identity holds exactly.

/// T^{l/r}(-k) T^{r/l}(k) + R^{l/r}(-k) R^{l/r}(k) = 1, the l and r branches.
/// Valid only where D(k) != 0.
std::pair<double, double> check_generalized_unitarity(const ScatterAmplitudes& at_k,
                                                      const ScatterAmplitudes& at_minus_k);

/// D(k) * [T^{r/l}(-k) T^{l/r}(k) + R^{l/r}(-k) R^{l/r}(k) - 1] = 0, valid for
/// every k. When the -k quadruple is unavailable (exact CPA at k makes -k a
/// transmission singularity) the bracket collapses algebraically and the
/// residual is evaluated as |t_l t_r - r_l r_r - D| instead.
std::pair<double, double> check_d_form_relations(const ScatterAmplitudes& at_k,
                                                 const std::optional<ScatterAmplitudes>& at_minus_k);

/// |R^{l/r}|^2 + |T^{l/r}|^2 = 1 per side; holds for real potentials.
std::pair<double, double> check_classic_unitarity(const ScatterAmplitudes& a);

/// | |T|^2 + sign * |R^l R^r| - 1 | minimized over sign in {-1, +1}, with
/// T = t_l (reciprocity assumed; |t_l - t_r| is reported separately).
/// Holds for PT-symmetric potentials; both signs occur.
struct PseudoUnitarity {
    double residual{};
    int sign{};  // the selected sign
};

PseudoUnitarity check_pseudo_unitarity(const ScatterAmplitudes& a);

/// PT-symmetric potentials, with tau from e^{i tau} = T/|T|, T = t_l:
///   phase:    R^{l/r}(-k) = -e^{-2i tau(k)} R^{r/l}(k)  and  T(-k) = T(k)*
///   combined: R^{l/r}(-k) T(k) + R^{r/l}(k) T(-k) = 0
///   moduli:   |R^{l/r}(-k)| = |R^{r/l}(k)|  and  |T(-k)| = |T(k)|
/// Throws ZeroTransmission when |T| <= kZeroGuard (tau undefined).
struct PtRelationResiduals {
    double phase_rl{}, phase_rr{}, phase_t{};
    double combined_l{}, combined_r{};
    double moduli_rl{}, moduli_rr{}, moduli_t{};

    double max_phase() const;
    double max_combined() const;
    double max_moduli() const;
};

PtRelationResiduals check_pt_relations(const ScatterAmplitudes& at_k,
                                       const ScatterAmplitudes& at_minus_k);

/// R^{l/r}(k) R^{l/r}(-k) + |T(k)|^2 = 1 per side, T = t_l; holds for real
/// and for PT-symmetric potentials.
std::pair<double, double> check_id1(const ScatterAmplitudes& at_k,
                                    const ScatterAmplitudes& at_minus_k);

/// Real potentials: R^{l/r}(-k) = R^{l/r}(k)*, T^{l/r}(-k) = T^{l/r}(k)*,
/// plus |R^l(k)| = |R^r(k)|.
struct RealPotentialResiduals {
    double conj_r_l{}, conj_r_r{}, conj_t_l{}, conj_t_r{};
    double refl_moduli{};

    double max_conj() const;
};

RealPotentialResiduals check_real_potential_relations(const ScatterAmplitudes& at_k,
                                                      const ScatterAmplitudes& at_minus_k);

/// | |D(k)| - 1 |; zero for time-reversal-invariant and PT-symmetric systems.
double check_mod_d(const ScatterAmplitudes& a);

enum class Applicability { Applies, NotApplicable, DegenerateD };

struct ApplicabilityEntry {
    Applicability state{Applicability::Applies};
    std::string reason;  // set when state != Applies
};

/// Fixed identity-name order used by reports, CSV columns, and JSON keys.
const std::vector<std::string>& identity_names();

/// One wavenumber's worth of residuals. `residuals` holds NaN where a value
/// could not be computed (the matching applicability entry says why);
/// `tolerance` follows the construction-path schedule unless overridden.
struct IdentityReport {
    double k{};
    double tolerance{};
    std::string construction;  // "closed_form" | "composed_analytic" | "numeric"
    std::map<std::string, double> residuals;
    std::map<std::string, ApplicabilityEntry> applicability;
    int pseudo_unitarity_sign{0};
    double abs_d{};
    ScatterAmplitudes amplitudes{};

    /// residual <= tolerance for every identity whose state is Applies.
    bool all_applicable_pass() const;
};

/// Builds amplitudes at +k and -k (closed forms for deltas/layers, RK4 for
/// grids), evaluates every identity, and fills applicability from
/// classify_symmetry and |D|. The -k quadruple additionally gets cross-checked
/// against the ReverseK transform; the largest discrepancy is reported as
/// `minus_k_consistency`. tol_override > 0 replaces the schedule tolerance.
IdentityReport full_report(const Potential& p, double k, const IntegratorConfig& cfg = {},
                           double tol_override = -1.0);

std::string report_to_json_text(const IdentityReport& r);

}  // namespace scatter1d
