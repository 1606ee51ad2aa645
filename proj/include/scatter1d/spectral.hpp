#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scatter1d/scattering.hpp"

namespace scatter1d {

enum class SpectralTarget {
    CPA,                  // real zeros of D(k): coherent perfect absorption
    SpectralSingularity,  // real zeros of M22(k): lasing threshold
};

struct KGrid {
    double k_min{};
    double k_max{};
    int points{};  // >= 3
};

struct Bracket {
    double k_lo{}, k_hi{};  // neighbors of a strict interior minimum
    double k_mid{};         // the grid point that achieved the minimum
    double value_mid{};     // |D| or |M22| there
};

/// |D(k)| for CPA (evaluated as |M11|/|M22|, safe near transmission
/// singularities) or |M22(k)| for spectral singularities, on a uniform grid.
/// Returns brackets around strict interior minima whose value is below the
/// gate; boundary minima cannot be bracketed and are not reported.
std::vector<Bracket> scan_minima(const Potential& p, const KGrid& grid, SpectralTarget target,
                                 const IntegratorConfig& cfg = {}, double gate = 0.1);

struct SpectralPoint {
    SpectralTarget kind{};
    double k0{};
    double residual{};  // |D(k0)| or |M22(k0)|
    // CPA only: unit null vector (a0_minus, b0_plus) of S(k0), largest
    // component rotated real positive.
    std::optional<std::pair<Complex, Complex>> mode;
    // Spectral singularities only: max |T| at the bracket edges, a measure of
    // how steeply transmission blows up (amplitudes are never evaluated at
    // |M22| below the zero guard).
    std::optional<double> transmission_near;
};

struct NoZero {
    double k_at_min{};
    double achieved{};  // smallest |D| or |M22| reached in the bracket
};

using RefineResult = std::variant<SpectralPoint, NoZero>;

inline constexpr double kAcceptAnalytic = 1e-8;
inline constexpr double kAcceptNumeric = 1e-5;

/// Golden-section minimization of the target magnitude inside the bracket,
/// followed by successive parabolic refinement. Accepts only when the final
/// magnitude is <= eps_accept (eps_accept <= 0 selects 1e-8 for analytic
/// models, 1e-5 for grids); otherwise reports the best value found.
RefineResult refine_zero(const Potential& p, const Bracket& bracket, SpectralTarget target,
                         const IntegratorConfig& cfg = {}, double eps_accept = -1.0);

/// Unit null vector of a (near-)singular 2x2 scattering matrix: the incoming
/// pair (a0_minus, b0_plus) that is fully absorbed. Computed in closed form
/// from the larger row, canonical phase (largest component real positive).
/// Throws NonsingularS when |det S| > eps_accept.
std::pair<Complex, Complex> cpa_mode(const ScatteringMatrix& s, double eps_accept = kAcceptAnalytic);

struct DesignConfig {
    int restarts{8};          // random Nelder-Mead restarts before giving up
    unsigned seed{0};         // RNG seed; same seed, same result
    bool real_couplings{false};  // constrain couplings real (|D| = 1: must fail)
    double eps_accept{kAcceptAnalytic};
};

struct DesignOutcome {
    Potential potential;   // template with tuned couplings
    double abs_d{};        // |D(k_target)| achieved
    int restarts_used{};
};

/// Tunes the couplings of a 2-4 element deltas or layers template (positions
/// and edges fixed) so that D(k_target) = 0, by Nelder-Mead descent on
/// |D(k_target)|^2 with shrinking restarts around the running best point.
/// Throws NotConverged (detail = best |D|) when no restart reaches eps_accept.
DesignOutcome design_cpa(const Potential& tmpl, double k_target, const DesignConfig& cfg = {});

std::string spectral_point_to_json_text(const SpectralPoint& pt);

}  // namespace scatter1d
