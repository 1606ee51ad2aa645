#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scatter1d/complex2.hpp"

namespace scatter1d {

struct DeltaTerm {
    double x{};   // position
    Complex g{};  // coupling strength
};

struct LayerTerm {
    double a{};   // left edge
    double b{};   // right edge (a < b)
    Complex v{};  // constant value on [a, b]
};

struct GridData {
    double x_min{};
    double x_max{};
    std::vector<Complex> values;  // >= 2 uniform samples, linearly interpolated
};

/// A compactly supported potential: a finite sum of delta spikes, a set of
/// sorted non-overlapping constant layers, or a uniformly sampled grid
/// (piecewise-linear inside [x_min, x_max], zero outside). Construction sorts
/// elements, merges deltas at exactly coincident positions by summing their
/// couplings, and rejects non-finite data, zero-width or overlapping layers,
/// and grids with fewer than two samples.
class Potential {
public:
    enum class Kind { Deltas, Layers, Grid };

    static Potential deltas(std::vector<DeltaTerm> terms);
    static Potential layers(std::vector<LayerTerm> terms);
    static Potential grid(double x_min, double x_max, std::vector<Complex> values);
    static Potential free_space() { return deltas({}); }

    Kind kind() const;
    const std::vector<DeltaTerm>& delta_terms() const;
    const std::vector<LayerTerm>& layer_terms() const;
    const GridData& grid_data() const;

    /// [lo, hi] hull of the support; {0, 0} for an empty model.
    std::pair<double, double> support() const;

    /// max |v| over layer values / grid samples, max |g| over deltas.
    double max_abs_value() const;

    bool empty() const;

private:
    using Storage = std::variant<std::vector<DeltaTerm>, std::vector<LayerTerm>, GridData>;
    explicit Potential(Storage s) : storage_(std::move(s)) {}
    Storage storage_;
};

struct FaddeevCheck {
    bool finite{};    // always true for these compactly supported models
    double integral{};  // integral of (1 + |x|) |v(x)| dx (sum over delta atoms)
};

/// Exact for deltas and layers, trapezoid rule on grid nodes.
FaddeevCheck check_faddeev(const Potential& p);

struct SymmetryClass {
    bool is_real{};
    bool is_pt_symmetric{};  // v(-x)* == v(x) within tolerance
};

inline constexpr double kSymTolAnalytic = 1e-12;
inline constexpr double kSymTolGrid = 1e-9;

/// eps_sym < 0 selects the model default (1e-12 analytic, 1e-9 grid).
SymmetryClass classify_symmetry(const Potential& p, double eps_sym = -1.0);

/// Pointwise value. Layers: constant inside each [a, b], zero outside and in
/// gaps. Grid: linear interpolation between samples, zero outside. Deltas
/// have no pointwise value and throw.
Complex evaluate(const Potential& p, double x);

/// The potential x -> conj(v(-x)). A model is PT-symmetric exactly when this
/// equals the original.
Potential parity_reflect_conjugate(const Potential& p);

/// JSON file format (exact keys):
///   {"type":"deltas","items":[{"x":..., "g_re":..., "g_im":...}, ...]}
///   {"type":"layers","items":[{"a":..., "b":..., "v_re":..., "v_im":...}, ...]}
///   {"type":"grid","x_min":..., "x_max":..., "re":[...], "im":[...]}
Potential potential_from_json_text(const std::string& text);
std::string potential_to_json_text(const Potential& p);
Potential load_potential_file(const std::string& path);
void save_potential_file(const Potential& p, const std::string& path);

}  // namespace scatter1d
