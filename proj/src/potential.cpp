#include "scatter1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scatter1d/errors.hpp"

namespace scatter1d {

namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Potential Potential::deltas(std::vector<DeltaTerm> terms) {
    for (const auto& t : terms) {
        if (!finite(t.x) || !finite(t.g))
            throw Error(ErrorCode::InvalidPotential, "delta term with non-finite data");
    }
    std::sort(terms.begin(), terms.end(),
              [](const DeltaTerm& l, const DeltaTerm& r) { return l.x < r.x; });
    // Coincident positions merge by summing couplings.
    std::vector<DeltaTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().x == t.x)
            merged.back().g += t.g;
        else
            merged.push_back(t);
    }
    return Potential(Storage{std::move(merged)});
}

Potential Potential::layers(std::vector<LayerTerm> terms) {
    for (const auto& t : terms) {
        if (!finite(t.a) || !finite(t.b) || !finite(t.v))
            throw Error(ErrorCode::InvalidPotential, "layer term with non-finite data");
        if (!(t.a < t.b))
            throw Error(ErrorCode::InvalidPotential, "layer with non-positive width");
    }
    std::sort(terms.begin(), terms.end(),
              [](const LayerTerm& l, const LayerTerm& r) { return l.a < r.a; });
    for (size_t i = 1; i < terms.size(); ++i) {
        if (terms[i].a < terms[i - 1].b)
            throw Error(ErrorCode::InvalidPotential, "overlapping layers");
    }
    return Potential(Storage{std::move(terms)});
}

Potential Potential::grid(double x_min, double x_max, std::vector<Complex> values) {
    if (!finite(x_min) || !finite(x_max) || !(x_min < x_max))
        throw Error(ErrorCode::InvalidPotential, "grid window must satisfy x_min < x_max");
    if (values.size() < 2)
        throw Error(ErrorCode::InvalidPotential, "grid needs at least two samples");
    for (Complex v : values) {
        if (!finite(v)) throw Error(ErrorCode::InvalidPotential, "grid sample non-finite");
    }
    return Potential(Storage{GridData{x_min, x_max, std::move(values)}});
}

Potential::Kind Potential::kind() const {
    if (std::holds_alternative<std::vector<DeltaTerm>>(storage_)) return Kind::Deltas;
    if (std::holds_alternative<std::vector<LayerTerm>>(storage_)) return Kind::Layers;
    return Kind::Grid;
}

const std::vector<DeltaTerm>& Potential::delta_terms() const {
    return std::get<std::vector<DeltaTerm>>(storage_);
}

const std::vector<LayerTerm>& Potential::layer_terms() const {
    return std::get<std::vector<LayerTerm>>(storage_);
}

const GridData& Potential::grid_data() const { return std::get<GridData>(storage_); }

std::pair<double, double> Potential::support() const {
    switch (kind()) {
        case Kind::Deltas: {
            const auto& d = delta_terms();
            if (d.empty()) return {0.0, 0.0};
            return {d.front().x, d.back().x};
        }
        case Kind::Layers: {
            const auto& l = layer_terms();
            if (l.empty()) return {0.0, 0.0};
            return {l.front().a, l.back().b};
        }
        case Kind::Grid:
            return {grid_data().x_min, grid_data().x_max};
    }
    return {0.0, 0.0};
}

double Potential::max_abs_value() const {
    double m = 0.0;
    switch (kind()) {
        case Kind::Deltas:
            for (const auto& t : delta_terms()) m = std::max(m, std::abs(t.g));
            break;
        case Kind::Layers:
            for (const auto& t : layer_terms()) m = std::max(m, std::abs(t.v));
            break;
        case Kind::Grid:
            for (Complex v : grid_data().values) m = std::max(m, std::abs(v));
            break;
    }
    return m;
}

bool Potential::empty() const {
    switch (kind()) {
        case Kind::Deltas:
            return delta_terms().empty();
        case Kind::Layers:
            return layer_terms().empty();
        case Kind::Grid:
            return false;
    }
    return true;
}

FaddeevCheck check_faddeev(const Potential& p) {
    double integral = 0.0;
    switch (p.kind()) {
        case Potential::Kind::Deltas:
            for (const auto& t : p.delta_terms()) integral += std::abs(t.g) * (1.0 + std::abs(t.x));
            break;
        case Potential::Kind::Layers:
            for (const auto& t : p.layer_terms()) {
                // integral of (1 + |x|) over [a, b]: (b - a) + (b|b| - a|a|)/2
                const double weight =
                    (t.b - t.a) + 0.5 * (t.b * std::abs(t.b) - t.a * std::abs(t.a));
                integral += std::abs(t.v) * weight;
            }
            break;
        case Potential::Kind::Grid: {
            const auto& g = p.grid_data();
            const size_t n = g.values.size();
            const double d = (g.x_max - g.x_min) / static_cast<double>(n - 1);
            auto f = [&](size_t j) {
                const double x = g.x_min + static_cast<double>(j) * d;
                return (1.0 + std::abs(x)) * std::abs(g.values[j]);
            };
            for (size_t j = 0; j + 1 < n; ++j) integral += 0.5 * d * (f(j) + f(j + 1));
            break;
        }
    }
    return {true, integral};
}

namespace {

double default_sym_tol(const Potential& p) {
    return p.kind() == Potential::Kind::Grid ? kSymTolGrid : kSymTolAnalytic;
}

bool deltas_pt_symmetric(const std::vector<DeltaTerm>& terms, double eps) {
    // Every atom needs a mirror partner at -x with the conjugate coupling
    // (an atom at the origin is its own partner: g must be real). Atoms with
    // negligible coupling need no partner.
    for (const auto& t : terms) {
        const double pos_tol = 1e-12 * (1.0 + std::abs(t.x));
        const DeltaTerm* partner = nullptr;
        for (const auto& u : terms) {
            if (std::abs(u.x + t.x) <= pos_tol) {
                partner = &u;
                break;
            }
        }
        if (partner == nullptr) {
            if (std::abs(t.g) > eps) return false;
        } else if (std::abs(partner->g - std::conj(t.g)) > eps) {
            return false;
        }
    }
    return true;
}

// Shared by layers and grids: v(-x)* == v(x) for piecewise-defined models is
// checked exactly at the union of breakpoints of both sides plus interval
// midpoints (piecewise-linear functions agreeing there agree everywhere).
bool pointwise_pt_symmetric(const Potential& p, const std::vector<double>& breakpoints,
                            double eps) {
    std::vector<double> pts;
    pts.reserve(breakpoints.size() * 2);
    for (double x : breakpoints) {
        pts.push_back(x);
        pts.push_back(-x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> probes = pts;
    for (size_t i = 0; i + 1 < pts.size(); ++i) probes.push_back(0.5 * (pts[i] + pts[i + 1]));
    for (double x : probes) {
        if (std::abs(std::conj(evaluate(p, -x)) - evaluate(p, x)) > eps) return false;
    }
    return true;
}

}  // namespace

SymmetryClass classify_symmetry(const Potential& p, double eps_sym) {
    const double eps = eps_sym < 0 ? default_sym_tol(p) : eps_sym;
    SymmetryClass out;

    double max_imag = 0.0;
    switch (p.kind()) {
        case Potential::Kind::Deltas:
            for (const auto& t : p.delta_terms()) max_imag = std::max(max_imag, std::abs(t.g.imag()));
            break;
        case Potential::Kind::Layers:
            for (const auto& t : p.layer_terms()) max_imag = std::max(max_imag, std::abs(t.v.imag()));
            break;
        case Potential::Kind::Grid:
            for (Complex v : p.grid_data().values) max_imag = std::max(max_imag, std::abs(v.imag()));
            break;
    }
    out.is_real = max_imag <= eps;

    switch (p.kind()) {
        case Potential::Kind::Deltas:
            out.is_pt_symmetric = deltas_pt_symmetric(p.delta_terms(), eps);
            break;
        case Potential::Kind::Layers: {
            std::vector<double> bps;
            for (const auto& t : p.layer_terms()) {
                bps.push_back(t.a);
                bps.push_back(t.b);
            }
            out.is_pt_symmetric = p.layer_terms().empty() || pointwise_pt_symmetric(p, bps, eps);
            break;
        }
        case Potential::Kind::Grid: {
            const auto& g = p.grid_data();
            const size_t n = g.values.size();
            const double d = (g.x_max - g.x_min) / static_cast<double>(n - 1);
            std::vector<double> bps;
            bps.reserve(n);
            for (size_t j = 0; j < n; ++j) bps.push_back(g.x_min + static_cast<double>(j) * d);
            out.is_pt_symmetric = pointwise_pt_symmetric(p, bps, eps);
            break;
        }
    }
    return out;
}

Complex evaluate(const Potential& p, double x) {
    switch (p.kind()) {
        case Potential::Kind::Deltas:
            throw Error(ErrorCode::PointwiseDeltaEvaluation,
                        "delta potentials have no pointwise values");
        case Potential::Kind::Layers:
            for (const auto& t : p.layer_terms()) {
                if (x < t.a) break;  // sorted: no later layer can contain x
                if (x <= t.b) return t.v;
            }
            return {};
        case Potential::Kind::Grid: {
            const auto& g = p.grid_data();
            if (x < g.x_min || x > g.x_max) return {};
            const size_t n = g.values.size();
            const double d = (g.x_max - g.x_min) / static_cast<double>(n - 1);
            const double s = (x - g.x_min) / d;
            size_t j = std::min(static_cast<size_t>(s), n - 2);
            const double t = s - static_cast<double>(j);
            return (1.0 - t) * g.values[j] + t * g.values[j + 1];
        }
    }
    return {};
}

Potential parity_reflect_conjugate(const Potential& p) {
    switch (p.kind()) {
        case Potential::Kind::Deltas: {
            std::vector<DeltaTerm> out;
            for (const auto& t : p.delta_terms()) out.push_back({-t.x, std::conj(t.g)});
            return Potential::deltas(std::move(out));
        }
        case Potential::Kind::Layers: {
            std::vector<LayerTerm> out;
            for (const auto& t : p.layer_terms()) out.push_back({-t.b, -t.a, std::conj(t.v)});
            return Potential::layers(std::move(out));
        }
        case Potential::Kind::Grid: {
            const auto& g = p.grid_data();
            std::vector<Complex> vals(g.values.rbegin(), g.values.rend());
            for (Complex& v : vals) v = std::conj(v);
            return Potential::grid(-g.x_max, -g.x_min, std::move(vals));
        }
    }
    return Potential::free_space();
}

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw Error(ErrorCode::ParseFailure, std::string("missing or non-numeric field \"") + key + '"');
    return j[key].get<double>();
}

Potential potential_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw Error(ErrorCode::ParseFailure, "potential file must be an object with a \"type\" string");
    const std::string type = j["type"].get<std::string>();
    if (type == "deltas") {
        if (!j.contains("items") || !j["items"].is_array())
            throw Error(ErrorCode::ParseFailure, "deltas potential needs an \"items\" array");
        std::vector<DeltaTerm> terms;
        for (const auto& item : j["items"])
            terms.push_back({require_number(item, "x"),
                             {require_number(item, "g_re"), require_number(item, "g_im")}});
        return Potential::deltas(std::move(terms));
    }
    if (type == "layers") {
        if (!j.contains("items") || !j["items"].is_array())
            throw Error(ErrorCode::ParseFailure, "layers potential needs an \"items\" array");
        std::vector<LayerTerm> terms;
        for (const auto& item : j["items"])
            terms.push_back({require_number(item, "a"), require_number(item, "b"),
                             {require_number(item, "v_re"), require_number(item, "v_im")}});
        return Potential::layers(std::move(terms));
    }
    if (type == "grid") {
        const double x_min = require_number(j, "x_min");
        const double x_max = require_number(j, "x_max");
        if (!j.contains("re") || !j["re"].is_array() || !j.contains("im") || !j["im"].is_array())
            throw Error(ErrorCode::ParseFailure, "grid potential needs \"re\" and \"im\" arrays");
        const auto& re = j["re"];
        const auto& im = j["im"];
        if (re.size() != im.size())
            throw Error(ErrorCode::ParseFailure, "grid \"re\" and \"im\" arrays differ in length");
        std::vector<Complex> vals;
        vals.reserve(re.size());
        for (size_t i = 0; i < re.size(); ++i) {
            if (!re[i].is_number() || !im[i].is_number())
                throw Error(ErrorCode::ParseFailure, "grid samples must be numbers");
            vals.emplace_back(re[i].get<double>(), im[i].get<double>());
        }
        return Potential::grid(x_min, x_max, std::move(vals));
    }
    throw Error(ErrorCode::ParseFailure, "unknown potential type \"" + type + '"');
}

json potential_to_json(const Potential& p) {
    json j;
    switch (p.kind()) {
        case Potential::Kind::Deltas: {
            j["type"] = "deltas";
            j["items"] = json::array();
            for (const auto& t : p.delta_terms())
                j["items"].push_back({{"x", t.x}, {"g_re", t.g.real()}, {"g_im", t.g.imag()}});
            break;
        }
        case Potential::Kind::Layers: {
            j["type"] = "layers";
            j["items"] = json::array();
            for (const auto& t : p.layer_terms())
                j["items"].push_back(
                    {{"a", t.a}, {"b", t.b}, {"v_re", t.v.real()}, {"v_im", t.v.imag()}});
            break;
        }
        case Potential::Kind::Grid: {
            const auto& g = p.grid_data();
            j["type"] = "grid";
            j["x_min"] = g.x_min;
            j["x_max"] = g.x_max;
            json re = json::array(), im = json::array();
            for (Complex v : g.values) {
                re.push_back(v.real());
                im.push_back(v.imag());
            }
            j["re"] = std::move(re);
            j["im"] = std::move(im);
            break;
        }
    }
    return j;
}

}  // namespace

Potential potential_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte offset; recover the line for the message.
        size_t line = 1;
        for (size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw Error(ErrorCode::ParseFailure,
                    "JSON parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return potential_from_json(j);
}

std::string potential_to_json_text(const Potential& p) { return potential_to_json(p).dump(2); }

Potential load_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseFailure, "cannot open potential file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return potential_from_json_text(ss.str());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseFailure)
            throw Error(ErrorCode::ParseFailure, path + ": " + e.what());
        throw;
    }
}

void save_potential_file(const Potential& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseFailure, "cannot write potential file: " + path);
    out << potential_to_json_text(p) << '\n';
}

}  // namespace scatter1d
