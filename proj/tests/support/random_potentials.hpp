#pragma once

// Deterministic potential corpora for property tests. Every generator takes
// the caller's engine so a fixed seed reproduces the exact sequence.

#include <cmath>
#include <random>
#include <vector>

#include "scatter1d/potential.hpp"

namespace corpus {

using scatter1d::Complex;
using scatter1d::DeltaTerm;
using scatter1d::LayerTerm;
using scatter1d::Potential;

// Magnitude in [0.2, 1.5] with a random sign: keeps couplings away from the
// trivial zero without driving |M22| toward zero guards.
inline double coupling(std::mt19937& rng) {
    std::uniform_real_distribution<double> mag(0.2, 1.5);
    std::bernoulli_distribution flip(0.5);
    const double v = mag(rng);
    return flip(rng) ? -v : v;
}

inline double wavenumber(std::mt19937& rng) {
    return std::uniform_real_distribution<double>(0.2, 5.0)(rng);
}

inline std::vector<double> distinct_positions(std::mt19937& rng, int n, double lo = -2.0,
                                              double hi = 2.0) {
    std::uniform_real_distribution<double> pos(lo, hi);
    std::vector<double> xs;
    while (static_cast<int>(xs.size()) < n) {
        const double x = pos(rng);
        bool ok = true;
        for (double y : xs)
            if (std::abs(x - y) < 0.05) ok = false;
        if (ok) xs.push_back(x);
    }
    return xs;
}

inline Potential real_deltas(std::mt19937& rng, int n) {
    std::vector<DeltaTerm> terms;
    for (double x : distinct_positions(rng, n)) terms.push_back({x, Complex{coupling(rng), 0.0}});
    return Potential::deltas(std::move(terms));
}

inline Potential complex_deltas(std::mt19937& rng, int n) {
    std::vector<DeltaTerm> terms;
    for (double x : distinct_positions(rng, n))
        terms.push_back({x, Complex{coupling(rng), coupling(rng)}});
    return Potential::deltas(std::move(terms));
}

inline std::vector<LayerTerm> layer_skeleton(std::mt19937& rng, int n, bool complex_values) {
    std::uniform_real_distribution<double> len(0.1, 0.8);
    std::uniform_real_distribution<double> gap(0.05, 0.5);
    std::vector<LayerTerm> terms;
    double x = -1.5 + gap(rng);
    for (int i = 0; i < n; ++i) {
        const double a = x;
        const double b = a + len(rng);
        const double im = complex_values ? coupling(rng) : 0.0;
        terms.push_back({a, b, Complex{coupling(rng), im}});
        x = b + gap(rng);
    }
    return terms;
}

inline Potential real_layers(std::mt19937& rng, int n) {
    return Potential::layers(layer_skeleton(rng, n, false));
}

inline Potential complex_layers(std::mt19937& rng, int n) {
    return Potential::layers(layer_skeleton(rng, n, true));
}

// PT-symmetric atoms: mirrored pairs with conjugated couplings, plus an
// optional real atom at the origin.
inline Potential pt_deltas(std::mt19937& rng, int pairs, bool with_center = false) {
    const std::vector<double> axs = distinct_positions(rng, pairs, 0.2, 2.0);
    std::vector<DeltaTerm> terms;
    for (double a : axs) {
        const Complex g{coupling(rng), coupling(rng)};
        terms.push_back({a, g});
        terms.push_back({-a, std::conj(g)});
    }
    if (with_center) terms.push_back({0.0, Complex{coupling(rng), 0.0}});
    return Potential::deltas(std::move(terms));
}

// PT-symmetric slabs: [a, b] with value v pairs with [-b, -a] carrying
// conj(v), plus an optional real slab centered on the origin.
inline Potential pt_layers(std::mt19937& rng, int pairs, bool with_center = false) {
    std::uniform_real_distribution<double> len(0.1, 0.5);
    std::uniform_real_distribution<double> gap(0.05, 0.3);
    std::vector<LayerTerm> terms;
    double a = with_center ? 0.0 : gap(rng);
    if (with_center) {
        const double half = 0.5 * len(rng);
        terms.push_back({-half, half, Complex{coupling(rng), 0.0}});
        a = half + gap(rng);
    }
    for (int i = 0; i < pairs; ++i) {
        const double b = a + len(rng);
        const Complex v{coupling(rng), coupling(rng)};
        terms.push_back({a, b, v});
        terms.push_back({-b, -a, std::conj(v)});
        a = b + gap(rng);
    }
    return Potential::layers(std::move(terms));
}

// Smooth sampled potential: a short random cosine series on a uniform grid.
inline Potential smooth_grid(std::mt19937& rng, bool complex_values, int n = 161) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(0.5, 3.0);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    const double x_min = -1.5, x_max = 1.5;
    std::vector<double> w(3), ph(3), c(3), wi(3), phi(3), ci(3);
    for (int j = 0; j < 3; ++j) {
        w[j] = freq(rng);
        ph[j] = phase(rng);
        c[j] = amp(rng);
        wi[j] = freq(rng);
        phi[j] = phase(rng);
        ci[j] = amp(rng);
    }
    std::vector<Complex> values(n);
    for (int i = 0; i < n; ++i) {
        const double x = x_min + (x_max - x_min) * i / (n - 1);
        double re = 0.0, im = 0.0;
        for (int j = 0; j < 3; ++j) {
            re += c[j] * std::cos(w[j] * x + ph[j]);
            if (complex_values) im += ci[j] * std::cos(wi[j] * x + phi[j]);
        }
        values[i] = {re, im};
    }
    return Potential::grid(x_min, x_max, std::move(values));
}

// PT-symmetric samples: generate one half and mirror-conjugate it onto a
// symmetric grid, so v(-x) = conj(v(x)) holds exactly at the nodes (and, by
// linear interpolation, everywhere).
inline Potential pt_grid(std::mt19937& rng, int n = 161) {
    Potential base = smooth_grid(rng, true, n);
    std::vector<Complex> values = base.grid_data().values;
    const int m = static_cast<int>(values.size());
    for (int i = 0; i < m / 2; ++i) {
        values[m - 1 - i] = std::conj(values[i]);
    }
    values[m / 2] = {values[m / 2].real(), 0.0};  // center sample must be real
    return Potential::grid(base.grid_data().x_min, base.grid_data().x_max, std::move(values));
}

// Mixed analytic corpus entry: real/complex deltas or layers, 1-4 elements.
inline Potential any_analytic(std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> n(1, 4);
    switch (kind(rng)) {
        case 0: return real_deltas(rng, n(rng));
        case 1: return complex_deltas(rng, n(rng));
        case 2: return real_layers(rng, n(rng));
        default: return complex_layers(rng, n(rng));
    }
}

}  // namespace corpus
