#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "scatter1d/errors.hpp"
#include "scatter1d/scattering.hpp"
#include "scatter1d/transfer.hpp"
#include "support/oracles.hpp"
#include "support/random_potentials.hpp"

using namespace scatter1d;

namespace {

double entry_diff(const Mat2& a, const Mat2& b) { return max_abs_diff(a, b); }

Mat2 oracle_matrix(const oracles::Amplitudes& o) {
    // assemble the matrix from independently solved amplitudes
    const Complex d = o.t_l * o.t_r - o.r_l * o.r_r;
    return {d / o.t_r, o.r_r / o.t_r, -o.r_l / o.t_r, 1.0 / o.t_r};
}

}  // namespace

TEST_CASE("spike matrix at the origin, frozen entries") {
    const TransferMatrix m = transfer_delta({2.0, 0.0}, 0.0, 1.0);
    CHECK(std::abs(m.m.a11 - Complex{1.0, -1.0}) < 1e-15);
    CHECK(std::abs(m.m.a12 - Complex{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(m.m.a21 - Complex{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(m.m.a22 - Complex{1.0, 1.0}) < 1e-15);
    CHECK(std::abs(m.det() - 1.0) < 1e-15);
}

TEST_CASE("offset spike picks up opposite phases on the off-diagonal") {
    const double k = 1.0, x0 = 1.0;
    const TransferMatrix m = transfer_delta({2.0, 0.0}, x0, k);
    const Complex ph = std::exp(Complex{0.0, 2.0 * k * x0});
    CHECK(std::abs(m.m.a11 - Complex{1.0, -1.0}) < 1e-15);
    CHECK(std::abs(m.m.a12 - Complex{0.0, -1.0} / ph) < 1e-15);
    CHECK(std::abs(m.m.a21 - Complex{0.0, 1.0} * ph) < 1e-15);
    CHECK(std::abs(m.m.a22 - Complex{1.0, 1.0}) < 1e-15);
    CHECK(std::abs(m.det() - 1.0) < 1e-15);
}

TEST_CASE("spike matrix agrees with closed-form amplitudes") {
    std::mt19937 rng(21u);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const Complex g{corpus::coupling(rng), corpus::coupling(rng)};
        const double x0 = pos(rng);
        const double k = corpus::wavenumber(rng);
        const oracles::Amplitudes o = oracles::delta_amplitudes(g, x0, k);
        const TransferMatrix m = transfer_delta(g, x0, k);
        CHECK(entry_diff(m.m, oracle_matrix(o)) < 1e-12);
    }
}

TEST_CASE("slab matrix agrees with the interface-matching oracle") {
    std::mt19937 rng(22u);
    std::uniform_real_distribution<double> lo(-2.0, 0.5);
    std::uniform_real_distribution<double> len(0.1, 1.5);
    for (int i = 0; i < 50; ++i) {
        const Complex v{corpus::coupling(rng), i % 2 ? corpus::coupling(rng) : 0.0};
        const double a = lo(rng);
        const double b = a + len(rng);
        const double k = corpus::wavenumber(rng);
        const oracles::Amplitudes o = oracles::layer_amplitudes(v, a, b, k);
        const TransferMatrix m = transfer_layer(v, a, b, k);
        CHECK(entry_diff(m.m, oracle_matrix(o)) < 1e-10);
        CHECK(std::abs(m.det() - 1.0) < 1e-12);
    }
}

TEST_CASE("slab with interior wavenumber near zero uses the linear limit") {
    const double k = 1.0, L = 2.0;
    // v0 = k^2 makes the interior wavenumber exactly zero
    const TransferMatrix m0 = transfer_layer({k * k, 0.0}, 0.0, L, k);
    CHECK(std::abs(m0.det() - 1.0) < 1e-14);
    // matching an interior solution alpha + beta x by hand gives
    // r_l = -ikL/(2 - ikL), t e^{ikL} = 1 - r_l, r_r = r_l e^{-2ikL}
    const Complex ikl{0.0, k * L};
    const Complex r_l = -ikl / (2.0 - ikl);
    const Complex t = (1.0 - r_l) * std::exp(-Complex{0.0, k * L});
    const ScatterAmplitudes a = amplitudes_from_transfer(m0);
    CHECK(std::abs(a.r_l - r_l) < 1e-14);
    CHECK(std::abs(a.t_l - t) < 1e-14);
    CHECK(std::abs(a.t_r - t) < 1e-14);
    CHECK(std::abs(a.r_r - r_l * std::exp(Complex{0.0, -2.0 * k * L})) < 1e-14);
    // the trig branch a hair away from the degenerate point must agree
    const TransferMatrix m1 = transfer_layer({k * k - 1e-12, 0.0}, 0.0, L, k);
    CHECK(entry_diff(m0.m, m1.m) < 1e-10);
}

TEST_CASE("two spikes compose into the matching-oracle matrix") {
    std::mt19937 rng(23u);
    for (int i = 0; i < 50; ++i) {
        const Complex g1{corpus::coupling(rng), corpus::coupling(rng)};
        const Complex g2{corpus::coupling(rng), corpus::coupling(rng)};
        const double k = corpus::wavenumber(rng);
        const auto xs = corpus::distinct_positions(rng, 2);
        const double x1 = std::min(xs[0], xs[1]), x2 = std::max(xs[0], xs[1]);
        const oracles::Amplitudes o = oracles::two_delta_amplitudes(g1, x1, g2, x2, k);
        const TransferMatrix m =
            analytic_transfer(Potential::deltas({{x1, g1}, {x2, g2}}), k);
        CHECK(entry_diff(m.m, oracle_matrix(o)) < 1e-11);
    }
}

TEST_CASE("composition equals the matrix product in support order") {
    const double k = 1.3;
    const TransferMatrix left = transfer_delta({1.0, -0.5}, -0.7, k);
    const TransferMatrix right = transfer_layer({0.8, 0.2}, 0.1, 0.9, k);
    const TransferMatrix both = compose(left, right);
    CHECK(entry_diff(both.m, right.m * left.m) == 0.0);

    const TransferMatrix other_k = transfer_delta({1.0, 0.0}, 0.0, 2.0);
    CHECK_THROWS_AS(compose(left, other_k), Error);
    try {
        compose(left, other_k);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WavenumberMismatch);
    }
}

TEST_CASE("unit determinant for every composed analytic model") {
    std::mt19937 rng(24u);
    for (int i = 0; i < 100; ++i) {
        const Potential p = corpus::any_analytic(rng);
        const double k = corpus::wavenumber(rng);
        CHECK(std::abs(analytic_transfer(p, k).det() - 1.0) < 1e-12);
    }
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(transfer_delta({1.0, 0.0}, 0.0, 0.0), Error);
    CHECK_THROWS_AS(transfer_delta({1.0, 0.0}, 0.0, -1.0), Error);
    CHECK_THROWS_AS(transfer_layer({1.0, 0.0}, 1.0, 0.5, 1.0), Error);
    CHECK_THROWS_AS(make_transfer(1.0, {Complex{std::nan(""), 0.0}, {}, {}, Complex{1.0, 0.0}}),
                    Error);
    CHECK_THROWS_AS(make_transfer(1.0, {{}, {}, {}, {}}), Error);

    try {
        make_transfer(-2.0, Mat2::identity());
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonpositiveWavenumber);
    }
}

TEST_CASE("integrator reproduces composed slabs") {
    std::mt19937 rng(25u);
    IntegratorConfig cfg;
    cfg.h = 0.005;
    for (int i = 0; i < 10; ++i) {
        const Potential p = corpus::complex_layers(rng, 3);
        const double k = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
        const TransferMatrix numeric = transfer_numeric(p, k, cfg);
        const TransferMatrix analytic = analytic_transfer(p, k);
        CHECK(entry_diff(numeric.m, analytic.m) < 1e-6);
    }
}

TEST_CASE("integrator agrees with the right-to-left oracle on a sampled grid") {
    std::mt19937 rng(26u);
    IntegratorConfig cfg;
    cfg.h = 0.005;
    for (int i = 0; i < 5; ++i) {
        const Potential p = corpus::smooth_grid(rng, i % 2 == 1);
        const double k = std::uniform_real_distribution<double>(0.8, 3.0)(rng);
        const auto [r_l_oracle, t_l_oracle] = oracles::backward_left_amplitudes(p, k, 0.005);
        const ScatterAmplitudes a = amplitudes_from_transfer(transfer_numeric(p, k, cfg));
        CHECK(std::abs(a.r_l - r_l_oracle) < 1e-6);
        CHECK(std::abs(a.t_l - t_l_oracle) < 1e-6);
    }
}

TEST_CASE("free space integrates to the identity") {
    const Potential zero = Potential::grid(-1.0, 1.0, std::vector<Complex>(41, Complex{}));
    IntegratorConfig cfg;
    cfg.h = 0.002;
    const TransferMatrix m = transfer_numeric(zero, 1.7, cfg);
    CHECK(entry_diff(m.m, Mat2::identity()) < 1e-10);
}

TEST_CASE("integrator error falls as the fourth power of the step") {
    std::mt19937 rng(27u);
    const Potential p = corpus::smooth_grid(rng, true, 81);
    const double k = 1.4;
    const Mat2 reference = detail::numeric_matrix(p, k, {0.0005, "rk4"});
    const double e1 = entry_diff(detail::numeric_matrix(p, k, {0.02, "rk4"}), reference);
    const double e2 = entry_diff(detail::numeric_matrix(p, k, {0.01, "rk4"}), reference);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.5);
    CHECK(order < 4.8);
}

TEST_CASE("integrator rejections") {
    const Potential spikes = Potential::deltas({{0.0, {1.0, 0.0}}});
    try {
        transfer_numeric(spikes, 1.0);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidPotential);
    }

    const Potential slab = Potential::layers({{0.0, 1.0, {1.0, 0.0}}});
    try {
        transfer_numeric(slab, 100.0, {0.3, "rk4"});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepTooLarge);
    }

    try {
        transfer_numeric(slab, 1.0, {0.01, "euler"});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UsageError);
    }
}

TEST_CASE("wronskian stays pinned at -2ik") {
    const Potential p = Potential::layers({{-0.5, 0.5, {2.0, 1.0}}});
    const double k = 1.9;
    const auto profile = wronskian_profile(p, k);
    REQUIRE(!profile.empty());
    const Complex expected{0.0, -2.0 * k};
    CHECK(std::abs(profile.front().second - expected) < 1e-14);
    double drift = 0.0;
    for (const auto& [x, w] : profile) drift = std::max(drift, std::abs(w - expected));
    CHECK(drift / std::abs(expected) < 1e-8);
}

TEST_CASE("automatic step rule") {
    const Potential p = Potential::layers({{0.0, 1.0, {3.0, 0.0}}});
    CHECK(default_step(p, 1.0) == doctest::Approx(0.01));
    CHECK(default_step(p, 50.0) == doctest::Approx(0.1 / 50.0));
    const Potential strong = Potential::layers({{0.0, 1.0, {1e4, 0.0}}});
    CHECK(default_step(strong, 1.0) == doctest::Approx(0.1 / std::sqrt(1e4 + 1.0)));
}

TEST_CASE("coefficient propagation") {
    const TransferMatrix m = transfer_delta({2.0, 0.0}, 0.0, 1.0);
    const AsymptoticCoeffs c = apply(m, {1.0, 0.0}, {0.0, 0.0});
    CHECK(c.a_plus == m.m.a11);
    CHECK(c.b_plus == m.m.a21);
    CHECK(c.a_minus == Complex{1.0, 0.0});
}
