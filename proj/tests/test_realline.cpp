#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wh/errors.hpp"
#include "wh/grid.hpp"
#include "wh/transform.hpp"

#include "test_helpers.hpp"

using namespace wh;
using whtest::I;

TEST_CASE("moebius grid geometry") {
    const std::size_t n = 1024;
    GridPtr grid = Grid::moebius(n);
    REQUIRE(grid->size() == n);
    const double pi = std::numbers::pi;
    for (std::size_t j : {std::size_t(0), n / 4, n / 2, n - 1}) {
        double phi = 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        CHECK(grid->nodes()[j] == doctest::Approx(-1.0 / std::tan(phi / 2.0)).epsilon(1e-12));
        double t = grid->nodes()[j];
        CHECK(grid->weights()[j] == doctest::Approx(pi / n * (1.0 + t * t)).epsilon(1e-12));
    }
    // nodes increase and straddle zero symmetrically
    for (std::size_t j = 1; j < n; ++j)
        CHECK(grid->nodes()[j] > grid->nodes()[j - 1]);
    CHECK(grid->nodes()[0] == doctest::Approx(-grid->nodes()[n - 1]).epsilon(1e-12));
}

TEST_CASE("grid rejects bad node counts") {
    CHECK_THROWS_AS(Grid::moebius(100), Error);
    CHECK_THROWS_AS(Grid::moebius(0), Error);
}

TEST_CASE("grid function arithmetic and guards") {
    GridPtr grid = Grid::moebius(256);
    auto f = GridFunction::sample(grid, [](double t) { return cplx(1.0 / (t * t + 1.0)); },
                                  0.0);
    auto g = GridFunction::sample(grid, [](double t) { return cplx(t / (t * t + 4.0)); }, 0.0);
    auto h = f + g;
    CHECK(h[10] == f[10] + g[10]);
    CHECK((f * g).limit_at_infinity() == cplx(0.0));
    CHECK((f + cplx(2.0)).limit_at_infinity() == cplx(2.0));

    GridPtr other = Grid::moebius(512);
    auto q = GridFunction::sample(other, [](double) { return cplx(1.0); }, 1.0);
    CHECK_THROWS_AS(f + q, Error);
    CHECK_THROWS_AS(q.require_decay(), NonDecayingInput);
    CHECK_THROWS_AS(l2_norm(q), NonDecayingInput);
}

TEST_CASE("quadrature reproduces a known L2 norm") {
    GridPtr grid = Grid::moebius(2048);
    auto f = GridFunction::sample(grid, [](double t) { return cplx(1.0 / (t * t + 1.0)); },
                                  0.0);
    // integral of (1+t^2)^{-2} over the line is pi/2
    CHECK(l2_norm(f) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-10));
}

TEST_CASE("cauchy split recovers the partial-fraction pieces") {
    GridPtr grid = Grid::moebius(2048);
    // f = 1/((t - z)(t - conj z)) splits exactly: the conj-z pole sits below
    // the line and belongs to the upper-analytic part, the z pole above to
    // the lower-analytic part
    const cplx z(0.5, 1.25);
    const cplx c = 1.0 / (z - std::conj(z));
    auto f = GridFunction::sample(
        grid, [&](double t) { return 1.0 / ((cplx(t) - z) * (cplx(t) - std::conj(z))); }, 0.0);
    auto expect_plus = GridFunction::sample(
        grid, [&](double t) { return -c / (cplx(t) - std::conj(z)); }, 0.0);
    auto expect_minus =
        GridFunction::sample(grid, [&](double t) { return c / (cplx(t) - z); }, 0.0);

    auto [fp, fm] = cauchy_split(f);
    CHECK(whtest::sup_diff(fp + fm, f) < 1e-12);
    CHECK(whtest::sup_diff(fp, expect_plus) < 1e-9);
    CHECK(whtest::sup_diff(fm, expect_minus) < 1e-9);
    CHECK(fp.limit_at_infinity() == cplx(0.0));
    CHECK(fm.limit_at_infinity() == cplx(0.0));
}

TEST_CASE("spectral support defect flags the wrong half-plane") {
    GridPtr grid = Grid::moebius(1024);
    // both poles below the line: analytic in the upper half-plane
    auto upper = GridFunction::sample(
        grid, [](double t) { return 1.0 / ((cplx(t) + cplx(0.0, 1.0)) * (cplx(t) + cplx(0.0, 2.0))); },
        0.0);
    CHECK(spectral_support_defect(upper, HalfPlane::Plus) < 1e-9);
    CHECK(spectral_support_defect(upper, HalfPlane::Minus) > 1e-2);
    auto shifted = upper + cplx(3.0);
    CHECK(spectral_support_defect_shifted(shifted, HalfPlane::Plus) < 1e-9);
}

TEST_CASE("fft roundtrip") {
    std::vector<cplx> buf(64);
    for (std::size_t j = 0; j < buf.size(); ++j)
        buf[j] = cplx(std::cos(0.3 * j), std::sin(0.11 * j * j));
    std::vector<cplx> orig = buf;
    detail::fft(buf, -1);
    detail::fft(buf, +1);
    for (std::size_t j = 0; j < buf.size(); ++j)
        CHECK(std::abs(buf[j] / static_cast<double>(buf.size()) - orig[j]) < 1e-12);
}

TEST_CASE("circle coefficients locate one-sided content") {
    GridPtr grid = Grid::moebius(512);
    auto upper = GridFunction::sample(
        grid, [](double t) { return 1.0 / (cplx(t) - cplx(0.0, -2.0)); }, 0.0);
    auto coeffs = circle_coefficients(upper);
    const std::size_t n = coeffs.size();
    REQUIRE(n == 512);
    double neg_mass = 0.0;
    double pos_mass = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        pos_mass += std::norm(coeffs[k]);
        neg_mass += std::norm(coeffs[n - k]);
    }
    CHECK(pos_mass > 1e-3);
    CHECK(neg_mass < 1e-20);
}

TEST_CASE("continuous log unwraps a winding symbol") {
    GridPtr grid = Grid::moebius(2048);
    auto m = GridFunction::sample(grid, whtest::moebius, 1.0);
    auto lg = continuous_log(m, 0.0);
    // total argument change along the line is 2 pi
    double swing = lg[grid->size() - 1].imag() - lg[0].imag();
    CHECK(swing == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-2));
    for (std::size_t j = 1; j < grid->size(); ++j)
        CHECK(std::abs(lg[j] - lg[j - 1]) < 0.5);
    for (std::size_t j = 0; j < grid->size(); ++j)
        CHECK(std::abs(std::exp(lg[j]) - m[j]) < 1e-12);
}

TEST_CASE("continuous sqrt tracks through sign changes") {
    GridPtr grid = Grid::moebius(2048);
    auto m2 = GridFunction::sample(
        grid, [](double t) { return whtest::moebius(t) * whtest::moebius(t); }, 1.0);
    auto root = continuous_sqrt(m2, 1.0);
    for (std::size_t j = 0; j < grid->size(); ++j)
        CHECK(std::abs(root[j] * root[j] - m2[j]) < 1e-12);
    for (std::size_t j = 1; j < grid->size(); ++j)
        CHECK(std::abs(root[j] - root[j - 1]) < 0.5);
}
