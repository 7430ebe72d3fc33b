#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wh/errors.hpp"
#include "wh/poly.hpp"
#include "wh/rational.hpp"

#include "test_helpers.hpp"

using namespace wh;
using whtest::I;

TEST_CASE("polynomial arithmetic and evaluation") {
    Polynomial p({cplx(1.0), cplx(0.0), cplx(1.0)}); // 1 + t^2
    Polynomial q({cplx(2.0), cplx(1.0)});            // 2 + t
    CHECK(p.degree() == 2);
    CHECK((p * q).degree() == 3);
    CHECK(p(cplx(2.0)) == cplx(5.0));
    CHECK((p + q)(cplx(1.0)) == cplx(5.0));
    CHECK((p - p).is_zero(1e-15));
}

TEST_CASE("companion-matrix roots of a known quartic") {
    // (t^2+1)(t^2+4) has roots +-i, +-2i
    Polynomial p = Polynomial::from_roots({I, -I, 2.0 * I, -2.0 * I});
    auto roots = p.roots();
    REQUIRE(roots.size() == 4);
    for (cplx expect : {I, -I, 2.0 * I, -2.0 * I}) {
        double best = 1e9;
        for (cplx r : roots)
            best = std::min(best, std::abs(r - expect));
        CHECK(best < 1e-10);
    }
}

TEST_CASE("rational function algebra") {
    RationalFunction R{{I, -I}, {2.0 * I, -2.0 * I}, cplx(1.0)}; // (t^2+1)/(t^2+4)
    CHECK(std::abs(R(cplx(0.0)) - cplx(0.25)) < 1e-14);
    CHECK(std::abs(R.limit_at_infinity() - cplx(1.0)) < 1e-14);

    RationalFunction S = R.reciprocal();
    CHECK(std::abs(S(cplx(3.0)) * R(cplx(3.0)) - cplx(1.0)) < 1e-14);

    RationalFunction P = R * S;
    P.cancel();
    CHECK(P.zeros.empty());
    CHECK(P.poles.empty());

    // R + 1 = (2 t^2 + 5)/(t^2 + 4)
    RationalFunction Q = R + cplx(1.0);
    for (double t : {-5.0, -0.3, 0.7, 11.0})
        CHECK(std::abs(Q(cplx(t)) - (2.0 * t * t + 5.0) / (t * t + 4.0)) < 1e-12);
}

TEST_CASE("polynomial form roundtrip") {
    RationalFunction R{{cplx(0.5, 1.0)}, {cplx(-1.0, 2.0), cplx(1.0, -2.0)}, cplx(2.0, 1.0)};
    auto [num, den] = R.to_polys();
    RationalFunction back = RationalFunction::from_polys(num, den);
    for (double t : {-4.0, -1.0, 0.0, 2.5})
        CHECK(std::abs(back(cplx(t)) - R(cplx(t))) < 1e-12);
}

TEST_CASE("rational functions reject real-axis singularities") {
    RationalFunction bad{{}, {cplx(1.0, 1e-9)}, cplx(1.0)};
    CHECK_THROWS_AS(bad.require_off_axis(), Error);
}

TEST_CASE("half-plane splitting of a balanced rational symbol") {
    RationalFunction R{{I, -I}, {2.0 * I, -2.0 * I}, cplx(1.0)};
    RationalSplit split = rational_split(R);
    CHECK(split.kappa == 0);
    // plus factor carries the lower-half-plane zero/pole, hence is analytic
    // and invertible above
    REQUIRE(split.plus.zeros.size() == 1);
    CHECK(std::abs(split.plus.zeros[0] + I) < 1e-12);
    REQUIRE(split.plus.poles.size() == 1);
    CHECK(std::abs(split.plus.poles[0] + 2.0 * I) < 1e-12);
    for (double t : {-7.0, -0.2, 1.3, 9.0}) {
        cplx recon = split.plus(cplx(t)) * split.minus(cplx(t));
        CHECK(std::abs(recon - R(cplx(t))) < 1e-12);
    }
}

TEST_CASE("splitting exposes the winding as a moebius power") {
    // m(t) itself: one zero above, no poles above
    RationalFunction m{{I}, {-I}, cplx(1.0)};
    RationalSplit split = rational_split(m);
    CHECK(split.kappa == 1);
    for (double t : {-3.0, 0.4, 6.0}) {
        cplx mid = whtest::moebius(t);
        CHECK(std::abs(split.plus(cplx(t)) * mid * split.minus(cplx(t)) - m(cplx(t))) < 1e-12);
    }
}

TEST_CASE("rational fit recovers a rational target exactly") {
    GridPtr grid = Grid::moebius(1024);
    RationalFunction R{{I, -I}, {2.0 * I, -2.0 * I}, cplx(1.0)};
    auto fit = fit_rational([&R](double t) { return R(cplx(t)); }, cplx(1.0), grid, 8, 1e-12);
    CHECK(fit.max_error < 1e-10);
    CHECK_FALSE(fit.max_degree_reached);
}

TEST_CASE("rational fit of the square-root ratio") {
    GridPtr grid = Grid::moebius(2048);
    auto target = [](double t) { return cplx(std::sqrt((t * t + 1.0) / (t * t + 4.0))); };
    auto fit = fit_rational(target, cplx(1.0), grid, 16, 1e-10);
    CHECK(fit.max_error <= 1e-10);
    CHECK_FALSE(fit.max_degree_reached);
    CHECK(fit.degree.first <= 16);
    CHECK(fit.degree.second <= 16);
    // approximant itself must stay clear of the real axis
    fit.approximant.require_off_axis();
}

TEST_CASE("degenerate degree is reported, not hidden") {
    GridPtr grid = Grid::moebius(512);
    auto target = [](double t) { return cplx(std::sqrt((t * t + 1.0) / (t * t + 4.0))); };
    auto fit = fit_rational(target, cplx(1.0), grid, 0, 1e-12);
    CHECK(fit.max_degree_reached);
    CHECK(fit.max_error > 1e-6);
}
