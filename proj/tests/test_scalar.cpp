#include <doctest.h>

#include <cmath>
#include <random>

#include "wh/errors.hpp"
#include "wh/scalar.hpp"
#include "wh/symbols.hpp"
#include "wh/transform.hpp"

#include "test_helpers.hpp"

using namespace wh;
using whtest::I;

TEST_CASE("winding index of moebius powers") {
    GridPtr grid = Grid::moebius(2048);
    for (int k : {-2, -1, 0, 1, 3}) {
        auto f = GridFunction::sample(
            grid, [k](double t) { return std::pow(whtest::moebius(t), k); }, 1.0);
        CHECK(winding_index(f) == k);
    }
}

TEST_CASE("winding index rejects a zero on the line") {
    GridPtr grid = Grid::moebius(512);
    std::vector<cplx> vals(grid->size(), cplx(1.0));
    vals[grid->size() / 2] = cplx(1e-12); // dips below the modulus floor
    GridFunction f(grid, std::move(vals), 1.0);
    CHECK_THROWS_AS(winding_index(f), ZeroOnLine);
}

TEST_CASE("factorization of the square-root ratio matches the closed form") {
    Symbol sym = symbol_sqrt_ratio(2.0);
    GridPtr grid = Grid::moebius(4096);
    ScalarFactorization fac = factorize_scalar(sym.sample(grid));
    CHECK(fac.index == 0);
    CHECK(fac.residual < 1e-10);
    CHECK(whtest::sup_error_window(fac.plus, sym.plus, 50.0) < 1e-8);
    CHECK(whtest::sup_error_window(fac.minus, sym.minus, 50.0) < 1e-8);
    // factor analyticity in the proper half-planes
    CHECK(spectral_support_defect_shifted(fac.plus, HalfPlane::Plus) < 1e-8);
    CHECK(spectral_support_defect_shifted(fac.minus, HalfPlane::Minus) < 1e-8);
}

TEST_CASE("index -1 symbol reproduces its displayed factors") {
    Symbol sym = symbol_third_kind();
    GridPtr grid = Grid::moebius(4096);
    ScalarFactorization fac = factorize_scalar(sym.sample(grid));
    CHECK(fac.index == -1);
    CHECK(fac.residual < 1e-10);
    CHECK(whtest::sup_error_window(fac.plus, sym.plus, 50.0) < 1e-8);
    CHECK(whtest::sup_error_window(fac.minus, sym.minus, 50.0) < 1e-8);
}

TEST_CASE("constant symbol factors trivially") {
    GridPtr grid = Grid::moebius(256);
    auto one = GridFunction::sample(grid, [](double) { return cplx(1.0); }, 1.0);
    ScalarFactorization fac = factorize_scalar(one);
    CHECK(fac.index == 0);
    CHECK(fac.residual < 1e-14);
    CHECK(whtest::sup_error(fac.plus, [](double) { return cplx(1.0); }) < 1e-12);
}

TEST_CASE("factorization preconditions") {
    GridPtr grid = Grid::moebius(256);
    auto wrong_limit =
        GridFunction::sample(grid, [](double) { return cplx(2.0); }, 2.0);
    CHECK_THROWS_AS(factorize_scalar(wrong_limit), Error);
    std::vector<cplx> vals(grid->size(), cplx(1.0));
    vals[grid->size() / 3] = cplx(0.0);
    GridFunction vanishing(grid, std::move(vals), 1.0);
    CHECK_THROWS_AS(factorize_scalar(vanishing), ZeroOnLine);
}

TEST_CASE("factor reconstruction is an identity on the nodes") {
    Symbol sym = symbol_third_kind();
    GridPtr grid = Grid::moebius(2048);
    auto K = sym.sample(grid);
    ScalarFactorization fac = factorize_scalar(K);
    for (std::size_t j = 0; j < grid->size(); ++j) {
        cplx mid = std::pow(whtest::moebius(grid->nodes()[j]), fac.index);
        CHECK(std::abs(fac.plus[j] * mid * fac.minus[j] - K[j]) < 1e-9);
    }
}

namespace {

GridFunction random_bump_sum(GridPtr grid, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    auto draw = [&] { return whtest::uniform01(rng()); };
    std::vector<cplx> poles;
    std::vector<cplx> amps;
    for (int b = 0; b < 3; ++b) {
        poles.emplace_back(-3.0 + 6.0 * draw(), 0.4 + 2.0 * draw());
        amps.emplace_back(draw() - 0.5, draw() - 0.5);
    }
    return GridFunction::sample(
        grid,
        [&](double t) {
            cplx v = 0.0;
            for (std::size_t b = 0; b < poles.size(); ++b)
                v += amps[b] / ((cplx(t) - poles[b]) * (cplx(t) - std::conj(poles[b])));
            return scale * v;
        },
        0.0);
}

} // namespace

TEST_CASE("additive splitting is L2 non-expansive") {
    GridPtr grid = Grid::moebius(1024);
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        auto F = random_bump_sum(grid, seed, 1.0);
        auto F_tilde = F + random_bump_sum(grid, seed + 100, 1e-4);
        ScalarBoundReport rep = additive_bound_check(F, F_tilde);
        CHECK(rep.epsilon > 0.0);
        CHECK(rep.measured_plus <= rep.guaranteed + 1e-12);
        CHECK(rep.measured_minus <= rep.guaranteed + 1e-12);
    }
}

TEST_CASE("multiplicative factor distance obeys the scalar bound") {
    GridPtr grid = Grid::moebius(1024);
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        // keep |K - 1| < 1 so the symbol is invertible with zero winding
        auto K = random_bump_sum(grid, seed, 0.05) + cplx(1.0);
        auto K_tilde = K + random_bump_sum(grid, seed + 50, 1e-4);
        ScalarBoundReport rep = multiplicative_bound_check(K, K_tilde);
        CHECK(rep.measured_plus <= rep.guaranteed + 1e-10);
        CHECK(rep.measured_minus <= rep.guaranteed + 1e-10);
        // the bound carries a factor-five margin; the measurement should not
        // be degenerate either
        CHECK(rep.measured_plus + rep.measured_minus > 0.0);
    }
}
