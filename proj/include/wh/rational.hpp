#ifndef WH_RATIONAL_HPP
#define WH_RATIONAL_HPP

#include <functional>
#include <utility>
#include <vector>

#include "wh/grid.hpp"
#include "wh/poly.hpp"

namespace wh {

/// Rational scalar in zeros/poles/gain form.  Evaluation at any real t must
/// be finite and nonzero; poles and zeros keep a configurable distance from
/// the real axis.
struct RationalFunction {
    std::vector<cplx> zeros;
    std::vector<cplx> poles;
    cplx gain{1.0};

    static constexpr double kRealAxisFloor = 1e-6;

    cplx operator()(cplx t) const { return evaluate(*this, t); }
    static cplx evaluate(const RationalFunction &R, cplx t);

    /// Value at infinity; requires equal zero/pole counts.
    cplx limit_at_infinity() const;

    GridFunction sample(GridPtr grid) const;

    RationalFunction reciprocal() const;
    RationalFunction operator*(const RationalFunction &rhs) const;
    RationalFunction operator*(cplx c) const;
    /// R + c through polynomial arithmetic and root-finding.
    RationalFunction operator+(cplx c) const;

    std::pair<Polynomial, Polynomial> to_polys() const;
    static RationalFunction from_polys(const Polynomial &num, const Polynomial &den);

    /// Remove matching zero/pole pairs within tol.
    void cancel(double tol = 1e-12);

    void require_off_axis(double floor = kRealAxisFloor) const;
};

/// R = R_plus * m^kappa * R_minus exactly, with R_plus holding all zeros and
/// poles from the lower half-plane (hence analytic and nonvanishing above),
/// R_minus the reverse, and kappa = #zeros above - #poles above.
struct RationalSplit {
    RationalFunction plus;
    RationalFunction minus;
    int kappa = 0;
};

RationalSplit rational_split(const RationalFunction &R);

struct RationalApproximation {
    RationalFunction approximant;
    std::pair<int, int> degree{0, 0};
    double max_error = 0.0;
    bool max_degree_reached = false;
};

/// Adaptive barycentric interpolation (greedy support selection) of a
/// continuous bounded target on the line, converted to pole/zero form and
/// validated on a 4x denser grid.
RationalApproximation fit_rational(const std::function<cplx(double)> &target,
                                   cplx limit_at_infinity, GridPtr fit_grid, int degree,
                                   double tol);

/// Convenience overload fitting the samples of a GridFunction; validation
/// uses the supplied evaluator for off-grid points.
RationalApproximation fit_rational(const GridFunction &target, int degree, double tol,
                                   const std::function<cplx(double)> &evaluator);

} // namespace wh

#endif
