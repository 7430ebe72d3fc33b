#ifndef WH_SCALAR_HPP
#define WH_SCALAR_HPP

#include "wh/grid.hpp"
#include "wh/transform.hpp"

namespace wh {

/// m(t) = (t-i)/(t+i), the elementary index carrier.
cplx moebius_symbol(double t);

/// Winding index (1/2pi * total argument change along the line, closed
/// through infinity).  Requires |f| bounded away from zero and equal limits
/// at +-infinity.
int winding_index(const GridFunction &f, double zero_floor = 1e-9);

/// K = K_plus * m^kappa * K_minus with K_pm -> 1 at infinity.
struct ScalarFactorization {
    GridFunction plus;
    GridFunction minus;
    int index = 0;
    double residual = 0.0;
};

ScalarFactorization factorize_scalar(const GridFunction &K);

/// Report for the L2 perturbation estimates on scalar splittings and
/// factorisations.
struct ScalarBoundReport {
    double epsilon = 0.0;
    double m_lower = 0.0;
    double M_upper = 0.0;
    double guaranteed = 0.0;
    double measured_plus = 0.0;
    double measured_minus = 0.0;
};

/// ||F_pm - Ftilde_pm||_2 <= ||F - Ftilde||_2 for the additive splitting.
ScalarBoundReport additive_bound_check(const GridFunction &F, const GridFunction &F_tilde);

/// ||K_pm - Ktilde_pm||_2 <= 5 (M+eps)^{1/2} / (m-eps) * eps for zero-index
/// multiplicative factorisations with m < |K| < M over both symbols.
ScalarBoundReport multiplicative_bound_check(const GridFunction &K, const GridFunction &K_tilde);

} // namespace wh

#endif
