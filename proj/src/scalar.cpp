#include "wh/scalar.hpp"

#include <cmath>
#include <numbers>

namespace wh {

cplx moebius_symbol(double t) { return cplx(t, -1.0) / cplx(t, 1.0); }

int winding_index(const GridFunction &f, double zero_floor) {
    if (f.min_abs() < zero_floor)
        throw ZeroOnLine("winding_index: |f| below floor on the grid");
    const std::size_t n = f.size();
    const double pi = std::numbers::pi;
    double total = 0.0;
    double max_step = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx ratio = f[(j + 1) % n] / f[j];
        double step = std::arg(ratio);
        max_step = std::max(max_step, std::abs(step));
        total += step;
    }
    if (max_step > 0.9 * pi)
        throw AmbiguousIndex("winding_index: argument step near pi, grid too coarse");
    double idx = total / (2.0 * pi);
    double rounded = std::round(idx);
    if (std::abs(idx - rounded) > 0.1)
        throw AmbiguousIndex("winding_index: non-integer total argument change");
    return static_cast<int>(rounded);
}

ScalarFactorization factorize_scalar(const GridFunction &K) {
    if (std::abs(K.limit_at_infinity() - cplx(1.0)) > 1e-9)
        throw PreconditionViolated("factorize_scalar: symbol must tend to 1 at infinity");
    if (K.min_abs() < 1e-9)
        throw ZeroOnLine("factorize_scalar: symbol vanishes on the grid");
    int kappa = winding_index(K);

    const auto &nodes = K.grid().nodes();
    std::vector<cplx> v(K.size());
    for (std::size_t j = 0; j < K.size(); ++j)
        v[j] = K[j] * std::pow(moebius_symbol(nodes[j]), -kappa);
    GridFunction K0(K.grid_ptr(), std::move(v), cplx(1.0));

    GridFunction L = continuous_log(K0, cplx(0.0));
    if (std::abs(L[0].imag()) > 0.5 || std::abs(L[L.size() - 1].imag()) > 0.5)
        throw BranchError("factorize_scalar: log does not return to the principal branch");

    auto [lp, lm] = cauchy_split(L);
    GridFunction plus = lp.map([](cplx z) { return std::exp(z); }, cplx(1.0));
    GridFunction minus = lm.map([](cplx z) { return std::exp(z); }, cplx(1.0));

    double residual = 0.0;
    for (std::size_t j = 0; j < K.size(); ++j) {
        cplx rec = plus[j] * std::pow(moebius_symbol(nodes[j]), kappa) * minus[j];
        residual = std::max(residual, std::abs(rec - K[j]));
    }
    return ScalarFactorization{std::move(plus), std::move(minus), kappa, residual};
}

ScalarBoundReport additive_bound_check(const GridFunction &F, const GridFunction &F_tilde) {
    ScalarBoundReport rep;
    rep.epsilon = l2_norm(F - F_tilde);
    rep.guaranteed = rep.epsilon;
    auto [fp, fm] = cauchy_split(F);
    auto [gp, gm] = cauchy_split(F_tilde);
    rep.measured_plus = l2_norm(fp - gp);
    rep.measured_minus = l2_norm(fm - gm);
    return rep;
}

ScalarBoundReport multiplicative_bound_check(const GridFunction &K, const GridFunction &K_tilde) {
    ScalarBoundReport rep;
    rep.epsilon = l2_norm(K - K_tilde);
    rep.m_lower = std::min(K.min_abs(), K_tilde.min_abs());
    rep.M_upper = std::max(K.max_abs(), K_tilde.max_abs());
    if (rep.epsilon >= rep.m_lower)
        throw PreconditionViolated("multiplicative_bound_check: epsilon >= m");
    ScalarFactorization f = factorize_scalar(K);
    ScalarFactorization g = factorize_scalar(K_tilde);
    if (f.index != 0 || g.index != 0)
        throw PreconditionViolated("multiplicative_bound_check: nonzero index");
    rep.guaranteed = 5.0 * std::sqrt(rep.M_upper + rep.epsilon) / (rep.m_lower - rep.epsilon) *
                     rep.epsilon;
    rep.measured_plus = l2_norm(f.plus - g.plus);
    rep.measured_minus = l2_norm(f.minus - g.minus);
    return rep;
}

} // namespace wh
