#include "wh/dk.hpp"

#include <algorithm>
#include <cmath>

#include "wh/transform.hpp"

namespace wh {

namespace {

cplx sinhc(cplx d, cplx phi) {
    // sinh(d*phi)/d, continuous through d = 0
    if (std::abs(d) < 1e-12)
        return phi;
    return std::sinh(d * phi) / d;
}

double poly_scale(const Polynomial &p) {
    double s = 0.0;
    for (const cplx &c : p.coeffs())
        s = std::max(s, std::abs(c));
    return s;
}

bool poly_close(const Polynomial &a, const Polynomial &b, double tol) {
    double scale = 1.0 + std::max(poly_scale(a), poly_scale(b));
    return (a - b).is_zero(tol * scale);
}

// Pick the representative of `candidates` closest to the tracked edge value.
cplx snap_limit(cplx edge, const std::vector<cplx> &candidates) {
    cplx best = candidates.front();
    double dist = std::abs(edge - best);
    for (const cplx &c : candidates) {
        double d = std::abs(edge - c);
        if (d < dist) {
            dist = d;
            best = c;
        }
    }
    return best;
}

} // namespace

const GridFunction &GridMat2::at(int r, int c) const {
    if (r == 0)
        return c == 0 ? a11 : a12;
    return c == 0 ? a21 : a22;
}

GridMat2 GridMat2::mul(const GridMat2 &rhs) const {
    return GridMat2{a11 * rhs.a11 + a12 * rhs.a21, a11 * rhs.a12 + a12 * rhs.a22,
                    a21 * rhs.a11 + a22 * rhs.a21, a21 * rhs.a12 + a22 * rhs.a22};
}

GridMat2 GridMat2::identity(const GridPtr &grid) {
    std::vector<cplx> ones(grid->size(), cplx(1.0));
    std::vector<cplx> zeros(grid->size(), cplx(0.0));
    return GridMat2{GridFunction(grid, ones, 1.0), GridFunction(grid, zeros, 0.0),
                    GridFunction(grid, zeros, 0.0), GridFunction(grid, ones, 1.0)};
}

double GridMat2::sup_distance(const GridMat2 &rhs) const {
    double d = 0.0;
    d = std::max(d, (a11 - rhs.a11).sup_norm());
    d = std::max(d, (a12 - rhs.a12).sup_norm());
    d = std::max(d, (a21 - rhs.a21).sup_norm());
    d = std::max(d, (a22 - rhs.a22).sup_norm());
    return d;
}

std::array<cplx, 4> GridMat2::value_at(std::size_t node) const {
    return {a11[node], a12[node], a21[node], a22[node]};
}

std::array<cplx, 4> GridMat2::limit() const {
    return {a11.limit_at_infinity(), a12.limit_at_infinity(), a21.limit_at_infinity(),
            a22.limit_at_infinity()};
}

EntireMatrixJ EntireMatrixJ::anti_diagonal(cplx top, cplx bottom) {
    return EntireMatrixJ{Polynomial::constant(0.0), Polynomial::constant(top),
                         Polynomial::constant(bottom), Polynomial::constant(0.0),
                         Polynomial::constant(top * bottom)};
}

std::array<cplx, 4> EntireMatrixJ::eval(cplx t) const {
    return {e11(t), e12(t), e21(t), e22(t)};
}

bool EntireMatrixJ::is_constant_anti_diagonal() const {
    return e11.is_zero(1e-14) && e22.is_zero(1e-14) && e12.degree() == 0 && e21.degree() == 0;
}

bool EntireMatrixJ::same_as(const EntireMatrixJ &rhs, double tol) const {
    return poly_close(e11, rhs.e11, tol) && poly_close(e12, rhs.e12, tol) &&
           poly_close(e21, rhs.e21, tol) && poly_close(e22, rhs.e22, tol) &&
           poly_close(delta_sq, rhs.delta_sq, tol);
}

GridFunction DKMatrix::determinant() const {
    const auto &nodes = f.grid().nodes();
    std::vector<cplx> vals(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        cplx d2 = J.delta_sq(nodes[j]);
        vals[j] = 1.0 - d2 * f[j] * f[j];
    }
    cplx lim(1.0);
    if (J.delta_sq.degree() == 0)
        lim = 1.0 - J.delta_sq(0.0) * f.limit_at_infinity() * f.limit_at_infinity();
    else if (f.limit_at_infinity() == cplx(0.0))
        lim = cplx(1.0); // f must outpace the polynomial growth of Delta^2
    else
        throw PreconditionViolated("DKMatrix: non-decaying f with polynomial J has no determinant limit");
    return GridFunction(f.grid_ptr(), std::move(vals), lim);
}

GridFunction DKMatrix::delta() const {
    if (J.delta_sq.degree() == 0) {
        cplx d = std::sqrt(J.delta_sq(0.0));
        std::vector<cplx> vals(f.size(), d);
        return GridFunction(f.grid_ptr(), std::move(vals), d);
    }
    const auto &nodes = f.grid().nodes();
    std::vector<cplx> vals(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j)
        vals[j] = J.delta_sq(nodes[j]);
    GridFunction d2(f.grid_ptr(), std::move(vals), vals.empty() ? cplx(0.0) : vals.back());
    return continuous_sqrt(d2, std::sqrt(d2.limit_at_infinity()));
}

GridMat2 DKMatrix::sample() const {
    const auto &nodes = f.grid().nodes();
    std::size_t n = nodes.size();
    std::array<std::vector<cplx>, 4> vals;
    for (auto &v : vals)
        v.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto Jv = J.eval(nodes[j]);
        vals[0][j] = 1.0 + f[j] * Jv[0];
        vals[1][j] = f[j] * Jv[1];
        vals[2][j] = f[j] * Jv[2];
        vals[3][j] = 1.0 + f[j] * Jv[3];
    }
    bool const_j = J.e11.degree() <= 0 && J.e12.degree() <= 0 && J.e21.degree() <= 0 &&
                   J.e22.degree() <= 0;
    std::array<cplx, 4> lim;
    if (const_j) {
        auto J0 = J.eval(0.0);
        cplx fl = f.limit_at_infinity();
        lim = {1.0 + fl * J0[0], fl * J0[1], fl * J0[2], 1.0 + fl * J0[3]};
    } else {
        lim = {vals[0].back(), vals[1].back(), vals[2].back(), vals[3].back()};
    }
    return GridMat2{GridFunction(f.grid_ptr(), std::move(vals[0]), lim[0]),
                    GridFunction(f.grid_ptr(), std::move(vals[1]), lim[1]),
                    GridFunction(f.grid_ptr(), std::move(vals[2]), lim[2]),
                    GridFunction(f.grid_ptr(), std::move(vals[3]), lim[3])};
}

DKDiagnostics validate_dk(const DKMatrix &K) {
    DKDiagnostics diag;
    const EntireMatrixJ &J = K.J;
    diag.trace_zero = poly_close(J.e11 + J.e22, Polynomial::constant(0.0), 1e-10);
    Polynomial sq11 = J.e11 * J.e11 + J.e12 * J.e21;
    Polynomial sq12 = J.e11 * J.e12 + J.e12 * J.e22;
    Polynomial sq21 = J.e21 * J.e11 + J.e22 * J.e21;
    Polynomial sq22 = J.e21 * J.e12 + J.e22 * J.e22;
    diag.involution = poly_close(sq11, J.delta_sq, 1e-10) && poly_close(sq22, J.delta_sq, 1e-10) &&
                      poly_close(sq12, Polynomial::constant(0.0), 1e-10) &&
                      poly_close(sq21, Polynomial::constant(0.0), 1e-10);
    diag.delta_sq_degree = J.delta_sq.degree();
    diag.growth_safe = diag.delta_sq_degree <= 2;
    diag.det_min = K.determinant().min_abs();
    return diag;
}

DKParameters dk_parameters(const DKMatrix &K) {
    DKDiagnostics diag = validate_dk(K);
    if (!diag.valid())
        throw PreconditionViolated("dk_parameters: J is not trace-free with J^2 = Delta^2 I");

    GridFunction delta = K.delta();
    if (delta.min_abs() < 1e-9)
        throw PreconditionViolated("dk_parameters: Delta vanishes on the grid");

    // w = Delta f with its limit at infinity
    std::size_t n = K.f.size();
    std::vector<cplx> wv(n);
    for (std::size_t j = 0; j < n; ++j)
        wv[j] = delta[j] * K.f[j];
    cplx w_lim;
    if (K.J.delta_sq.degree() == 0)
        w_lim = delta.limit_at_infinity() * K.f.limit_at_infinity();
    else if (K.f.limit_at_infinity() == cplx(0.0))
        w_lim = cplx(0.0);
    else
        throw PreconditionViolated("dk_parameters: Delta f has no limit at infinity");
    GridFunction w(K.f.grid_ptr(), std::move(wv), w_lim);

    std::vector<cplx> dv(n);
    for (std::size_t j = 0; j < n; ++j)
        dv[j] = 1.0 - w[j] * w[j];
    GridFunction det(K.f.grid_ptr(), std::move(dv), 1.0 - w_lim * w_lim);
    int det_winding = winding_index(det);
    if (det_winding % 2 != 0)
        throw WindingObstruction("dk_parameters: determinant has odd winding");

    std::vector<cplx> ratio_v(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx denom = 1.0 - w[j];
        if (std::abs(denom) < 1e-12)
            throw ZeroOnLine("dk_parameters: 1 - Delta f vanishes on the grid");
        ratio_v[j] = (1.0 + w[j]) / denom;
    }
    GridFunction ratio(K.f.grid_ptr(), std::move(ratio_v), (1.0 + w_lim) / (1.0 - w_lim));
    int ratio_winding = winding_index(ratio);
    if (ratio_winding != 0)
        throw WindingObstruction("dk_parameters: (1 + Delta f)/(1 - Delta f) has nonzero winding");

    // r: sign-tracked square root of the determinant, limit snapped onto the
    // analytic value +-sqrt(1 - w_inf^2)
    GridFunction r_raw = continuous_sqrt(det, std::sqrt(det.limit_at_infinity()));
    cplx r_edge = 0.5 * (r_raw[0] + r_raw[n - 1]);
    cplx r_principal = std::sqrt(det.limit_at_infinity());
    cplx r_lim = snap_limit(r_edge, {r_principal, -r_principal});
    GridFunction r(K.f.grid_ptr(), std::vector<cplx>(r_raw.values()), r_lim);

    // theta: exp(2 Delta theta) = ratio, branch tracked along the grid
    GridFunction lg = continuous_log(ratio, std::log(ratio.limit_at_infinity()));
    std::vector<cplx> th(n);
    for (std::size_t j = 0; j < n; ++j)
        th[j] = lg[j] / (2.0 * delta[j]);
    cplx d_inf = delta.limit_at_infinity();
    cplx th_edge = 0.5 * (th[0] + th[n - 1]);
    std::vector<cplx> th_candidates;
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int k = -4; k <= 4; ++k)
        th_candidates.push_back((std::log(ratio.limit_at_infinity()) + cplx(0.0, two_pi * k)) /
                                (2.0 * d_inf));
    cplx th_lim = snap_limit(th_edge, th_candidates);
    GridFunction theta(K.f.grid_ptr(), std::move(th), th_lim);

    return DKParameters{std::move(r), std::move(theta), K.J};
}

GridMat2 assemble_dk(const GridFunction &rho, const GridFunction &phi, const GridFunction &delta,
                     const EntireMatrixJ &J) {
    require_same_grid(rho, phi);
    require_same_grid(rho, delta);
    const auto &nodes = rho.grid().nodes();
    std::size_t n = nodes.size();
    std::array<std::vector<cplx>, 4> vals;
    for (auto &v : vals)
        v.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto Jv = J.eval(nodes[j]);
        cplx c = std::cosh(delta[j] * phi[j]);
        cplx s = sinhc(delta[j], phi[j]);
        vals[0][j] = rho[j] * (c + s * Jv[0]);
        vals[1][j] = rho[j] * s * Jv[1];
        vals[2][j] = rho[j] * s * Jv[2];
        vals[3][j] = rho[j] * (c + s * Jv[3]);
    }
    bool const_j = J.e11.degree() <= 0 && J.e12.degree() <= 0 && J.e21.degree() <= 0 &&
                   J.e22.degree() <= 0 && J.delta_sq.degree() <= 0;
    std::array<cplx, 4> lim;
    if (const_j) {
        auto J0 = J.eval(0.0);
        cplx d = delta.limit_at_infinity();
        cplx p = phi.limit_at_infinity();
        cplx rl = rho.limit_at_infinity();
        cplx c = std::cosh(d * p);
        cplx s = sinhc(d, p);
        lim = {rl * (c + s * J0[0]), rl * s * J0[1], rl * s * J0[2], rl * (c + s * J0[3])};
    } else {
        lim = {vals[0].back(), vals[1].back(), vals[2].back(), vals[3].back()};
    }
    return GridMat2{GridFunction(rho.grid_ptr(), std::move(vals[0]), lim[0]),
                    GridFunction(rho.grid_ptr(), std::move(vals[1]), lim[1]),
                    GridFunction(rho.grid_ptr(), std::move(vals[2]), lim[2]),
                    GridFunction(rho.grid_ptr(), std::move(vals[3]), lim[3])};
}

double factorization_residual(const MatrixFactorization &fac, const GridMat2 &symbol) {
    const auto &nodes = symbol.a11.grid().nodes();
    double worst = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        cplx m = moebius_symbol(nodes[j]);
        cplx m1 = std::pow(m, fac.partial_indices.first);
        cplx m2 = std::pow(m, fac.partial_indices.second);
        auto P = fac.plus.value_at(j);
        auto Q = fac.minus.value_at(j);
        // plus * diag(m^k1, m^k2) * minus
        cplx r11 = P[0] * m1 * Q[0] + P[1] * m2 * Q[2];
        cplx r12 = P[0] * m1 * Q[1] + P[1] * m2 * Q[3];
        cplx r21 = P[2] * m1 * Q[0] + P[3] * m2 * Q[2];
        cplx r22 = P[2] * m1 * Q[1] + P[3] * m2 * Q[3];
        auto S = symbol.value_at(j);
        worst = std::max({worst, std::abs(r11 - S[0]), std::abs(r12 - S[1]), std::abs(r21 - S[2]),
                          std::abs(r22 - S[3])});
    }
    return worst;
}

MatrixFactorization dk_factorize(const DKMatrix &K) {
    DKDiagnostics diag = validate_dk(K);
    if (!diag.valid())
        throw PreconditionViolated("dk_factorize: symbol is not of Daniele-Khrapkov form");
    if (!diag.growth_safe)
        throw GrowthUnsafe("dk_factorize: deg Delta^2 > 2 gives exponentially growing factors");

    DKParameters params = dk_parameters(K);
    GridFunction delta = K.delta();

    cplx r_inf = params.r.limit_at_infinity();
    GridFunction r_normalized = params.r * (1.0 / r_inf);
    ScalarFactorization rf = factorize_scalar(r_normalized);
    GridFunction r_plus = rf.plus * r_inf;
    GridFunction r_minus = rf.minus;

    cplx th_inf = params.theta.limit_at_infinity();
    GridFunction th0 = params.theta - th_inf;
    auto [tp, tm] = cauchy_split(th0);
    GridFunction theta_plus = tp + th_inf;
    GridFunction theta_minus = tm;

    MatrixFactorization fac{assemble_dk(r_plus, theta_plus, delta, K.J),
                            assemble_dk(r_minus, theta_minus, delta, K.J),
                            {rf.index, rf.index},
                            0.0,
                            {}};
    fac.residual = factorization_residual(fac, K.sample());
    return fac;
}

std::pair<int, int> dk_partial_indices(const DKMatrix &K) {
    if (!K.J.is_constant_anti_diagonal())
        throw UnsupportedJ("dk_partial_indices: closed form needs a constant anti-diagonal J");
    cplx s = std::sqrt(K.J.e12(0.0) * K.J.e21(0.0));
    std::size_t n = K.f.size();
    std::vector<cplx> gp(n), gm(n);
    for (std::size_t j = 0; j < n; ++j) {
        gp[j] = 1.0 + s * K.f[j];
        gm[j] = 1.0 - s * K.f[j];
    }
    cplx fl = K.f.limit_at_infinity();
    GridFunction plus_branch(K.f.grid_ptr(), std::move(gp), 1.0 + s * fl);
    GridFunction minus_branch(K.f.grid_ptr(), std::move(gm), 1.0 - s * fl);
    return {winding_index(plus_branch), winding_index(minus_branch)};
}

DKParameters dk_commutative_product(const DKParameters &p1, const DKParameters &p2) {
    if (!p1.J.same_as(p2.J))
        throw MismatchedJ("dk_commutative_product: parameter sets use different J matrices");
    return DKParameters{p1.r * p2.r, p1.theta + p2.theta, p1.J};
}

} // namespace wh
