#include "wh/stability.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "wh/scalar.hpp"
#include "wh/transform.hpp"

namespace wh {

namespace {

const cplx I(0.0, 1.0);

cplx snap_to(cplx edge, const std::vector<cplx> &candidates) {
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

cplx snap_log_limit(const GridFunction &lg, cplx target) {
    const double two_pi = 2.0 * std::numbers::pi;
    cplx edge = 0.5 * (lg[0] + lg[lg.size() - 1]);
    std::vector<cplx> candidates;
    for (int k = -4; k <= 4; ++k)
        candidates.push_back(std::log(target) + cplx(0.0, two_pi * k));
    return snap_to(edge, candidates);
}

/// Difference with the limit pinned to zero; the declared limits must agree.
GridFunction pinned_diff(const GridFunction &a, const GridFunction &b) {
    require_same_grid(a, b);
    if (std::abs(a.limit_at_infinity() - b.limit_at_infinity()) > 1e-8)
        throw PreconditionViolated("compared functions have different limits at infinity");
    std::vector<cplx> vals(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        vals[j] = a[j] - b[j];
    return GridFunction(a.grid_ptr(), std::move(vals), cplx(0.0));
}

struct SplitParams {
    DKParameters params;
    GridFunction r_plus, r_minus, theta_plus, theta_minus;
    int kappa = 0;
};

SplitParams split_parameters(const DKMatrix &K) {
    DKParameters params = dk_parameters(K);
    cplx r_inf = params.r.limit_at_infinity();
    ScalarFactorization rf = factorize_scalar(params.r * (1.0 / r_inf));
    cplx th_inf = params.theta.limit_at_infinity();
    auto [tp, tm] = cauchy_split(params.theta - th_inf);
    return SplitParams{std::move(params), rf.plus * r_inf, std::move(rf.minus), tp + th_inf,
                       std::move(tm), rf.index};
}

double max_entry_l2(const GridMat2 &a, const GridMat2 &b) {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            worst = std::max(worst, l2_norm(pinned_diff(a.at(r, c), b.at(r, c))));
    return worst;
}

double uniform01(std::mt19937_64 &rng);

struct SlopeFit {
    double slope = 0.0;
    double ci = 0.0; // 95% half-width
};

SlopeFit regression_slope(const std::vector<double> &logx, const std::vector<double> &logy) {
    SlopeFit fit;
    double n = static_cast<double>(logx.size());
    if (logx.size() < 2)
        return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < logx.size(); ++j) {
        sx += logx[j];
        sy += logy[j];
        sxx += logx[j] * logx[j];
        sxy += logx[j] * logy[j];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    if (logx.size() > 2) {
        double intercept = (sy - fit.slope * sx) / n;
        double ss_res = 0.0, ss_x = sxx - sx * sx / n;
        for (std::size_t j = 0; j < logx.size(); ++j) {
            double e = logy[j] - (intercept + fit.slope * logx[j]);
            ss_res += e * e;
        }
        if (ss_x > 0.0)
            fit.ci = 1.96 * std::sqrt(ss_res / (n - 2.0) / ss_x);
    }
    return fit;
}

} // namespace

DKBoundReport lemma_bounds(const DKMatrix &K, const DKMatrix &K_tilde) {
    if (!K.J.same_as(K_tilde.J))
        throw MismatchedJ("lemma_bounds: symbols use different J matrices");
    require_same_grid(K.f, K_tilde.f);

    GridFunction delta = K.delta();
    SplitParams a = split_parameters(K);
    SplitParams b = split_parameters(K_tilde);

    const std::size_t n = K.f.size();
    std::vector<cplx> wv(n), wtv(n), onepw(n), onepwt(n), lratio(n);
    for (std::size_t j = 0; j < n; ++j) {
        wv[j] = delta[j] * K.f[j];
        wtv[j] = delta[j] * K_tilde.f[j];
        onepw[j] = 1.0 + wv[j];
        onepwt[j] = 1.0 + wtv[j];
        lratio[j] = (1.0 - wv[j]) / (1.0 + wv[j]);
    }

    DKBoundReport rep;
    {
        std::vector<cplx> diff(n);
        for (std::size_t j = 0; j < n; ++j)
            diff[j] = wv[j] - wtv[j];
        if (std::abs(K.f.limit_at_infinity() - K_tilde.f.limit_at_infinity()) > 1e-8)
            throw PreconditionViolated("lemma_bounds: symbols differ at infinity");
        rep.epsilon = l2_norm(GridFunction(K.f.grid_ptr(), std::move(diff), cplx(0.0)));
    }
    auto abs_max = [](const std::vector<cplx> &v) {
        double m = 0.0;
        for (const cplx &x : v)
            m = std::max(m, std::abs(x));
        return m;
    };
    auto abs_min = [](const std::vector<cplx> &v) {
        double m = std::abs(v.front());
        for (const cplx &x : v)
            m = std::min(m, std::abs(x));
        return m;
    };
    rep.m = std::min(a.params.r.min_abs(), b.params.r.min_abs());
    rep.M = std::max(a.params.r.max_abs(), b.params.r.max_abs());
    rep.N = std::max(abs_max(wv), abs_max(wtv));
    rep.c = delta.min_abs();
    rep.d = std::min(abs_min(onepw), abs_min(onepwt));
    rep.L = abs_max(lratio);

    rep.r_bound = rep.N * rep.epsilon / rep.m;
    rep.theta_bound = 2.0 * rep.epsilon / (rep.c * rep.d * rep.d * rep.L);
    rep.r_factor_bound = 5.0 * rep.M * rep.N * rep.epsilon / (rep.m * rep.m);
    rep.theta_split_bound = rep.theta_bound;

    rep.measured_r = l2_norm(pinned_diff(a.params.r, b.params.r));
    rep.measured_theta = l2_norm(pinned_diff(a.params.theta, b.params.theta));
    if (a.kappa != b.kappa) {
        rep.admissible = false;
        rep.note = "factor indices differ; factor distances not comparable";
        return rep;
    }
    rep.measured_r_pm = std::max(l2_norm(pinned_diff(a.r_plus, b.r_plus)),
                                 l2_norm(pinned_diff(a.r_minus, b.r_minus)));
    rep.measured_theta_pm = std::max(l2_norm(pinned_diff(a.theta_plus, b.theta_plus)),
                                     l2_norm(pinned_diff(a.theta_minus, b.theta_minus)));
    rep.admissible = rep.epsilon < rep.m / 2.0 && rep.epsilon < rep.d / 2.0;
    if (!rep.admissible)
        rep.note = "epsilon not small against m or d";
    return rep;
}

namespace {

double uniform01(std::mt19937_64 &rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

GridFunction rational_bump(const GridPtr &grid, cplx z) {
    std::vector<cplx> vals(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j) {
        double t = grid->nodes()[j];
        vals[j] = 1.0 / ((t - z) * (t - std::conj(z)));
    }
    return GridFunction(grid, std::move(vals), cplx(0.0));
}

DKMatrix perturbed_symbol(const DKMatrix &K, cplx z, double eps) {
    GridFunction bump = rational_bump(K.f.grid_ptr(), z);
    GridFunction delta = K.delta();
    double scale_norm = l2_norm(GridFunction(
        K.f.grid_ptr(),
        [&] {
            std::vector<cplx> v(K.f.size());
            for (std::size_t j = 0; j < K.f.size(); ++j)
                v[j] = delta[j] * bump[j];
            return v;
        }(),
        cplx(0.0)));
    double s = eps / scale_norm;
    return DKMatrix{K.f + bump * cplx(s), K.J};
}

SweepDraw run_draw(const DKMatrix &K, const MatrixFactorization &base_fac, cplx z, double eps) {
    SweepDraw draw;
    draw.epsilon_target = eps;
    try {
        DKMatrix Kt = perturbed_symbol(K, z, eps);
        draw.report = lemma_bounds(K, Kt);
        draw.admissible = draw.report.admissible;
        MatrixFactorization fac_t = dk_factorize(Kt);
        draw.factor_error = std::max(max_entry_l2(base_fac.plus, fac_t.plus),
                                     max_entry_l2(base_fac.minus, fac_t.minus));
        if (draw.admissible) {
            const DKBoundReport &r = draw.report;
            draw.pass = r.measured_r <= r.r_bound && r.measured_theta <= r.theta_bound &&
                        r.measured_r_pm <= r.r_factor_bound &&
                        r.measured_theta_pm <= r.theta_split_bound;
            if (!draw.pass)
                draw.failure = "measured value exceeded its bound";
        }
    } catch (const Error &e) {
        draw.failure = e.what();
        draw.admissible = false;
        draw.pass = false;
    }
    return draw;
}

} // namespace

SweepResult perturbation_sweep(const DKMatrix &K, const PerturbationFamily &family, int count) {
    SweepResult result;
    if (count <= 0)
        return result;
    MatrixFactorization base_fac = dk_factorize(K);
    std::vector<double> lx, ly;
    for (int i = 0; i < count; ++i) {
        // draw i depends only on seed + i, independent of execution order
        std::mt19937_64 rng(family.seed + static_cast<std::uint64_t>(i));
        double x = -3.0 + 6.0 * uniform01(rng);
        double y = 0.3 + 2.7 * uniform01(rng);
        double eps = family.eps_min *
                     std::pow(family.eps_max / family.eps_min, uniform01(rng));
        SweepDraw draw = run_draw(K, base_fac, cplx(x, y), eps);
        if (draw.admissible) {
            ++result.admissible_count;
            if (draw.pass)
                ++result.passes;
            if (draw.factor_error > 0.0) {
                lx.push_back(std::log(draw.report.epsilon));
                ly.push_back(std::log(draw.factor_error));
            }
        }
        result.draws.push_back(std::move(draw));
    }
    SlopeFit fit = regression_slope(lx, ly);
    result.slope = fit.slope;
    result.slope_ci = fit.ci;
    return result;
}

double epsilon_scaling_slope(const DKMatrix &K, std::uint64_t seed, double eps_start,
                             int halvings) {
    MatrixFactorization base_fac = dk_factorize(K);
    std::mt19937_64 rng(seed);
    double x = -3.0 + 6.0 * uniform01(rng);
    double y = 0.3 + 2.7 * uniform01(rng);
    std::vector<double> lx, ly;
    double eps = eps_start;
    for (int i = 0; i <= halvings; ++i, eps *= 0.5) {
        SweepDraw draw = run_draw(K, base_fac, cplx(x, y), eps);
        if (draw.factor_error > 0.0 && draw.failure.empty()) {
            lx.push_back(std::log(draw.report.epsilon));
            ly.push_back(std::log(draw.factor_error));
        }
    }
    return regression_slope(lx, ly).slope;
}

const MatrixFactorization &UnstableExample::perturbed_or_throw() const {
    if (!perturbed)
        throw ZeroEpsilon("unstable example: no perturbed factorisation at epsilon = 0");
    return *perturbed;
}

UnstableExample unstable_example(double epsilon, GridPtr grid) {
    auto sample_entry = [&grid](const std::function<cplx(double)> &fn, cplx lim) {
        return GridFunction::sample(grid, fn, lim);
    };
    auto m_fn = [](double t) { return moebius_symbol(t); };
    auto inv_m_fn = [](double t) { return 1.0 / moebius_symbol(t); };
    auto const_fn = [](cplx c) { return [c](double) { return c; }; };

    GridMat2 ident = GridMat2::identity(grid);
    GridMat2 diag_symbol{sample_entry(m_fn, 1.0), sample_entry(const_fn(0.0), 0.0),
                         sample_entry(const_fn(0.0), 0.0), sample_entry(inv_m_fn, 1.0)};

    UnstableExample ex{MatrixFactorization{ident, ident, {1, -1}, 0.0, {}}, std::nullopt,
                       epsilon};
    ex.unperturbed.residual = factorization_residual(ex.unperturbed, diag_symbol);

    if (epsilon == 0.0)
        return ex;

    GridMat2 plus{sample_entry(const_fn(1.0), 1.0), sample_entry(m_fn, 1.0),
                  sample_entry(const_fn(0.0), 0.0), sample_entry(const_fn(epsilon), epsilon)};
    GridMat2 minus{sample_entry(const_fn(0.0), 0.0),
                   sample_entry(const_fn(-1.0 / epsilon), -1.0 / epsilon),
                   sample_entry(const_fn(1.0), 1.0),
                   sample_entry([epsilon](double t) { return 1.0 / (epsilon * moebius_symbol(t)); },
                                1.0 / epsilon)};
    GridMat2 pert_symbol{diag_symbol.a11, diag_symbol.a12,
                         sample_entry(const_fn(epsilon), epsilon), diag_symbol.a22};
    MatrixFactorization pert{std::move(plus), std::move(minus), {0, 0}, 0.0, {}};
    pert.residual = factorization_residual(pert, pert_symbol);
    ex.perturbed = std::move(pert);
    return ex;
}

GridMat2 RationalDKMatrix::sample() const {
    const GridPtr grid = g.grid_ptr();
    const auto &nodes = grid->nodes();
    std::size_t n = grid->size();
    std::vector<cplx> a12(n), a21(n), ones(n, cplx(1.0));
    for (std::size_t j = 0; j < n; ++j) {
        cplx rv = r_N(cplx(nodes[j], 0.0));
        a12[j] = g[j] / rv;
        a21[j] = g[j] * rv;
    }
    cplx lim12 = a12.back(), lim21 = a21.back();
    if (r_N.zeros.size() == r_N.poles.size()) {
        cplx rinf = r_N.limit_at_infinity();
        lim12 = g.limit_at_infinity() / rinf;
        lim21 = g.limit_at_infinity() * rinf;
    }
    return GridMat2{GridFunction(grid, ones, 1.0), GridFunction(grid, std::move(a12), lim12),
                    GridFunction(grid, std::move(a21), lim21), GridFunction(grid, ones, 1.0)};
}

RationalDKMatrix abrahams_reduce(const RationalFunction &n, const RationalFunction &p,
                                 const GridFunction &f, int fit_degree) {
    n.require_off_axis();
    p.require_off_axis();
    RationalFunction ratio = p * n.reciprocal(); // (p/n), target of the square root
    ratio.cancel();

    // try the exact route: every zero and pole paired up
    auto pair_up = [](std::vector<cplx> items, std::vector<cplx> &reps) {
        while (!items.empty()) {
            cplx a = items.back();
            items.pop_back();
            double best = 1e300;
            std::size_t pick = items.size();
            for (std::size_t j = 0; j < items.size(); ++j) {
                double dist = std::abs(items[j] - a);
                if (dist < best) {
                    best = dist;
                    pick = j;
                }
            }
            if (pick == items.size() || best > 1e-8 * (1.0 + std::abs(a)))
                return false;
            reps.push_back(0.5 * (a + items[pick]));
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        return true;
    };

    auto sqrt_eval = [&ratio](double t) { return std::sqrt(ratio(cplx(t, 0.0))); };
    cplx sqrt_limit = ratio.zeros.size() == ratio.poles.size()
                          ? std::sqrt(ratio.limit_at_infinity())
                          : sqrt_eval(f.grid().nodes().back());

    RationalFunction r_fit;
    double fit_error = 0.0;
    bool exact = false;
    bool degree_capped = false;

    std::vector<cplx> zr, pr;
    if (ratio.zeros.size() % 2 == 0 && ratio.poles.size() % 2 == 0 &&
        pair_up(ratio.zeros, zr) && pair_up(ratio.poles, pr)) {
        r_fit = RationalFunction{std::move(zr), std::move(pr), std::sqrt(ratio.gain)};
        // align the root's sign with the principal branch on the line
        double t0 = f.grid().nodes()[f.grid().size() / 2];
        if (std::abs(r_fit(cplx(t0, 0.0)) - sqrt_eval(t0)) >
            std::abs(r_fit(cplx(t0, 0.0)) + sqrt_eval(t0)))
            r_fit.gain = -r_fit.gain;
        exact = true;
    } else {
        RationalApproximation approx =
            fit_rational(sqrt_eval, sqrt_limit, f.grid_ptr(), fit_degree, 1e-10);
        r_fit = approx.approximant;
        fit_error = approx.max_error;
        degree_capped = approx.max_degree_reached;
    }

    // g = f * (n/p)^{1/2}, with the same branch the fit targets
    std::vector<cplx> gv(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        gv[j] = f[j] / sqrt_eval(f.grid().nodes()[j]);
    cplx g_lim = f.limit_at_infinity() / sqrt_limit;
    GridFunction g(f.grid_ptr(), std::move(gv), g_lim);

    return RationalDKMatrix{std::move(g), std::move(r_fit), fit_error, exact, degree_capped};
}

double removal_det_error(const RatMat2 &M) {
    double worst = 0.0;
    for (int j = 0; j < 16; ++j) {
        cplx z(-3.7 + 0.5 * j, 0.4 + 0.13 * j);
        cplx det = M.a11(z) * M.a22(z) - M.a12(z) * M.a21(z);
        worst = std::max(worst, std::abs(det - 1.0));
    }
    return worst;
}

double growth_normalized_defect(const GridFunction &entry, HalfPlane side) {
    const auto &nodes = entry.grid().nodes();
    std::vector<cplx> vals(entry.size());
    cplx shift = side == HalfPlane::Plus ? I : -I;
    for (std::size_t j = 0; j < entry.size(); ++j) {
        cplx q = cplx(nodes[j], 0.0) + shift;
        vals[j] = entry[j] / (q * q);
    }
    return spectral_support_defect(GridFunction(entry.grid_ptr(), std::move(vals), cplx(0.0)),
                                   side);
}

double matrix_defect(const GridMat2 &factor, HalfPlane side) {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            worst = std::max(worst, growth_normalized_defect(factor.at(r, c), side));
    return worst;
}

MeromorphicFactorization meromorphic_factorize(const RationalDKMatrix &K_N) {
    const GridPtr grid = K_N.g.grid_ptr();
    const GridFunction &g = K_N.g;
    const std::size_t n = g.size();

    std::vector<cplx> det(n), ratio(n);
    for (std::size_t j = 0; j < n; ++j) {
        det[j] = 1.0 - g[j] * g[j];
        cplx denom = 1.0 - g[j];
        if (std::abs(denom) < 1e-12)
            throw ZeroOnLine("meromorphic_factorize: 1 - g vanishes on the grid");
        ratio[j] = (1.0 + g[j]) / denom;
    }
    cplx g_inf = g.limit_at_infinity();
    GridFunction detf(grid, std::move(det), 1.0 - g_inf * g_inf);
    GridFunction ratiof(grid, std::move(ratio), (1.0 + g_inf) / (1.0 - g_inf));
    if (winding_index(detf) % 2 != 0)
        throw WindingObstruction("meromorphic_factorize: determinant has odd winding");
    if (winding_index(ratiof) != 0)
        throw WindingObstruction("meromorphic_factorize: (1+g)/(1-g) has nonzero winding");

    GridFunction r_raw = continuous_sqrt(detf, std::sqrt(detf.limit_at_infinity()));
    cplx r_principal = std::sqrt(detf.limit_at_infinity());
    cplx r_lim = snap_to(0.5 * (r_raw[0] + r_raw[n - 1]), {r_principal, -r_principal});
    GridFunction r(grid, std::vector<cplx>(r_raw.values()), r_lim);

    GridFunction lg = continuous_log(ratiof, std::log(ratiof.limit_at_infinity()));
    cplx lg_lim = snap_log_limit(lg, ratiof.limit_at_infinity());
    GridFunction theta = GridFunction(grid, std::vector<cplx>(lg.values()), lg_lim) * cplx(0.5);

    cplx r_inf = r.limit_at_infinity();
    ScalarFactorization rf = factorize_scalar(r * (1.0 / r_inf));
    GridFunction r_plus = rf.plus * r_inf;
    GridFunction r_minus = rf.minus;
    cplx th_inf = theta.limit_at_infinity();
    auto [tp, tm] = cauchy_split(theta - th_inf);
    GridFunction theta_plus = tp + th_inf;
    GridFunction theta_minus = tm;

    auto assemble = [&](const GridFunction &rho, const GridFunction &phi) {
        std::array<std::vector<cplx>, 4> vals;
        for (auto &v : vals)
            v.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            cplx rv = K_N.r_N(cplx(grid->nodes()[j], 0.0));
            cplx ch = std::cosh(phi[j]);
            cplx sh = std::sinh(phi[j]);
            vals[0][j] = rho[j] * ch;
            vals[1][j] = rho[j] * sh / rv;
            vals[2][j] = rho[j] * sh * rv;
            vals[3][j] = rho[j] * ch;
        }
        std::array<cplx, 4> lim{vals[0].back(), vals[1].back(), vals[2].back(), vals[3].back()};
        return GridMat2{GridFunction(grid, std::move(vals[0]), lim[0]),
                        GridFunction(grid, std::move(vals[1]), lim[1]),
                        GridFunction(grid, std::move(vals[2]), lim[2]),
                        GridFunction(grid, std::move(vals[3]), lim[3])};
    };

    MatrixFactorization base{assemble(r_plus, theta_plus), assemble(r_minus, theta_minus),
                             {rf.index, rf.index}, 0.0, {}};
    for (const cplx &z : K_N.r_N.zeros)
        base.meromorphic_poles.push_back(z);
    for (const cplx &z : K_N.r_N.poles)
        base.meromorphic_poles.push_back(z);
    base.residual = factorization_residual(base, K_N.sample());

    RationalFunction one;
    RationalFunction zero;
    zero.gain = 0.0;
    RatMat2 identity{one, zero, zero, one};
    MeromorphicFactorization out{base, identity, base.plus, base.minus, false};
    return out;
}

GridMat2 perturbed_diagonal_symbol(double k, double epsilon, GridPtr grid) {
    double ke = epsilon * k;
    auto entry = [&](const std::function<cplx(double)> &fn, cplx lim) {
        return GridFunction::sample(grid, fn, lim);
    };
    return GridMat2{
        entry([](double t) { return 1.0 / moebius_symbol(t); }, 1.0),
        entry([ke](double) { return cplx(ke); }, ke),
        entry([ke](double) { return cplx(ke); }, ke),
        entry([](double t) { return moebius_symbol(t); }, 1.0)};
}

MeromorphicFactorization pole_removal_example(double k, double epsilon, GridPtr grid) {
    if (k <= 0.0 || k >= 3.0)
        throw PreconditionViolated("pole_removal_example: k must lie in (0, 3)");
    double ke = epsilon * k;
    if (std::abs(ke) >= 1.0)
        throw PreconditionViolated("pole_removal_example: epsilon * k must be below 1");
    double c = (3.0 - k) / (k + 1.0);

    // scalar channels of the commutative factors; u-channels analytic above,
    // v-channels below; channel products are the constants 1 +- epsilon*k
    auto u1 = [ke](cplx) { return cplx(1.0 + ke); };
    auto u2 = [ke, c](cplx t) { return (1.0 - ke) * (t - I) / (t + c * I); };
    auto v1 = [](cplx) { return cplx(1.0); };
    auto v2 = [c](cplx t) { return (t + c * I) / (t - I); };

    auto ap = [&](cplx t) { return 0.5 * (u1(t) + u2(t)); };
    auto bp = [&](cplx t) { return 0.5 * (u1(t) - u2(t)); };
    auto am = [&](cplx t) { return 0.5 * (v1(t) + v2(t)); };
    auto bm = [&](cplx t) { return 0.5 * (v1(t) - v2(t)); };

    auto mu = [k](cplx t) { return (0.5 * I) / (t - I) + (0.5 * I / k) / (t + I); };

    std::size_t nn = grid->size();
    std::array<std::vector<cplx>, 4> base_p, base_m, fin_p, fin_m;
    for (auto *set : {&base_p, &base_m, &fin_p, &fin_m})
        for (auto &v : *set)
            v.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        cplx t(grid->nodes()[j], 0.0);
        cplx A = ap(t), B = bp(t), Am = am(t), Bm = bm(t), Mu = mu(t);
        // meromorphic plus factor D1 * (a I + b J_N)
        cplx p11 = (t + I) * A;
        cplx p12 = B / (t - I);
        cplx p21 = B * (t - I);
        cplx p22 = A / (t + I);
        base_p[0][j] = p11;
        base_p[1][j] = p12;
        base_p[2][j] = p21;
        base_p[3][j] = p22;
        // times M = [[1 + mu, mu], [1, 1]]
        fin_p[0][j] = p11 * (1.0 + Mu) + p12;
        fin_p[1][j] = p11 * Mu + p12;
        fin_p[2][j] = p21 * (1.0 + Mu) + p22;
        fin_p[3][j] = p21 * Mu + p22;
        // meromorphic minus factor (a I + b J_N) * D2
        cplx q11 = Am / (t - I);
        cplx q12 = Bm / (t + I);
        cplx q21 = Bm * (t + I);
        cplx q22 = Am * (t - I);
        base_m[0][j] = q11;
        base_m[1][j] = q12;
        base_m[2][j] = q21;
        base_m[3][j] = q22;
        // M^{-1} = [[1, -mu], [-1, 1 + mu]] on the left
        fin_m[0][j] = q11 - Mu * q21;
        fin_m[1][j] = q12 - Mu * q22;
        fin_m[2][j] = -q11 + (1.0 + Mu) * q21;
        fin_m[3][j] = -q12 + (1.0 + Mu) * q22;
    }

    auto pack = [&grid, nn](std::array<std::vector<cplx>, 4> &vals) {
        std::array<cplx, 4> lim{vals[0][nn - 1], vals[1][nn - 1], vals[2][nn - 1],
                                vals[3][nn - 1]};
        return GridMat2{GridFunction(grid, std::move(vals[0]), lim[0]),
                        GridFunction(grid, std::move(vals[1]), lim[1]),
                        GridFunction(grid, std::move(vals[2]), lim[2]),
                        GridFunction(grid, std::move(vals[3]), lim[3])};
    };

    GridMat2 symbol = perturbed_diagonal_symbol(k, epsilon, grid);
    MatrixFactorization base{pack(base_p), pack(base_m), {0, 0}, 0.0, {I, -I}};
    base.residual = factorization_residual(base, symbol);

    // mu as a rational identity: [(i(k+1)/(2k)) t + (1/(2k) - 1/2)] / (t^2 + 1)
    Polynomial num({cplx(1.0 / (2.0 * k) - 0.5, 0.0), I * ((k + 1.0) / (2.0 * k))});
    Polynomial den({cplx(1.0), cplx(0.0), cplx(1.0)});
    RationalFunction mu_rat = RationalFunction::from_polys(num, den);
    RationalFunction one;
    RatMat2 M{mu_rat + cplx(1.0), mu_rat, one, one};

    MeromorphicFactorization out{std::move(base), std::move(M), pack(fin_p), pack(fin_m), true};
    return out;
}

MethodComparison compare_methods(const DKMatrix &K, const std::function<cplx(double)> &f_eval,
                                 int degree, double tol) {
    using clock = std::chrono::steady_clock;
    if (K.J.delta_sq.degree() != 0)
        throw UnsupportedJ("compare_methods: rational path needs constant Delta^2");
    const GridPtr grid = K.f.grid_ptr();
    cplx D = std::sqrt(K.J.delta_sq(0.0));

    auto t0 = clock::now();
    MatrixFactorization exact_fac = dk_factorize(K);
    auto t1 = clock::now();

    RationalApproximation fit =
        fit_rational(f_eval, K.f.limit_at_infinity(), grid, degree, tol);
    const RationalFunction &fN = fit.approximant;

    RationalFunction u = (fN * D) + cplx(1.0);
    RationalFunction w = (fN * (-D)) + cplx(1.0);
    RationalSplit us = rational_split(u);
    RationalSplit ws = rational_split(w);
    if (us.kappa != ws.kappa)
        throw WindingObstruction("compare_methods: 1 + Delta f and 1 - Delta f split with "
                                 "different indices");

    GridFunction up = us.plus.sample(grid);
    GridFunction um = us.minus.sample(grid);
    GridFunction wp = ws.plus.sample(grid);
    GridFunction wm = ws.minus.sample(grid);

    GridFunction rp_raw = continuous_sqrt(up * wp, std::sqrt((up * wp).limit_at_infinity()));
    cplx rp_principal = std::sqrt((up * wp).limit_at_infinity());
    cplx rp_lim = snap_to(0.5 * (rp_raw[0] + rp_raw[rp_raw.size() - 1]),
                          {rp_principal, -rp_principal});
    GridFunction rm_raw = continuous_sqrt(um * wm, std::sqrt((um * wm).limit_at_infinity()));
    cplx rm_principal = std::sqrt((um * wm).limit_at_infinity());
    cplx rm_lim = snap_to(0.5 * (rm_raw[0] + rm_raw[rm_raw.size() - 1]),
                          {rm_principal, -rm_principal});

    RationalFunction ratio_p = us.plus * ws.plus.reciprocal();
    RationalFunction ratio_m = us.minus * ws.minus.reciprocal();
    GridFunction lp = continuous_log(ratio_p.sample(grid), 0.0);
    GridFunction lm = continuous_log(ratio_m.sample(grid), 0.0);
    cplx lp_lim = snap_log_limit(lp, ratio_p.limit_at_infinity());
    cplx lm_lim = snap_log_limit(lm, ratio_m.limit_at_infinity());

    cplx half_inv = 1.0 / (2.0 * D);
    GridFunction theta_p = GridFunction(grid, std::vector<cplx>(lp.values()), lp_lim) * half_inv;
    GridFunction theta_m = GridFunction(grid, std::vector<cplx>(lm.values()), lm_lim) * half_inv;
    GridFunction r_p = GridFunction(grid, std::vector<cplx>(rp_raw.values()), rp_lim);
    GridFunction r_m = GridFunction(grid, std::vector<cplx>(rm_raw.values()), rm_lim);

    // move all constants at infinity into the plus factor, matching the
    // Cauchy pipeline's normalisation
    cplx lam = r_m.limit_at_infinity();
    cplx th_m_inf = theta_m.limit_at_infinity();
    r_m = r_m * (1.0 / lam);
    r_p = r_p * lam;
    theta_m = theta_m - th_m_inf;
    theta_p = theta_p + th_m_inf;

    GridFunction delta = K.delta();
    GridMat2 approx_plus = assemble_dk(r_p, theta_p, delta, K.J);
    GridMat2 approx_minus = assemble_dk(r_m, theta_m, delta, K.J);
    // square-root branch may differ from the exact path by a global sign
    cplx pe = exact_fac.plus.a11.limit_at_infinity();
    cplx pa = approx_plus.a11.limit_at_infinity();
    if (std::abs(pa + pe) < std::abs(pa - pe)) {
        approx_plus = assemble_dk(r_p * cplx(-1.0), theta_p, delta, K.J);
        approx_minus = assemble_dk(r_m * cplx(-1.0), theta_m, delta, K.J);
    }
    MatrixFactorization approx_fac{std::move(approx_plus), std::move(approx_minus),
                                   {us.kappa, us.kappa}, 0.0, {}};
    approx_fac.residual = factorization_residual(approx_fac, K.sample());
    auto t2 = clock::now();

    std::vector<cplx> diff(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j)
        diff[j] = exact_fac.plus.a11[j] - approx_fac.plus.a11[j];
    cplx diff_lim =
        exact_fac.plus.a11.limit_at_infinity() - approx_fac.plus.a11.limit_at_infinity();
    GridFunction a11_diff(grid, std::move(diff), diff_lim);

    MethodComparison cmp{std::move(exact_fac), std::move(approx_fac), fit.max_error,
                         fit.degree,          std::move(a11_diff),   0.0,
                         0.0,                 0.0,                   0.0,
                         0.0,                 fit.max_degree_reached || fit.max_error > 1e-2};
    cmp.a11_sup = cmp.a11_diff.sup_norm();
    // truncated weighted L2: stays finite (and honest) even when a degenerate
    // fit leaves a non-decaying difference
    double l2_acc = 0.0;
    for (std::size_t j = 0; j < grid->size(); ++j)
        l2_acc += grid->weights()[j] * std::norm(cmp.a11_diff[j]);
    cmp.a11_l2 = std::sqrt(l2_acc);

    // entrywise estimate from the perturbation lemmas, using the rational
    // approximant as the perturbed symbol; when the fit is too poor for the
    // lemma hypotheses the comparison makes no claim (NaN fails every gate)
    cmp.bound = std::numeric_limits<double>::quiet_NaN();
    try {
        DKMatrix K_tilde{GridFunction(grid, fN.sample(grid).values(), K.f.limit_at_infinity()),
                         K.J};
        DKBoundReport rep = lemma_bounds(K, K_tilde);
        SplitParams sp = split_parameters(K);
        double sinh_sup = 0.0, cosh_sup = 0.0, rp_sup = sp.r_plus.max_abs();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            cplx dz = delta[j] * sp.theta_plus[j];
            sinh_sup = std::max(sinh_sup, std::abs(std::sinh(dz)));
            cosh_sup = std::max(cosh_sup, std::abs(std::cosh(dz)));
        }
        cmp.bound = rp_sup * sinh_sup * std::abs(D) * rep.theta_split_bound +
                    cosh_sup * rep.r_factor_bound;
    } catch (const Error &) {
        cmp.degenerate_fit = true;
    }

    cmp.exact_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    cmp.approx_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    return cmp;
}

} // namespace wh
