#include "wh/rational.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wh {

cplx RationalFunction::evaluate(const RationalFunction &R, cplx t) {
    cplx acc = R.gain;
    std::size_t n = std::max(R.zeros.size(), R.poles.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (k < R.zeros.size())
            acc *= (t - R.zeros[k]);
        if (k < R.poles.size()) {
            cplx d = t - R.poles[k];
            if (std::abs(d) < 1e-13 * std::max(1.0, std::abs(t)))
                throw PoleEvaluation("evaluation at a pole");
            acc /= d;
        }
    }
    return acc;
}

cplx RationalFunction::limit_at_infinity() const {
    if (zeros.size() > poles.size())
        throw Error("RationalFunction: unbounded at infinity");
    if (zeros.size() < poles.size())
        return cplx(0.0);
    return gain;
}

GridFunction RationalFunction::sample(GridPtr grid) const {
    cplx lim = limit_at_infinity();
    return GridFunction::sample(std::move(grid), [this](double t) { return (*this)(cplx(t)); },
                                lim);
}

RationalFunction RationalFunction::reciprocal() const {
    return RationalFunction{poles, zeros, cplx(1.0) / gain};
}

RationalFunction RationalFunction::operator*(const RationalFunction &rhs) const {
    RationalFunction out{zeros, poles, gain * rhs.gain};
    out.zeros.insert(out.zeros.end(), rhs.zeros.begin(), rhs.zeros.end());
    out.poles.insert(out.poles.end(), rhs.poles.begin(), rhs.poles.end());
    out.cancel();
    return out;
}

RationalFunction RationalFunction::operator*(cplx c) const {
    return RationalFunction{zeros, poles, gain * c};
}

RationalFunction RationalFunction::operator+(cplx c) const {
    auto [num, den] = to_polys();
    Polynomial num2 = num + den * c;
    if (num2.is_zero(0.0))
        throw Error("RationalFunction: sum is identically zero");
    cplx lead = num2.coeffs().back();
    return RationalFunction{num2.roots(), poles, lead};
}

std::pair<Polynomial, Polynomial> RationalFunction::to_polys() const {
    return {Polynomial::from_roots(zeros, gain), Polynomial::from_roots(poles)};
}

RationalFunction RationalFunction::from_polys(const Polynomial &num, const Polynomial &den) {
    if (den.is_zero(0.0))
        throw Error("RationalFunction: zero denominator");
    cplx g = num.coeffs().back() / den.coeffs().back();
    RationalFunction out{num.roots(), den.roots(), g};
    out.cancel();
    return out;
}

void RationalFunction::cancel(double tol) {
    for (std::size_t i = 0; i < zeros.size();) {
        bool matched = false;
        for (std::size_t j = 0; j < poles.size(); ++j) {
            if (std::abs(zeros[i] - poles[j]) <= tol * std::max(1.0, std::abs(zeros[i]))) {
                poles.erase(poles.begin() + static_cast<long>(j));
                zeros.erase(zeros.begin() + static_cast<long>(i));
                matched = true;
                break;
            }
        }
        if (!matched)
            ++i;
    }
}

void RationalFunction::require_off_axis(double floor) const {
    for (const cplx &z : zeros)
        if (std::abs(z.imag()) < floor)
            throw RealAxisSingularity("zero within the real-axis floor");
    for (const cplx &p : poles)
        if (std::abs(p.imag()) < floor)
            throw RealAxisSingularity("pole within the real-axis floor");
}

RationalSplit rational_split(const RationalFunction &R) {
    R.require_off_axis();
    if (R.zeros.size() != R.poles.size())
        throw DegreeMismatch("rational_split: numerator and denominator degrees differ");
    const cplx below(0.0, -1.0), above(0.0, 1.0);

    RationalSplit out;
    out.plus.gain = R.gain;
    out.minus.gain = cplx(1.0);
    std::size_t zeros_above = 0, poles_above = 0, zeros_below = 0, poles_below = 0;
    for (const cplx &z : R.zeros) {
        if (z.imag() > 0) {
            out.minus.zeros.push_back(z);
            ++zeros_above;
        } else {
            out.plus.zeros.push_back(z);
            ++zeros_below;
        }
    }
    for (const cplx &p : R.poles) {
        if (p.imag() > 0) {
            out.minus.poles.push_back(p);
            ++poles_above;
        } else {
            out.plus.poles.push_back(p);
            ++poles_below;
        }
    }
    // balance with (t+i) on the plus side and (t-i) on the minus side
    for (std::size_t k = 0; k < poles_below; ++k)
        out.plus.zeros.push_back(below);
    for (std::size_t k = 0; k < zeros_below; ++k)
        out.plus.poles.push_back(below);
    for (std::size_t k = 0; k < poles_above; ++k)
        out.minus.zeros.push_back(above);
    for (std::size_t k = 0; k < zeros_above; ++k)
        out.minus.poles.push_back(above);
    out.plus.cancel(1e-15);
    out.minus.cancel(1e-15);
    out.kappa = static_cast<int>(zeros_above) - static_cast<int>(poles_above);
    return out;
}

namespace {

struct Barycentric {
    std::vector<cplx> z, f, w;

    cplx operator()(cplx t) const {
        cplx num(0.0), den(0.0);
        for (std::size_t k = 0; k < z.size(); ++k) {
            cplx d = t - z[k];
            if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(t)))
                return f[k];
            cplx q = w[k] / d;
            num += q * f[k];
            den += q;
        }
        return num / den;
    }
};

// Eigenvalues of diag(z) projected onto the subspace orthogonal to the
// weights; the spectrum is {0} union the zeros of sum w_k/(t - z_k).  The
// shift keeps the structural zero away from genuine roots.
std::vector<cplx> weighted_nodes_roots(const std::vector<cplx> &z, std::vector<cplx> w) {
    const std::size_t m = z.size();
    if (m < 2)
        return {};
    const cplx sigma(0.2343145, 1.7521089);
    double wsum_abs = 0.0;
    for (const cplx &x : w)
        wsum_abs += std::abs(x);
    if (wsum_abs == 0.0)
        return {};
    cplx s = std::accumulate(w.begin(), w.end(), cplx(0.0));
    if (std::abs(s) < 1e-12 * wsum_abs) {
        w[0] += cplx(1e-12) * wsum_abs;
        s = std::accumulate(w.begin(), w.end(), cplx(0.0));
    }
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<long>(m), static_cast<long>(m));
    for (std::size_t k = 0; k < m; ++k)
        A(static_cast<long>(k), static_cast<long>(k)) = z[k] - sigma;
    Eigen::RowVectorXcd row(static_cast<long>(m));
    for (std::size_t k = 0; k < m; ++k)
        row(static_cast<long>(k)) = w[k] * (z[k] - sigma);
    A.noalias() -= Eigen::VectorXcd::Ones(static_cast<long>(m)) * (row / s);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    if (es.info() != Eigen::Success)
        throw Error("weighted_nodes_roots: eigensolver failed");
    std::vector<cplx> mu(m);
    for (std::size_t k = 0; k < m; ++k)
        mu[k] = es.eigenvalues()(static_cast<long>(k));
    // drop the structural zero eigenvalue
    std::size_t drop = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (std::abs(mu[k]) < std::abs(mu[drop]))
            drop = k;
    std::vector<cplx> out;
    out.reserve(m - 1);
    for (std::size_t k = 0; k < m; ++k)
        if (k != drop)
            out.push_back(mu[k] + sigma);

    // The eigenproblem loses digits when the supports span several orders of
    // magnitude; polish each root on g(t) = sum w_k/(t - z_k) directly.
    auto g_and_dg = [&](cplx t) {
        cplx g(0.0), dg(0.0);
        for (std::size_t k = 0; k < m; ++k) {
            cplx d = t - z[k];
            cplx q = w[k] / d;
            g += q;
            dg -= q / d;
        }
        return std::pair{g, dg};
    };
    for (cplx &root : out) {
        cplx t = root;
        auto [g, dg] = g_and_dg(t);
        double best = std::abs(g);
        cplx best_t = t;
        for (int it = 0; it < 8 && dg != cplx(0.0); ++it) {
            t -= g / dg;
            std::tie(g, dg) = g_and_dg(t);
            if (std::abs(g) < best) {
                best = std::abs(g);
                best_t = t;
            }
        }
        root = best_t;
    }
    return out;
}

RationalFunction bary_to_polezero(const Barycentric &b) {
    RationalFunction out;
    out.poles = weighted_nodes_roots(b.z, b.w);
    std::vector<cplx> u(b.w.size());
    for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = b.w[k] * b.f[k];
    out.zeros = weighted_nodes_roots(b.z, u);

    // match the gain at a reference point far from all roots and supports
    const double candidates[] = {0.1234567, 1.618034, -2.718282, 5.4321, -7.654321, 11.11};
    double best_sep = -1.0;
    cplx tref(0.0);
    for (double c : candidates) {
        double sep = std::numeric_limits<double>::max();
        for (const cplx &x : out.zeros)
            sep = std::min(sep, std::abs(cplx(c) - x));
        for (const cplx &x : out.poles)
            sep = std::min(sep, std::abs(cplx(c) - x));
        for (const cplx &x : b.z)
            sep = std::min(sep, std::abs(cplx(c) - x));
        if (sep > best_sep) {
            best_sep = sep;
            tref = cplx(c);
        }
    }
    out.gain = cplx(1.0);
    cplx ratio = b(tref) / out(tref);
    out.gain = ratio;
    return out;
}

} // namespace

RationalApproximation fit_rational(const std::function<cplx(double)> &target,
                                   cplx limit_at_infinity, GridPtr fit_grid, int degree,
                                   double tol) {
    const std::size_t n = fit_grid->size();
    const std::vector<double> &Z = fit_grid->nodes();
    std::vector<cplx> F(n);
    for (std::size_t j = 0; j < n; ++j)
        F[j] = target(Z[j]);

    const std::size_t m_max = static_cast<std::size_t>(std::max(degree, 0)) + 1;
    cplx mean = std::accumulate(F.begin(), F.end(), cplx(0.0)) / static_cast<double>(n);

    std::vector<cplx> R(n, mean);
    std::vector<bool> in_support(n, false);
    Barycentric bary;

    auto residual_max = [&](std::size_t *arg) {
        double e = 0.0;
        std::size_t a = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (in_support[j])
                continue;
            double d = std::abs(F[j] - R[j]);
            if (d > e) {
                e = d;
                a = j;
            }
        }
        if (arg)
            *arg = a;
        return e;
    };

    GridPtr validation = Grid::moebius(4 * n);
    std::vector<cplx> VF(validation->size());
    for (std::size_t j = 0; j < VF.size(); ++j)
        VF[j] = target(validation->nodes()[j]);
    auto validation_error = [&](const RationalFunction &cand) {
        double e = 0.0;
        for (std::size_t j = 0; j < VF.size(); ++j)
            e = std::max(e, std::abs(VF[j] - cand(cplx(validation->nodes()[j]))));
        try {
            e = std::max(e, std::abs(limit_at_infinity - cand.limit_at_infinity()));
        } catch (const Error &) {
        }
        return e;
    };

    RationalApproximation out;
    out.approximant = RationalFunction{{}, {}, mean};
    double best_verr = validation_error(out.approximant);
    bool have_valid = best_verr <= tol;

    std::size_t next = 0;
    residual_max(&next);

    // Greedy support selection; every iterate is converted to pole/zero form,
    // cleaned of spurious near-cancelling pairs and validated on the denser
    // grid.  The best validated iterate wins -- later iterations can degrade
    // once the data is resolved to rounding level.
    while (!have_valid && bary.z.size() < m_max) {
        in_support[next] = true;
        bary.z.push_back(cplx(Z[next]));
        bary.f.push_back(F[next]);

        const std::size_t m = bary.z.size();
        std::vector<std::size_t> rows;
        rows.reserve(n - m);
        for (std::size_t j = 0; j < n; ++j)
            if (!in_support[j])
                rows.push_back(j);
        Eigen::MatrixXcd A(static_cast<long>(rows.size()), static_cast<long>(m));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t k = 0; k < m; ++k)
                A(static_cast<long>(r), static_cast<long>(k)) =
                    (F[rows[r]] - bary.f[k]) / (cplx(Z[rows[r]]) - bary.z[k]);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
        Eigen::VectorXcd w = svd.matrixV().col(static_cast<long>(m) - 1);
        bary.w.assign(w.data(), w.data() + m);

        for (std::size_t j = 0; j < n; ++j)
            R[j] = in_support[j] ? F[j] : bary(cplx(Z[j]));
        residual_max(&next);

        try {
            RationalFunction cand = bary_to_polezero(bary);
            cand.cancel(1e-10);
            cand.require_off_axis();
            double verr = validation_error(cand);
            if (verr < best_verr) {
                best_verr = verr;
                out.approximant = std::move(cand);
            }
            if (best_verr <= tol)
                have_valid = true;
        } catch (const Error &) {
            // axis-touching or degenerate iterate; keep the previous best
        }
    }

    out.degree = {static_cast<int>(out.approximant.zeros.size()),
                  static_cast<int>(out.approximant.poles.size())};
    out.max_error = best_verr;
    out.max_degree_reached = best_verr > tol;
    return out;
}

RationalApproximation fit_rational(const GridFunction &target, int degree, double tol,
                                   const std::function<cplx(double)> &evaluator) {
    return fit_rational(evaluator, target.limit_at_infinity(), target.grid_ptr(), degree, tol);
}

} // namespace wh
