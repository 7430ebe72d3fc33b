#include "wh/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wh {

namespace detail {

void fft(std::vector<cplx> &buf, int sign) {
    const std::size_t n = buf.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(buf[i], buf[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = buf[i + k];
                cplx v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace detail

double l2_norm(const GridFunction &f) {
    if (f.limit_at_infinity() != cplx(0.0))
        throw NonDecayingInput("l2_norm requires zero limit at infinity");
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        s += f.grid().weights()[j] * std::norm(f[j]);
    return std::sqrt(s);
}

std::vector<cplx> circle_coefficients(const GridFunction &f) {
    if (f.grid().map_kind() != MapKind::MoebiusMapped)
        throw Error("circle_coefficients: moebius-mapped grid required");
    const std::size_t n = f.size();
    std::vector<cplx> buf(f.values());
    detail::fft(buf, -1);
    // nodes sit at the offset angles phi_j = 2*pi*(j+1/2)/N
    const double pi = std::numbers::pi;
    std::vector<cplx> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        long freq = (k < n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        double ph = -static_cast<double>(freq) * pi / static_cast<double>(n);
        c[k] = buf[k] * cplx(std::cos(ph), std::sin(ph)) / static_cast<double>(n);
    }
    return c;
}

namespace {

GridFunction from_circle_coefficients(const GridPtr &grid, std::vector<cplx> c) {
    const std::size_t n = c.size();
    const double pi = std::numbers::pi;
    for (std::size_t k = 0; k < n; ++k) {
        long freq = (k < n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        double ph = static_cast<double>(freq) * pi / static_cast<double>(n);
        c[k] *= cplx(std::cos(ph), std::sin(ph));
    }
    detail::fft(c, +1);
    return GridFunction(grid, std::move(c), cplx(0.0));
}

} // namespace

std::pair<GridFunction, GridFunction> cauchy_split(const GridFunction &f) {
    f.require_decay();
    const std::size_t n = f.size();
    std::vector<cplx> c = circle_coefficients(f);

    // Positive frequencies extend into the disk (upper half-plane), negative
    // outward.  The constants are fixed so that both parts vanish at z = 1,
    // i.e. both factors decay at infinity; this reproduces the Cauchy-type
    // integral splitting of decaying rationals exactly.
    cplx a(0.0);
    for (std::size_t k = 1; k < n / 2; ++k)
        a += c[k];

    std::vector<cplx> cp(n, cplx(0.0)), cm(n, cplx(0.0));
    for (std::size_t k = 1; k < n / 2; ++k)
        cp[k] = c[k];
    cp[0] = -a;
    for (std::size_t k = n / 2; k < n; ++k)
        cm[k] = c[k];
    cm[0] = c[0] + a;

    return {from_circle_coefficients(f.grid_ptr(), std::move(cp)),
            from_circle_coefficients(f.grid_ptr(), std::move(cm))};
}

double spectral_support_defect(const GridFunction &f, HalfPlane side) {
    auto [fp, fm] = cauchy_split(f);
    return side == HalfPlane::Plus ? l2_norm(fm) : l2_norm(fp);
}

double spectral_support_defect_shifted(const GridFunction &f, HalfPlane side) {
    return spectral_support_defect(f - f.limit_at_infinity(), side);
}

GridFunction continuous_log(const GridFunction &f, cplx limit, int branch_shift) {
    const std::size_t n = f.size();
    std::vector<cplx> vals(n);
    const double two_pi = 2.0 * std::numbers::pi;
    double arg_prev = std::arg(f[0]) + two_pi * branch_shift;
    for (std::size_t j = 0; j < n; ++j) {
        if (f[j] == cplx(0.0))
            throw BranchError("continuous_log: zero sample");
        double a = std::arg(f[j]);
        // nearest 2*pi translate of the principal argument
        double k = std::round((arg_prev - a) / two_pi);
        double arg_j = a + two_pi * k;
        vals[j] = cplx(std::log(std::abs(f[j])), arg_j);
        arg_prev = arg_j;
    }
    return GridFunction(f.grid_ptr(), std::move(vals), limit);
}

GridFunction continuous_sqrt(const GridFunction &f, cplx limit) {
    const std::size_t n = f.size();
    std::vector<cplx> vals(n);
    cplx prev = std::sqrt(f[0]);
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = std::sqrt(f[j]);
        if (std::abs(s - prev) > std::abs(-s - prev))
            s = -s;
        vals[j] = s;
        prev = s;
    }
    return GridFunction(f.grid_ptr(), std::move(vals), limit);
}

} // namespace wh
