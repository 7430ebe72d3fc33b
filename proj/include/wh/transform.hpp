#ifndef WH_TRANSFORM_HPP
#define WH_TRANSFORM_HPP

#include <utility>
#include <vector>

#include "wh/grid.hpp"

namespace wh {

enum class HalfPlane { Plus, Minus };

/// L2 norm over the real line by grid quadrature.  The function must decay
/// at infinity (declared zero limit).
double l2_norm(const GridFunction &f);

/// Plemelj splitting f = f_plus + f_minus with f_plus analytic in the upper
/// half-plane, f_minus in the lower, both decaying at infinity.  Realised as
/// one-sided Fourier projection on the moebius-mapped circle image.
std::pair<GridFunction, GridFunction> cauchy_split(const GridFunction &f);

/// L2 mass of the Fourier content of f on the half-axis forbidden for the
/// given side; near zero certifies half-plane analyticity.
double spectral_support_defect(const GridFunction &f, HalfPlane side);

/// Convenience: subtract the limit, split, test the decaying part.
double spectral_support_defect_shifted(const GridFunction &f, HalfPlane side);

/// Fourier coefficients c_n, n = -N/2 .. N/2-1, of the circle image of f,
/// returned with c[k] holding frequency (k < N/2 ? k : k - N).
std::vector<cplx> circle_coefficients(const GridFunction &f);

/// Continuous logarithm along the grid: log|f| + i*arg with the argument
/// unwrapped node to node, anchored at the principal value of the first node
/// shifted by 2*pi*branch_shift.
GridFunction continuous_log(const GridFunction &f, cplx limit, int branch_shift = 0);

/// Continuous square root along the grid, sign-tracked from the principal
/// root at the first node.
GridFunction continuous_sqrt(const GridFunction &f, cplx limit);

namespace detail {
/// In-place radix-2 FFT; sign = -1 forward, +1 inverse (unnormalised).
void fft(std::vector<cplx> &buf, int sign);
} // namespace detail

} // namespace wh

#endif
