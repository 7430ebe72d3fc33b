#ifndef WH_DK_HPP
#define WH_DK_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "wh/grid.hpp"
#include "wh/poly.hpp"
#include "wh/scalar.hpp"

namespace wh {

/// 2x2 matrix of grid functions.
struct GridMat2 {
    GridFunction a11, a12, a21, a22;

    const GridFunction &at(int r, int c) const;
    GridMat2 mul(const GridMat2 &rhs) const;
    static GridMat2 identity(const GridPtr &grid);

    /// sup over nodes of the entrywise absolute difference.
    double sup_distance(const GridMat2 &rhs) const;
    std::array<cplx, 4> value_at(std::size_t node) const;
    std::array<cplx, 4> limit() const;
};

/// Entire (polynomial) matrix J with tr J = 0 and J^2 = Delta^2 I.
struct EntireMatrixJ {
    Polynomial e11, e12, e21, e22;
    Polynomial delta_sq;

    static EntireMatrixJ anti_diagonal(cplx top, cplx bottom);
    std::array<cplx, 4> eval(cplx t) const;
    bool is_constant_anti_diagonal() const;
    bool same_as(const EntireMatrixJ &rhs, double tol = 1e-12) const;
};

struct DKDiagnostics {
    bool trace_zero = false;
    bool involution = false;       // J^2 == Delta^2 I coefficientwise
    bool polynomial_entries = true;
    double det_min = 0.0;          // min over grid of |1 - Delta^2 f^2|
    int delta_sq_degree = 0;
    bool growth_safe = false;      // deg Delta^2 <= 2
    bool valid() const { return trace_zero && involution && polynomial_entries; }
};

/// Symbol K = I + f(t) J(t) of Daniele--Khrapkov type.
struct DKMatrix {
    GridFunction f;
    EntireMatrixJ J;

    GridFunction determinant() const; // 1 - Delta^2 f^2
    GridFunction delta() const;       // continuous branch of sqrt(Delta^2)
    GridMat2 sample() const;
};

DKDiagnostics validate_dk(const DKMatrix &K);

/// r = sqrt(1 - Delta^2 f^2) and theta with exp(2 Delta theta) =
/// (1 + Delta f)/(1 - Delta f), both single-valued by continuous tracking.
struct DKParameters {
    GridFunction r;
    GridFunction theta;
    EntireMatrixJ J;
};

DKParameters dk_parameters(const DKMatrix &K);

/// K = plus * diag(m^k1, m^k2) * minus.
struct MatrixFactorization {
    GridMat2 plus;
    GridMat2 minus;
    std::pair<int, int> partial_indices{0, 0};
    double residual = 0.0;
    std::vector<cplx> meromorphic_poles;
};

MatrixFactorization dk_factorize(const DKMatrix &K);

std::pair<int, int> dk_partial_indices(const DKMatrix &K);

DKParameters dk_commutative_product(const DKParameters &p1, const DKParameters &p2);

/// rho (cosh[Delta phi] I + Delta^{-1} sinh[Delta phi] J) on the grid.
GridMat2 assemble_dk(const GridFunction &rho, const GridFunction &phi, const GridFunction &delta,
                     const EntireMatrixJ &J);

/// Reconstruction residual of a factorisation against a sampled symbol.
double factorization_residual(const MatrixFactorization &fac, const GridMat2 &symbol);

} // namespace wh

#endif
