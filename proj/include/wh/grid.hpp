#ifndef WH_GRID_HPP
#define WH_GRID_HPP

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "wh/errors.hpp"

namespace wh {

using cplx = std::complex<double>;

enum class MapKind { TruncatedUniform, MoebiusMapped };

/// Discretisation of the real line with quadrature weights.
///
/// Moebius-mapped grids are images of equispaced points on the unit circle
/// under t = i(1+z)/(1-z) with z = 1 excluded, i.e. t_j = -cot(phi_j/2)
/// at the offset angles phi_j = 2*pi*(j+1/2)/N.  The node count must be a
/// power of two so that the spectral machinery can use a radix-2 FFT.
class Grid {
  public:
    Grid(std::vector<double> nodes, std::vector<double> weights, MapKind kind);

    static std::shared_ptr<const Grid> moebius(std::size_t n);
    static std::shared_ptr<const Grid> truncated_uniform(std::size_t n, double half_width);

    const std::vector<double> &nodes() const { return nodes_; }
    const std::vector<double> &weights() const { return weights_; }
    MapKind map_kind() const { return kind_; }
    std::size_t size() const { return nodes_.size(); }

    /// Circle angle of node j (moebius grids only).
    double angle(std::size_t j) const;

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    MapKind kind_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Complex-valued function sampled on a Grid, together with its limit at
/// t -> +-infinity (required equal on both sides).
class GridFunction {
  public:
    GridFunction(GridPtr grid, std::vector<cplx> values, cplx limit_at_infinity);

    /// Sample a callable on the grid.
    static GridFunction sample(GridPtr grid, const std::function<cplx(double)> &f,
                               cplx limit_at_infinity);

    const Grid &grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    const std::vector<cplx> &values() const { return values_; }
    cplx limit_at_infinity() const { return limit_; }
    std::size_t size() const { return values_.size(); }
    cplx operator[](std::size_t j) const { return values_[j]; }

    bool decays() const { return limit_ == cplx(0.0); }

    /// Throws NonDecayingInput unless the declared limit is zero and the
    /// extreme samples are consistent with decay.
    void require_decay() const;

    GridFunction map(const std::function<cplx(cplx)> &op, cplx new_limit) const;

    GridFunction operator+(const GridFunction &rhs) const;
    GridFunction operator-(const GridFunction &rhs) const;
    GridFunction operator*(const GridFunction &rhs) const;
    GridFunction operator*(cplx c) const;
    GridFunction operator+(cplx c) const;
    GridFunction operator-(cplx c) const;

    double sup_norm() const;
    double min_abs() const;
    double max_abs() const;

  private:
    GridPtr grid_;
    std::vector<cplx> values_;
    cplx limit_;
};

GridFunction operator*(cplx c, const GridFunction &f);

void require_same_grid(const GridFunction &a, const GridFunction &b);

} // namespace wh

#endif
