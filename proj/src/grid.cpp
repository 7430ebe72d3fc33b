#include "wh/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wh {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid(std::vector<double> nodes, std::vector<double> weights, MapKind kind)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), kind_(kind) {
    if (nodes_.size() != weights_.size())
        throw Error("Grid: nodes/weights size mismatch");
    if (nodes_.size() < 16 || !is_pow2(nodes_.size()))
        throw Error("Grid: node count must be a power of two and >= 16");
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
        if (!(nodes_[j] < nodes_[j + 1]))
            throw Error("Grid: nodes must be strictly increasing");
    for (double w : weights_)
        if (!(w > 0.0))
            throw Error("Grid: weights must be strictly positive");
}

std::shared_ptr<const Grid> Grid::moebius(std::size_t n) {
    std::vector<double> nodes(n), weights(n);
    const double pi = 4.0 * std::atan(1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double phi = 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        double t = -1.0 / std::tan(phi / 2.0);
        nodes[j] = t;
        // dt = (1+t^2)/2 dphi, trapezoidal in phi
        weights[j] = (pi / static_cast<double>(n)) * (1.0 + t * t);
    }
    return std::make_shared<Grid>(std::move(nodes), std::move(weights), MapKind::MoebiusMapped);
}

std::shared_ptr<const Grid> Grid::truncated_uniform(std::size_t n, double half_width) {
    std::vector<double> nodes(n), weights(n);
    double h = 2.0 * half_width / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        nodes[j] = -half_width + h * static_cast<double>(j);
        weights[j] = (j == 0 || j + 1 == n) ? h / 2.0 : h;
    }
    return std::make_shared<Grid>(std::move(nodes), std::move(weights), MapKind::TruncatedUniform);
}

double Grid::angle(std::size_t j) const {
    if (kind_ != MapKind::MoebiusMapped)
        throw Error("Grid::angle: only defined for moebius-mapped grids");
    const double pi = 4.0 * std::atan(1.0);
    return 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(size());
}

GridFunction::GridFunction(GridPtr grid, std::vector<cplx> values, cplx limit_at_infinity)
    : grid_(std::move(grid)), values_(std::move(values)), limit_(limit_at_infinity) {
    if (!grid_)
        throw Error("GridFunction: null grid");
    if (values_.size() != grid_->size())
        throw Error("GridFunction: value count does not match grid");
    for (const cplx &v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("GridFunction: non-finite sample");
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<cplx(double)> &f,
                                  cplx limit_at_infinity) {
    std::vector<cplx> vals(grid->size());
    for (std::size_t j = 0; j < grid->size(); ++j)
        vals[j] = f(grid->nodes()[j]);
    return GridFunction(std::move(grid), std::move(vals), limit_at_infinity);
}

void GridFunction::require_decay() const {
    if (limit_ != cplx(0.0))
        throw NonDecayingInput("limit at infinity is not zero");
    double m = max_abs();
    if (m == 0.0)
        return;
    double edge = std::max(std::abs(values_.front()), std::abs(values_.back()));
    // the extreme nodes of a moebius grid sit at |t| ~ n, so a C/t tail
    // contributes ~ C/n there; scale the cutoff with the grid so refining
    // the grid never turns an integrable tail into a rejection
    double cutoff = std::max(1e-3, 10.0 / static_cast<double>(values_.size()));
    if (edge > cutoff * m)
        throw NonDecayingInput("samples at the extreme nodes do not decay");
}

GridFunction GridFunction::map(const std::function<cplx(cplx)> &op, cplx new_limit) const {
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = op(values_[j]);
    return GridFunction(grid_, std::move(vals), new_limit);
}

GridFunction GridFunction::operator+(const GridFunction &rhs) const {
    require_same_grid(*this, rhs);
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = values_[j] + rhs.values_[j];
    return GridFunction(grid_, std::move(vals), limit_ + rhs.limit_);
}

GridFunction GridFunction::operator-(const GridFunction &rhs) const {
    require_same_grid(*this, rhs);
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = values_[j] - rhs.values_[j];
    return GridFunction(grid_, std::move(vals), limit_ - rhs.limit_);
}

GridFunction GridFunction::operator*(const GridFunction &rhs) const {
    require_same_grid(*this, rhs);
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = values_[j] * rhs.values_[j];
    return GridFunction(grid_, std::move(vals), limit_ * rhs.limit_);
}

GridFunction GridFunction::operator*(cplx c) const {
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = c * values_[j];
    return GridFunction(grid_, std::move(vals), c * limit_);
}

GridFunction GridFunction::operator+(cplx c) const {
    std::vector<cplx> vals(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j)
        vals[j] = values_[j] + c;
    return GridFunction(grid_, std::move(vals), limit_ + c);
}

GridFunction GridFunction::operator-(cplx c) const { return *this + (-c); }

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (const cplx &v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::min_abs() const {
    double m = std::abs(values_.front());
    for (const cplx &v : values_)
        m = std::min(m, std::abs(v));
    return m;
}

double GridFunction::max_abs() const { return sup_norm(); }

GridFunction operator*(cplx c, const GridFunction &f) { return f * c; }

void require_same_grid(const GridFunction &a, const GridFunction &b) {
    if (&a.grid() == &b.grid())
        return;
    if (a.grid().size() != b.grid().size() || a.grid().map_kind() != b.grid().map_kind())
        throw Error("grid mismatch");
    for (std::size_t j = 0; j < a.grid().size(); ++j)
        if (a.grid().nodes()[j] != b.grid().nodes()[j])
            throw Error("grid mismatch");
}

} // namespace wh
