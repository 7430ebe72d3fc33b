#ifndef WH_SYMBOLS_HPP
#define WH_SYMBOLS_HPP

#include <functional>
#include <string>
#include <vector>

#include "wh/dk.hpp"
#include "wh/grid.hpp"

namespace wh {

/// Scalar symbol with a pointwise evaluator and its common limit at
/// t -> +-infinity; closed-form factors are attached when known.
struct Symbol {
    std::string name;
    std::function<cplx(double)> fn;
    cplx limit{1.0};
    std::function<cplx(double)> plus;  // may be empty
    std::function<cplx(double)> minus; // may be empty
    int index = 0;

    GridFunction sample(GridPtr grid) const { return GridFunction::sample(grid, fn, limit); }
};

/// sqrt((t^2+1)/(t^2+k^2)), continuous, -> 1 at infinity.
Symbol symbol_sqrt_ratio(double k);

/// sqrt((t+2i)(t+3i)/((t-2i)(t-3i))) * (t-i)/(t+i): index -1, modulus one.
Symbol symbol_third_kind();

/// Off-diagonal data f for the two reference matrix symbols.  Both use the
/// constant J with rows (0, 1) and (-2, 0), Delta^2 = -2.
Symbol symbol_k1_data();
Symbol symbol_k2_data();

EntireMatrixJ reference_j();

DKMatrix make_k1(GridPtr grid);
DKMatrix make_k2(GridPtr grid);

/// Look up a scalar symbol by name ("sqrt-ratio", "third-kind"); throws
/// wh::Error on unknown names.
Symbol find_scalar_symbol(const std::string &name, double k = 2.0);

} // namespace wh

#endif
