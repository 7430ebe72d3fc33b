#ifndef WH_SERIALIZE_HPP
#define WH_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "wh/dk.hpp"
#include "wh/rational.hpp"
#include "wh/scalar.hpp"
#include "wh/stability.hpp"

namespace wh {

using json = nlohmann::json;

json to_json(const GridFunction &f);
json to_json(const ScalarFactorization &fac);
json to_json(const ScalarBoundReport &rep);
json to_json(const RationalFunction &R);
json to_json(const GridMat2 &m);
json to_json(const MatrixFactorization &fac);
json to_json(const DKBoundReport &rep);
json to_json(const MethodComparison &cmp);

/// {draws, admissible, passes, slope, slope_ci}
json sweep_summary(const SweepResult &result);

/// t,re,im rows; '.' decimal separator regardless of locale
std::string gridfunction_csv(const GridFunction &f);

/// t,abs_plus,abs_minus rows for factor modulus traces
std::string modulus_trace_csv(const GridFunction &plus, const GridFunction &minus);

/// One row per draw: epsilon, constants, bounds, measurements, flags.
std::string sweep_csv(const SweepResult &result);

void write_text_file(const std::string &path, const std::string &content);

} // namespace wh

#endif
