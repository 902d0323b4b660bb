#pragma once

#include "jr/laurent.hpp"
#include "jr/orbit.hpp"
#include "jr/series.hpp"

#include <json.hpp>

namespace jr {

using Json = nlohmann::ordered_json;

Json rat_json(const Rat& x);
Rat rat_from_json(const Json& j);

Json quad_json(const QuadElem& x);
QuadElem quad_from_json(const Json& j, long d);

Json qmat_json(const QMat& m);            // row-major rational strings
QMat qmat_from_json(const Json& j);
Json fmat_json(const FMat& m);
FMat fmat_from_json(const Json& j, long d);

Json laurent_json(const LaurentX& f);     // {"coeffs": {"-1": "-1", ...}}
Json loglinear_json(const LogLinear& x);
Json qexp_json(const QExp& f);

Json fpoly_json(const FPoly& f);
FPoly fpoly_from_json(const Json& j, long d);

Json invariant_json(const InvariantVector& iv);
InvariantVector invariants_from_json(const Json& j, long d);

}  // namespace jr
