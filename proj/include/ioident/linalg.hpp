#pragma once

#include "ioident/poly.hpp"
#include "ioident/ratfunc.hpp"

#include <optional>
#include <vector>

namespace ioident {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;
using RatMatrix = std::vector<std::vector<RatFunc>>;
using RatVector = std::vector<RatFunc>;

// Exact determinant by fraction-free (Bareiss) elimination; every interior
// division is exact. Throws DimensionError on a non-square input.
MultiPoly bareiss_det(const PolyMatrix& m);

// Determinant over the rational-function field: rows are cleared of
// denominators, the polynomial determinant is taken, and the multipliers
// divided back out.
RatFunc det(const RatMatrix& m);

// Unique solution of m x = rhs when it exists, nullopt otherwise (rank
// deficiency or inconsistency). m may be rectangular.
std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& rhs);

} // namespace ioident
