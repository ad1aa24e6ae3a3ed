#pragma once

#include <string>
#include <vector>

#include "ioident/model.hpp"
#include "ioident/ratfunc.hpp"

namespace ioident {

// One entry of the transfer matrix: a rational function in s whose
// coefficients are rational functions of the parameters. Numerator and
// denominator are coprime as polynomials in s, the denominator is monic in
// s, and both coefficient lists run from s^0 upward (so den.back() == 1).
// The zero entry has an empty numerator and denominator {1}.
struct TransferEntry {
    std::vector<RatFunc> num;
    std::vector<RatFunc> den;

    bool is_zero() const { return num.empty(); }
    bool operator==(const TransferEntry&) const = default;
    // e.g. "a31/(s^2 + a31*s)"
    std::string str() const;
};

// row = output, column = input
using TransferMatrix = std::vector<std::vector<TransferEntry>>;

// H(s) = C (sI - A)^{-1} B + D, the inverse expanded through the adjugate so
// every step stays exact. The offsets f0, g0 do not enter: H describes the
// response of the offset-free part of the model.
TransferMatrix transfer_matrix(const LinearModel& m);

// Union of all numerator and denominator coefficients of the entries,
// first-seen order, with duplicates and rational constants removed.
std::vector<RatFunc> transfer_coefficients(const TransferMatrix& h);

} // namespace ioident
