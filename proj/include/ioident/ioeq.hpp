#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ioident/model.hpp"
#include "ioident/ratfunc.hpp"

namespace ioident {

// A monomial of a linear differential equation in the outputs and inputs:
// a single derivative y_i^(d) or u_i^(d), or the constant monomial 1.
enum class MonoKind { One = 0, Output = 1, Input = 2 };

struct Monomial {
    MonoKind kind = MonoKind::One;
    int index = 0; // position in the model's output/input list; 0 for One
    int deriv = 0; // derivative order; 0 for One

    static Monomial one() { return {}; }
    static Monomial output(int i, int d) { return {MonoKind::Output, i, d}; }
    static Monomial input(int i, int d) { return {MonoKind::Input, i, d}; }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

// Linear input-output equation, monic in the highest derivative of its
// distinguished output. That leading monomial is stored implicitly with
// coefficient 1; `coeffs` holds every other monomial with a nonzero
// coefficient. `order = -1` encodes the empty equation 0 = 0.
struct IOEquation {
    int output = 0;
    int order = 0;
    std::map<Monomial, RatFunc> coeffs;

    Monomial leading() const { return Monomial::output(output, order); }
    // highest derivative of output i appearing anywhere; -1 when absent
    int order_in_output(int i) const;
    // highest derivative over all monomials (the leading one included)
    int max_derivative() const;

    bool operator==(const IOEquation& o) const;

    // paper-style rendering: y'' + (a01+a12+a21)*y' + a01*a12*y - a21*u
    std::string str(const LinearModel& m) const;
};

// The triangular minimal-order system of IO equations, one per output,
// processed in the given order (indices into model.outputs). Equation l is
// monic in the least derivative of output ordering[l] that is expressible
// through lower derivatives of it and of the earlier outputs (each below its
// own equation's order), with inputs eliminated alongside. The result is
// unique for a fixed ordering.
std::vector<IOEquation> full_io_equations(const LinearModel& m, const std::vector<int>& ordering);
std::vector<IOEquation> full_io_equations(const LinearModel& m); // declaration order

// The Cramer-rule relations: for each output vertex i,
//   det(dI - A)(y_i) - c_i * sum_{j in In} (-1)^(i+j) det(M_ji)(b_j u_j),
// where M_ji deletes row j and column i of dI - A. Valid relations for every
// compartment model, but minimal-order only under extra graph conditions.
std::vector<IOEquation> cramer_io_equations(const CompartmentModel& cm);

// Union of the non-leading coefficients of all equations (constant-monomial
// coefficients included), first-seen order, with duplicates and rational
// constants removed.
std::vector<RatFunc> coefficients(const std::vector<IOEquation>& eqs);

// Flip the sign when the numerator's leading coefficient is negative, so
// displayed generators match the usual sign conventions.
RatFunc sign_normalized(const RatFunc& f);

// Check eq against the model by substituting exact series solutions at random
// rational points: true iff the residual is identically zero to the verifiable
// order in every trial. Non-generic draws are resampled (bounded retries).
bool verify_equation(const LinearModel& m, const IOEquation& eq, int trials = 5,
                     std::uint64_t seed = 0);

} // namespace ioident
