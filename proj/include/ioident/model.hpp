#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ioident/linalg.hpp"
#include "ioident/ratfunc.hpp"

namespace ioident {

// Affine state-space model
//   x' = A x + B u + f0,   y = C x + D u + g0
// with entries in Q(params). All matrices share one symbol table.
struct LinearModel {
    std::string name;
    SymTab table; // params... plus the operator slot
    std::vector<std::string> params;
    std::vector<std::string> states;
    std::vector<std::string> outputs;
    std::vector<std::string> inputs;
    RatMatrix A; // n x n
    RatMatrix B; // n x kappa
    RatMatrix C; // m x n
    RatMatrix D; // m x kappa
    RatVector f0; // n
    RatVector g0; // m

    int n() const { return static_cast<int>(states.size()); }
    int m() const { return static_cast<int>(outputs.size()); }
    int kappa() const { return static_cast<int>(inputs.size()); }

    bool operator==(const LinearModel& o) const;
};

// Directed-graph compartment model. An edge i -> j moves material from
// compartment i to compartment j at rate `rate` (default symbol a<j><i>).
struct CompartmentEdge {
    int from = 0;
    int to = 0;
    std::string rate;

    bool operator==(const CompartmentEdge& o) const = default;
};

struct CompartmentModel {
    std::string name;
    SymTab table;
    std::vector<std::string> params; // declared + generated rate symbols
    int n = 0;
    std::vector<CompartmentEdge> edges;
    std::map<int, std::string> leaks;  // vertex -> leak rate symbol
    std::map<int, RatFunc> in_scale;   // vertex -> b_i, nonzero
    std::map<int, RatFunc> out_scale;  // vertex -> c_i, nonzero

    bool operator==(const CompartmentModel& o) const;
};

using Model = std::variant<LinearModel, CompartmentModel>;

// State-space realization of a compartment model:
//   A[j][i] = rate of edge i->j;  A[i][i] = -(leak rate) - sum of outgoing rates;
//   one input column per In vertex (scaled), one output row per Out vertex (scaled);
//   D, f0, g0 all zero.
LinearModel compartment_to_state_space(const CompartmentModel& cm);

} // namespace ioident
