#pragma once

#include <stdexcept>
#include <string>

namespace ioident {

// Model text could not be parsed. line/col are 1-based.
struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
};

// Model parsed but violates a semantic rule (undeclared symbol, bad
// dimensions, nonlinear term, ...).
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::logic_error {
    using std::logic_error::logic_error;
};

// A rational-function denominator vanished at the sampled parameter point.
struct NonGenericPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The chosen prime divides a coefficient denominator; caller should retry
// with a fresh prime.
struct ModEvalRetry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A "cannot happen" condition; maps to exit code 2 in the CLI.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace ioident
