#pragma once

#include <string>

#include "ioident/model.hpp"

namespace ioident {

// Parses one model document (see docs/model_format.md for the grammar).
// Throws ParseError for malformed text and SemanticError for well-formed
// text that violates a model rule (undeclared symbol, nonlinear term, ...).
Model parse_model(const std::string& text);

// Canonical printers; parse_model(print_model(m)) reproduces m exactly.
std::string print_model(const LinearModel& m);
std::string print_model(const CompartmentModel& m);
std::string print_model(const Model& m);

} // namespace ioident
