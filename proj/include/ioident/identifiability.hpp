#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ioident/graph.hpp"
#include "ioident/ioeq.hpp"
#include "ioident/model.hpp"
#include "ioident/ratfunc.hpp"

namespace ioident {

// Verdict of the Wronskian check on one IO equation: Solvable means the
// coefficients are recoverable from generic trajectories (certified by a
// nonzero Wronskian); RankDeficient means every sampled Wronskian vanished,
// a one-sided probabilistic finding.
enum class SolvabilityVerdict { Solvable, RankDeficient };

// Dependent = h is algebraically dependent on the generators over Q (their
// Jacobians span the same directions at random points mod random primes).
// The test is local: Dependent does not certify membership in the generated
// field itself, only in its algebraic closure.
enum class MembershipVerdict { Dependent, Independent };

// Where a report's generators came from.
enum class GeneratorMethod { Elimination, Cramer, Transfer };

// IdentifiableFieldProven: a structural gate certifies the generators span
// the full field of identifiable functions. IOFieldOnly: they span the field
// of IO-equation coefficients, which contains the identifiable field and can
// be strictly larger.
enum class GeneratorStatus { IdentifiableFieldProven, IOFieldOnly };

std::string to_string(SolvabilityVerdict v);
std::string to_string(MembershipVerdict v);
std::string to_string(GeneratorMethod m);
std::string to_string(GeneratorStatus s);

struct IdentifiabilityReport {
    ConditionReport conditions;
    GeneratorMethod method = GeneratorMethod::Elimination;
    GeneratorStatus status = GeneratorStatus::IOFieldOnly;
    std::vector<IOEquation> equations;           // the eliminated triangular system
    std::vector<RatFunc> generators;             // sign-normalized, first-seen order
    std::vector<SolvabilityVerdict> solvability; // one verdict per equation
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> primes; // primes consumed by attached rank checks
    std::vector<std::string> notes;    // caveats: failed diagnostics, ignored offsets, ...
};

struct AnalyzeOptions {
    std::optional<GeneratorMethod> method; // default: strongest applicable gate
    std::vector<int> ordering;             // output ordering; empty = declaration order
    int solvability_trials = 5;
    std::uint64_t seed = 0;
};

// Eliminates the IO equations, runs the per-equation solvability check, and
// picks generators by the strongest applicable gate: coefficient generators
// are certified for a single output or when every vertex reaches a leak or
// input (elimination), and for strongly connected compartment models with an
// input (Cramer / transfer). Anything else is reported IOFieldOnly.
// Forcing method = Cramer on a non-compartment model throws SemanticError.
IdentifiabilityReport analyze(const Model& m, const AnalyzeOptions& opt = {});

// Wronskian of the non-leading monomials of eq along exact series solutions
// at random rational instances with generic polynomial inputs. An equation
// with no non-leading monomials has nothing to recover and is Solvable.
SolvabilityVerdict solvability_diagnostic(const LinearModel& m, const IOEquation& eq,
                                          int trials = 5, std::uint64_t seed = 0);

// Randomized Jacobian rank test: h is Dependent iff appending its gradient
// row never increased the rank of the generators' Jacobian, sampled at
// `trials` points for each of `trials` random ~2^62 primes. A reported rank
// increase is checked against the best rank seen for the generators alone,
// so Dependent errs only when every sample hits a minor's zero set
// (probability well under 2^-40 at the defaults). Primes drawn are appended
// to *prime_log when given.
MembershipVerdict jacobian_membership(const RatFunc& h, const std::vector<RatFunc>& generators,
                                      int trials = 3, std::uint64_t seed = 0,
                                      std::vector<std::uint64_t>* prime_log = nullptr);

// true iff every element of each set is Dependent on the other set; the
// sets then generate the same algebraic closure over Q.
bool field_equivalence(const std::vector<RatFunc>& gens1, const std::vector<RatFunc>& gens2,
                       int trials = 3, std::uint64_t seed = 0,
                       std::vector<std::uint64_t>* prime_log = nullptr);

// A change of parameters and initial states that should leave every output
// trajectory unchanged. Substitutions are rational expressions over the
// symbols of transformation_table (the model's parameters, then its states
// valued at t = 0, then the extra symbols); keys are parameter or state
// names, and anything absent maps to itself.
struct Transformation {
    std::vector<std::string> extra; // fresh symbols, e.g. a scaling factor
    std::map<std::string, RatFunc> subs;
};

SymTab transformation_table(const LinearModel& m, const std::vector<std::string>& extra);

// true iff in every trial (random instance, random nonzero values for the
// extra symbols, generic polynomial inputs) the transformed instance's
// output series equal the original's exactly — a certificate that the
// transformation is output-preserving, i.e. a non-identifiability witness.
bool witness_transformation(const LinearModel& m, const Transformation& tr, int trials = 5,
                            std::uint64_t seed = 0);

} // namespace ioident
