#pragma once

#include "ioident/rational.hpp"
#include "ioident/symbols.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ioident {

// Exponent vector: one slot per table symbol, s last.
using ExpVec = std::vector<int>;

// Graded lexicographic order: total degree first, ties broken at the
// leftmost differing slot. Earlier-declared symbols weigh more, s least.
struct GradedLexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const;
};

// Sparse multivariate polynomial over Q. No zero coefficients are stored;
// the term map is ordered by the canonical term order, so the leading term
// is the last entry.
class MultiPoly {
  public:
    using TermMap = std::map<ExpVec, Rational, GradedLexLess>;

    MultiPoly() = default; // null state; usable only as assignment target
    explicit MultiPoly(SymTab table) : table_(std::move(table)) {}

    static MultiPoly zero(SymTab table) { return MultiPoly(std::move(table)); }
    static MultiPoly constant(SymTab table, Rational c);
    static MultiPoly variable(SymTab table, int index);
    static MultiPoly monomial(SymTab table, ExpVec exps, Rational c);
    // adopts a ready map; caller guarantees no zero coefficients and correct arity
    static MultiPoly from_terms(SymTab table, TermMap terms);

    const SymTab& table() const { return table_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // requires is_constant()
    Rational constant_value() const;

    MultiPoly operator-() const;
    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    // accumulate sign * a * b into this without a temporary product
    MultiPoly& add_product(const MultiPoly& a, const MultiPoly& b, int sign = 1);
    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(int k) const;
    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // degree in one variable; -1 for the zero polynomial
    int degree(int var) const;
    // -1 for the zero polynomial
    int total_degree() const;
    // highest-index variable with a positive exponent; -1 if constant
    int main_variable() const;

    // requires nonzero
    const ExpVec& leading_exponent() const;
    const Rational& leading_coeff() const;

    // coefficient of var^k, as a polynomial with the var slot zeroed
    MultiPoly coeff_of(int var, int k) const;
    // map from exponent of var to coefficient polynomial (nonzero ones only)
    std::map<int, MultiPoly> collect(int var) const;

    MultiPoly derivative(int var) const;
    // point.size() must equal table arity
    Rational eval(const std::vector<Rational>& point) const;

    // Multiply by the rational that makes all coefficients integers with
    // gcd 1 and the leading coefficient positive. Zero stays zero.
    MultiPoly primitive_normalized() const;

    std::string str() const;

  private:
    void add_term(const ExpVec& e, const Rational& c);
    friend std::optional<MultiPoly> exact_div(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

    SymTab table_;
    TermMap terms_;
};

// Quotient a/b when b divides a exactly, nullopt otherwise.
std::optional<MultiPoly> exact_div(const MultiPoly& a, const MultiPoly& b);

// Primitive gcd with positive leading coefficient; gcd(0,0) = 0.
// Primitive-remainder-sequence recursion on the main variable.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

} // namespace ioident
