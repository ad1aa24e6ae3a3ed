#pragma once

#include "ioident/poly.hpp"

#include <string>
#include <vector>

namespace ioident {

// Reduced rational function: gcd(num, den) = 1 up to rational content and
// den has integer coefficients with gcd 1 and a positive leading coefficient
// (canonical term order). An integer-coefficient denominator, rather than a
// monic one, keeps the numerator's coefficients integral through arithmetic.
class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(MultiPoly num);
    RatFunc(MultiPoly num, MultiPoly den);

    static RatFunc zero(SymTab t) { return RatFunc(MultiPoly::zero(std::move(t))); }
    static RatFunc one(SymTab t) { return RatFunc(MultiPoly::constant(std::move(t), 1)); }
    static RatFunc constant(SymTab t, Rational c) {
        return RatFunc(MultiPoly::constant(std::move(t), std::move(c)));
    }
    static RatFunc variable(SymTab t, int i) { return RatFunc(MultiPoly::variable(std::move(t), i)); }
    // caller guarantees gcd(num, den) is constant; skips the reducing gcd
    static RatFunc from_reduced(MultiPoly num, MultiPoly den);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const SymTab& table() const { return num_.table(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    // requires is_constant()
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc inverse() const;
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    // throws NonGenericPoint when the denominator vanishes at the point
    Rational eval(const std::vector<Rational>& point) const;

    // partial derivative: (n'd - nd')/d^2, reduced
    RatFunc derivative(int var) const;

    std::string str() const;

  private:
    void normalize();
    void make_den_canonical();
    RatFunc add_scaled(const RatFunc& o, int sign) const;

    MultiPoly num_;
    MultiPoly den_;
};

} // namespace ioident
