#include "ioident/ratfunc.hpp"

#include "ioident/errors.hpp"

namespace ioident {

namespace {

// Both operands are parts of already-reduced fractions, so most gcds here are
// between small polynomials; the arithmetic below is arranged (Henrici style)
// so that no full num-vs-den gcd on large products is ever needed.
MultiPoly reduced_pair(MultiPoly& a, MultiPoly& b) {
    MultiPoly g = poly_gcd(a, b);
    if (!g.is_constant()) {
        a = *exact_div(a, g);
        b = *exact_div(b, g);
    }
    return g;
}

} // namespace

RatFunc::RatFunc(MultiPoly num) : num_(std::move(num)), den_(MultiPoly::constant(num_.table(), 1)) {}

RatFunc::RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DimensionError("rational function with zero denominator");
    normalize();
}

RatFunc RatFunc::from_reduced(MultiPoly num, MultiPoly den) {
    if (den.is_zero()) throw DimensionError("rational function with zero denominator");
    RatFunc r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    if (r.num_.is_zero()) {
        r.den_ = MultiPoly::constant(r.num_.table(), 1);
        return r;
    }
    r.make_den_canonical();
    return r;
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = MultiPoly::constant(num_.table(), 1);
        return;
    }
    reduced_pair(num_, den_);
    make_den_canonical();
}

void RatFunc::make_den_canonical() {
    // scale both parts by the rational that makes den integer-primitive with
    // a positive leading coefficient; a monic den would instead push the
    // leading coefficient's full size into every numerator coefficient
    BigInt den_lcm = 1;
    BigInt num_gcd = 0;
    for (const auto& [e, c] : den_.terms()) den_lcm = lcm(den_lcm, denominator(c));
    for (const auto& [e, c] : den_.terms())
        num_gcd = gcd(num_gcd, numerator(c) * (den_lcm / denominator(c)));
    Rational scale(den_lcm, num_gcd);
    if (den_.leading_coeff() < 0) scale = -scale;
    if (scale != 1) {
        num_ = num_.scaled(scale);
        den_ = den_.scaled(scale);
    }
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

// n1/d1 + n2/d2 with both sides reduced: write d1 = g·t1, d2 = g·t2 for
// g = gcd(d1,d2). The sum (n1·t2 + n2·t1)/(g·t1·t2) can only share a factor
// with g, so one small gcd finishes the reduction.
RatFunc RatFunc::add_scaled(const RatFunc& o, int sign) const {
    if (o.num_.is_zero()) return *this;
    if (num_.is_zero()) return sign > 0 ? o : -o;
    RatFunc r;
    MultiPoly t1 = den_, t2 = o.den_;
    MultiPoly g = reduced_pair(t1, t2);
    MultiPoly cross = num_ * t2;
    cross.add_product(o.num_, t1, sign);
    if (cross.is_zero()) return zero(table());
    if (!g.is_constant()) {
        MultiPoly h = poly_gcd(cross, g);
        if (!h.is_constant()) {
            cross = *exact_div(cross, h);
            g = *exact_div(g, h);
        }
    }
    r.num_ = std::move(cross);
    r.den_ = g * t1 * t2;
    r.make_den_canonical();
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const { return add_scaled(o, +1); }

RatFunc RatFunc::operator-(const RatFunc& o) const { return add_scaled(o, -1); }

// cross-cancel before multiplying: the product of the reduced pieces is
// already in lowest terms
RatFunc RatFunc::operator*(const RatFunc& o) const {
    if (num_.is_zero() || o.num_.is_zero()) return zero(table());
    MultiPoly n1 = num_, d2 = o.den_;
    reduced_pair(n1, d2);
    MultiPoly n2 = o.num_, d1 = den_;
    reduced_pair(n2, d1);
    RatFunc r;
    r.num_ = n1 * n2;
    r.den_ = d1 * d2;
    r.make_den_canonical();
    return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw DimensionError("division by zero rational function");
    return *this * o.inverse();
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw DimensionError("inverse of zero rational function");
    RatFunc r;
    r.num_ = den_;
    r.den_ = num_;
    r.make_den_canonical();
    return r;
}

Rational RatFunc::eval(const std::vector<Rational>& point) const {
    Rational d = den_.eval(point);
    if (d == 0) throw NonGenericPoint("denominator " + den_.str() + " vanishes at sample point");
    return num_.eval(point) / d;
}

RatFunc RatFunc::derivative(int var) const {
    // quotient rule with the common den factor cancelled up front:
    // (n/d)' = (n'·d − n·d')/d² and gcd(n'd − nd', d²) divides d·gcd-ish terms;
    // build via the reducing constructor to keep the invariant
    return RatFunc(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

std::string RatFunc::str() const {
    if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
    auto wrap = [](const MultiPoly& p) {
        std::string s = p.str();
        if (p.terms().size() > 1 || s.find('-') != std::string::npos) return "(" + s + ")";
        return s;
    };
    return wrap(num_) + "/" + wrap(den_);
}

} // namespace ioident
