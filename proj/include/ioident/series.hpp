#pragma once

#include <string>
#include <vector>

#include "ioident/model.hpp"
#include "ioident/rational.hpp"

namespace ioident {

// Exact Taylor jet around t = 0: coeffs_[k] multiplies t^k for k = 0..order.
// Arithmetic truncates to the shorter operand, so coefficients up to the
// result's order are always exact.
class TruncatedSeries {
  public:
    TruncatedSeries() : coeffs_(1) {}
    explicit TruncatedSeries(int order);
    static TruncatedSeries constant(const Rational& c, int order);
    static TruncatedSeries variable(int order); // the series t
    static TruncatedSeries from_coefficients(std::vector<Rational> coeffs);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& operator[](int k) const { return coeffs_[static_cast<size_t>(k)]; }
    void set(int k, Rational v) { coeffs_[static_cast<size_t>(k)] = std::move(v); }

    bool is_zero() const;
    TruncatedSeries truncated(int new_order) const; // new_order <= order()
    TruncatedSeries derivative() const;             // order drops by one

    TruncatedSeries operator-() const;
    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const Rational& c) const;

    bool operator==(const TruncatedSeries& o) const { return coeffs_ == o.coeffs_; }

    std::string str() const;

  private:
    std::vector<Rational> coeffs_;
};

struct Simulation {
    std::vector<TruncatedSeries> states;  // same indexing as model.states
    std::vector<TruncatedSeries> outputs; // same indexing as model.outputs
};

// Exact power-series solution of x' = A x + B u + f0, y = C x + D u + g0 at a
// rational parameter point.  State jets are exact to t^order and satisfy the
// ODE coefficient-by-coefficient to t^(order-1); output jets are exact to
// t^order.  Throws NonGenericPoint when a model denominator vanishes at
// `params` and DimensionError on shape mismatches.
Simulation simulate(const LinearModel& model, const std::vector<Rational>& params,
                    const std::vector<Rational>& x0,
                    const std::vector<TruncatedSeries>& inputs, int order);

// Wronskian determinant det( d^i/dt^i f_j ), i = 0..k-1, over the truncated
// series ring, computed division-free; the result is exact to t^(order-k+1).
// Requires every series to carry at least `order` coefficients and k <= order.
TruncatedSeries series_wronskian(const std::vector<TruncatedSeries>& tuple, int order);

} // namespace ioident
