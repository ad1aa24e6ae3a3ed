#include "ioident/series.hpp"

#include <algorithm>

#include "ioident/errors.hpp"

namespace ioident {

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 0) throw DimensionError("series order must be non-negative");
    coeffs_.resize(static_cast<size_t>(order) + 1);
}

TruncatedSeries TruncatedSeries::constant(const Rational& c, int order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = c;
    return s;
}

TruncatedSeries TruncatedSeries::variable(int order) {
    if (order < 1) throw DimensionError("series order too low to hold t");
    TruncatedSeries s(order);
    s.coeffs_[1] = 1;
    return s;
}

TruncatedSeries TruncatedSeries::from_coefficients(std::vector<Rational> coeffs) {
    if (coeffs.empty()) throw DimensionError("series needs at least one coefficient");
    TruncatedSeries s;
    s.coeffs_ = std::move(coeffs);
    return s;
}

bool TruncatedSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Rational& c) { return c == 0; });
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
    if (new_order < 0 || new_order > order())
        throw DimensionError("cannot truncate a series to order " + std::to_string(new_order));
    TruncatedSeries s;
    s.coeffs_.assign(coeffs_.begin(), coeffs_.begin() + new_order + 1);
    return s;
}

TruncatedSeries TruncatedSeries::derivative() const {
    if (order() < 1) throw DimensionError("series order too low for a derivative");
    TruncatedSeries s(order() - 1);
    for (int k = 1; k <= order(); ++k) s.coeffs_[static_cast<size_t>(k) - 1] = coeffs_[static_cast<size_t>(k)] * k;
    return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries s = *this;
    for (auto& c : s.coeffs_) c = -c;
    return s;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    int n = std::min(order(), o.order());
    TruncatedSeries s(n);
    for (int k = 0; k <= n; ++k) s.coeffs_[static_cast<size_t>(k)] = (*this)[k] + o[k];
    return s;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    int n = std::min(order(), o.order());
    TruncatedSeries s(n);
    for (int k = 0; k <= n; ++k) s.coeffs_[static_cast<size_t>(k)] = (*this)[k] - o[k];
    return s;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    int n = std::min(order(), o.order());
    TruncatedSeries s(n);
    for (int i = 0; i <= n; ++i) {
        if ((*this)[i] == 0) continue;
        for (int j = 0; i + j <= n; ++j)
            s.coeffs_[static_cast<size_t>(i + j)] += (*this)[i] * o[j];
    }
    return s;
}

TruncatedSeries TruncatedSeries::operator*(const Rational& c) const {
    TruncatedSeries s = *this;
    for (auto& v : s.coeffs_) v *= c;
    return s;
}

std::string TruncatedSeries::str() const {
    std::string out;
    for (int k = 0; k <= order(); ++k) {
        if ((*this)[k] == 0) continue;
        if (!out.empty()) out += " + ";
        out += to_string((*this)[k]);
        if (k == 1) out += "*t";
        if (k > 1) out += "*t^" + std::to_string(k);
    }
    if (out.empty()) out = "0";
    return out + " + O(t^" + std::to_string(order() + 1) + ")";
}

Simulation simulate(const LinearModel& model, const std::vector<Rational>& params,
                    const std::vector<Rational>& x0,
                    const std::vector<TruncatedSeries>& inputs, int order) {
    const int n = model.n(), m = model.m(), kap = model.kappa();
    if (params.size() != model.params.size())
        throw DimensionError("expected " + std::to_string(model.params.size()) +
                             " parameter values, got " + std::to_string(params.size()));
    if (static_cast<int>(x0.size()) != n)
        throw DimensionError("expected " + std::to_string(n) + " initial values, got " +
                             std::to_string(x0.size()));
    if (static_cast<int>(inputs.size()) != kap)
        throw DimensionError("expected " + std::to_string(kap) + " input series, got " +
                             std::to_string(inputs.size()));
    if (order < 1) throw DimensionError("truncation order must be at least 1");
    for (const auto& u : inputs)
        if (u.order() < order)
            throw DimensionError("input series truncated below the requested order");

    std::vector<Rational> point(params);
    point.resize(static_cast<size_t>(model.table->arity())); // trailing slots are unused by models

    auto eval_matrix = [&](const RatMatrix& src) {
        std::vector<std::vector<Rational>> out(src.size());
        for (size_t i = 0; i < src.size(); ++i)
            for (const auto& e : src[i]) out[i].push_back(e.eval(point));
        return out;
    };
    auto eval_vector = [&](const RatVector& src) {
        std::vector<Rational> out;
        for (const auto& e : src) out.push_back(e.eval(point));
        return out;
    };
    const auto A = eval_matrix(model.A), B = eval_matrix(model.B);
    const auto C = eval_matrix(model.C), D = eval_matrix(model.D);
    const auto f0 = eval_vector(model.f0), g0 = eval_vector(model.g0);

    // x_{k+1} = (A x_k + B u_k + [k=0] f0) / (k+1)
    std::vector<std::vector<Rational>> xc(static_cast<size_t>(order) + 1,
                                          std::vector<Rational>(static_cast<size_t>(n)));
    xc[0] = x0;
    for (int k = 0; k < order; ++k) {
        for (int i = 0; i < n; ++i) {
            Rational acc = k == 0 ? f0[static_cast<size_t>(i)] : Rational(0);
            for (int j = 0; j < n; ++j)
                acc += A[static_cast<size_t>(i)][static_cast<size_t>(j)] * xc[static_cast<size_t>(k)][static_cast<size_t>(j)];
            for (int j = 0; j < kap; ++j)
                acc += B[static_cast<size_t>(i)][static_cast<size_t>(j)] * inputs[static_cast<size_t>(j)][k];
            xc[static_cast<size_t>(k) + 1][static_cast<size_t>(i)] = acc / (k + 1);
        }
    }

    Simulation sim;
    for (int i = 0; i < n; ++i) {
        TruncatedSeries s(order);
        for (int k = 0; k <= order; ++k) s.set(k, xc[static_cast<size_t>(k)][static_cast<size_t>(i)]);
        sim.states.push_back(std::move(s));
    }
    for (int i = 0; i < m; ++i) {
        TruncatedSeries s(order);
        for (int k = 0; k <= order; ++k) {
            Rational acc = k == 0 ? g0[static_cast<size_t>(i)] : Rational(0);
            for (int j = 0; j < n; ++j)
                acc += C[static_cast<size_t>(i)][static_cast<size_t>(j)] * xc[static_cast<size_t>(k)][static_cast<size_t>(j)];
            for (int j = 0; j < kap; ++j)
                acc += D[static_cast<size_t>(i)][static_cast<size_t>(j)] * inputs[static_cast<size_t>(j)][k];
            s.set(k, acc);
        }
        sim.outputs.push_back(std::move(s));
    }
    return sim;
}

namespace {

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

// Bird's division-free determinant: F <- mu(F) * A repeated n-1 times, where
// mu zeroes the lower triangle and replaces each diagonal entry with minus the
// sum of the diagonal entries below it; det = (-1)^(n-1) * F[0][0].
TruncatedSeries bird_det(const SeriesMatrix& a, int order) {
    const size_t n = a.size();
    SeriesMatrix f = a;
    const TruncatedSeries zero(order);
    for (size_t step = 0; step + 1 < n; ++step) {
        SeriesMatrix mu(n, std::vector<TruncatedSeries>(n, zero));
        TruncatedSeries tail = zero;
        for (size_t i = n; i-- > 0;) {
            mu[i][i] = -tail;
            for (size_t j = i + 1; j < n; ++j) mu[i][j] = f[i][j];
            tail = tail + f[i][i];
        }
        SeriesMatrix next(n, std::vector<TruncatedSeries>(n, zero));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = i; k < n; ++k) // mu is upper triangular
                    next[i][j] = next[i][j] + mu[i][k] * a[k][j];
        f = std::move(next);
    }
    return n % 2 == 0 ? -f[0][0] : f[0][0];
}

} // namespace

TruncatedSeries series_wronskian(const std::vector<TruncatedSeries>& tuple, int order) {
    const int k = static_cast<int>(tuple.size());
    if (k == 0) throw DimensionError("Wronskian of an empty tuple");
    if (k > order)
        throw DimensionError("Wronskian tuple of length " + std::to_string(k) +
                             " needs truncation order at least " + std::to_string(k));
    for (const auto& s : tuple)
        if (s.order() < order)
            throw DimensionError("series truncated below the requested order");

    const int base = order - (k - 1); // order every entry survives k-1 derivatives at
    SeriesMatrix w(static_cast<size_t>(k), std::vector<TruncatedSeries>(static_cast<size_t>(k)));
    for (int j = 0; j < k; ++j) {
        TruncatedSeries cur = tuple[static_cast<size_t>(j)].truncated(order);
        for (int i = 0; i < k; ++i) {
            w[static_cast<size_t>(i)][static_cast<size_t>(j)] = cur.truncated(base);
            if (i + 1 < k) cur = cur.derivative();
        }
    }
    return bird_det(w, base);
}

} // namespace ioident
