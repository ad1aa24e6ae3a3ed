#include <doctest.h>

#include <random>

#include "ioident/errors.hpp"
#include "ioident/parser.hpp"
#include "ioident/series.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ioident;

namespace {

const char* kTwoCompartment = R"(compartment two_comp
vertices 2
edge 1 -> 2 rate a21
edge 2 -> 1 rate a12
leak 1 rate a01
input 1
output 2
)";

// decay with unknown inflow b, observed through medium c, plus a constant
// outflow w carried as a state so it can be reported as a second output
const char* kObservedDecay = R"(system observed_decay
params a b c
states x w
eq x' = -a*x - w + b
eq w' = 0
out y1 = c*x
out y2 = w
)";

TruncatedSeries random_series(std::mt19937_64& rng, int order) {
    std::vector<Rational> c;
    for (int k = 0; k <= order; ++k) c.push_back(oracles::random_rational(rng));
    return TruncatedSeries::from_coefficients(std::move(c));
}

// first-row cofactor expansion over the series ring
TruncatedSeries series_cofactor_det(const std::vector<std::vector<TruncatedSeries>>& m) {
    const size_t n = m.size();
    if (n == 1) return m[0][0];
    TruncatedSeries acc(m[0][0].order());
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<TruncatedSeries>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<TruncatedSeries> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        TruncatedSeries term = m[0][j] * series_cofactor_det(minor);
        acc = j % 2 == 0 ? acc + term : acc - term;
    }
    return acc;
}

TruncatedSeries wronskian_oracle(const std::vector<TruncatedSeries>& tuple, int order) {
    const int k = static_cast<int>(tuple.size());
    const int base = order - (k - 1);
    std::vector<std::vector<TruncatedSeries>> m(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        TruncatedSeries cur = tuple[static_cast<size_t>(j)].truncated(order);
        for (int i = 0; i < k; ++i) {
            m[static_cast<size_t>(i)].resize(static_cast<size_t>(k), TruncatedSeries(base));
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = cur.truncated(base);
            if (i + 1 < k) cur = cur.derivative();
        }
    }
    return series_cofactor_det(m);
}

} // namespace

TEST_CASE("series arithmetic basics") {
    TruncatedSeries t = TruncatedSeries::variable(4);
    TruncatedSeries one = TruncatedSeries::constant(1, 4);
    TruncatedSeries p = (one + t) * (one - t); // 1 - t^2
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK(p[2] == -1);
    CHECK(p.derivative()[1] == -2);
    CHECK((t * t * t)[3] == 1);
    CHECK((p - p).is_zero());
    CHECK(p.truncated(1).order() == 1);
}

TEST_CASE("single decaying state matches the exponential jet") {
    auto lm = std::get<LinearModel>(parse_model(R"(system decay
states x
eq x' = -2*x
out y = x
)"));
    Simulation sim = simulate(lm, {}, {Rational(1)}, {}, 4);
    const TruncatedSeries& x = sim.states[0];
    CHECK(x[0] == 1);
    CHECK(x[1] == -2);
    CHECK(x[2] == 2);
    CHECK(x[3] == Rational(-4) / 3);
    CHECK(x[4] == Rational(2) / 3);
    CHECK(sim.outputs[0] == x);
}

TEST_CASE("constant-outflow output stays constant") {
    auto lm = std::get<LinearModel>(parse_model(kObservedDecay));
    Simulation sim = simulate(lm, {Rational(1), Rational(2), Rational(3)},
                              {Rational(4), Rational(5)}, {}, 6);
    CHECK(sim.outputs[1] == TruncatedSeries::constant(5, 6));
    // and the first state really decays: x' = -x - 5 + 2 at t = 0 gives -7
    CHECK(sim.states[0][1] == -7);
}

TEST_CASE("two-compartment trajectory satisfies its input-output equation") {
    auto cm = std::get<CompartmentModel>(parse_model(kTwoCompartment));
    LinearModel lm = compartment_to_state_space(cm);
    // params in table order a21, a12, a01 = 3, 2, 1
    std::vector<Rational> point;
    for (const auto& p : lm.params)
        point.push_back(p == "a01" ? 1 : p == "a12" ? 2 : 3);
    TruncatedSeries u = TruncatedSeries::variable(8);
    Simulation sim = simulate(lm, point, {Rational(1), Rational(1)}, {u}, 8);
    const TruncatedSeries& y = sim.outputs[0];
    // y'' + (a01 + a12 + a21) y' + a01 a12 y - a21 u = 0
    TruncatedSeries residual =
        y.derivative().derivative() + y.derivative() * Rational(6) + y * Rational(2) - u * Rational(3);
    CHECK(residual.order() == 6);
    CHECK(residual.is_zero());
}

TEST_CASE("state residuals vanish for random models") {
    std::mt19937_64 rng(91);
    int done = 0;
    while (done < 50) {
        LinearModel lm = generators::random_linear_model(rng);
        const int n = lm.n(), order = 2 * n + 4;
        std::vector<Rational> point, x0;
        for (size_t i = 0; i < lm.params.size(); ++i) point.push_back(oracles::random_rational(rng));
        for (int i = 0; i < n; ++i) x0.push_back(oracles::random_rational(rng));
        std::vector<TruncatedSeries> inputs;
        for (int i = 0; i < lm.kappa(); ++i) inputs.push_back(random_series(rng, order));

        std::vector<Rational> full(point);
        full.resize(static_cast<size_t>(lm.table->arity()));
        Simulation sim;
        try {
            sim = simulate(lm, point, x0, inputs, order);
        } catch (const NonGenericPoint&) {
            continue; // a denominator vanished; redraw everything
        }
        ++done;

        for (int i = 0; i < n; ++i) {
            TruncatedSeries r = sim.states[static_cast<size_t>(i)].derivative();
            for (int j = 0; j < n; ++j)
                r = r - sim.states[static_cast<size_t>(j)] * lm.A[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(full);
            for (int j = 0; j < lm.kappa(); ++j)
                r = r - inputs[static_cast<size_t>(j)] * lm.B[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(full);
            r = r - TruncatedSeries::constant(lm.f0[static_cast<size_t>(i)].eval(full), order);
            CHECK(r.order() == order - 1);
            CHECK(r.is_zero());
        }
        for (int i = 0; i < lm.m(); ++i) {
            TruncatedSeries r = sim.outputs[static_cast<size_t>(i)];
            for (int j = 0; j < n; ++j)
                r = r - sim.states[static_cast<size_t>(j)] * lm.C[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(full);
            for (int j = 0; j < lm.kappa(); ++j)
                r = r - inputs[static_cast<size_t>(j)] * lm.D[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(full);
            r = r - TruncatedSeries::constant(lm.g0[static_cast<size_t>(i)].eval(full), order);
            CHECK(r.is_zero());
        }
    }
}

TEST_CASE("raising the order never changes earlier coefficients") {
    std::mt19937_64 rng(92);
    int done = 0;
    while (done < 20) {
        LinearModel lm = generators::random_linear_model(rng);
        const int n = lm.n(), order = 2 * n + 4;
        std::vector<Rational> point, x0;
        for (size_t i = 0; i < lm.params.size(); ++i) point.push_back(oracles::random_rational(rng));
        for (int i = 0; i < n; ++i) x0.push_back(oracles::random_rational(rng));
        std::vector<TruncatedSeries> lo, hi;
        for (int i = 0; i < lm.kappa(); ++i) {
            TruncatedSeries u = random_series(rng, order + 3);
            hi.push_back(u);
            lo.push_back(u);
        }
        try {
            Simulation a = simulate(lm, point, x0, lo, order);
            Simulation b = simulate(lm, point, x0, hi, order + 3);
            for (int i = 0; i < n; ++i)
                CHECK(b.states[static_cast<size_t>(i)].truncated(order) == a.states[static_cast<size_t>(i)]);
            for (int i = 0; i < lm.m(); ++i)
                CHECK(b.outputs[static_cast<size_t>(i)].truncated(order) == a.outputs[static_cast<size_t>(i)]);
            ++done;
        } catch (const NonGenericPoint&) {
        }
    }
}

TEST_CASE("wronskian of (1, t) is the constant series 1") {
    TruncatedSeries w =
        series_wronskian({TruncatedSeries::constant(1, 4), TruncatedSeries::variable(4)}, 4);
    CHECK(w == TruncatedSeries::constant(1, 3));
}

TEST_CASE("wronskian degenerates when one output is constant") {
    auto lm = std::get<LinearModel>(parse_model(kObservedDecay));
    std::mt19937_64 rng(93);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Rational> point{oracles::random_rational(rng), oracles::random_rational(rng),
                                    oracles::random_rational(rng)};
        std::vector<Rational> x0{oracles::random_rational(rng), oracles::random_rational(rng)};
        Simulation sim = simulate(lm, point, x0, {}, 8);
        TruncatedSeries w = series_wronskian(
            {sim.outputs[0], sim.outputs[1], TruncatedSeries::constant(1, 8)}, 8);
        CHECK(w.is_zero());
    }
}

TEST_CASE("wronskian of (y', y, u) on a driven trajectory is nonzero") {
    auto cm = std::get<CompartmentModel>(parse_model(kTwoCompartment));
    LinearModel lm = compartment_to_state_space(cm);
    std::vector<Rational> point;
    for (const auto& p : lm.params)
        point.push_back(p == "a01" ? 1 : p == "a12" ? 2 : 3);
    TruncatedSeries u = TruncatedSeries::variable(8);
    Simulation sim = simulate(lm, point, {Rational(1), Rational(1)}, {u}, 8);
    TruncatedSeries w = series_wronskian({sim.outputs[0].derivative(), sim.outputs[0], u}, 7);
    CHECK(!w.is_zero());
}

TEST_CASE("wronskian of a planted linear combination vanishes") {
    std::mt19937_64 rng(94);
    for (int trial = 0; trial < 20; ++trial) {
        int order = 6 + static_cast<int>(rng() % 3);
        TruncatedSeries f = random_series(rng, order), g = random_series(rng, order);
        TruncatedSeries h = f * (Rational(2) / 3) - g * Rational(5);
        CHECK(series_wronskian({f, g, h}, order).is_zero());
    }
}

TEST_CASE("wronskian matches a cofactor-expansion oracle") {
    std::mt19937_64 rng(95);
    for (int trial = 0; trial < 25; ++trial) {
        int k = 1 + static_cast<int>(rng() % 4);
        int order = 6 + static_cast<int>(rng() % 3);
        std::vector<TruncatedSeries> tuple;
        for (int j = 0; j < k; ++j) tuple.push_back(random_series(rng, order));
        CHECK(series_wronskian(tuple, order) == wronskian_oracle(tuple, order));
    }
}

TEST_CASE("series and simulation dimension errors") {
    CHECK_THROWS_AS(series_wronskian({TruncatedSeries::constant(1, 2), TruncatedSeries::variable(2),
                                      TruncatedSeries::constant(2, 2)},
                                     2),
                    DimensionError);
    CHECK_THROWS_AS(TruncatedSeries::constant(1, 3).truncated(5), DimensionError);
    CHECK_THROWS_AS(TruncatedSeries(0).derivative(), DimensionError);

    auto cm = std::get<CompartmentModel>(parse_model(kTwoCompartment));
    LinearModel lm = compartment_to_state_space(cm);
    std::vector<Rational> point{1, 2, 3};
    CHECK_THROWS_AS(simulate(lm, point, {Rational(1)}, {TruncatedSeries::variable(8)}, 8),
                    DimensionError);
    CHECK_THROWS_AS(simulate(lm, point, {Rational(1), Rational(1)}, {}, 8), DimensionError);
    CHECK_THROWS_AS(
        simulate(lm, point, {Rational(1), Rational(1)}, {TruncatedSeries::variable(3)}, 8),
        DimensionError);
}

TEST_CASE("vanishing model denominator is a non-generic point") {
    auto lm = std::get<LinearModel>(parse_model(R"(system singular
params p
states x
eq x' = 1/(p - 1)*x
out y = x
)"));
    CHECK_THROWS_AS(simulate(lm, {Rational(1)}, {Rational(2)}, {}, 4), NonGenericPoint);
    CHECK_NOTHROW(simulate(lm, {Rational(2)}, {Rational(2)}, {}, 4));
}
