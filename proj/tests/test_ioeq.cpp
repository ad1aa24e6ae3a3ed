#include <doctest.h>

#include <random>

#include "ioident/errors.hpp"
#include "ioident/graph.hpp"
#include "ioident/ioeq.hpp"
#include "ioident/linalg.hpp"
#include "ioident/parser.hpp"
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

const char* kObservedDecay = R"(system observed_decay
params a b c
states x w
eq x' = -a*x - w + b
eq w' = 0
out y1 = c*x
out y2 = w
)";

const char* kCascadeOut1 = R"(compartment cascade_out1
vertices 3
edge 1 -> 3 rate a31
edge 2 -> 3 rate a32
input 1
output 1
)";

const char* kCascadeOut3 = R"(compartment cascade_out3
vertices 3
edge 1 -> 3 rate a31
edge 2 -> 3 rate a32
input 1
output 3
)";

const char* kLead = R"(system lead
params k1 k2 k3 k4 k5 k6 k7
states x1 x2 x3
eq x1' = k1*x1 + k2*x2 + k3*x3 + k4
eq x2' = k5*x1 + k6*x2
eq x3' = k7*x1 - k3*x3
out y1 = x1
)";

RatFunc var(const SymTab& t, const std::string& name) {
    return RatFunc::variable(t, t->index_of(name));
}

LinearModel state_space(const char* text) {
    return compartment_to_state_space(std::get<CompartmentModel>(parse_model(text)));
}

} // namespace

TEST_CASE("two-compartment model eliminates to the second-order relation") {
    LinearModel lm = state_space(kTwoCompartment);
    auto eqs = full_io_equations(lm);
    REQUIRE(eqs.size() == 1);
    const IOEquation& eq = eqs[0];
    CHECK(eq.output == 0);
    CHECK(eq.order == 2);
    const SymTab& t = lm.table;
    RatFunc a01 = var(t, "a01"), a12 = var(t, "a12"), a21 = var(t, "a21");
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 1), a01 + a12 + a21},
        {Monomial::output(0, 0), a01 * a12},
        {Monomial::input(0, 0), -a21},
    };
    CHECK(eq.coeffs == expected);

    std::string s = eq.str(lm);
    CHECK(s.substr(0, 4) == "y2''");
    CHECK(s.find("a21*u1") != std::string::npos);
}

TEST_CASE("constant output comes first under the reversed ordering") {
    auto lm = std::get<LinearModel>(parse_model(kObservedDecay));
    auto eqs = full_io_equations(lm, {1, 0});
    REQUIRE(eqs.size() == 2);

    CHECK(eqs[0].output == 1);
    CHECK(eqs[0].order == 1);
    CHECK(eqs[0].coeffs.empty());
    CHECK(eqs[0].str(lm) == "y2'");

    const SymTab& t = lm.table;
    RatFunc a = var(t, "a"), b = var(t, "b"), c = var(t, "c");
    CHECK(eqs[1].output == 0);
    CHECK(eqs[1].order == 1);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 0), a},
        {Monomial::output(1, 0), c},
        {Monomial::one(), -(c * b)},
    };
    CHECK(eqs[1].coeffs == expected);
}

TEST_CASE("observing the cascade sink gives the third-order equation") {
    LinearModel lm = state_space(kCascadeOut3);
    auto eqs = full_io_equations(lm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = lm.table;
    RatFunc a31 = var(t, "a31"), a32 = var(t, "a32");
    CHECK(eqs[0].order == 3);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 2), a31 + a32},
        {Monomial::output(0, 1), a31 * a32},
        {Monomial::input(0, 1), -a31},
        {Monomial::input(0, 0), -(a31 * a32)},
    };
    CHECK(eqs[0].coeffs == expected);
}

TEST_CASE("observing the cascade source gives a first-order equation") {
    LinearModel lm = state_space(kCascadeOut1);
    auto eqs = full_io_equations(lm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = lm.table;
    CHECK(eqs[0].order == 1);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 0), var(t, "a31")},
        {Monomial::input(0, 0), -RatFunc::one(t)},
    };
    CHECK(eqs[0].coeffs == expected);
}

TEST_CASE("constant-inflow model yields the known third-order polynomial") {
    auto lm = std::get<LinearModel>(parse_model(kLead));
    auto eqs = full_io_equations(lm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = lm.table;
    RatFunc k1 = var(t, "k1"), k2 = var(t, "k2"), k3 = var(t, "k3"), k4 = var(t, "k4"),
            k5 = var(t, "k5"), k6 = var(t, "k6"), k7 = var(t, "k7");
    CHECK(eqs[0].order == 3);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 2), -(k1 - k3 + k6)},
        {Monomial::output(0, 1), -(k1 * k3) + k1 * k6 - k2 * k5 - k3 * k6 - k3 * k7},
        {Monomial::output(0, 0), k1 * k3 * k6 - k2 * k3 * k5 + k3 * k6 * k7},
        {Monomial::one(), k3 * k4 * k6},
    };
    CHECK(eqs[0].coeffs == expected);
    CHECK(verify_equation(lm, eqs[0]));
}

TEST_CASE("cramer relation equals the eliminated equation on the exchange model") {
    auto cm = std::get<CompartmentModel>(parse_model(kTwoCompartment));
    auto cramer = cramer_io_equations(cm);
    auto full = full_io_equations(compartment_to_state_space(cm));
    REQUIRE(cramer.size() == 1);
    CHECK(cramer == full);
}

TEST_CASE("cramer relation for the cascade source is a higher-order multiple") {
    auto cm = std::get<CompartmentModel>(parse_model(kCascadeOut1));
    auto eqs = cramer_io_equations(cm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = cm.table;
    RatFunc a31 = var(t, "a31"), a32 = var(t, "a32");
    CHECK(eqs[0].order == 3);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 2), a31 + a32},
        {Monomial::output(0, 1), a31 * a32},
        {Monomial::input(0, 2), -RatFunc::one(t)},
        {Monomial::input(0, 1), -a32},
    };
    CHECK(eqs[0].coeffs == expected);
    // both the relation and the minimal equation hold on trajectories
    LinearModel lm = compartment_to_state_space(cm);
    CHECK(verify_equation(lm, eqs[0]));
    CHECK(verify_equation(lm, full_io_equations(lm)[0]));
}

TEST_CASE("cramer relation matches a cofactor-expansion oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        generators::CompartmentOptions opt;
        opt.max_vertices = 4;
        opt.min_inputs = 1;
        CompartmentModel cm = generators::random_compartment_model(rng, opt);
        LinearModel lm = compartment_to_state_space(cm);
        const SymTab& t = cm.table;
        const int n = cm.n, s = t->s_index();

        PolyMatrix sa(n, std::vector<MultiPoly>(n, MultiPoly::zero(t)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const RatFunc& e = lm.A[i][j];
                sa[i][j] = -(e.num().scaled(Rational(1) / e.den().constant_value()));
                if (i == j) sa[i][j] = sa[i][j] + MultiPoly::variable(t, s);
            }

        auto eqs = cramer_io_equations(cm);
        int pos = 0;
        for (const auto& [i, ci] : cm.out_scale) {
            std::map<Monomial, RatFunc> expected;
            for (const auto& [d, c] : oracles::cofactor_det(sa).collect(s))
                if (d < n) expected[Monomial::output(pos, d)] = RatFunc(c);
            int upos = 0;
            for (const auto& [j, bj] : cm.in_scale) {
                MultiPoly md = MultiPoly::constant(t, 1);
                if (n > 1) {
                    PolyMatrix minor;
                    for (int r = 0; r < n; ++r) {
                        if (r == j - 1) continue;
                        std::vector<MultiPoly> row;
                        for (int c = 0; c < n; ++c)
                            if (c != i - 1) row.push_back(sa[r][c]);
                        minor.push_back(std::move(row));
                    }
                    md = oracles::cofactor_det(minor);
                }
                RatFunc factor = RatFunc::constant(t, (i + j) % 2 == 0 ? -1 : 1) * bj * ci;
                for (const auto& [d, c] : md.collect(s)) {
                    RatFunc v = factor * RatFunc(c);
                    auto it = expected.find(Monomial::input(upos, d));
                    if (it == expected.end()) {
                        if (!v.is_zero()) expected[Monomial::input(upos, d)] = v;
                    } else {
                        it->second = it->second + v;
                        if (it->second.is_zero()) expected.erase(it);
                    }
                }
                ++upos;
            }
            CHECK(eqs[pos].order == n);
            CHECK(eqs[pos].coeffs == expected);
            ++pos;
        }
    }
}

TEST_CASE("one-compartment relation uses the empty-minor convention") {
    auto cm = std::get<CompartmentModel>(parse_model(R"(compartment single
vertices 1
leak 1 rate a01
input 1
output 1
)"));
    auto eqs = cramer_io_equations(cm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = cm.table;
    CHECK(eqs[0].order == 1);
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 0), var(t, "a01")},
        {Monomial::input(0, 0), -RatFunc::one(t)},
    };
    CHECK(eqs[0].coeffs == expected);
}

TEST_CASE("input and output scalings multiply into the input coefficient") {
    // x' = -a01 x + b u, y = c x  =>  y' + a01 y - c*b*u = 0.
    auto cm = std::get<CompartmentModel>(parse_model(R"(compartment scaled
params b c
vertices 1
leak 1 rate a01
input 1 scale b
output 1 scale c
)"));
    auto eqs = cramer_io_equations(cm);
    REQUIRE(eqs.size() == 1);
    const SymTab& t = cm.table;
    std::map<Monomial, RatFunc> expected = {
        {Monomial::output(0, 0), var(t, "a01")},
        {Monomial::input(0, 0), -(var(t, "c") * var(t, "b"))},
    };
    CHECK(eqs[0].coeffs == expected);
    CHECK(verify_equation(compartment_to_state_space(cm), eqs[0]));
}

TEST_CASE("coefficient extraction keeps signs and drops rational constants") {
    LinearModel two = state_space(kTwoCompartment);
    auto coeffs = coefficients(full_io_equations(two));
    const SymTab& t = two.table;
    RatFunc a01 = var(t, "a01"), a12 = var(t, "a12"), a21 = var(t, "a21");
    REQUIRE(coeffs.size() == 3);
    CHECK(std::find(coeffs.begin(), coeffs.end(), a01 + a12 + a21) != coeffs.end());
    CHECK(std::find(coeffs.begin(), coeffs.end(), a01 * a12) != coeffs.end());
    CHECK(std::find(coeffs.begin(), coeffs.end(), -a21) != coeffs.end());

    auto lm = std::get<LinearModel>(parse_model(kObservedDecay));
    auto pair = coefficients(full_io_equations(lm, {1, 0}));
    RatFunc a = var(lm.table, "a"), b = var(lm.table, "b"), c = var(lm.table, "c");
    REQUIRE(pair.size() == 3);
    CHECK(std::find(pair.begin(), pair.end(), a) != pair.end());
    CHECK(std::find(pair.begin(), pair.end(), c) != pair.end());
    CHECK(std::find(pair.begin(), pair.end(), -(c * b)) != pair.end());

    // a parameter-free equation contributes nothing
    auto still = std::get<LinearModel>(parse_model("system still\nstates x\neq x' = 0\nout y = x\n"));
    CHECK(coefficients(full_io_equations(still)).empty());

    CHECK(sign_normalized(-a21) == a21);
    CHECK(sign_normalized(a01 + a12) == a01 + a12);
    CHECK(sign_normalized(-(c * b)) == c * b);
}

TEST_CASE("verification accepts the true relation and rejects a corrupted one") {
    LinearModel lm = state_space(kTwoCompartment);
    auto eqs = full_io_equations(lm);
    CHECK(verify_equation(lm, eqs[0]));

    IOEquation bad = eqs[0];
    bad.coeffs[Monomial::output(0, 0)] = var(lm.table, "a01");
    CHECK(!verify_equation(lm, bad));

    IOEquation empty;
    empty.order = -1;
    CHECK(verify_equation(lm, empty));
}

TEST_CASE("elimination is deterministic") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        LinearModel lm = generators::random_linear_model(rng);
        CHECK(full_io_equations(lm) == full_io_equations(lm));
    }
}

TEST_CASE("ordering must be a permutation") {
    auto lm = std::get<LinearModel>(parse_model(kObservedDecay));
    CHECK_THROWS_AS(full_io_equations(lm, {0}), DimensionError);
    CHECK_THROWS_AS(full_io_equations(lm, {0, 0}), DimensionError);
    CHECK_THROWS_AS(full_io_equations(lm, {0, 2}), DimensionError);
}

TEST_CASE("eliminated systems are triangular, order-bounded, and verified") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        LinearModel lm = generators::random_linear_model(rng);
        std::vector<int> ordering(lm.m());
        for (int i = 0; i < lm.m(); ++i) ordering[i] = i;
        std::shuffle(ordering.begin(), ordering.end(), rng);

        auto eqs = full_io_equations(lm, ordering);
        REQUIRE(static_cast<int>(eqs.size()) == lm.m());
        int total = 0;
        for (size_t l = 0; l < eqs.size(); ++l) {
            CHECK(eqs[l].output == ordering[l]);
            total += eqs[l].order;
            // earlier outputs only below their own equation's order,
            // later outputs absent entirely
            for (size_t j = 0; j < eqs.size(); ++j) {
                if (j < l) CHECK(eqs[l].order_in_output(ordering[j]) < eqs[j].order);
                if (j > l) CHECK(eqs[l].order_in_output(ordering[j]) == -1);
            }
            CHECK(verify_equation(lm, eqs[l], 2, 7 * trial + static_cast<int>(l)));
        }
        CHECK(total <= lm.n());
    }
}

TEST_CASE("cramer and elimination agree on strongly connected driven models") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        generators::CompartmentOptions opt;
        opt.max_vertices = 4;
        opt.force_strongly_connected = true;
        opt.min_inputs = 1;
        opt.max_outputs = 1;
        CompartmentModel cm = generators::random_compartment_model(rng, opt);
        ConditionReport rep = condition_report(cm);
        REQUIRE(rep.strongly_connected == true);
        CHECK(cramer_io_equations(cm) == full_io_equations(compartment_to_state_space(cm)));
    }
}

TEST_CASE("cramer relations hold on trajectories even with several outputs") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 6; ++trial) {
        generators::CompartmentOptions opt;
        opt.max_vertices = 3;
        opt.force_strongly_connected = true;
        opt.min_inputs = 1;
        opt.min_outputs = 2;
        CompartmentModel cm = generators::random_compartment_model(rng, opt);
        LinearModel lm = compartment_to_state_space(cm);
        for (const auto& eq : cramer_io_equations(cm))
            CHECK(verify_equation(lm, eq, 2, 100 + trial));
    }
}
