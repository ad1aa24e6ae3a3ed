#pragma once

// Random model generators shared by the property-test suites.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "ioident/model.hpp"
#include "oracles.hpp"

namespace generators {

using namespace ioident;

// small rational-function entry over the model's parameters
inline RatFunc random_entry(std::mt19937_64& rng, const SymTab& tab, int nparams) {
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> small(1, 4);
    std::uniform_int_distribution<int> pick(0, nparams > 0 ? nparams - 1 : 0);
    switch (nparams > 0 ? kind(rng) : kind(rng) % 2) {
        case 0: return RatFunc::zero(tab);
        case 1: {
            int v = small(rng) - 2;
            return RatFunc::constant(tab, v == 0 ? 2 : v);
        }
        case 2: return RatFunc::variable(tab, pick(rng));
        case 3: return -RatFunc::variable(tab, pick(rng));
        case 4:
            return RatFunc::variable(tab, pick(rng)) + RatFunc::constant(tab, small(rng));
        default:
            return RatFunc::constant(tab, small(rng)) /
                   (RatFunc::variable(tab, pick(rng)) + RatFunc::constant(tab, small(rng)));
    }
}

inline LinearModel random_linear_model(std::mt19937_64& rng, int max_states = 4,
                                       int max_outputs = 2, int max_inputs = 2) {
    std::uniform_int_distribution<int> nd(1, max_states), md(1, max_outputs), kd(0, max_inputs),
        pd(0, 3);
    LinearModel m;
    m.name = "gen";
    const int n = nd(rng), mm = md(rng), kappa = kd(rng), np = pd(rng);
    for (int i = 1; i <= np; ++i) m.params.push_back("p" + std::to_string(i));
    for (int i = 1; i <= n; ++i) m.states.push_back("x" + std::to_string(i));
    for (int i = 1; i <= mm; ++i) m.outputs.push_back("y" + std::to_string(i));
    for (int i = 1; i <= kappa; ++i) m.inputs.push_back("u" + std::to_string(i));
    m.table = SymbolTable::make(m.params);
    auto fill = [&](RatMatrix& mat, int rows, int cols) {
        mat.assign(rows, RatVector(cols, RatFunc::zero(m.table)));
        for (auto& row : mat)
            for (auto& e : row) e = random_entry(rng, m.table, np);
    };
    fill(m.A, n, n);
    fill(m.B, n, kappa);
    fill(m.C, mm, n);
    fill(m.D, mm, kappa);
    m.f0.assign(n, RatFunc::zero(m.table));
    m.g0.assign(mm, RatFunc::zero(m.table));
    for (auto& e : m.f0) e = random_entry(rng, m.table, np);
    for (auto& e : m.g0) e = random_entry(rng, m.table, np);
    // keep every output row nonzero so the model actually observes something
    for (int i = 0; i < mm; ++i) {
        bool all_zero = true;
        for (const auto& e : m.C[i]) all_zero &= e.is_zero();
        if (all_zero) m.C[i][rng() % n] = RatFunc::one(m.table);
    }
    return m;
}

struct CompartmentOptions {
    int max_vertices = 5;
    bool force_strongly_connected = false;
    bool with_scalings = true;
    int min_outputs = 1;
    int max_outputs = 0; // 0 = no cap
    int min_inputs = 0;
};

inline CompartmentModel random_compartment_model(std::mt19937_64& rng,
                                                 const CompartmentOptions& opt = {}) {
    std::uniform_int_distribution<int> nd(std::max({1, opt.min_outputs, opt.min_inputs}),
                                          opt.max_vertices);
    CompartmentModel m;
    m.name = "gen";
    m.n = nd(rng);
    std::set<std::pair<int, int>> chosen;
    auto add_edge = [&](int from, int to) {
        if (from == to || !chosen.insert({from, to}).second) return;
        m.edges.push_back({from, to, ""});
    };
    if (opt.force_strongly_connected && m.n > 1) {
        // a Hamiltonian cycle guarantees strong connectivity
        for (int i = 1; i <= m.n; ++i) add_edge(i, i % m.n + 1);
    }
    std::uniform_int_distribution<int> vd(1, m.n);
    int extra = static_cast<int>(rng() % (2 * m.n + 1));
    for (int i = 0; i < extra; ++i) add_edge(vd(rng), vd(rng));
    for (auto& e : m.edges)
        e.rate = e.to < 10 && e.from < 10
                     ? "a" + std::to_string(e.to) + std::to_string(e.from)
                     : "a" + std::to_string(e.to) + "_" + std::to_string(e.from);
    for (int v = 1; v <= m.n; ++v)
        if (rng() % 3 == 0) m.leaks[v] = "a0" + std::to_string(v);

    std::vector<std::string> declared;
    if (opt.with_scalings && rng() % 2 == 0) declared.push_back("k");
    m.params = declared;
    for (const auto& e : m.edges) m.params.push_back(e.rate);
    for (const auto& [v, r] : m.leaks) m.params.push_back(r);
    m.table = SymbolTable::make(m.params);

    auto scale = [&]() {
        if (!opt.with_scalings || declared.empty() || rng() % 2)
            return RatFunc::one(m.table);
        return RatFunc::variable(m.table, m.table->index_of("k"));
    };
    for (int v = 1; v <= m.n; ++v) {
        if (rng() % 3 == 0) m.in_scale[v] = scale();
        if (rng() % 3 == 0) m.out_scale[v] = scale();
    }
    while (static_cast<int>(m.out_scale.size()) < opt.min_outputs) m.out_scale[vd(rng)] = scale();
    while (static_cast<int>(m.in_scale.size()) < opt.min_inputs) m.in_scale[vd(rng)] = scale();
    if (opt.max_outputs > 0)
        while (static_cast<int>(m.out_scale.size()) > opt.max_outputs)
            m.out_scale.erase(std::prev(m.out_scale.end()));
    return m;
}

} // namespace generators
