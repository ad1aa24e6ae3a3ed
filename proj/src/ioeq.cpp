#include "ioident/ioeq.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "ioident/errors.hpp"
#include "ioident/linalg.hpp"
#include "ioident/series.hpp"

namespace ioident {

namespace {

// merge c into the monomial map, erasing entries that cancel to zero
void add_into(std::map<Monomial, RatFunc>& map, const Monomial& mono, const RatFunc& c) {
    if (c.is_zero()) return;
    auto it = map.find(mono);
    if (it == map.end()) {
        map.emplace(mono, c);
        return;
    }
    RatFunc sum = it->second + c;
    if (sum.is_zero())
        map.erase(it);
    else
        it->second = std::move(sum);
}

// one level of the derivative tower: y^(k) = row . x + (input part)
struct AffineForm {
    RatVector row;
    std::map<Monomial, RatFunc> inp; // Input monomials and One
};

AffineForm tower_base(const LinearModel& m, int out) {
    AffineForm f;
    f.row = m.C[static_cast<size_t>(out)];
    for (int j = 0; j < m.kappa(); ++j)
        add_into(f.inp, Monomial::input(j, 0), m.D[static_cast<size_t>(out)][static_cast<size_t>(j)]);
    add_into(f.inp, Monomial::one(), m.g0[static_cast<size_t>(out)]);
    return f;
}

// differentiate along the dynamics: row.x' = row.(A x + B u + f0), and the
// explicit input part differentiates formally (the constant term drops)
AffineForm tower_step(const LinearModel& m, const AffineForm& f) {
    const int n = m.n();
    AffineForm g;
    g.row.assign(static_cast<size_t>(n), RatFunc::zero(m.table));
    for (int l = 0; l < n; ++l) {
        RatFunc acc = RatFunc::zero(m.table);
        for (int t = 0; t < n; ++t)
            acc = acc + f.row[static_cast<size_t>(t)] * m.A[static_cast<size_t>(t)][static_cast<size_t>(l)];
        g.row[static_cast<size_t>(l)] = std::move(acc);
    }
    for (const auto& [mono, c] : f.inp)
        if (mono.kind == MonoKind::Input) add_into(g.inp, Monomial::input(mono.index, mono.deriv + 1), c);
    for (int j = 0; j < m.kappa(); ++j) {
        RatFunc acc = RatFunc::zero(m.table);
        for (int t = 0; t < n; ++t)
            acc = acc + f.row[static_cast<size_t>(t)] * m.B[static_cast<size_t>(t)][static_cast<size_t>(j)];
        add_into(g.inp, Monomial::input(j, 0), acc);
    }
    RatFunc cst = RatFunc::zero(m.table);
    for (int t = 0; t < n; ++t) cst = cst + f.row[static_cast<size_t>(t)] * m.f0[static_cast<size_t>(t)];
    add_into(g.inp, Monomial::one(), cst);
    return g;
}

// model entries whose denominator is a rational constant, as plain polynomials
MultiPoly to_poly(const RatFunc& f) {
    if (!f.den().is_constant()) throw InternalError("matrix entry is not polynomial");
    return f.num().scaled(Rational(1) / f.den().constant_value());
}

} // namespace

int IOEquation::order_in_output(int i) const {
    int best = output == i && order >= 0 ? order : -1;
    for (const auto& [mono, c] : coeffs)
        if (mono.kind == MonoKind::Output && mono.index == i) best = std::max(best, mono.deriv);
    return best;
}

int IOEquation::max_derivative() const {
    int best = order > 0 ? order : 0;
    for (const auto& [mono, c] : coeffs)
        if (mono.kind != MonoKind::One) best = std::max(best, mono.deriv);
    return best;
}

bool IOEquation::operator==(const IOEquation& o) const {
    return output == o.output && order == o.order && coeffs == o.coeffs;
}

std::string IOEquation::str(const LinearModel& m) const {
    if (order < 0 && coeffs.empty()) return "0";

    auto mono_str = [&](const Monomial& mono) -> std::string {
        if (mono.kind == MonoKind::One) return "1";
        const auto& names = mono.kind == MonoKind::Output ? m.outputs : m.inputs;
        std::string base = names[static_cast<size_t>(mono.index)];
        if (mono.deriv <= 3) return base + std::string(static_cast<size_t>(mono.deriv), '\'');
        return base + "^(" + std::to_string(mono.deriv) + ")";
    };
    // distinguished output first, then other outputs, inputs, constant;
    // derivatives descending within each group
    auto rank = [&](const Monomial& mono) {
        int group = mono.kind == MonoKind::Output ? (mono.index == output ? 0 : 1)
                    : mono.kind == MonoKind::Input ? 2
                                                   : 3;
        return std::tuple(group, mono.index, -mono.deriv);
    };
    std::vector<std::pair<Monomial, RatFunc>> terms;
    if (order >= 0) terms.emplace_back(leading(), RatFunc::one(m.table));
    for (const auto& [mono, c] : coeffs) terms.emplace_back(mono, c);
    std::sort(terms.begin(), terms.end(),
              [&](const auto& a, const auto& b) { return rank(a.first) < rank(b.first); });

    std::string out;
    for (const auto& [mono, c] : terms) {
        bool negative = c.num().leading_coeff() < 0;
        RatFunc mag = negative ? -c : c;
        std::string cs = mag.str();
        std::string term;
        if (mono.kind == MonoKind::One)
            term = cs;
        else if (cs == "1")
            term = mono_str(mono);
        else {
            if (cs.find(' ') != std::string::npos && cs.front() != '(') cs = "(" + cs + ")";
            term = cs + "*" + mono_str(mono);
        }
        if (out.empty())
            out = negative ? "-" + term : term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

std::vector<IOEquation> full_io_equations(const LinearModel& m, const std::vector<int>& ordering) {
    const int n = m.n(), mm = m.m();
    if (static_cast<int>(ordering.size()) != mm)
        throw DimensionError("ordering must list every output exactly once");
    {
        std::vector<bool> seen(static_cast<size_t>(mm), false);
        for (int o : ordering) {
            if (o < 0 || o >= mm || seen[static_cast<size_t>(o)])
                throw DimensionError("ordering must list every output exactly once");
            seen[static_cast<size_t>(o)] = true;
        }
    }

    std::vector<std::vector<AffineForm>> tower(static_cast<size_t>(mm));
    auto row_at = [&](int out, int k) -> const AffineForm& {
        auto& col = tower[static_cast<size_t>(out)];
        if (col.empty()) col.push_back(tower_base(m, out));
        while (static_cast<int>(col.size()) <= k) col.push_back(tower_step(m, col.back()));
        return col[static_cast<size_t>(k)];
    };

    struct Candidate {
        int out;
        int deriv;
    };
    std::vector<Candidate> admissible; // rows allowed to appear in later equations
    std::vector<IOEquation> eqs;

    for (int l = 0; l < mm; ++l) {
        const int o = ordering[static_cast<size_t>(l)];
        for (int k = 0;; ++k) {
            if (k > n) throw InternalError("no input-output equation within the order bound");
            const AffineForm& target = row_at(o, k);
            RatMatrix mat(static_cast<size_t>(n), RatVector(admissible.size(), RatFunc::zero(m.table)));
            for (size_t a = 0; a < admissible.size(); ++a) {
                const AffineForm& f = row_at(admissible[a].out, admissible[a].deriv);
                for (int r = 0; r < n; ++r) mat[static_cast<size_t>(r)][a] = f.row[static_cast<size_t>(r)];
            }
            auto sol = solve_linear(mat, target.row);
            if (!sol) {
                admissible.push_back({o, k});
                continue;
            }
            IOEquation eq;
            eq.output = o;
            eq.order = k;
            for (const auto& [mono, c] : target.inp) add_into(eq.coeffs, mono, -c);
            for (size_t a = 0; a < admissible.size(); ++a) {
                const RatFunc& ca = (*sol)[a];
                if (ca.is_zero()) continue;
                add_into(eq.coeffs, Monomial::output(admissible[a].out, admissible[a].deriv), -ca);
                for (const auto& [mono, c] : row_at(admissible[a].out, admissible[a].deriv).inp)
                    add_into(eq.coeffs, mono, ca * c);
            }
            eqs.push_back(std::move(eq));
            break;
        }
    }
    return eqs;
}

std::vector<IOEquation> full_io_equations(const LinearModel& m) {
    std::vector<int> ordering(static_cast<size_t>(m.m()));
    for (int i = 0; i < m.m(); ++i) ordering[static_cast<size_t>(i)] = i;
    return full_io_equations(m, ordering);
}

std::vector<IOEquation> cramer_io_equations(const CompartmentModel& cm) {
    const LinearModel lm = compartment_to_state_space(cm);
    const int n = cm.n;
    const SymTab& tab = cm.table;
    const int s = tab->s_index();

    PolyMatrix sa(static_cast<size_t>(n), std::vector<MultiPoly>(static_cast<size_t>(n), MultiPoly::zero(tab)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiPoly e = -to_poly(lm.A[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            if (i == j) e = e + MultiPoly::variable(tab, s);
            sa[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(e);
        }
    const MultiPoly charpoly = bareiss_det(sa);
    if (!(charpoly.coeff_of(s, n) == MultiPoly::constant(tab, 1)))
        throw InternalError("characteristic polynomial is not monic");

    std::vector<IOEquation> eqs;
    int out_pos = 0;
    for (const auto& [i, ci] : cm.out_scale) {
        IOEquation eq;
        eq.output = out_pos++;
        eq.order = n;
        for (const auto& [d, c] : charpoly.collect(s))
            if (d < n) add_into(eq.coeffs, Monomial::output(eq.output, d), RatFunc(c));

        int in_pos = 0;
        for (const auto& [j, bj] : cm.in_scale) {
            MultiPoly minor_det = MultiPoly::constant(tab, 1); // 0x0 minor
            if (n > 1) {
                PolyMatrix minor;
                for (int r = 0; r < n; ++r) {
                    if (r == j - 1) continue;
                    std::vector<MultiPoly> row;
                    for (int c = 0; c < n; ++c)
                        if (c != i - 1) row.push_back(sa[static_cast<size_t>(r)][static_cast<size_t>(c)]);
                    minor.push_back(std::move(row));
                }
                minor_det = bareiss_det(minor);
            }
            const int sign = (i + j) % 2 == 0 ? 1 : -1;
            const RatFunc factor = RatFunc::constant(tab, -sign) * bj * ci;
            for (const auto& [d, c] : minor_det.collect(s))
                add_into(eq.coeffs, Monomial::input(in_pos, d), factor * RatFunc(c));
            ++in_pos;
        }
        eqs.push_back(std::move(eq));
    }
    return eqs;
}

std::vector<RatFunc> coefficients(const std::vector<IOEquation>& eqs) {
    std::vector<RatFunc> out;
    for (const auto& eq : eqs)
        for (const auto& [mono, c] : eq.coeffs) {
            if (c.is_constant()) continue;
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
    return out;
}

RatFunc sign_normalized(const RatFunc& f) {
    if (!f.is_zero() && f.num().leading_coeff() < 0) return -f;
    return f;
}

bool verify_equation(const LinearModel& m, const IOEquation& eq, int trials, std::uint64_t seed) {
    const int n = m.n();
    const int order = 2 * n + 4;
    const int maxd = eq.max_derivative();
    const int check_to = order - maxd;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nz(1, 9), any(-9, 9), den(1, 3), sign(0, 1);
    auto nonzero_rational = [&] {
        Rational r(nz(rng), den(rng));
        return sign(rng) ? r : -r;
    };

    std::vector<Rational> full_point(static_cast<size_t>(m.table->arity()));
    for (int t = 0; t < trials; ++t) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 50)
                throw NonGenericPoint("could not sample a generic point for equation verification");
            try {
                std::vector<Rational> params, x0;
                for (size_t i = 0; i < m.params.size(); ++i) params.push_back(nonzero_rational());
                for (int i = 0; i < n; ++i) x0.push_back(Rational(any(rng)));
                std::vector<TruncatedSeries> inputs;
                for (int i = 0; i < m.kappa(); ++i) {
                    TruncatedSeries u(order);
                    for (int k = 0; k <= order; ++k) u.set(k, Rational(any(rng)));
                    inputs.push_back(std::move(u));
                }
                const Simulation sim = simulate(m, params, x0, inputs, order);
                std::copy(params.begin(), params.end(), full_point.begin());

                auto mono_series = [&](const Monomial& mono) {
                    if (mono.kind == MonoKind::One) return TruncatedSeries::constant(1, check_to);
                    TruncatedSeries s = mono.kind == MonoKind::Output
                                            ? sim.outputs[static_cast<size_t>(mono.index)]
                                            : inputs[static_cast<size_t>(mono.index)];
                    for (int d = 0; d < mono.deriv; ++d) s = s.derivative();
                    return s.truncated(check_to);
                };
                TruncatedSeries residual(check_to);
                if (eq.order >= 0) residual = residual + mono_series(eq.leading());
                for (const auto& [mono, c] : eq.coeffs)
                    residual = residual + mono_series(mono) * c.eval(full_point);
                if (!residual.is_zero()) return false;
                break;
            } catch (const NonGenericPoint&) {
                continue;
            }
        }
    }
    return true;
}

} // namespace ioident
