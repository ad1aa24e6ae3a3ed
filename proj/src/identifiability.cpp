#include "ioident/identifiability.hpp"

#include <algorithm>
#include <random>

#include "ioident/errors.hpp"
#include "ioident/modular.hpp"
#include "ioident/series.hpp"
#include "ioident/transfer.hpp"

namespace ioident {

namespace {

Rational nonzero_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nz(1, 9), den(1, 3), sign(0, 1);
    Rational r(nz(rng), den(rng));
    return sign(rng) ? r : -r;
}

std::vector<TruncatedSeries> random_inputs(std::mt19937_64& rng, int kappa, int order) {
    std::uniform_int_distribution<int> any(-9, 9);
    std::vector<TruncatedSeries> inputs;
    for (int i = 0; i < kappa; ++i) {
        TruncatedSeries u(order);
        for (int k = 0; k <= order; ++k) u.set(k, Rational(any(rng)));
        inputs.push_back(std::move(u));
    }
    return inputs;
}

} // namespace

std::string to_string(SolvabilityVerdict v) {
    return v == SolvabilityVerdict::Solvable ? "Solvable" : "RankDeficient";
}

std::string to_string(MembershipVerdict v) {
    return v == MembershipVerdict::Dependent ? "Dependent" : "Independent";
}

std::string to_string(GeneratorMethod m) {
    switch (m) {
    case GeneratorMethod::Elimination: return "elimination";
    case GeneratorMethod::Cramer: return "cramer";
    case GeneratorMethod::Transfer: return "transfer";
    }
    return "?";
}

std::string to_string(GeneratorStatus s) {
    return s == GeneratorStatus::IdentifiableFieldProven ? "IdentifiableFieldProven"
                                                         : "IOFieldOnly";
}

SolvabilityVerdict solvability_diagnostic(const LinearModel& m, const IOEquation& eq, int trials,
                                          std::uint64_t seed) {
    if (eq.coeffs.empty()) return SolvabilityVerdict::Solvable; // nothing to recover
    const int k = static_cast<int>(eq.coeffs.size());
    const int maxd = eq.max_derivative();
    const int order = 2 * m.n() + 4 + k + maxd;
    const int ord = order - maxd; // common order of the monomial series

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> any(-9, 9);
    for (int t = 0; t < trials; ++t) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 50)
                throw NonGenericPoint("could not sample a generic point for the solvability check");
            try {
                std::vector<Rational> params, x0;
                for (size_t i = 0; i < m.params.size(); ++i) params.push_back(nonzero_rational(rng));
                for (int i = 0; i < m.n(); ++i) x0.push_back(Rational(any(rng)));
                std::vector<TruncatedSeries> inputs = random_inputs(rng, m.kappa(), order);
                const Simulation sim = simulate(m, params, x0, inputs, order);

                std::vector<TruncatedSeries> tuple;
                for (const auto& [mono, c] : eq.coeffs) {
                    if (mono.kind == MonoKind::One) {
                        tuple.push_back(TruncatedSeries::constant(1, ord));
                        continue;
                    }
                    TruncatedSeries s = mono.kind == MonoKind::Output
                                            ? sim.outputs[static_cast<size_t>(mono.index)]
                                            : inputs[static_cast<size_t>(mono.index)];
                    for (int d = 0; d < mono.deriv; ++d) s = s.derivative();
                    tuple.push_back(s.truncated(ord));
                }
                if (!series_wronskian(tuple, ord).is_zero()) return SolvabilityVerdict::Solvable;
                break;
            } catch (const NonGenericPoint&) {
                continue;
            }
        }
    }
    return SolvabilityVerdict::RankDeficient;
}

MembershipVerdict jacobian_membership(const RatFunc& h, const std::vector<RatFunc>& generators,
                                      int trials, std::uint64_t seed,
                                      std::vector<std::uint64_t>* prime_log) {
    const SymTab& tab = h.table();
    for (const auto& g : generators)
        if (g.table().get() != tab.get())
            throw DimensionError("membership inputs use different symbol tables");
    const int nv = tab->s_index(); // parameter slots; s itself never appears

    std::vector<std::vector<RatFunc>> grad; // generator rows first, h last
    for (const auto& g : generators) {
        std::vector<RatFunc> row;
        for (int v = 0; v < nv; ++v) row.push_back(g.derivative(v));
        grad.push_back(std::move(row));
    }
    {
        std::vector<RatFunc> row;
        for (int v = 0; v < nv; ++v) row.push_back(h.derivative(v));
        grad.push_back(std::move(row));
    }

    std::mt19937_64 rng(seed);
    std::size_t best_gens = 0, best_all = 0;
    for (int tp = 0; tp < trials; ++tp) {
        std::uint64_t p = random_prime(rng);
        if (prime_log) prime_log->push_back(p);
        for (int tpt = 0; tpt < trials; ++tpt) {
            for (int attempt = 0;; ++attempt) {
                if (attempt >= 50)
                    throw NonGenericPoint("could not sample a generic point for the rank check");
                if (attempt > 0 && attempt % 5 == 0) {
                    p = random_prime(rng); // a prime dividing some coefficient denominator
                    if (prime_log) prime_log->push_back(p);
                }
                try {
                    std::vector<std::uint64_t> point(static_cast<size_t>(tab->arity()), 0);
                    for (int v = 0; v < nv; ++v) point[static_cast<size_t>(v)] = rng() % (p - 1) + 1;
                    std::vector<std::vector<std::uint64_t>> rows;
                    for (const auto& gr : grad) {
                        std::vector<std::uint64_t> row;
                        for (const auto& f : gr) row.push_back(eval_mod_prime(f, point, p));
                        rows.push_back(std::move(row));
                    }
                    std::vector<std::vector<std::uint64_t>> gens_rows(rows.begin(), rows.end() - 1);
                    best_all = std::max(best_all, rank_mod(rows, p));
                    if (!gens_rows.empty()) best_gens = std::max(best_gens, rank_mod(gens_rows, p));
                    break;
                } catch (const ModEvalRetry&) {
                    continue;
                }
            }
        }
    }
    return best_all > best_gens ? MembershipVerdict::Independent : MembershipVerdict::Dependent;
}

bool field_equivalence(const std::vector<RatFunc>& gens1, const std::vector<RatFunc>& gens2,
                       int trials, std::uint64_t seed, std::vector<std::uint64_t>* prime_log) {
    std::mt19937_64 mix(seed);
    for (const auto& h : gens1)
        if (jacobian_membership(h, gens2, trials, mix(), prime_log) == MembershipVerdict::Independent)
            return false;
    for (const auto& h : gens2)
        if (jacobian_membership(h, gens1, trials, mix(), prime_log) == MembershipVerdict::Independent)
            return false;
    return true;
}

SymTab transformation_table(const LinearModel& m, const std::vector<std::string>& extra) {
    std::vector<std::string> names = m.params;
    names.insert(names.end(), m.states.begin(), m.states.end());
    names.insert(names.end(), extra.begin(), extra.end());
    return SymbolTable::make(names);
}

bool witness_transformation(const LinearModel& m, const Transformation& tr, int trials,
                            std::uint64_t seed) {
    const SymTab ttab = transformation_table(m, tr.extra);
    for (const auto& [name, expr] : tr.subs) {
        const bool known = std::find(m.params.begin(), m.params.end(), name) != m.params.end() ||
                           std::find(m.states.begin(), m.states.end(), name) != m.states.end();
        if (!known)
            throw SemanticError("transformation target '" + name + "' is not a parameter or state");
        if (expr.table()->arity() != ttab->arity())
            throw DimensionError("transformation expressions must use transformation_table symbols");
    }

    const int n = m.n();
    const int order = 2 * n + 4;
    const size_t np = m.params.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> any(-9, 9);
    for (int t = 0; t < trials; ++t) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 50)
                throw NonGenericPoint("could not sample a generic instance for the witness check");
            try {
                std::vector<Rational> point(static_cast<size_t>(ttab->arity()));
                for (size_t i = 0; i < np; ++i) point[i] = nonzero_rational(rng);
                for (int i = 0; i < n; ++i) point[np + static_cast<size_t>(i)] = Rational(any(rng));
                for (size_t i = 0; i < tr.extra.size(); ++i)
                    point[np + static_cast<size_t>(n) + i] = nonzero_rational(rng);

                std::vector<Rational> params(point.begin(), point.begin() + static_cast<long>(np));
                std::vector<Rational> x0(point.begin() + static_cast<long>(np),
                                         point.begin() + static_cast<long>(np) + n);
                std::vector<Rational> params2 = params, x02 = x0;
                for (size_t i = 0; i < np; ++i)
                    if (auto it = tr.subs.find(m.params[i]); it != tr.subs.end())
                        params2[i] = it->second.eval(point);
                for (int i = 0; i < n; ++i)
                    if (auto it = tr.subs.find(m.states[static_cast<size_t>(i)]); it != tr.subs.end())
                        x02[static_cast<size_t>(i)] = it->second.eval(point);

                std::vector<TruncatedSeries> inputs = random_inputs(rng, m.kappa(), order);
                const Simulation base = simulate(m, params, x0, inputs, order);
                const Simulation mapped = simulate(m, params2, x02, inputs, order);
                if (base.outputs != mapped.outputs) return false;
                break;
            } catch (const NonGenericPoint&) {
                continue;
            }
        }
    }
    return true;
}

IdentifiabilityReport analyze(const Model& m, const AnalyzeOptions& opt) {
    const CompartmentModel* cm = std::get_if<CompartmentModel>(&m);
    const LinearModel lm =
        cm ? compartment_to_state_space(*cm) : std::get<LinearModel>(m);

    IdentifiabilityReport r;
    r.seed = opt.seed;
    r.conditions = condition_report(m);
    r.equations = opt.ordering.empty() ? full_io_equations(lm)
                                       : full_io_equations(lm, opt.ordering);
    for (size_t i = 0; i < r.equations.size(); ++i) {
        r.solvability.push_back(solvability_diagnostic(lm, r.equations[i], opt.solvability_trials,
                                                       opt.seed + 1000003 * (i + 1)));
        if (r.solvability.back() == SolvabilityVerdict::RankDeficient)
            r.notes.push_back("solvability check failed for the " + lm.outputs[static_cast<size_t>(
                                  r.equations[i].output)] +
                              " equation: its Wronskian vanished in every trial (one-sided, "
                              "probabilistic), so its coefficients need not be recoverable from "
                              "output data");
    }

    const bool elim_gate = r.conditions.thm1() || r.conditions.thm2();
    const bool cramer_gate = r.conditions.thm3();
    GeneratorMethod method;
    if (opt.method)
        method = *opt.method;
    else if (elim_gate)
        method = GeneratorMethod::Elimination;
    else if (cm && cramer_gate)
        method = GeneratorMethod::Cramer;
    else
        method = GeneratorMethod::Elimination;
    r.method = method;

    std::vector<RatFunc> gens;
    bool gate = false;
    switch (method) {
    case GeneratorMethod::Elimination:
        gens = coefficients(r.equations);
        gate = elim_gate;
        break;
    case GeneratorMethod::Cramer:
        if (!cm) throw SemanticError("Cramer relations require a compartment model");
        gens = coefficients(cramer_io_equations(*cm));
        gate = cramer_gate;
        if (!gate)
            r.notes.push_back("the model is not strongly connected with an input: the Cramer "
                              "relations are valid but not a certified full set; treat their "
                              "coefficients as relations only");
        break;
    case GeneratorMethod::Transfer: {
        gens = transfer_coefficients(transfer_matrix(lm));
        gate = cramer_gate;
        if (!gate)
            r.notes.push_back("transfer coefficients are certified generators only for strongly "
                              "connected compartment models with an input");
        bool offsets = false;
        for (const auto& f : lm.f0) offsets |= !f.is_zero();
        for (const auto& g : lm.g0) offsets |= !g.is_zero();
        if (offsets)
            r.notes.push_back("constant offsets are ignored by the transfer matrix; its "
                              "coefficients describe the offset-free response");
        break;
    }
    }
    for (auto& g : gens) g = sign_normalized(g);
    r.generators = std::move(gens);
    r.status = gate ? GeneratorStatus::IdentifiableFieldProven : GeneratorStatus::IOFieldOnly;
    if (r.status == GeneratorStatus::IOFieldOnly)
        r.notes.push_back("no structural gate applies: the generators span the IO-coefficient "
                          "field, which contains the field of identifiable functions and can be "
                          "strictly larger");
    return r;
}

} // namespace ioident
