#include "ioident/poly.hpp"

#include "ioident/errors.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <random>
#include <numeric>
#include <sstream>

namespace ioident {

bool GradedLexLess::operator()(const ExpVec& a, const ExpVec& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::shared_ptr<const SymbolTable> SymbolTable::make(std::vector<std::string> params) {
    auto t = std::make_shared<SymbolTable>();
    params.push_back("s");
    for (size_t i = 0; i < params.size(); ++i) {
        if (t->index_.count(params[i]))
            throw SemanticError("duplicate symbol '" + params[i] + "'");
        t->index_[params[i]] = static_cast<int>(i);
    }
    t->names_ = std::move(params);
    return t;
}

static void check_same_table(const MultiPoly& a, const MultiPoly& b) {
    if (!a.table() || !b.table() || (a.table() != b.table() && !a.table()->same_as(*b.table())))
        throw DimensionError("polynomials over different symbol tables");
}

MultiPoly MultiPoly::constant(SymTab table, Rational c) {
    MultiPoly p(std::move(table));
    if (c != 0) p.terms_.emplace(ExpVec(p.table_->arity(), 0), std::move(c));
    return p;
}

MultiPoly MultiPoly::variable(SymTab table, int index) {
    MultiPoly p(std::move(table));
    ExpVec e(p.table_->arity(), 0);
    e.at(index) = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

MultiPoly MultiPoly::from_terms(SymTab table, TermMap terms) {
    MultiPoly p(std::move(table));
    p.terms_ = std::move(terms);
    return p;
}

MultiPoly MultiPoly::monomial(SymTab table, ExpVec exps, Rational c) {
    MultiPoly p(std::move(table));
    if (exps.size() != static_cast<size_t>(p.table_->arity()))
        throw DimensionError("exponent vector arity mismatch");
    if (c != 0) p.terms_.emplace(std::move(exps), std::move(c));
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

Rational MultiPoly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw InternalError("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

void MultiPoly::add_term(const ExpVec& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(table_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    check_same_table(*this, o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    check_same_table(*this, o);
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_same_table(*this, o);
    MultiPoly r(table_);
    const int arity = table_->arity();
    ExpVec e(arity);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < arity; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MultiPoly& MultiPoly::add_product(const MultiPoly& a, const MultiPoly& b, int sign) {
    check_same_table(*this, a);
    check_same_table(a, b);
    const int arity = table_->arity();
    ExpVec e(arity);
    for (const auto& [ea, ca] : a.terms_) {
        const Rational cs = sign < 0 ? Rational(-ca) : ca;
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < arity; ++i) e[i] = ea[i] + eb[i];
            add_term(e, cs * cb);
        }
    }
    return *this;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(table_);
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

MultiPoly MultiPoly::pow(int k) const {
    if (k < 0) throw InternalError("negative polynomial power");
    MultiPoly r = constant(table_, 1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    check_same_table(*this, o);
    return terms_ == o.terms_;
}

int MultiPoly::degree(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return terms_.empty() ? -1 : d;
}

int MultiPoly::total_degree() const {
    if (terms_.empty()) return -1;
    const ExpVec& e = terms_.rbegin()->first;
    return std::accumulate(e.begin(), e.end(), 0);
}

int MultiPoly::main_variable() const {
    int v = -1;
    for (const auto& [e, c] : terms_)
        for (int i = table_->arity() - 1; i > v; --i)
            if (e[i] > 0) { v = i; break; }
    return v;
}

const ExpVec& MultiPoly::leading_exponent() const {
    if (terms_.empty()) throw InternalError("leading term of zero polynomial");
    return terms_.rbegin()->first;
}

const Rational& MultiPoly::leading_coeff() const {
    if (terms_.empty()) throw InternalError("leading term of zero polynomial");
    return terms_.rbegin()->second;
}

MultiPoly MultiPoly::coeff_of(int var, int k) const {
    MultiPoly r(table_);
    for (const auto& [e, c] : terms_) {
        if (e.at(var) != k) continue;
        ExpVec e2 = e;
        e2[var] = 0;
        r.terms_.emplace(std::move(e2), c);
    }
    return r;
}

std::map<int, MultiPoly> MultiPoly::collect(int var) const {
    std::map<int, MultiPoly> out;
    for (const auto& [e, c] : terms_) {
        auto [it, fresh] = out.try_emplace(e.at(var), table_);
        ExpVec e2 = e;
        e2[var] = 0;
        it->second.terms_.emplace(std::move(e2), c);
    }
    return out;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly r(table_);
    for (const auto& [e, c] : terms_) {
        if (e.at(var) == 0) continue;
        ExpVec e2 = e;
        e2[var] -= 1;
        r.add_term(e2, c * e[var]);
    }
    return r;
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
    if (point.size() != static_cast<size_t>(table_->arity()))
        throw DimensionError("evaluation point arity mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < point.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

MultiPoly MultiPoly::primitive_normalized() const {
    if (terms_.empty()) return *this;
    BigInt den_lcm = 1;
    for (const auto& [e, c] : terms_) den_lcm = lcm(den_lcm, denominator(c));
    BigInt num_gcd = 0;
    for (const auto& [e, c] : terms_) num_gcd = gcd(num_gcd, numerator(c) * (den_lcm / denominator(c)));
    Rational scale(den_lcm, num_gcd);
    if (leading_coeff() < 0) scale = -scale;
    return scaled(scale);
}

std::optional<MultiPoly> exact_div(const MultiPoly& a, const MultiPoly& b) {
    check_same_table(a, b);
    if (b.is_zero()) return std::nullopt;
    MultiPoly q(a.table_);
    MultiPoly r = a;
    const int arity = a.table_->arity();
    const ExpVec& eb = b.leading_exponent();
    const Rational& cb = b.leading_coeff();
    while (!r.is_zero()) {
        const ExpVec er = r.leading_exponent(); // copy: r mutates below
        ExpVec eq(arity);
        for (int i = 0; i < arity; ++i) {
            eq[i] = er[i] - eb[i];
            if (eq[i] < 0) return std::nullopt;
        }
        const Rational qc = r.leading_coeff() / cb;
        for (const auto& [e, c] : b.terms_) {
            ExpVec e2 = eq;
            for (int i = 0; i < arity; ++i) e2[i] += e[i];
            r.add_term(e2, -(qc * c));
        }
        q.add_term(eq, qc);
    }
    return q;
}

namespace {

// gcd of the coefficients of p viewed as univariate in var
MultiPoly content_of(const MultiPoly& p, int var) {
    MultiPoly g(p.table());
    for (const auto& [k, coeff] : p.collect(var)) {
        g = poly_gcd(g, coeff);
        if (g.is_constant() && !g.is_zero()) break; // gcd can only stay 1
    }
    return g;
}

// --- fast coprimality certificate -----------------------------------------
// Specializing every variable but v at a random point mod a word prime turns
// both inputs univariate.  If the specialization preserves both degrees in v
// and the univariate gcd mod p is constant, then the true gcd has degree 0 in
// v (a specialized common factor of positive degree would have survived).
// One-sided: a miss just falls back to the symbolic remainder sequence.

constexpr std::uint64_t kFilterPrime = 9223372036854775783ULL; // largest prime < 2^63

std::uint64_t fmul(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kFilterPrime);
}

std::uint64_t fpow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= kFilterPrime;
    while (e) {
        if (e & 1) r = fmul(r, b);
        b = fmul(b, b);
        e >>= 1;
    }
    return r;
}

// residue of a rational coefficient; false when the denominator hits 0 mod p
bool coeff_mod(const Rational& q, std::uint64_t& out) {
    const BigInt bp = kFilterPrime;
    BigInt num = numerator(q) % bp;
    if (num < 0) num += bp;
    BigInt den = denominator(q) % bp;
    if (den == 0) return false;
    std::uint64_t d = den.convert_to<std::uint64_t>();
    out = fmul(num.convert_to<std::uint64_t>(), fpow(d, kFilterPrime - 2));
    return true;
}

// coefficients of p(v) after substituting point[] for all other variables
bool specialize_mod(const MultiPoly& p, int v, const std::vector<std::uint64_t>& point,
                    std::vector<std::uint64_t>& out) {
    out.assign(static_cast<size_t>(p.degree(v)) + 1, 0);
    for (const auto& [e, c] : p.terms()) {
        std::uint64_t t;
        if (!coeff_mod(c, t)) return false;
        for (size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != v && e[i] != 0) t = fmul(t, fpow(point[i], e[i]));
        std::uint64_t& slot = out[e[static_cast<size_t>(v)]];
        slot = (slot + t) % kFilterPrime;
    }
    return true;
}

int univariate_gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    auto deg = [](const std::vector<std::uint64_t>& f) {
        int d = static_cast<int>(f.size()) - 1;
        while (d >= 0 && f[d] == 0) --d;
        return d;
    };
    int da = deg(a), db = deg(b);
    while (db >= 0) {
        // a mod b
        std::uint64_t inv = fpow(b[db], kFilterPrime - 2);
        for (int k = da; k >= db; --k) {
            std::uint64_t factor = fmul(a[k], inv);
            if (factor == 0) continue;
            for (int j = 0; j <= db; ++j) {
                std::uint64_t sub = fmul(factor, b[j]);
                a[k - db + j] = (a[k - db + j] + kFilterPrime - sub) % kFilterPrime;
            }
        }
        std::swap(a, b);
        da = db;
        db = deg(b);
    }
    return da;
}

bool certified_coprime_in(const MultiPoly& a, const MultiPoly& b, int v) {
    std::mt19937_64 rng(0x1d10f5ULL + static_cast<std::uint64_t>(v));
    const size_t arity = static_cast<size_t>(a.table()->arity());
    std::vector<std::uint64_t> point(arity), ua, ub;
    for (int attempt = 0; attempt < 3; ++attempt) {
        for (auto& x : point) x = rng() % kFilterPrime;
        if (!specialize_mod(a, v, point, ua) || !specialize_mod(b, v, point, ub)) return false;
        if (ua.back() == 0 || ub.back() == 0) continue; // degree in v collapsed
        if (univariate_gcd_degree_mod(ua, ub) == 0) return true;
    }
    return false;
}

// --- verified modular gcd ---------------------------------------------------
// The remainder sequence is run modulo word-sized primes, where coefficients
// cannot swell, and the result is lifted back by CRT plus rational
// reconstruction.  The lift is accepted only with a proof: a candidate that
// divides both inputs and whose degree in every variable matches the gcd mod
// a degree-preserving prime must BE the gcd (any common divisor keeps its
// degrees mod such a prime and divides the modular gcd).  A miss falls back
// to the symbolic subresultant sequence.

using ModTerms = std::map<ExpVec, std::uint64_t, GradedLexLess>;

std::uint64_t mmul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t mpow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = mmul(r, b, p);
        b = mmul(b, b, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t minv(std::uint64_t a, std::uint64_t p) { return mpow(a, p - 2, p); }

// deterministic Miller-Rabin, valid for all 64-bit inputs
bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (std::uint64_t base : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = mpow(base, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mmul(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

const std::uint64_t& nth_prime(size_t idx) {
    static std::vector<std::uint64_t> cache;
    static std::uint64_t next_candidate = (1ULL << 62) - 1;
    while (cache.size() <= idx) {
        while (!is_prime_u64(next_candidate)) next_candidate -= 2;
        cache.push_back(next_candidate);
        next_candidate -= 2;
    }
    return cache[idx];
}

bool pm_is_const(const ModTerms& f) {
    if (f.empty()) return true;
    if (f.size() != 1) return false;
    const ExpVec& e = f.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

int pm_degree(const ModTerms& f, int var) {
    int d = -1;
    for (const auto& [e, c] : f) d = std::max(d, e[static_cast<size_t>(var)]);
    return d;
}

int pm_main_var(const ModTerms& f) {
    int v = -1;
    for (const auto& [e, c] : f)
        for (int i = static_cast<int>(e.size()) - 1; i > v; --i)
            if (e[static_cast<size_t>(i)] > 0) v = i;
    return v;
}

ExpVec pm_degvec(const ModTerms& f, size_t arity) {
    ExpVec d(arity, 0);
    for (const auto& [e, c] : f)
        for (size_t i = 0; i < arity; ++i) d[i] = std::max(d[i], e[i]);
    return d;
}

void pm_add_term(ModTerms& f, const ExpVec& e, std::uint64_t c, std::uint64_t p) {
    if (c == 0) return;
    auto it = f.find(e);
    if (it == f.end()) {
        f.emplace(e, c);
        return;
    }
    it->second = (it->second + c) % p;
    if (it->second == 0) f.erase(it);
}

ModTerms pm_mul(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    ModTerms r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            ExpVec e = ea;
            for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            pm_add_term(r, e, mmul(ca, cb, p), p);
        }
    return r;
}

ModTerms pm_sub(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    ModTerms r = a;
    for (const auto& [e, c] : b) pm_add_term(r, e, p - c, p);
    return r;
}

ModTerms pm_scale(const ModTerms& a, std::uint64_t c, std::uint64_t p) {
    ModTerms r;
    for (const auto& [e, v] : a) {
        std::uint64_t s = mmul(v, c, p);
        if (s != 0) r.emplace(e, s);
    }
    return r;
}

ModTerms pm_shift(const ModTerms& a, int var, int by) {
    ModTerms r;
    for (const auto& [e, c] : a) {
        ExpVec e2 = e;
        e2[static_cast<size_t>(var)] += by;
        r.emplace(std::move(e2), c);
    }
    return r;
}

// coefficient of var^k, with the var slot zeroed
ModTerms pm_coeff_of(const ModTerms& f, int var, int k) {
    ModTerms r;
    for (const auto& [e, c] : f)
        if (e[static_cast<size_t>(var)] == k) {
            ExpVec e2 = e;
            e2[static_cast<size_t>(var)] = 0;
            r.emplace(std::move(e2), c);
        }
    return r;
}

ModTerms pm_monic(const ModTerms& f, std::uint64_t p) {
    if (f.empty()) return f;
    return pm_scale(f, minv(f.rbegin()->second, p), p);
}

ModTerms pm_add(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    ModTerms r = a;
    for (const auto& [e, c] : b) pm_add_term(r, e, c, p);
    return r;
}

// substitute var = alpha
ModTerms pm_eval(const ModTerms& a, int var, std::uint64_t alpha, std::uint64_t p) {
    if (a.empty()) return a;
    const int d = pm_degree(a, var);
    std::vector<std::uint64_t> pw(static_cast<size_t>(d) + 1);
    pw[0] = 1;
    for (int i = 1; i <= d; ++i) pw[static_cast<size_t>(i)] = mmul(pw[static_cast<size_t>(i) - 1], alpha, p);
    ModTerms r;
    for (const auto& [e, c] : a) {
        ExpVec e2 = e;
        const int k = e2[static_cast<size_t>(var)];
        e2[static_cast<size_t>(var)] = 0;
        pm_add_term(r, e2, mmul(c, pw[static_cast<size_t>(k)], p), p);
    }
    return r;
}

// value of a constant polynomial
std::uint64_t pm_const_val(const ModTerms& f) { return f.empty() ? 0 : f.begin()->second; }

// dense monic gcd of univariate polynomials, coefficients ascending by degree
std::vector<std::uint64_t> uv_gcd(std::vector<std::uint64_t> f, std::vector<std::uint64_t> g,
                                  std::uint64_t p) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(f);
    trim(g);
    while (!g.empty()) {
        const std::uint64_t inv = minv(g.back(), p);
        for (auto& c : g) c = mmul(c, inv, p);
        while (true) {
            trim(f);
            if (f.size() < g.size()) break;
            const std::uint64_t c = f.back();
            const size_t off = f.size() - g.size();
            if (c != 0)
                for (size_t i = 0; i + 1 < g.size(); ++i)
                    f[off + i] = (f[off + i] + p - mmul(c, g[i], p)) % p;
            f.pop_back();
        }
        std::swap(f, g);
    }
    trim(f);
    if (!f.empty()) {
        const std::uint64_t inv = minv(f.back(), p);
        for (auto& c : f) c = mmul(c, inv, p);
    }
    return f;
}

std::vector<std::uint64_t> pm_to_univ(const ModTerms& f, int var) {
    std::vector<std::uint64_t> r(static_cast<size_t>(pm_degree(f, var) + 1), 0);
    for (const auto& [e, c] : f) r[static_cast<size_t>(e[static_cast<size_t>(var)])] = c;
    return r;
}

ModTerms pm_from_univ(const std::vector<std::uint64_t>& f, int var, size_t width) {
    ModTerms r;
    for (size_t k = 0; k < f.size(); ++k)
        if (f[k]) {
            ExpVec e(width, 0);
            e[static_cast<size_t>(var)] = static_cast<int>(k);
            r.emplace(std::move(e), f[k]);
        }
    return r;
}

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::optional<ModTerms> pm_try_div(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    ModTerms q, r = a;
    const ExpVec& eb = b.rbegin()->first;
    const std::uint64_t ib = minv(b.rbegin()->second, p);
    while (!r.empty()) {
        const ExpVec er = r.rbegin()->first; // copy: r mutates below
        ExpVec eq(er.size());
        for (size_t i = 0; i < er.size(); ++i) {
            eq[i] = er[i] - eb[i];
            if (eq[i] < 0) return std::nullopt;
        }
        const std::uint64_t qc = mmul(r.rbegin()->second, ib, p);
        for (const auto& [e, c] : b) {
            ExpVec e2 = eq;
            for (size_t i = 0; i < e2.size(); ++i) e2[i] += e[i];
            pm_add_term(r, e2, p - mmul(qc, c, p), p);
        }
        pm_add_term(q, eq, qc, p);
    }
    return q;
}

ModTerms pm_divexact(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    auto q = pm_try_div(a, b, p);
    if (!q) throw InternalError("modular division not exact");
    return std::move(*q);
}

ModTerms pm_prem(const ModTerms& a, const ModTerms& b, int var, std::uint64_t p) {
    const int db = pm_degree(b, var);
    const ModTerms lcb = pm_coeff_of(b, var, db);
    ModTerms r = a;
    int dr;
    while (!r.empty() && (dr = pm_degree(r, var)) >= db) {
        ModTerms lcr = pm_coeff_of(r, var, dr);
        r = pm_sub(pm_mul(lcb, r, p), pm_shift(pm_mul(lcr, b, p), var, dr - db), p);
    }
    return r;
}

ModTerms pm_gcd(const ModTerms& a, const ModTerms& b, std::uint64_t p);

// gcd of the var-coefficients of f
ModTerms pm_content(const ModTerms& f, int var, std::uint64_t p) {
    std::map<int, ModTerms> coeffs;
    for (const auto& [e, c] : f) {
        ExpVec e2 = e;
        int k = e2[static_cast<size_t>(var)];
        e2[static_cast<size_t>(var)] = 0;
        coeffs[k].emplace(std::move(e2), c);
    }
    ModTerms g;
    for (const auto& [k, coeff] : coeffs) {
        g = pm_gcd(g, coeff, p);
        if (pm_is_const(g) && !g.empty()) break;
    }
    return g;
}

// One Newton-interpolation level of the evaluation/interpolation gcd.  Level
// `lvl` fixes evars[lvl] at sample points, recurses on the rest, and rebuilds
// the dependence on evars[lvl] from the samples.  At the bottom everything but
// the main variable is evaluated, leaving a univariate Euclid gcd; each image
// is scaled by gamma evaluated at the point, which pins the scalar that a gcd
// is only defined up to.
struct BrownCtx {
    std::uint64_t p;
    size_t width;
    int main_var;
    int da, db;             // main-variable degrees of the primitive inputs
    std::vector<int> evars; // variables to interpolate, innermost last
    std::vector<int> need;  // sample count per level
    int dstar;              // main-variable degree expected of every image gcd
    bool smaller_seen;      // an image came out smaller: dstar was inflated
    std::uint64_t seed;
};

std::optional<ModTerms> brown_level(BrownCtx& cx, size_t lvl, const ModTerms& a,
                                    const ModTerms& b, const ModTerms& gamma) {
    const std::uint64_t p = cx.p;
    if (lvl == cx.evars.size()) {
        auto g = uv_gcd(pm_to_univ(a, cx.main_var), pm_to_univ(b, cx.main_var), p);
        const int dg = static_cast<int>(g.size()) - 1;
        if (dg != cx.dstar) {
            if (dg < cx.dstar) {
                cx.dstar = dg;
                cx.smaller_seen = true;
            }
            return std::nullopt;
        }
        const std::uint64_t gs = pm_const_val(gamma);
        if (gs == 0) return std::nullopt;
        for (auto& c : g) c = mmul(c, gs, p);
        return pm_from_univ(g, cx.main_var, cx.width);
    }
    const int e = cx.evars[lvl];
    const int want = cx.need[lvl];
    ModTerms interp;  // Newton form accumulated so far
    ModTerms basis;   // product of (x_e - alpha) over accepted nodes
    basis.emplace(ExpVec(cx.width, 0), 1);
    std::vector<std::uint64_t> nodes;
    for (int guard = 0; static_cast<int>(nodes.size()) < want; ++guard) {
        if (guard > 6 * want + 16) return std::nullopt;
        const std::uint64_t alpha = splitmix(cx.seed) % (p - 1) + 1;
        if (std::find(nodes.begin(), nodes.end(), alpha) != nodes.end()) continue;
        const ModTerms ae = pm_eval(a, e, alpha, p);
        const ModTerms be = pm_eval(b, e, alpha, p);
        if (pm_degree(ae, cx.main_var) != cx.da || pm_degree(be, cx.main_var) != cx.db)
            continue; // evaluation lost a leading coefficient
        auto h = brown_level(cx, lvl + 1, ae, be, pm_eval(gamma, e, alpha, p));
        if (!h) {
            if (cx.smaller_seen) return std::nullopt;
            continue;
        }
        ModTerms diff = pm_sub(*h, pm_eval(interp, e, alpha, p), p);
        if (!diff.empty()) {
            const std::uint64_t w = pm_const_val(pm_eval(basis, e, alpha, p));
            interp = pm_add(interp, pm_mul(pm_scale(diff, minv(w, p), p), basis, p), p);
        }
        ModTerms lin;
        ExpVec le(cx.width, 0);
        le[static_cast<size_t>(e)] = 1;
        lin.emplace(std::move(le), 1);
        pm_add_term(lin, ExpVec(cx.width, 0), p - alpha, p);
        basis = pm_mul(basis, lin, p);
        nodes.push_back(alpha);
    }
    return interp;
}

ModTerms pm_gcd(const ModTerms& a, const ModTerms& b, std::uint64_t p) {
    if (a.empty()) return pm_monic(b, p);
    if (b.empty()) return pm_monic(a, p);
    if (pm_is_const(a) || pm_is_const(b)) {
        ModTerms one;
        one.emplace(ExpVec(a.begin()->first.size(), 0), 1);
        return one;
    }
    const int v = std::max(pm_main_var(a), pm_main_var(b));
    if (pm_degree(a, v) == 0) return pm_gcd(a, pm_content(b, v, p), p);
    if (pm_degree(b, v) == 0) return pm_gcd(pm_content(a, v, p), b, p);
    ModTerms ca = pm_content(a, v, p), cb = pm_content(b, v, p);
    ModTerms cg = pm_gcd(ca, cb, p);
    ModTerms A = pm_divexact(a, ca, p), B = pm_divexact(b, cb, p);
    if (pm_degree(A, v) < pm_degree(B, v)) std::swap(A, B);

    const size_t width = a.begin()->first.size();
    const int da = pm_degree(A, v), db = pm_degree(B, v);
    std::vector<int> evars;
    for (size_t i = 0; i < width; ++i)
        if (static_cast<int>(i) != v &&
            (pm_degree(A, static_cast<int>(i)) > 0 || pm_degree(B, static_cast<int>(i)) > 0))
            evars.push_back(static_cast<int>(i));
    if (evars.empty()) {
        auto g = uv_gcd(pm_to_univ(A, v), pm_to_univ(B, v), p);
        return pm_monic(pm_mul(cg, pm_from_univ(g, v, width), p), p);
    }

    // Evaluation/interpolation on the other variables.  Correctness does not
    // rest on the sample points being lucky: a point that preserves both
    // leading coefficients also preserves the main-variable degree of every
    // common divisor, so a divisor of both inputs whose main-variable degree
    // matches an image gcd is the gcd.  Interpolation targets gamma/lc(G) * G,
    // whose leading coefficient gamma is known; content removal undoes the
    // inflation afterwards.
    ModTerms gamma = pm_gcd(pm_coeff_of(A, v, da), pm_coeff_of(B, v, db), p);
    std::vector<int> need(evars.size());
    double grid = 1;
    for (size_t i = 0; i < evars.size(); ++i) {
        need[i] = std::min(pm_degree(A, evars[i]), pm_degree(B, evars[i])) +
                  pm_degree(gamma, evars[i]) + 1;
        grid *= need[i];
    }
    if (grid <= 200000) {
        BrownCtx cx{p, width, v, da, db, evars, need, INT_MAX, false, p ^ 0x9e3779b97f4a7c15ULL};
        for (int attempt = 0; attempt < 24; ++attempt) {
            // probe full points for the main-variable degree of the gcd
            for (int s = 0; s < 8; ++s) {
                ModTerms ae = A, be = B;
                for (int e : evars) {
                    const std::uint64_t alpha = splitmix(cx.seed) % (p - 1) + 1;
                    ae = pm_eval(ae, e, alpha, p);
                    be = pm_eval(be, e, alpha, p);
                }
                if (pm_degree(ae, v) != da || pm_degree(be, v) != db) continue;
                const auto g = uv_gcd(pm_to_univ(ae, v), pm_to_univ(be, v), p);
                cx.dstar = std::min(cx.dstar, static_cast<int>(g.size()) - 1);
            }
            if (cx.dstar == 0) return pm_monic(cg, p); // primitive parts coprime
            if (cx.dstar == INT_MAX) continue;
            cx.smaller_seen = false;
            auto lifted = brown_level(cx, 0, A, B, gamma);
            if (cx.dstar == 0) return pm_monic(cg, p);
            if (!lifted || lifted->empty()) continue;
            ModTerms cand = pm_divexact(*lifted, pm_content(*lifted, v, p), p);
            if (pm_try_div(A, cand, p) && pm_try_div(B, cand, p))
                return pm_monic(pm_mul(cg, cand, p), p);
        }
    }

    while (!B.empty() && pm_degree(B, v) > 0) {
        ModTerms R = pm_prem(A, B, v, p);
        A = std::move(B);
        B = R.empty() ? std::move(R) : pm_divexact(R, pm_content(R, v, p), p);
    }
    if (!B.empty()) return pm_monic(cg, p); // sequence bottomed out: gcd free of v
    ModTerms pp = pm_divexact(A, pm_content(A, v, p), p);
    return pm_monic(pm_mul(cg, pp, p), p);
}

// reduction of an integer-coefficient polynomial; exact by construction
ModTerms pm_from(const MultiPoly& f, std::uint64_t p) {
    const BigInt bp = p;
    ModTerms r;
    for (const auto& [e, c] : f.terms()) {
        BigInt n = numerator(c) % bp;
        if (n < 0) n += bp;
        if (n != 0) r.emplace(e, n.convert_to<std::uint64_t>());
    }
    return r;
}

ExpVec poly_degvec(const MultiPoly& f, size_t arity) {
    ExpVec d(arity, 0);
    for (const auto& [e, c] : f.terms())
        for (size_t i = 0; i < arity; ++i) d[i] = std::max(d[i], e[i]);
    return d;
}

// n/d with n = r*d mod M and |n|, d bounded by sqrt(M/2)
std::optional<Rational> rat_reconstruct(const BigInt& r, const BigInt& M) {
    const BigInt bound = sqrt(BigInt(M / 2));
    BigInt r0 = M, r1 = r % M;
    if (r1 < 0) r1 += M;
    BigInt t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    BigInt num = r1, den = t1;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (den == 0 || den > bound || gcd(abs(num), den) != 1) return std::nullopt;
    return Rational(num, den);
}

std::optional<MultiPoly> modular_gcd(const MultiPoly& a0, const MultiPoly& b0) {
    const SymTab& tab = a0.table();
    const size_t arity = static_cast<size_t>(tab->arity());
    const MultiPoly A = a0.primitive_normalized(), B = b0.primitive_normalized();
    const ExpVec dA = poly_degvec(A, arity), dB = poly_degvec(B, arity);

    std::map<ExpVec, BigInt, GradedLexLess> crt;
    BigInt M = 1;
    ExpVec best_lead;
    bool have = false;
    GradedLexLess less;

    for (size_t idx = 0, used = 0; idx < 24 && used < 10; ++idx) {
        const std::uint64_t p = nth_prime(idx);
        const ModTerms pa = pm_from(A, p), pb = pm_from(B, p);
        if (pm_degvec(pa, arity) != dA || pm_degvec(pb, arity) != dB) continue;
        const ModTerms g = pm_gcd(pa, pb, p);
        if (pm_is_const(g)) return MultiPoly::constant(tab, 1); // proven coprime
        const ExpVec& lead = g.rbegin()->first;
        if (have && less(best_lead, lead)) continue; // unlucky prime: gcd too big
        if (!have || less(lead, best_lead)) {        // earlier primes were unlucky
            crt.clear();
            M = 1;
            best_lead = lead;
            have = true;
        }
        // CRT-merge this prime over the union of supports
        const BigInt bp = p;
        const BigInt minv_M = M == 1 ? BigInt(1) : [&] {
            // M^{-1} mod p via Fermat on the word prime
            std::uint64_t m = (M % bp).convert_to<std::uint64_t>();
            return BigInt(minv(m, p));
        }();
        auto merge = [&](const ExpVec& e, std::uint64_t rp) {
            BigInt& r = crt.try_emplace(e, 0).first->second;
            BigInt diff = (BigInt(rp) - r % bp) % bp;
            if (diff < 0) diff += bp;
            r += M * ((diff * minv_M) % bp);
        };
        for (const auto& [e, c] : g) merge(e, c);
        for (auto& [e, r] : crt)
            if (g.find(e) == g.end()) merge(e, 0);
        M *= bp;
        ++used;

        MultiPoly::TermMap lifted;
        bool ok = true;
        for (const auto& [e, r] : crt) {
            auto q = rat_reconstruct(r, M);
            if (!q) {
                ok = false;
                break;
            }
            if (*q != 0) lifted.emplace(e, *q);
        }
        if (!ok) continue; // need more primes
        MultiPoly cand = MultiPoly::from_terms(tab, std::move(lifted)).primitive_normalized();
        if (cand.is_zero() || poly_degvec(cand, arity) != pm_degvec(g, arity)) continue;
        // the symbolic divisibility check below is the expensive part; weed
        // out wrong lifts with a one-prime divisibility test first (a true
        // divisor passes it whenever its leading term survives mod q)
        const std::uint64_t q = nth_prime(idx + 1);
        const ModTerms cq = pm_from(cand, q);
        if (pm_degvec(cq, arity) == poly_degvec(cand, arity)) {
            if (!pm_try_div(pm_from(A, q), cq, q) || !pm_try_div(pm_from(B, q), cq, q)) continue;
        }
        if (!exact_div(A, cand) || !exact_div(B, cand)) continue;
        // divides both, and no common divisor can exceed the gcd mod a
        // degree-preserving prime, so this is exactly the gcd
        return cand;
    }
    return std::nullopt;
}

// pseudo-remainder of lc_var(b)^(delta+1) * a by b, with exactly that power
// (the subresultant divisions below rely on it)
MultiPoly pseudo_rem(const MultiPoly& a, const MultiPoly& b, int var) {
    const int db = b.degree(var);
    const int delta = a.degree(var) - db;
    const MultiPoly lcb = b.coeff_of(var, db);
    MultiPoly r = a;
    int dr, mults = 0;
    while (!r.is_zero() && (dr = r.degree(var)) >= db) {
        MultiPoly lcr = r.coeff_of(var, dr);
        MultiPoly shift = MultiPoly::variable(r.table(), var).pow(dr - db);
        r = lcb * r - lcr * b * shift;
        ++mults;
    }
    for (; mults <= delta; ++mults) r = lcb * r;
    return r;
}

} // namespace

namespace {

// componentwise minimum exponent over all terms
ExpVec min_exponents(const MultiPoly& p) {
    ExpVec m = p.terms().begin()->first;
    for (const auto& [e, c] : p.terms())
        for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
    return m;
}

MultiPoly shift_down(const MultiPoly& p, const ExpVec& by) {
    MultiPoly::TermMap shifted;
    for (const auto& [e, c] : p.terms()) {
        ExpVec e2 = e;
        for (size_t i = 0; i < e2.size(); ++i) e2[i] -= by[i];
        shifted.emplace(std::move(e2), c);
    }
    return MultiPoly::from_terms(p.table(), std::move(shifted));
}

} // namespace

MultiPoly poly_gcd(const MultiPoly& a_in, const MultiPoly& b_in) {
    check_same_table(a_in, b_in);
    if (a_in.is_zero()) return b_in.primitive_normalized();
    if (b_in.is_zero()) return a_in.primitive_normalized();
    if (a_in.is_constant() || b_in.is_constant()) return MultiPoly::constant(a_in.table(), 1);

    // peel off the monomial content first: gcd(x^p·a, x^q·b) = x^min(p,q)·gcd(a,b)
    ExpVec ea = min_exponents(a_in), eb = min_exponents(b_in);
    ExpVec common(ea.size());
    for (size_t i = 0; i < ea.size(); ++i) common[i] = std::min(ea[i], eb[i]);
    MultiPoly a = shift_down(a_in, ea), b = shift_down(b_in, eb);
    MultiPoly mono = MultiPoly::monomial(a.table(), common, 1);

    if (a == b) return mono * a.primitive_normalized();
    if (a.is_constant() || b.is_constant()) return mono;

    const int v = std::max(a.main_variable(), b.main_variable());
    const int da = a.degree(v), db = b.degree(v);
    if (da == 0) return mono * poly_gcd(a, content_of(b, v));
    if (db == 0) return mono * poly_gcd(content_of(a, v), b);
    if (certified_coprime_in(a, b, v))
        return mono * poly_gcd(content_of(a, v), content_of(b, v));
    if (auto g = modular_gcd(a, b)) return mono * *g;

    MultiPoly ca = content_of(a, v), cb = content_of(b, v);
    MultiPoly cg = poly_gcd(ca, cb);
    MultiPoly A = exact_div(a, ca)->primitive_normalized();
    MultiPoly B = exact_div(b, cb)->primitive_normalized();
    if (A.degree(v) < B.degree(v)) std::swap(A, B);
    // subresultant remainder sequence: dividing each pseudo-remainder by g*h^d
    // keeps coefficients at determinant size without any content gcds
    MultiPoly g = MultiPoly::constant(a.table(), 1), h = g;
    while (!B.is_zero() && B.degree(v) > 0) {
        const int delta = A.degree(v) - B.degree(v);
        MultiPoly R = pseudo_rem(A, B, v);
        MultiPoly divisor = g * h.pow(delta);
        A = std::move(B);
        B = R.is_zero() ? std::move(R) : *exact_div(R, divisor);
        g = A.coeff_of(v, A.degree(v));
        if (delta == 1)
            h = g;
        else if (delta > 1)
            h = *exact_div(g.pow(delta), h.pow(delta - 1));
    }
    if (!B.is_zero()) return mono * cg; // sequence bottomed out: gcd has degree 0 in v
    MultiPoly ppA = *exact_div(A, content_of(A, v));
    return mono * (cg * ppA).primitive_normalized();
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // leading term first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        bool has_vars = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
        bool coeff_shown = !has_vars || mag != 1;
        if (coeff_shown) out << to_string(mag);
        bool star = coeff_shown;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (star) out << "*";
            out << table_->name(static_cast<int>(i));
            if (e[i] > 1) out << "^" << e[i];
            star = true;
        }
    }
    return out.str();
}

} // namespace ioident
