#include "ioident/modular.hpp"

#include "ioident/errors.hpp"

namespace ioident {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw ModEvalRetry("inverse of 0 mod p");
    // p is prime in every call site, so Fermat suffices
    return pow_mod(a, p - 2, p);
}

namespace {

bool miller_rabin(std::uint64_t n, std::uint64_t a) {
    if (a % n == 0) return true;
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 0; i < r - 1; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    // this witness set is deterministic for all 64-bit n
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (!miller_rabin(n, a)) return false;
    return true;
}

std::uint64_t random_prime(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(
        (std::uint64_t{1} << 61) + 1, (std::uint64_t{1} << 62) - 1);
    for (;;) {
        std::uint64_t n = dist(rng) | 1;
        if (is_prime(n)) return n;
    }
}

std::uint64_t reduce_mod(const Rational& q, std::uint64_t p) {
    const BigInt bp = p;
    BigInt num = numerator(q) % bp;
    if (num < 0) num += bp;
    BigInt den = denominator(q) % bp; // denominators are positive
    std::uint64_t d = den.convert_to<std::uint64_t>();
    if (d == 0) throw ModEvalRetry("denominator divisible by p");
    return mul_mod(num.convert_to<std::uint64_t>(), inv_mod(d, p), p);
}

std::uint64_t eval_mod_prime(const MultiPoly& f, const std::vector<std::uint64_t>& point,
                             std::uint64_t p) {
    if (point.size() != static_cast<size_t>(f.table()->arity())) throw DimensionError("point arity mismatch");
    std::uint64_t acc = 0;
    for (const auto& [exps, coeff] : f.terms()) {
        std::uint64_t t = reduce_mod(coeff, p);
        for (size_t v = 0; v < exps.size(); ++v)
            if (exps[v] != 0) t = mul_mod(t, pow_mod(point[v], static_cast<std::uint64_t>(exps[v]), p), p);
        acc = (acc + t) % p;
    }
    return acc;
}

std::uint64_t eval_mod_prime(const RatFunc& f, const std::vector<std::uint64_t>& point,
                             std::uint64_t p) {
    std::uint64_t den = eval_mod_prime(f.den(), point, p);
    if (den == 0) throw ModEvalRetry("rational function denominator vanished mod p");
    return mul_mod(eval_mod_prime(f.num(), point, p), inv_mod(den, p), p);
}

std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
    const size_t rows = m.size();
    const size_t cols = rows == 0 ? 0 : m[0].size();
    for (const auto& row : m)
        if (row.size() != cols) throw DimensionError("ragged matrix");
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t pr = rank;
        while (pr < rows && m[pr][col] % p == 0) ++pr;
        if (pr == rows) continue;
        std::swap(m[rank], m[pr]);
        std::uint64_t inv = inv_mod(m[rank][col], p);
        for (size_t j = col; j < cols; ++j) m[rank][j] = mul_mod(m[rank][j], inv, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][col] % p == 0) continue;
            std::uint64_t f = m[i][col] % p;
            for (size_t j = col; j < cols; ++j) {
                std::uint64_t sub = mul_mod(f, m[rank][j], p);
                m[i][j] = (m[i][j] + p - sub) % p;
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace ioident
