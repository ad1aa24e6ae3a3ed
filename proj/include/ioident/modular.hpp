#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ioident/poly.hpp"
#include "ioident/ratfunc.hpp"

// Modular arithmetic used by the randomized rank checks.  All residues live in
// [0, p) for a prime p < 2^63; products go through __int128 so nothing wraps.

namespace ioident {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p); // throws ModEvalRetry if gcd(a,p) != 1

bool is_prime(std::uint64_t n); // deterministic Miller-Rabin for 64-bit inputs

// Uniformly picks primes near 2^62 using the caller's RNG.
std::uint64_t random_prime(std::mt19937_64& rng);

// Reduce an arbitrary-precision rational mod p.  Throws ModEvalRetry when the
// denominator vanishes mod p (caller picks a fresh prime).
std::uint64_t reduce_mod(const Rational& q, std::uint64_t p);

// Evaluate at a point with coordinates in [0, p).  `point` is indexed by
// symbol slot, same as MultiPoly::eval.
std::uint64_t eval_mod_prime(const MultiPoly& f, const std::vector<std::uint64_t>& point,
                             std::uint64_t p);
std::uint64_t eval_mod_prime(const RatFunc& f, const std::vector<std::uint64_t>& point,
                             std::uint64_t p); // ModEvalRetry if the denominator evaluates to 0

// Row-reduces a copy of `m` mod p and returns its rank.
std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p);

} // namespace ioident
