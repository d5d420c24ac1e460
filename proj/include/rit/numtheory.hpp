#pragma once

// Arbitrary-precision number theory: modular powers, primality, Legendre
// symbols, CRT, modular square and d-th roots, discrete logarithms and
// coprime factor refinement.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rit/bigint.hpp"

namespace rit {

/// An element of Z/mZ with 0 <= value < modulus.
struct Residue {
    BigInt value;
    BigInt modulus;

    friend bool operator==(const Residue& a, const Residue& b) {
        return a.value == b.value && a.modulus == b.modulus;
    }
};

/// a_i = prod_j factors[j]^exponents[i][j], factors pairwise coprime.
struct CoprimeBase {
    std::vector<BigInt> factors;
    std::vector<std::vector<std::uint64_t>> exponents;
};

inline constexpr unsigned kDefaultMillerRabinRounds = 40;
inline constexpr std::uint64_t kDefaultTrialDivisionLimit = 100000;
inline constexpr std::uint64_t kDefaultBsgsBound = std::uint64_t{1} << 44;
inline constexpr std::uint64_t kDefaultBruteForceRootBound = std::uint64_t{1} << 12;

/// base^exp mod m by square-and-multiply. Throws InvalidModulus if m < 2.
Residue mod_pow(const BigInt& base, const BigInt& exp, const BigInt& m);

/// Miller-Rabin. Deterministic for n < 2^64 (first twelve prime bases);
/// above that `rounds` pseudo-random bases derived from n itself, so the
/// answer is a pure function of (n, rounds).
bool is_probable_prime(const BigInt& n, unsigned rounds = kDefaultMillerRabinRounds);

/// Legendre symbol via Euler's criterion. Throws InvalidPrime unless p is
/// an odd probable prime.
int legendre(const BigInt& a, const BigInt& p);

/// Solves x = r_i (mod m_i) for arbitrary (not necessarily coprime)
/// moduli. Returns (b, lcm) with 0 <= b < lcm.
std::pair<BigInt, BigInt> crt_solve(const std::vector<std::pair<BigInt, BigInt>>& congruences);

/// Pocklington's deterministic square root for p = 8m + 5. Returns the
/// pair (x, p - x), x produced by the case split on a^(2m+1).
std::pair<Residue, Residue> pocklington_sqrt(const BigInt& a, const BigInt& p);

/// Tonelli-Shanks. `rng` is only used to locate a quadratic non-residue.
/// Returns the smaller of the two roots.
Residue tonelli_shanks_sqrt(const BigInt& a, const BigInt& p, Rng& rng);

/// Trial division by primes <= trial_limit, then gcd-based refinement of
/// the remaining cofactors. Factors are sorted ascending.
CoprimeBase factor_refine(const std::vector<BigInt>& inputs,
                          std::uint64_t trial_limit = kDefaultTrialDivisionLimit);

/// The c with c^r = m exactly, if it exists. Newton iteration for the
/// floor root, verified by exact powering.
std::optional<BigInt> integer_root(const BigInt& m, std::uint64_t r);

/// Floor of the r-th root of m >= 0.
BigInt floor_root(const BigInt& m, std::uint64_t r);

/// Smallest generator of (Z/pZ)^*. `factors_of_p_minus_1` must list every
/// prime divisor of p - 1; an incomplete list is not detected.
Residue find_generator(const BigInt& p, const std::vector<BigInt>& factors_of_p_minus_1);

/// Distinct prime divisors of n by trial division (n < 2^64 only).
std::vector<BigInt> prime_divisors_small(const BigInt& n);

/// e in [0, p-1) with g^e = h (mod p), baby-step giant-step.
/// Throws TooLarge for p > bound and InvalidInput for h = 0 (mod p).
std::uint64_t discrete_log_bsgs(const Residue& g, const Residue& h, const BigInt& p,
                                std::uint64_t bound = kDefaultBsgsBound);

/// The numerically smallest x with x^d = a (mod p), or empty when a is not
/// a d-th power residue. Requires d | p - 1 (WrongResidueClass otherwise).
std::optional<Residue> dth_root_modp(const BigInt& a, const BigInt& d, const BigInt& p,
                                     std::uint64_t brute_force_bound = kDefaultBruteForceRootBound);

/// Primes <= limit, ascending (simple sieve of Eratosthenes).
std::vector<std::uint32_t> primes_upto(std::uint32_t limit);

}  // namespace rit
