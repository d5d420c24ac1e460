#pragma once

// Modular certificates of non-vanishing: a prime p = 1 (mod d) and a d_j-th
// root of every radicand mod p. A nonzero evaluation mod p proves the
// instance is nonzero.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rit/bigint.hpp"
#include "rit/reduction.hpp"

namespace rit {

/// 2^(4 s^3).
BigInt prime_bound_formula(std::uint64_t s);

struct Certificate {
    BigInt prime;
    std::vector<BigInt> roots;  // aligned with the instance's radicals
};

struct Verdict {
    enum class Kind { NonZeroWitnessed, EvaluatesZero, Invalid };
    Kind kind;
    BigInt value;        // residue mod p for NonZeroWitnessed
    std::string reason;  // first failed check for Invalid
};

std::string_view to_string(Verdict::Kind kind) noexcept;

/// Value of the circuit mod p with variable j set to roots[j].
BigInt eval_mod_p(const Circuit& circuit, const std::vector<BigInt>& roots, const BigInt& p);

/// Checks, in order: primality (probabilistic), root count, p = 1 mod d,
/// root range, root^t = n. Then evaluates.
Verdict verify_certificate(const CanonicalInstance& inst, const Certificate& cert);

inline constexpr std::uint64_t kDefaultPrimeCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultSearchBudget = 1000000;

struct SearchLog {
    std::uint64_t primes_examined = 0;
    /// Primes where every radical had a root but the value was 0.
    std::vector<BigInt> zero_primes;
};

/// Scans p = d*k + 1 <= prime_cap ascending; returns the first prime with
/// a nonzero evaluation (smallest roots). `budget` bounds the number of
/// primes examined.
std::optional<Certificate> search_certificate(const CanonicalInstance& inst, const BigInt& prime_cap,
                                              std::uint64_t budget, SearchLog* log = nullptr);

struct RootTupleReport {
    BigInt tuples_total;
    BigInt tuples_zero;
    bool consistent;  // tuples_zero is 0 or tuples_total
};

/// Evaluates the circuit at every tuple of roots mod p. Throws
/// WrongResidueClass unless p = 1 (mod d), MissingRoot when a radical has
/// no root, TooLarge beyond `tuple_cap` tuples.
RootTupleReport all_root_tuples_check(const CanonicalInstance& inst, const BigInt& p,
                                      std::uint64_t tuple_cap = 1000000);

}  // namespace rit
