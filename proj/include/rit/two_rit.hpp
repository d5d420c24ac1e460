#pragma once

// Randomized zero test for circuits over square roots of distinct primes:
// evaluate mod a random prime from a progression in which every radicand
// is a quadratic residue.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rit/bigint.hpp"
#include "rit/circuit.hpp"

namespace rit {

/// Progression modulus*n + first_term, n >= 0, capped at `bound`.
struct ProgressionSpec {
    std::vector<BigInt> radicands;
    BigInt odd_product;  // A
    BigInt modulus;      // 8A
    BigInt offset;       // b
    BigInt first_term;   // b + 1
    BigInt bound;        // B
    /// 2 is a radicand: first_term = 1 (mod 8) instead of 5 (mod 8), and
    /// square roots come from Tonelli-Shanks.
    bool radicand_two_override = false;
};

/// Throws NonPrimeRadicand or DuplicateRadicand.
ProgressionSpec build_progression(const std::vector<BigInt>& radicands, const BigInt& bound);

/// max(2^40, smallest power of two above (8A)^3).
BigInt default_bound(const BigInt& odd_product);
/// 512 * ceil(ln bound).
std::uint64_t default_max_attempts(const BigInt& bound);

/// Draws members uniformly until one is prime. Throws EmptyProgression
/// when no member is <= bound.
std::optional<BigInt> sample_prime(const ProgressionSpec& spec, Rng& rng, std::uint64_t max_attempts);

struct TwoRitConfig {
    std::uint64_t seed = 0;
    std::optional<BigInt> bound;                // default_bound when empty
    std::optional<std::uint64_t> max_attempts;  // default_max_attempts when empty
    std::uint64_t trials = 20;
};

enum class Decision { Zero, NonZero, Unknown };
std::string_view to_string(Decision d) noexcept;

struct Report {
    Decision verdict = Decision::Unknown;
    std::optional<BigInt> prime;
    std::vector<BigInt> roots;
    std::optional<BigInt> value;  // evaluation mod prime
    std::uint64_t trials = 0;       // trials run
    std::uint64_t evaluations = 0;  // trials that found a prime
    std::optional<std::uint64_t> witness_trial;
    std::uint64_t seed = 0;
    std::vector<std::string> flags;
    double timing_ms = 0.0;
};

/// Trial i draws from Rng(mix_seed(seed, i)). Stops at the first nonzero
/// evaluation; Zero when every trial that found a prime evaluated to 0.
Report two_rit_decide(const Circuit& circuit, const std::vector<BigInt>& radicands, const TwoRitConfig& cfg);

struct DensityResult {
    BigInt members;  // progression members <= limit
    std::uint64_t primes_found = 0;
    double dirichlet_estimate = 0.0;  // limit / (phi(8A) ln limit)
};

inline constexpr std::uint64_t kDensityLimitMax = 1000000000;

/// Exact count of primes = first_term (mod modulus) up to `limit`
/// (inclusive), by a segmented sieve over the progression. Throws
/// LimitTooLarge above 10^9.
DensityResult density_experiment(const ProgressionSpec& spec, const BigInt& limit);

}  // namespace rit
