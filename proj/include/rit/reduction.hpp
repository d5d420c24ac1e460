#pragma once

// Rewrites an instance so that its radicals are pairwise coprime and each
// has minimal polynomial exactly x^t - n.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rit/circuit.hpp"
#include "rit/numtheory.hpp"

namespace rit {

/// The real root n^(1/t).
struct CanonicalRadical {
    BigInt radicand;  // n >= 2
    BigInt degree;    // t >= 2

    friend bool operator==(const CanonicalRadical& a, const CanonicalRadical& b) {
        return a.radicand == b.radicand && a.degree == b.degree;
    }
};

/// How one input variable was replaced: x = constant * prod_j y_j^exponents[j].
struct LeafRewrite {
    std::string variable;
    Radical original;
    BigInt constant;
    std::vector<BigInt> exponents;  // one per canonical radical
};

struct CanonicalInstance {
    Circuit circuit;
    /// radicals[j] is the value of circuit.variables()[j].
    std::vector<CanonicalRadical> radicals;
    std::vector<LeafRewrite> provenance;
    /// Coprime base of the nontrivial input radicands (empty when built directly).
    CoprimeBase base;

    /// `bind` lines for print_circuit.
    RadicalBinding binding() const;
    /// lcm of all degrees (1 when there are no radicals).
    BigInt degree_lcm() const;
};

struct NormalizeOptions {
    std::uint64_t trial_limit = kDefaultTrialDivisionLimit;
};

/// a = root^exponent with exponent maximal.
std::pair<BigInt, std::uint64_t> perfect_power_decomposition(const BigInt& a);

/// (c, t) with a^(1/d) = c^(1/t) and t minimal.
std::pair<BigInt, BigInt> minimalize_radical(const BigInt& a, const BigInt& d);

/// Smallest k with (m^(1/d))^k an integer, found by scanning candidate
/// perfect-power exponents g | d, g <= log2(m).
BigInt compute_dij(const BigInt& m, const BigInt& d);

/// True iff n is not a perfect q-th power for any prime q | t. For n > 0
/// this is exactly irreducibility of x^t - n over Q: the extra condition
/// for 4 | t only concerns negative radicands.
bool is_minimal_radical(const BigInt& n, const BigInt& t);

CanonicalInstance normalize_instance(const Circuit& circuit, const RadicalBinding& binding,
                                     const NormalizeOptions& options = {});

/// Wraps a circuit whose variables already carry canonical radicals.
/// Throws InvalidRadical when the invariants do not hold.
CanonicalInstance make_canonical(Circuit circuit, std::vector<CanonicalRadical> radicals);

/// First violated CanonicalInstance invariant, if any.
std::optional<std::string> canonical_violation(const Circuit& circuit, const std::vector<CanonicalRadical>& radicals);

}  // namespace rit
