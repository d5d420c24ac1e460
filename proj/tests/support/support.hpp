#pragma once

// Independent oracles and random generators shared by unit and acceptance
// tests. Everything here is deliberately naive.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rit/bigint.hpp"
#include "rit/circuit.hpp"
#include "rit/reduction.hpp"

namespace rit::testing {

using u64 = std::uint64_t;

bool naive_is_prime(u64 n);
std::vector<u64> naive_primes(u64 below);
/// All x in [0, p) with x^d = a (mod p), by scanning.
std::vector<u64> naive_roots(u64 a, u64 d, u64 p);
/// Prime factorization by trial division.
std::vector<std::pair<u64, unsigned>> naive_factor(u64 n);
u64 naive_pow_mod(u64 b, u64 e, u64 m);

/// Multivariate integer polynomial over circuit.variables().
using Poly = std::map<std::vector<u64>, BigInt>;

class PolyRing {
public:
    using Element = Poly;
    explicit PolyRing(std::size_t nvars) : n_(nvars) {}
    Element zero() const { return {}; }
    Element one() const { return from_integer(1); }
    Element neg(const Element& x) const { return scale(x, -1); }
    Element add(const Element& x, const Element& y) const;
    Element mul(const Element& x, const Element& y) const;
    Element scale(const Element& x, const BigInt& w) const;
    Element from_integer(const BigInt& w) const;
    bool equal(const Element& x, const Element& y) const { return x == y; }

private:
    std::size_t n_;
};

Poly expand(const Circuit& circuit);
u64 total_degree(const Poly& p);

/// Random circuit over the given variables; gates pick random earlier nodes.
Circuit random_circuit(Rng& rng, const std::vector<std::string>& vars, std::size_t gates, int max_weight = 4);

/// Copies `src` into `b`, mapping variable j to leaf_map[j]. Returns the
/// image of the output.
NodeId splice(CircuitBuilder& b, const Circuit& src, const std::vector<NodeId>& leaf_map);

/// x^e as one MulGate (or x itself when e == 1, the constant 1 when e == 0).
NodeId naive_power(CircuitBuilder& b, NodeId x, u64 e);

/// Pairwise coprime, squarefree radicands with degrees in [2, max_degree].
std::vector<CanonicalRadical> random_canonical_radicals(Rng& rng, std::size_t count, u64 max_radicand,
                                                        u64 max_degree);

/// Canonical instance whose value is zero: sum of g_i * (x_i^t_i - n_i)
/// terms, sometimes plus an identity such as (u+v)^2 - u^2 - 2uv - v^2.
CanonicalInstance random_zero_instance(Rng& rng, const std::vector<CanonicalRadical>& radicals);

/// Random canonical instance (usually nonzero).
CanonicalInstance random_canonical_instance(Rng& rng, const std::vector<CanonicalRadical>& radicals,
                                            std::size_t gates);

/// Instance over radicands built from a few small primes (shared factors,
/// perfect powers, trivial bindings). With probability 1/3 the circuit is
/// forced to zero through a relation (x_i x_j)^L = integer.
Instance random_noncanonical_instance(Rng& rng, std::size_t nvars, std::size_t gates, u64 max_degree = 8);

/// Product of the prime-split degrees L_p (the reference basis size).
u64 prime_split_basis(const RadicalBinding& binding);

/// Reference canonicalization: factor every radicand completely and use one
/// radical p^(1/L_p) per prime p, L_p = lcm of the degrees touching p.
/// Independent of normalize_instance.
CanonicalInstance prime_split_canonical(const Circuit& circuit, const RadicalBinding& binding);

}  // namespace rit::testing
