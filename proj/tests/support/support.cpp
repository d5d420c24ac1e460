#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace rit::testing {

bool naive_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q = 2; q * q <= n; ++q) {
        if (n % q == 0) return false;
    }
    return true;
}

std::vector<u64> naive_primes(u64 below) {
    std::vector<u64> out;
    for (u64 n = 2; n < below; ++n) {
        if (naive_is_prime(n)) out.push_back(n);
    }
    return out;
}

u64 naive_pow_mod(u64 b, u64 e, u64 m) {
    unsigned __int128 r = 1 % m;
    for (u64 i = 0; i < e; ++i) r = r * b % m;
    return static_cast<u64>(r);
}

std::vector<u64> naive_roots(u64 a, u64 d, u64 p) {
    std::vector<u64> out;
    for (u64 x = 0; x < p; ++x) {
        if (naive_pow_mod(x, d, p) == a % p) out.push_back(x);
    }
    return out;
}

std::vector<std::pair<u64, unsigned>> naive_factor(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 q = 2; q * q <= n; ++q) {
        unsigned e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e) out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

PolyRing::Element PolyRing::add(const Element& x, const Element& y) const {
    Poly out = x;
    for (const auto& [m, c] : y) {
        out[m] += c;
        if (out[m] == 0) out.erase(m);
    }
    return out;
}

PolyRing::Element PolyRing::mul(const Element& x, const Element& y) const {
    Poly out;
    for (const auto& [ma, ca] : x) {
        for (const auto& [mb, cb] : y) {
            std::vector<u64> m(n_);
            for (std::size_t i = 0; i < n_; ++i) m[i] = ma[i] + mb[i];
            out[m] += ca * cb;
        }
    }
    std::erase_if(out, [](const auto& t) { return t.second == 0; });
    return out;
}

PolyRing::Element PolyRing::scale(const Element& x, const BigInt& w) const {
    Poly out;
    if (w == 0) return out;
    for (const auto& [m, c] : x) out[m] = c * w;
    return out;
}

PolyRing::Element PolyRing::from_integer(const BigInt& w) const {
    Poly out;
    if (w != 0) out[std::vector<u64>(n_, 0)] = w;
    return out;
}

Poly expand(const Circuit& circuit) {
    const std::size_t n = circuit.variables().size();
    PolyRing ring(n);
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<u64> m(n, 0);
        m[i] = 1;
        gens.push_back(Poly{{m, 1}});
    }
    return eval_indexed(circuit, std::span<const Poly>(gens), ring);
}

u64 total_degree(const Poly& p) {
    u64 best = 0;
    for (const auto& [m, c] : p) best = std::max(best, std::accumulate(m.begin(), m.end(), u64{0}));
    return best;
}

namespace {

u64 pick(Rng& rng, u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng); }

BigInt nonzero_weight(Rng& rng, int max_weight) {
    long w = 0;
    while (w == 0) w = std::uniform_int_distribution<long>(-max_weight, max_weight)(rng);
    return BigInt(w);
}

}  // namespace

Circuit random_circuit(Rng& rng, const std::vector<std::string>& vars, std::size_t gates, int max_weight) {
    CircuitBuilder b;
    // The -1 leaf is created on first use so unused circuits print and
    // reparse identically.
    constexpr NodeId kNeg = static_cast<NodeId>(-1);
    std::vector<NodeId> pool;
    for (const auto& v : vars) pool.push_back(b.var(v));
    pool.push_back(kNeg);
    auto draw = [&] {
        const NodeId n = pool[pick(rng, 0, pool.size() - 1)];
        return n == kNeg ? b.neg_one() : n;
    };
    for (std::size_t g = 0; g < gates; ++g) {
        const bool is_mul = pick(rng, 0, 1) == 1;
        const std::size_t arity = static_cast<std::size_t>(pick(rng, is_mul ? 2 : 1, 3));
        if (is_mul) {
            std::vector<NodeId> inputs;
            for (std::size_t k = 0; k < arity; ++k) inputs.push_back(draw());
            pool.push_back(b.mul(inputs));
        } else {
            std::vector<std::pair<BigInt, NodeId>> terms;
            for (std::size_t k = 0; k < arity; ++k) terms.emplace_back(nonzero_weight(rng, max_weight), draw());
            pool.push_back(b.add(terms));
        }
    }
    const NodeId out = pool.back() == kNeg ? pool.front() : pool.back();
    return std::move(b).build(out);
}

NodeId splice(CircuitBuilder& b, const Circuit& src, const std::vector<NodeId>& leaf_map) {
    std::vector<NodeId> image(src.nodes().size());
    for (NodeId i = 0; i < src.nodes().size(); ++i) {
        const auto& op = src.nodes()[i].op;
        if (std::holds_alternative<VarLeaf>(op)) {
            image[i] = leaf_map.at(*src.variable_index(i));
        } else if (std::holds_alternative<NegOneLeaf>(op)) {
            image[i] = b.neg_one();
        } else if (const auto* add = std::get_if<AddGate>(&op)) {
            std::vector<std::pair<BigInt, NodeId>> terms;
            for (const auto& [w, in] : add->terms) terms.emplace_back(w, image[in]);
            image[i] = b.add(terms);
        } else {
            std::vector<NodeId> inputs;
            for (NodeId in : std::get<MulGate>(op).inputs) inputs.push_back(image[in]);
            image[i] = b.mul(inputs);
        }
    }
    return image[src.output()];
}

NodeId naive_power(CircuitBuilder& b, NodeId x, u64 e) {
    if (e == 0) return b.constant(1);
    if (e == 1) return x;
    return b.mul(std::vector<NodeId>(e, x));
}

std::vector<CanonicalRadical> random_canonical_radicals(Rng& rng, std::size_t count, u64 max_radicand,
                                                        u64 max_degree) {
    std::vector<CanonicalRadical> out;
    while (out.size() < count) {
        const u64 n = pick(rng, 2, max_radicand);
        const auto f = naive_factor(n);
        const bool squarefree = std::all_of(f.begin(), f.end(), [](const auto& pe) { return pe.second == 1; });
        const bool coprime = std::all_of(out.begin(), out.end(), [&](const CanonicalRadical& r) {
            return std::gcd(to_u64(r.radicand), n) == 1;
        });
        if (squarefree && coprime) out.push_back(CanonicalRadical{from_u64(n), from_u64(pick(rng, 2, max_degree))});
    }
    return out;
}

CanonicalInstance random_zero_instance(Rng& rng, const std::vector<CanonicalRadical>& radicals) {
    CircuitBuilder b;
    std::vector<NodeId> leaves;
    for (std::size_t i = 0; i < radicals.size(); ++i) leaves.push_back(b.var("x" + std::to_string(i)));
    const NodeId m1 = b.neg_one();

    std::vector<std::pair<BigInt, NodeId>> parts;
    for (std::size_t i = 0; i < radicals.size(); ++i) {
        if (i > 0 && pick(rng, 0, 2) == 0) continue;
        const NodeId pw = naive_power(b, leaves[i], to_u64(radicals[i].degree));
        const NodeId rel = b.add({{1, pw}, {radicals[i].radicand, m1}});
        NodeId g = leaves[pick(rng, 0, leaves.size() - 1)];
        if (pick(rng, 0, 1)) g = b.add({{nonzero_weight(rng, 3), g}, {nonzero_weight(rng, 3), m1}});
        parts.emplace_back(nonzero_weight(rng, 3), b.mul({g, rel}));
    }
    if (parts.size() == 1 && pick(rng, 0, 1)) {
        // (u + v)^2 - u^2 - 2uv - v^2
        const NodeId u = leaves[pick(rng, 0, leaves.size() - 1)];
        const NodeId v = leaves[pick(rng, 0, leaves.size() - 1)];
        const NodeId s = b.add({{1, u}, {1, v}});
        const NodeId id = b.add({{1, b.mul({s, s})}, {-1, b.mul({u, u})}, {-2, b.mul({u, v})}, {-1, b.mul({v, v})}});
        parts.emplace_back(nonzero_weight(rng, 3), id);
    }
    const NodeId out = parts.size() == 1 ? parts.front().second : b.add(parts);
    return make_canonical(std::move(b).build(out), radicals);
}

CanonicalInstance random_canonical_instance(Rng& rng, const std::vector<CanonicalRadical>& radicals,
                                            std::size_t gates) {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < radicals.size(); ++i) vars.push_back("x" + std::to_string(i));
    return make_canonical(random_circuit(rng, vars, gates), radicals);
}

Instance random_noncanonical_instance(Rng& rng, std::size_t nvars, std::size_t gates, u64 max_degree) {
    static const u64 small[] = {2, 3, 5, 7, 11, 13};
    std::vector<std::string> vars;
    RadicalBinding binding;
    for (std::size_t i = 0; i < nvars; ++i) {
        vars.push_back("x" + std::to_string(i));
        u64 a = 1;
        const u64 kind = pick(rng, 0, 9);
        if (kind == 0) {
            a = pick(rng, 0, 1);
        } else {
            const u64 nf = pick(rng, 1, 2);
            for (u64 k = 0; k < nf; ++k) {
                const u64 p = small[pick(rng, 0, 5)];
                const u64 e = pick(rng, 1, kind <= 3 ? 6 : 2);
                for (u64 r = 0; r < e; ++r) a *= p;
            }
        }
        binding[vars.back()] = Radical{from_u64(pick(rng, 1, max_degree)), from_u64(a)};
    }

    if (nvars >= 1 && pick(rng, 0, 2) == 0) {
        CircuitBuilder b;
        std::vector<NodeId> leaves;
        for (const auto& v : vars) leaves.push_back(b.var(v));
        const std::size_t i = pick(rng, 0, nvars - 1);
        const std::size_t j = pick(rng, 0, nvars - 1);
        const Radical& ri = binding.at(vars[i]);
        const Radical& rj = binding.at(vars[j]);
        const u64 di = to_u64(ri.degree), dj = to_u64(rj.degree);
        const u64 l = i == j ? di : std::lcm(di, dj);
        // (x_i x_j)^l, exactly an integer.
        const NodeId prod = i == j ? leaves[i] : b.mul({leaves[i], leaves[j]});
        const NodeId pw = naive_power(b, prod, l);
        BigInt c;
        BigInt tmp;
        mpz_pow_ui(c.get_mpz_t(), ri.radicand.get_mpz_t(), l / di);
        if (i != j) {
            mpz_pow_ui(tmp.get_mpz_t(), rj.radicand.get_mpz_t(), l / dj);
            c *= tmp;
        }
        const NodeId rel = b.add({{1, pw}, {c, b.neg_one()}});
        const NodeId g = leaves[pick(rng, 0, nvars - 1)];
        const NodeId out = b.add({{nonzero_weight(rng, 3), b.mul({g, rel})}});
        return Instance{std::move(b).build(out), std::move(binding)};
    }
    return Instance{random_circuit(rng, vars, gates), std::move(binding)};
}

u64 prime_split_basis(const RadicalBinding& binding) {
    std::map<u64, u64> lcm_of;
    for (const auto& [name, r] : binding) {
        const u64 d = to_u64(r.degree);
        const u64 a = to_u64(r.radicand);
        if (d == 1 || a <= 1) continue;
        for (const auto& [p, e] : naive_factor(a)) {
            u64& l = lcm_of[p];
            l = l == 0 ? d : std::lcm(l, d);
        }
    }
    u64 basis = 1;
    for (const auto& [p, l] : lcm_of) basis *= l;
    return basis;
}

CanonicalInstance prime_split_canonical(const Circuit& circuit, const RadicalBinding& binding) {
    const auto& vars = circuit.variables();
    struct Input {
        u64 d;
        u64 a;
        std::vector<std::pair<u64, unsigned>> factors;
    };
    std::vector<Input> inputs;
    std::map<u64, u64> lcm_of;  // prime -> L_p
    for (const auto& v : vars) {
        const Radical& r = binding.at(v);
        Input in{to_u64(r.degree), to_u64(r.radicand), {}};
        if (in.d > 1 && in.a > 1) {
            in.factors = naive_factor(in.a);
            for (const auto& [p, e] : in.factors) {
                u64& l = lcm_of[p];
                l = l == 0 ? in.d : std::lcm(l, in.d);
            }
        }
        inputs.push_back(std::move(in));
    }

    CircuitBuilder b;
    std::map<u64, NodeId> y;
    std::vector<CanonicalRadical> radicals;
    for (const auto& [p, l] : lcm_of) {
        y[p] = b.var("p" + std::to_string(p));
        radicals.push_back(CanonicalRadical{from_u64(p), from_u64(l)});
    }
    std::vector<NodeId> leaf_map;
    for (const auto& in : inputs) {
        if (in.d == 1 || in.a <= 1) {
            leaf_map.push_back(b.constant(from_u64(in.a)));
            continue;
        }
        std::vector<NodeId> factors;
        for (const auto& [p, e] : in.factors) factors.push_back(naive_power(b, y[p], e * lcm_of[p] / in.d));
        leaf_map.push_back(factors.size() == 1 ? factors.front() : b.mul(factors));
    }
    const NodeId out = splice(b, circuit, leaf_map);
    return make_canonical(std::move(b).build(out), std::move(radicals));
}

}  // namespace rit::testing
