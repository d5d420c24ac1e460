#include "rit/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rit/error.hpp"

namespace rit {

namespace {

std::uint64_t bit_length(const BigInt& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

BigInt pow_big(const BigInt& base, const BigInt& exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), to_u64(exp));
    return out;
}

BigInt lcm_big(const BigInt& a, const BigInt& b) {
    BigInt out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

}  // namespace

RadicalBinding CanonicalInstance::binding() const {
    RadicalBinding out;
    const auto& vars = circuit.variables();
    for (std::size_t j = 0; j < vars.size() && j < radicals.size(); ++j) {
        out.emplace(vars[j], Radical{radicals[j].degree, radicals[j].radicand});
    }
    return out;
}

BigInt CanonicalInstance::degree_lcm() const {
    BigInt d = 1;
    for (const auto& r : radicals) d = lcm_big(d, r.degree);
    return d;
}

std::pair<BigInt, std::uint64_t> perfect_power_decomposition(const BigInt& a) {
    if (a < 2) throw Error(ErrorKind::InvalidInput, "perfect power decomposition needs a >= 2");
    BigInt root = a;
    std::uint64_t exponent = 1;
    for (std::uint32_t q : primes_upto(static_cast<std::uint32_t>(bit_length(a)))) {
        if (q > bit_length(root)) break;
        while (auto r = integer_root(root, q)) {
            root = *r;
            exponent *= q;
        }
    }
    return {root, exponent};
}

std::pair<BigInt, BigInt> minimalize_radical(const BigInt& a, const BigInt& d) {
    if (a < 2) throw Error(ErrorKind::InvalidInput, "minimalize_radical needs a >= 2");
    if (d < 1) throw Error(ErrorKind::InvalidRadical, "root degree must be >= 1");
    // a^(1/d) = b^(g/d); reduce g/d to lowest terms u/t, then c = b^u.
    const auto [b, g] = perfect_power_decomposition(a);
    const BigInt gb = from_u64(g);
    const BigInt common = gcd(gb, d);
    const BigInt t = d / common;
    const BigInt u = gb / common;
    return {pow_big(b, u), t};
}

BigInt compute_dij(const BigInt& m, const BigInt& d) {
    if (m < 2) throw Error(ErrorKind::InvalidInput, "compute_dij needs m >= 2");
    if (d < 1) throw Error(ErrorKind::InvalidRadical, "root degree must be >= 1");
    // d = g * d_ij for the largest g | d with m a perfect g-th power.
    std::uint64_t best = 1;
    const std::uint64_t limit = bit_length(m);
    for (std::uint64_t g = 2; g <= limit; ++g) {
        if (!mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(g))) continue;
        if (integer_root(m, g)) best = g;
    }
    return d / from_u64(best);
}

bool is_minimal_radical(const BigInt& n, const BigInt& t) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "is_minimal_radical needs n >= 2");
    if (t < 1) throw Error(ErrorKind::InvalidRadical, "root degree must be >= 1");
    // A perfect q-th power n >= 2 has q <= log2(n).
    for (std::uint32_t q : primes_upto(static_cast<std::uint32_t>(bit_length(n)))) {
        if (!mpz_divisible_ui_p(t.get_mpz_t(), q)) continue;
        if (integer_root(n, q)) return false;
    }
    return true;
}

std::optional<std::string> canonical_violation(const Circuit& circuit, const std::vector<CanonicalRadical>& radicals) {
    if (radicals.size() != circuit.variables().size()) {
        return "expected " + std::to_string(circuit.variables().size()) + " radicals, got " +
               std::to_string(radicals.size());
    }
    for (std::size_t j = 0; j < radicals.size(); ++j) {
        const auto& r = radicals[j];
        const std::string& name = circuit.variables()[j];
        if (r.radicand < 2) return "radicand of '" + name + "' must be >= 2";
        if (r.degree < 2) return "degree of '" + name + "' must be >= 2";
        if (!is_minimal_radical(r.radicand, r.degree)) return "x^t - n is reducible for '" + name + "'";
        for (std::size_t l = 0; l < j; ++l) {
            if (gcd(r.radicand, radicals[l].radicand) != 1) {
                return "radicands of '" + circuit.variables()[l] + "' and '" + name + "' are not coprime";
            }
        }
    }
    return std::nullopt;
}

CanonicalInstance make_canonical(Circuit circuit, std::vector<CanonicalRadical> radicals) {
    if (auto why = canonical_violation(circuit, radicals)) throw Error(ErrorKind::InvalidRadical, *why);
    CanonicalInstance inst{std::move(circuit), std::move(radicals), {}, {}};
    for (std::size_t j = 0; j < inst.radicals.size(); ++j) {
        LeafRewrite rw{inst.circuit.variables()[j], Radical{inst.radicals[j].degree, inst.radicals[j].radicand}, 1,
                       std::vector<BigInt>(inst.radicals.size(), 0)};
        rw.exponents[j] = 1;
        inst.provenance.push_back(std::move(rw));
    }
    return inst;
}

namespace {

// Columns of the exponent matrix that are proportional always occur
// together, so their base elements merge into one radicand. This keeps
// already-canonical radicands (e.g. 6 = 2 * 3) intact.
struct Group {
    BigInt merged;                    // prod m_j^lambda_j
    std::vector<std::uint64_t> shape;  // primitive exponent vector over nontrivial vars
};

std::vector<Group> merge_proportional_columns(const CoprimeBase& base, std::size_t rows) {
    std::map<std::vector<std::uint64_t>, BigInt> merged;
    for (std::size_t j = 0; j < base.factors.size(); ++j) {
        std::vector<std::uint64_t> col(rows);
        std::uint64_t g = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            col[i] = base.exponents[i][j];
            g = std::gcd(g, col[i]);
        }
        for (auto& e : col) e /= g;
        BigInt power;
        mpz_pow_ui(power.get_mpz_t(), base.factors[j].get_mpz_t(), static_cast<unsigned long>(g));
        auto [it, fresh] = merged.emplace(col, power);
        if (!fresh) it->second *= power;
    }
    std::vector<Group> out;
    for (auto& [shape, m] : merged) out.push_back(Group{m, shape});
    auto first_row = [](const Group& g) {
        return static_cast<std::size_t>(std::find_if(g.shape.begin(), g.shape.end(), [](auto e) { return e != 0; }) -
                                        g.shape.begin());
    };
    std::sort(out.begin(), out.end(), [&](const Group& a, const Group& b) {
        const auto ra = first_row(a), rb = first_row(b);
        if (ra != rb) return ra < rb;
        return a.merged < b.merged;
    });
    return out;
}

class IdAllocator {
public:
    explicit IdAllocator(const Circuit& circuit) {
        for (const auto& node : circuit.nodes()) reserved_.insert(node.id);
    }
    void reserve(const std::string& id) { reserved_.insert(id); }
    bool taken(const std::string& id) const { return reserved_.count(id) != 0; }
    std::string fresh(const std::string& stem) {
        std::string id = stem;
        for (std::size_t k = 1; taken(id); ++k) id = stem + "_" + std::to_string(k);
        reserved_.insert(id);
        return id;
    }

private:
    std::set<std::string> reserved_;
};

// y^e by left-to-right binary exponentiation; the last gate gets `final_id`
// when provided.
NodeId power_gadget(CircuitBuilder& b, NodeId y, const BigInt& e, const std::string& stem, IdAllocator& ids,
                    const std::string& final_id) {
    if (e == 1) return y;
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    // Count the gates first so the final one can be named.
    std::size_t total = 0;
    for (std::size_t k = bits - 1; k-- > 0;) total += mpz_tstbit(e.get_mpz_t(), k) ? 2 : 1;
    NodeId acc = y;
    std::size_t made = 0;
    auto next_id = [&] { return (++made == total && !final_id.empty()) ? final_id : ids.fresh(stem); };
    for (std::size_t k = bits - 1; k-- > 0;) {
        acc = b.mul({acc, acc}, next_id());
        if (mpz_tstbit(e.get_mpz_t(), k)) acc = b.mul({acc, y}, next_id());
    }
    return acc;
}

}  // namespace

CanonicalInstance normalize_instance(const Circuit& circuit, const RadicalBinding& binding,
                                     const NormalizeOptions& options) {
    const auto& vars = circuit.variables();
    std::vector<LeafRewrite> rewrites;
    std::vector<std::size_t> nontrivial;  // indices into vars
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = binding.find(vars[i]);
        if (it == binding.end()) throw Error(ErrorKind::UnboundVariable, vars[i]);
        const Radical& r = it->second;
        if (r.degree < 1) throw Error(ErrorKind::InvalidRadical, "root degree must be >= 1 for '" + vars[i] + "'");
        if (r.radicand < 0) throw Error(ErrorKind::InvalidRadical, "negative radicand for '" + vars[i] + "'");
        LeafRewrite rw{vars[i], r, 1, {}};
        if (r.radicand == 0 || r.radicand == 1 || r.degree == 1) {
            rw.constant = r.radicand;
        } else {
            nontrivial.push_back(i);
        }
        rewrites.push_back(std::move(rw));
    }

    CoprimeBase base;
    std::vector<CanonicalRadical> radicals;
    if (!nontrivial.empty()) {
        std::vector<BigInt> radicands;
        for (std::size_t i : nontrivial) radicands.push_back(rewrites[i].original.radicand);
        base = factor_refine(radicands, options.trial_limit);
        const auto groups = merge_proportional_columns(base, nontrivial.size());

        // Per group: M = b^G with b not a perfect power; the leaf value
        // contributes b^(G v_i / d_i). Denominators determine t.
        std::vector<std::vector<BigInt>> exponent_rows(vars.size());
        for (const auto& group : groups) {
            const auto [root, power] = perfect_power_decomposition(group.merged);
            const BigInt gpow = from_u64(power);
            BigInt t = 1;
            for (std::size_t r = 0; r < nontrivial.size(); ++r) {
                if (group.shape[r] == 0) continue;
                const BigInt& d = rewrites[nontrivial[r]].original.degree;
                const BigInt num = gpow * from_u64(group.shape[r]);
                t = lcm_big(t, d / gcd(num, d));
            }
            for (std::size_t r = 0; r < nontrivial.size(); ++r) {
                auto& rw = rewrites[nontrivial[r]];
                const BigInt num = gpow * from_u64(group.shape[r]);
                if (t == 1) {
                    if (group.shape[r] != 0) rw.constant *= pow_big(root, num / rw.original.degree);
                } else {
                    exponent_rows[nontrivial[r]].push_back(num * t / rw.original.degree);
                }
            }
            if (t != 1) radicals.push_back(CanonicalRadical{root, t});
        }
        for (std::size_t r = 0; r < nontrivial.size(); ++r) {
            rewrites[nontrivial[r]].exponents = std::move(exponent_rows[nontrivial[r]]);
        }

        // x^d = a must hold exactly for every rewritten leaf.
        for (std::size_t i : nontrivial) {
            const auto& rw = rewrites[i];
            BigInt value = 1;
            if (rw.constant != 1) value = pow_big(rw.constant, rw.original.degree);
            for (std::size_t j = 0; j < radicals.size(); ++j) {
                const BigInt e = rw.exponents[j] * rw.original.degree;
                if (!mpz_divisible_p(e.get_mpz_t(), radicals[j].degree.get_mpz_t())) {
                    throw Error(ErrorKind::ExponentNotRepresentable, "fractional exponent for '" + rw.variable + "'");
                }
                value *= pow_big(radicals[j].radicand, e / radicals[j].degree);
            }
            if (value != rw.original.radicand) {
                throw Error(ErrorKind::ExponentNotRepresentable,
                            "leaf '" + rw.variable + "' does not reproduce its radicand " + to_decimal(rw.original.radicand));
            }
        }
    }
    for (auto& rw : rewrites) {
        if (rw.exponents.empty()) rw.exponents.assign(radicals.size(), 0);
    }

    // Name the new variables. A leaf that is exactly y_j lends y_j its name.
    IdAllocator ids(circuit);
    std::vector<std::string> radical_names(radicals.size());
    std::vector<std::optional<std::size_t>> alias(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& rw = rewrites[i];
        if (rw.constant != 1) continue;
        std::optional<std::size_t> only;
        bool simple = true;
        for (std::size_t j = 0; j < radicals.size(); ++j) {
            if (rw.exponents[j] == 0) continue;
            if (only || rw.exponents[j] != 1) simple = false;
            only = j;
        }
        if (simple && only && radical_names[*only].empty()) {
            radical_names[*only] = vars[i];
            alias[i] = *only;
        }
    }
    for (std::size_t j = 0; j < radicals.size(); ++j) {
        if (radical_names[j].empty()) radical_names[j] = ids.fresh("y" + std::to_string(j + 1));
    }

    CircuitBuilder b;
    std::vector<NodeId> radical_nodes;
    for (const auto& name : radical_names) radical_nodes.push_back(b.var(name));

    const auto& nodes = circuit.nodes();
    std::vector<NodeId> remap(nodes.size());
    for (NodeId id = 0; id < nodes.size(); ++id) {
        const Node& node = nodes[id];
        if (const auto* leaf = std::get_if<VarLeaf>(&node.op)) {
            const std::size_t i = *circuit.variable_index(id);
            if (alias[i]) {
                remap[id] = radical_nodes[*alias[i]];
                continue;
            }
            const auto& rw = rewrites[i];
            std::vector<std::size_t> used;
            for (std::size_t j = 0; j < radicals.size(); ++j) {
                if (rw.exponents[j] != 0) used.push_back(j);
            }
            const bool with_constant = rw.constant != 1 || used.empty();
            const std::size_t parts = used.size() + (with_constant ? 1 : 0);
            std::vector<NodeId> factors;
            if (with_constant) factors.push_back(b.constant(rw.constant, parts == 1 ? leaf->name : ids.fresh(leaf->name + "_c")));
            for (std::size_t j : used) {
                const std::string stem = leaf->name + "_" + radical_names[j];
                const bool last_gate = parts == 1;
                NodeId p = power_gadget(b, radical_nodes[j], rw.exponents[j], stem, ids, last_gate ? leaf->name : "");
                factors.push_back(p);
            }
            remap[id] = factors.size() == 1 ? factors.front() : b.mul(factors, leaf->name);
        } else if (std::holds_alternative<NegOneLeaf>(node.op)) {
            remap[id] = b.neg_one();
        } else if (const auto* add = std::get_if<AddGate>(&node.op)) {
            std::vector<std::pair<BigInt, NodeId>> terms;
            for (const auto& [w, in] : add->terms) terms.emplace_back(w, remap[in]);
            remap[id] = b.add(std::move(terms), node.id);
        } else {
            const auto& mul = std::get<MulGate>(node.op);
            std::vector<NodeId> inputs;
            for (NodeId in : mul.inputs) inputs.push_back(remap[in]);
            remap[id] = b.mul(std::move(inputs), node.id);
        }
    }
    Circuit rewritten = std::move(b).build(remap[circuit.output()]);

    if (auto why = canonical_violation(rewritten, radicals)) {
        throw std::logic_error("normalize_instance produced a non-canonical instance: " + *why);
    }
    return CanonicalInstance{std::move(rewritten), std::move(radicals), std::move(rewrites), std::move(base)};
}

}  // namespace rit
