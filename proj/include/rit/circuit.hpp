#pragma once

// Algebraic circuits: DAGs of integer-weighted sum gates and product gates
// over variable leaves and the constant -1 leaf.

#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rit/bigint.hpp"
#include "rit/error.hpp"

namespace rit {

using NodeId = std::size_t;

struct VarLeaf {
    std::string name;
};
struct NegOneLeaf {};
struct AddGate {
    std::vector<std::pair<BigInt, NodeId>> terms;  // (weight, input)
};
struct MulGate {
    std::vector<NodeId> inputs;
};

struct Node {
    std::string id;
    std::variant<VarLeaf, NegOneLeaf, AddGate, MulGate> op;
};

inline constexpr std::string_view kNegOneId = "neg1";

/// Immutable, validated circuit. Nodes are stored in topological order
/// (every input id is smaller than the node using it).
class Circuit {
public:
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    NodeId output() const noexcept { return output_; }

    /// Variable names in node order.
    const std::vector<std::string>& variables() const noexcept { return variables_; }

    /// Position of the node in variables(), if it is a variable leaf.
    std::optional<std::size_t> variable_index(NodeId node) const;
    std::optional<NodeId> find(std::string_view id) const;

    /// Nodes the output depends on, ascending.
    const std::vector<NodeId>& live_nodes() const noexcept { return live_; }

private:
    friend class CircuitBuilder;

    std::vector<Node> nodes_;
    NodeId output_ = 0;
    std::vector<std::string> variables_;
    std::vector<std::size_t> var_slot_;  // npos for non-variables
    std::vector<NodeId> live_;
    std::map<std::string, NodeId, std::less<>> index_;
};

/// Incremental construction; every method validates its inputs. Gate ids
/// are generated (`_g<n>`) when not supplied.
class CircuitBuilder {
public:
    NodeId var(const std::string& name);
    NodeId neg_one();
    NodeId add(std::vector<std::pair<BigInt, NodeId>> terms, std::string id = {});
    NodeId mul(std::vector<NodeId> inputs, std::string id = {});
    /// The integer c as a single add gate over the -1 leaf.
    NodeId constant(const BigInt& c, std::string id = {});

    bool has_id(std::string_view id) const;
    std::size_t size() const noexcept { return nodes_.size(); }

    Circuit build(NodeId output) &&;

private:
    NodeId push(std::string id, decltype(Node::op) op);
    std::string fresh_id();
    void check_input(NodeId input) const;

    std::vector<Node> nodes_;
    std::map<std::string, NodeId, std::less<>> index_;
    std::optional<NodeId> neg_one_;
    std::size_t counter_ = 0;
};

/// The d-th real root of a.
struct Radical {
    BigInt degree;    // d >= 1
    BigInt radicand;  // a >= 0
};

using RadicalBinding = std::map<std::string, Radical, std::less<>>;

struct Instance {
    Circuit circuit;
    RadicalBinding binding;
};

/// Parses the line-oriented circuit text format. Errors carry the 1-based
/// line number of the offending statement.
Instance parse_circuit(std::string_view text);

/// Inverse of parse_circuit: variable declarations, then gates in order,
/// then `out`, then `bind` lines in variable order.
std::string print_circuit(const Circuit& circuit, const RadicalBinding& binding);

/// Same ids, same gate kinds, same inputs (by id) and weights, same output.
bool structurally_equal(const Circuit& a, const Circuit& b);

/// Number of nodes, leaves included.
std::size_t circuit_size(const Circuit& circuit);

/// Formal degree: leaves 1, add = max, mul = sum.
BigInt circuit_degree(const Circuit& circuit);

// ---------------------------------------------------------------------------
// Ring-generic evaluation
// ---------------------------------------------------------------------------

template <class R>
concept Ring = requires(const R& ring, const typename R::Element& x, const BigInt& w) {
    { ring.zero() } -> std::convertible_to<typename R::Element>;
    { ring.one() } -> std::convertible_to<typename R::Element>;
    { ring.neg(x) } -> std::convertible_to<typename R::Element>;
    { ring.add(x, x) } -> std::convertible_to<typename R::Element>;
    { ring.mul(x, x) } -> std::convertible_to<typename R::Element>;
    { ring.scale(x, w) } -> std::convertible_to<typename R::Element>;
    { ring.from_integer(w) } -> std::convertible_to<typename R::Element>;
    { ring.equal(x, x) } -> std::convertible_to<bool>;
};

/// Evaluates the live part of the circuit in one pass over the stored
/// topological order. `values[i]` is the value of variables()[i].
template <Ring R>
typename R::Element eval_indexed(const Circuit& circuit, std::span<const typename R::Element> values,
                                 const R& ring) {
    using Element = typename R::Element;
    if (values.size() != circuit.variables().size()) {
        throw Error(ErrorKind::UnboundVariable, "expected " + std::to_string(circuit.variables().size()) +
                                                    " variable values, got " + std::to_string(values.size()));
    }
    const auto& nodes = circuit.nodes();
    std::vector<std::optional<Element>> slot(nodes.size());
    for (NodeId id : circuit.live_nodes()) {
        const Node& node = nodes[id];
        if (std::holds_alternative<VarLeaf>(node.op)) {
            slot[id] = values[*circuit.variable_index(id)];
        } else if (std::holds_alternative<NegOneLeaf>(node.op)) {
            slot[id] = ring.neg(ring.one());
        } else if (const auto* add = std::get_if<AddGate>(&node.op)) {
            Element acc = ring.zero();
            for (const auto& [weight, input] : add->terms) {
                if (weight == 0) continue;
                acc = ring.add(acc, weight == 1 ? *slot[input] : ring.scale(*slot[input], weight));
            }
            slot[id] = std::move(acc);
        } else {
            const auto& mul = std::get<MulGate>(node.op);
            Element acc = *slot[mul.inputs.front()];
            for (std::size_t k = 1; k < mul.inputs.size(); ++k) acc = ring.mul(acc, *slot[mul.inputs[k]]);
            slot[id] = std::move(acc);
        }
    }
    return std::move(*slot[circuit.output()]);
}

/// Evaluation with a name-keyed assignment. Throws UnboundVariable if a
/// variable has no value.
template <Ring R>
typename R::Element eval(const Circuit& circuit, const std::map<std::string, typename R::Element, std::less<>>& assignment,
                         const R& ring) {
    std::vector<typename R::Element> values;
    values.reserve(circuit.variables().size());
    for (const auto& name : circuit.variables()) {
        auto it = assignment.find(name);
        if (it == assignment.end()) throw Error(ErrorKind::UnboundVariable, name);
        values.push_back(it->second);
    }
    return eval_indexed(circuit, std::span<const typename R::Element>(values), ring);
}

/// Z/pZ with canonical representatives in [0, p).
class PrimeField {
public:
    using Element = BigInt;

    explicit PrimeField(BigInt p);

    const BigInt& modulus() const noexcept { return p_; }

    Element zero() const { return 0; }
    Element one() const { return p_ == 1 ? BigInt(0) : BigInt(1); }
    Element neg(const Element& x) const { return x == 0 ? BigInt(0) : BigInt(p_ - x); }
    Element add(const Element& x, const Element& y) const {
        BigInt s = x + y;
        if (s >= p_) s -= p_;
        return s;
    }
    Element mul(const Element& x, const Element& y) const { return BigInt(x * y % p_); }
    Element scale(const Element& x, const BigInt& w) const { return mod_floor(x * w, p_); }
    Element from_integer(const BigInt& w) const { return mod_floor(w, p_); }
    bool equal(const Element& x, const Element& y) const { return x == y; }

private:
    BigInt p_;
};

/// Z, refusing any intermediate value longer than `digit_cap` decimal digits.
class IntegerRing {
public:
    using Element = BigInt;

    explicit IntegerRing(std::size_t digit_cap) : digit_cap_(digit_cap) {}

    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element neg(const Element& x) const { return -x; }
    Element add(const Element& x, const Element& y) const { return checked(x + y); }
    Element mul(const Element& x, const Element& y) const;
    Element scale(const Element& x, const BigInt& w) const { return checked(x * w); }
    Element from_integer(const BigInt& w) const { return checked(w); }
    bool equal(const Element& x, const Element& y) const { return x == y; }

private:
    Element checked(BigInt v) const;
    std::size_t digit_cap_;
};

inline constexpr std::size_t kDefaultDigitCap = 1000000;

/// Exact integer value of the circuit. Throws DigitCapExceeded when an
/// intermediate value needs more than `digit_cap` decimal digits.
BigInt eval_exact(const Circuit& circuit, const std::map<std::string, BigInt, std::less<>>& assignment,
                  std::size_t digit_cap = kDefaultDigitCap);

}  // namespace rit
