#include "rit/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace rit {

namespace {

constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

bool valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    auto head = static_cast<unsigned char>(id[0]);
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(id.begin() + 1, id.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

}  // namespace

// ---------------------------------------------------------------------------
// Circuit / CircuitBuilder
// ---------------------------------------------------------------------------

std::optional<std::size_t> Circuit::variable_index(NodeId node) const {
    if (node >= var_slot_.size() || var_slot_[node] == kNoSlot) return std::nullopt;
    return var_slot_[node];
}

std::optional<NodeId> Circuit::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool CircuitBuilder::has_id(std::string_view id) const { return index_.find(id) != index_.end(); }

std::string CircuitBuilder::fresh_id() {
    std::string id;
    do {
        id = "_g" + std::to_string(counter_++);
    } while (has_id(id));
    return id;
}

void CircuitBuilder::check_input(NodeId input) const {
    if (input >= nodes_.size()) {
        throw Error(ErrorKind::InvalidInput, "gate input " + std::to_string(input) + " does not exist");
    }
}

NodeId CircuitBuilder::push(std::string id, decltype(Node::op) op) {
    if (!valid_identifier(id)) throw Error(ErrorKind::SyntaxError, "invalid identifier '" + id + "'");
    if (has_id(id)) throw Error(ErrorKind::DuplicateId, id);
    const NodeId node = nodes_.size();
    index_.emplace(id, node);
    nodes_.push_back(Node{std::move(id), std::move(op)});
    return node;
}

NodeId CircuitBuilder::var(const std::string& name) {
    if (name == kNegOneId) throw Error(ErrorKind::SyntaxError, "'neg1' is reserved for the -1 leaf");
    return push(name, VarLeaf{name});
}

NodeId CircuitBuilder::neg_one() {
    if (!neg_one_) neg_one_ = push(std::string(kNegOneId), NegOneLeaf{});
    return *neg_one_;
}

NodeId CircuitBuilder::add(std::vector<std::pair<BigInt, NodeId>> terms, std::string id) {
    if (terms.empty()) throw Error(ErrorKind::SyntaxError, "add gate needs at least one input");
    for (const auto& term : terms) check_input(term.second);
    if (id.empty()) id = fresh_id();
    return push(std::move(id), AddGate{std::move(terms)});
}

NodeId CircuitBuilder::mul(std::vector<NodeId> inputs, std::string id) {
    if (inputs.size() < 2) throw Error(ErrorKind::SyntaxError, "mul gate needs at least two inputs");
    for (NodeId in : inputs) check_input(in);
    if (id.empty()) id = fresh_id();
    return push(std::move(id), MulGate{std::move(inputs)});
}

NodeId CircuitBuilder::constant(const BigInt& c, std::string id) {
    const NodeId m1 = neg_one();
    return add({{BigInt(-c), m1}}, std::move(id));
}

Circuit CircuitBuilder::build(NodeId output) && {
    check_input(output);
    Circuit c;
    c.nodes_ = std::move(nodes_);
    c.index_ = std::move(index_);
    c.output_ = output;
    c.var_slot_.assign(c.nodes_.size(), kNoSlot);
    for (NodeId i = 0; i < c.nodes_.size(); ++i) {
        if (const auto* v = std::get_if<VarLeaf>(&c.nodes_[i].op)) {
            c.var_slot_[i] = c.variables_.size();
            c.variables_.push_back(v->name);
        }
    }
    std::vector<bool> live(c.nodes_.size(), false);
    live[output] = true;
    for (NodeId i = c.nodes_.size(); i-- > 0;) {
        if (!live[i]) continue;
        if (const auto* add = std::get_if<AddGate>(&c.nodes_[i].op)) {
            for (const auto& term : add->terms) live[term.second] = true;
        } else if (const auto* mul = std::get_if<MulGate>(&c.nodes_[i].op)) {
            for (NodeId in : mul->inputs) live[in] = true;
        }
    }
    for (NodeId i = 0; i < live.size(); ++i) {
        if (live[i]) c.live_.push_back(i);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Statement {
    std::size_t line;
    std::vector<std::string> tokens;
};

std::vector<Statement> split_statements(std::string_view text) {
    std::vector<Statement> out;
    std::size_t line = 1;
    Statement cur{1, {}};
    std::string token;
    auto flush_token = [&] {
        if (!token.empty()) {
            cur.tokens.push_back(std::move(token));
            token.clear();
        }
    };
    auto flush_statement = [&] {
        flush_token();
        if (!cur.tokens.empty()) out.push_back(std::move(cur));
        cur = Statement{line, {}};
    };
    bool in_comment = false;
    for (char ch : text) {
        if (ch == '\n') {
            in_comment = false;
            flush_statement();
            ++line;
            cur.line = line;
            continue;
        }
        if (in_comment) continue;
        if (ch == '#') {
            in_comment = true;
            flush_token();
        } else if (ch == ';') {
            flush_statement();
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            flush_token();
            if (cur.tokens.empty()) cur.line = line;
        } else {
            if (cur.tokens.empty() && token.empty()) cur.line = line;
            token.push_back(ch);
        }
    }
    flush_statement();
    return out;
}

struct GateDef {
    std::size_t statement;
    std::vector<std::string> refs;
};

class Parser {
public:
    explicit Parser(std::string_view text) : statements_(split_statements(text)) {}

    Instance run() {
        collect();
        for (std::size_t i = 0; i < statements_.size(); ++i) process(i);
        return finish();
    }

private:
    [[noreturn]] void fail(ErrorKind kind, const std::string& detail, std::size_t line) const {
        throw Error(kind, detail, line);
    }

    void expect_identifier(const std::string& id, std::size_t line) const {
        if (!valid_identifier(id)) fail(ErrorKind::SyntaxError, "invalid identifier '" + id + "'", line);
    }

    // First pass: bindings, declared variables and gate definitions, so that
    // references can be classified (self-reference, forward reference, ...).
    void collect() {
        for (std::size_t i = 0; i < statements_.size(); ++i) {
            const auto& st = statements_[i];
            const auto& t = st.tokens;
            const std::string& kw = t[0];
            if (kw == "bind") {
                if (t.size() != 4) fail(ErrorKind::SyntaxError, "expected 'bind <var> <d> <a>'", st.line);
                expect_identifier(t[1], st.line);
                Radical r;
                if (!parse_decimal(t[2], r.degree) || !parse_decimal(t[3], r.radicand)) {
                    fail(ErrorKind::SyntaxError, "bind expects decimal integers", st.line);
                }
                if (r.degree < 1) fail(ErrorKind::InvalidRadical, "root degree must be >= 1 for '" + t[1] + "'", st.line);
                if (r.radicand < 0) fail(ErrorKind::InvalidRadical, "radicand must be >= 0 for '" + t[1] + "'", st.line);
                if (!binding_.emplace(t[1], r).second) fail(ErrorKind::DuplicateId, "'" + t[1] + "' bound twice", st.line);
                bind_line_.emplace(t[1], st.line);
            } else if (kw == "var") {
                if (t.size() != 2) fail(ErrorKind::SyntaxError, "expected 'var <id>'", st.line);
                declared_vars_.emplace(t[1], i);
            } else if (kw == "gate") {
                if (t.size() < 3) fail(ErrorKind::SyntaxError, "expected 'gate <id> add|mul ...'", st.line);
                std::size_t op = (t[2] == "=") ? 3 : 2;
                if (op >= t.size()) fail(ErrorKind::SyntaxError, "missing gate operator", st.line);
                GateDef def{i, {}};
                if (t[op] == "add") {
                    for (std::size_t k = op + 2; k < t.size(); k += 2) def.refs.push_back(t[k]);
                } else if (t[op] == "mul") {
                    for (std::size_t k = op + 1; k < t.size(); ++k) def.refs.push_back(t[k]);
                } else {
                    fail(ErrorKind::SyntaxError, "unknown gate operator '" + t[op] + "'", st.line);
                }
                gates_.emplace(t[1], std::move(def));
            } else if (kw == "out") {
                if (t.size() != 2) fail(ErrorKind::SyntaxError, "expected 'out <id>'", st.line);
                if (out_) fail(ErrorKind::SyntaxError, "more than one 'out' statement", st.line);
                out_ = t[1];
                out_line_ = st.line;
            } else {
                fail(ErrorKind::SyntaxError, "unknown statement '" + kw + "'", st.line);
            }
        }
    }

    bool reaches(const std::string& from, const std::string& target) const {
        std::set<std::string> seen;
        std::vector<std::string> stack{from};
        while (!stack.empty()) {
            std::string cur = std::move(stack.back());
            stack.pop_back();
            if (cur == target) return true;
            if (!seen.insert(cur).second) continue;
            auto it = gates_.find(cur);
            if (it == gates_.end()) continue;
            for (const auto& r : it->second.refs) stack.push_back(r);
        }
        return false;
    }

    NodeId resolve(const std::string& ref, const std::string& current, std::size_t line) {
        if (ref == kNegOneId) return builder_.neg_one();
        if (auto it = defined_.find(ref); it != defined_.end()) return it->second;
        if (ref == current) fail(ErrorKind::CycleDetected, "'" + current + "' refers to itself", line);
        if (gates_.count(ref)) {
            if (reaches(ref, current)) fail(ErrorKind::CycleDetected, "cycle through '" + current + "' and '" + ref + "'", line);
            fail(ErrorKind::SyntaxError, "'" + ref + "' used before its definition", line);
        }
        if (declared_vars_.count(ref)) fail(ErrorKind::SyntaxError, "'" + ref + "' used before its declaration", line);
        if (binding_.count(ref)) {
            expect_identifier(ref, line);
            NodeId id = builder_.var(ref);
            defined_.emplace(ref, id);
            return id;
        }
        fail(ErrorKind::UnboundVariable, ref, line);
    }

    void define(const std::string& id, std::size_t line) {
        expect_identifier(id, line);
        if (id == kNegOneId) fail(ErrorKind::SyntaxError, "'neg1' is reserved for the -1 leaf", line);
        if (defined_.count(id)) fail(ErrorKind::DuplicateId, id, line);
    }

    void process(std::size_t index) {
        const auto& st = statements_[index];
        const auto& t = st.tokens;
        if (t[0] == "var") {
            define(t[1], st.line);
            if (declared_vars_.at(t[1]) != index || gates_.count(t[1])) fail(ErrorKind::DuplicateId, t[1], st.line);
            defined_.emplace(t[1], builder_.var(t[1]));
        } else if (t[0] == "gate") {
            const std::string& id = t[1];
            define(id, st.line);
            if (gates_.at(id).statement != index) fail(ErrorKind::DuplicateId, id, st.line);
            std::size_t op = (t[2] == "=") ? 3 : 2;
            NodeId node;
            if (t[op] == "add") {
                if (t.size() == op + 1 || (t.size() - op - 1) % 2 != 0) {
                    fail(ErrorKind::SyntaxError, "add expects one or more '<weight> <input>' pairs", st.line);
                }
                std::vector<std::pair<BigInt, NodeId>> terms;
                for (std::size_t k = op + 1; k < t.size(); k += 2) {
                    BigInt w;
                    if (!parse_decimal(t[k], w)) fail(ErrorKind::SyntaxError, "bad weight '" + t[k] + "'", st.line);
                    terms.emplace_back(std::move(w), resolve(t[k + 1], id, st.line));
                }
                node = builder_.add(std::move(terms), id);
            } else {
                if (t.size() < op + 3) fail(ErrorKind::SyntaxError, "mul expects at least two inputs", st.line);
                std::vector<NodeId> inputs;
                for (std::size_t k = op + 1; k < t.size(); ++k) inputs.push_back(resolve(t[k], id, st.line));
                node = builder_.mul(std::move(inputs), id);
            }
            defined_.emplace(id, node);
        }
    }

    Instance finish() {
        if (!out_) {
            std::size_t last = statements_.empty() ? 1 : statements_.back().line;
            fail(ErrorKind::SyntaxError, "missing 'out' statement", last);
        }
        NodeId output = resolve(*out_, "", out_line_);
        for (const auto& [name, line] : bind_line_) {
            auto it = defined_.find(name);
            if (it == defined_.end()) fail(ErrorKind::SyntaxError, "binding for unknown variable '" + name + "'", line);
            if (gates_.count(name)) fail(ErrorKind::SyntaxError, "'" + name + "' is a gate, not a variable", line);
        }
        Circuit circuit = std::move(builder_).build(output);
        for (const auto& name : circuit.variables()) {
            if (!binding_.count(name)) {
                const auto line = statements_[declared_vars_.at(name)].line;
                throw Error(ErrorKind::UnboundVariable, name, line);
            }
        }
        return Instance{std::move(circuit), std::move(binding_)};
    }

    std::vector<Statement> statements_;
    RadicalBinding binding_;
    std::map<std::string, std::size_t, std::less<>> bind_line_;
    std::map<std::string, std::size_t, std::less<>> declared_vars_;
    std::map<std::string, GateDef, std::less<>> gates_;
    std::map<std::string, NodeId, std::less<>> defined_;
    std::optional<std::string> out_;
    std::size_t out_line_ = 0;
    CircuitBuilder builder_;
};

}  // namespace

Instance parse_circuit(std::string_view text) { return Parser(text).run(); }

std::string print_circuit(const Circuit& circuit, const RadicalBinding& binding) {
    std::ostringstream os;
    const auto& nodes = circuit.nodes();
    for (const auto& node : nodes) {
        if (std::holds_alternative<VarLeaf>(node.op)) os << "var " << node.id << '\n';
    }
    for (const auto& node : nodes) {
        if (const auto* add = std::get_if<AddGate>(&node.op)) {
            os << "gate " << node.id << " add";
            for (const auto& [w, in] : add->terms) os << ' ' << w.get_str() << ' ' << nodes[in].id;
            os << '\n';
        } else if (const auto* mul = std::get_if<MulGate>(&node.op)) {
            os << "gate " << node.id << " mul";
            for (NodeId in : mul->inputs) os << ' ' << nodes[in].id;
            os << '\n';
        }
    }
    os << "out " << nodes[circuit.output()].id << '\n';
    for (const auto& name : circuit.variables()) {
        auto it = binding.find(name);
        if (it == binding.end()) continue;
        os << "bind " << name << ' ' << it->second.degree.get_str() << ' ' << it->second.radicand.get_str() << '\n';
    }
    return os.str();
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
    const auto& na = a.nodes();
    const auto& nb = b.nodes();
    if (na.size() != nb.size()) return false;
    if (na[a.output()].id != nb[b.output()].id) return false;
    for (const auto& node : na) {
        auto other_id = b.find(node.id);
        if (!other_id) return false;
        const Node& other = nb[*other_id];
        if (node.op.index() != other.op.index()) return false;
        if (const auto* add = std::get_if<AddGate>(&node.op)) {
            const auto& oadd = std::get<AddGate>(other.op);
            if (add->terms.size() != oadd.terms.size()) return false;
            for (std::size_t k = 0; k < add->terms.size(); ++k) {
                if (add->terms[k].first != oadd.terms[k].first) return false;
                if (na[add->terms[k].second].id != nb[oadd.terms[k].second].id) return false;
            }
        } else if (const auto* mul = std::get_if<MulGate>(&node.op)) {
            const auto& omul = std::get<MulGate>(other.op);
            if (mul->inputs.size() != omul.inputs.size()) return false;
            for (std::size_t k = 0; k < mul->inputs.size(); ++k) {
                if (na[mul->inputs[k]].id != nb[omul.inputs[k]].id) return false;
            }
        }
    }
    return true;
}

std::size_t circuit_size(const Circuit& circuit) { return circuit.nodes().size(); }

BigInt circuit_degree(const Circuit& circuit) {
    const auto& nodes = circuit.nodes();
    std::vector<BigInt> degree(nodes.size());
    for (NodeId i = 0; i < nodes.size(); ++i) {
        if (const auto* add = std::get_if<AddGate>(&nodes[i].op)) {
            BigInt best = 0;
            for (const auto& term : add->terms) best = std::max(best, degree[term.second]);
            degree[i] = best;
        } else if (const auto* mul = std::get_if<MulGate>(&nodes[i].op)) {
            BigInt sum = 0;
            for (NodeId in : mul->inputs) sum += degree[in];
            degree[i] = sum;
        } else {
            degree[i] = 1;
        }
    }
    return degree[circuit.output()];
}

// ---------------------------------------------------------------------------
// Rings
// ---------------------------------------------------------------------------

PrimeField::PrimeField(BigInt p) : p_(std::move(p)) {
    if (p_ < 2) throw Error(ErrorKind::InvalidModulus, "field modulus must be >= 2, got " + to_decimal(p_));
}

namespace {

// Decimal digits of |v| (exact).
bool exceeds_digits(const BigInt& v, std::size_t cap) {
    const std::size_t estimate = mpz_sizeinbase(v.get_mpz_t(), 10);  // exact or one too large
    if (estimate <= cap) return false;
    if (estimate > cap + 1) return true;
    BigInt limit;
    mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(cap));
    return abs(v) >= limit;
}

}  // namespace

BigInt IntegerRing::checked(BigInt v) const {
    if (exceeds_digits(v, digit_cap_)) {
        throw Error(ErrorKind::DigitCapExceeded, "intermediate value exceeds " + std::to_string(digit_cap_) + " digits");
    }
    return v;
}

BigInt IntegerRing::mul(const BigInt& x, const BigInt& y) const {
    // Refuse before multiplying when the product is certainly too long.
    const double bits = static_cast<double>(mpz_sizeinbase(x.get_mpz_t(), 2) + mpz_sizeinbase(y.get_mpz_t(), 2));
    if (bits - 2 > (static_cast<double>(digit_cap_) + 1) * std::log2(10.0)) {
        throw Error(ErrorKind::DigitCapExceeded, "product exceeds " + std::to_string(digit_cap_) + " digits");
    }
    return checked(x * y);
}

BigInt eval_exact(const Circuit& circuit, const std::map<std::string, BigInt, std::less<>>& assignment,
                  std::size_t digit_cap) {
    return eval(circuit, assignment, IntegerRing(digit_cap));
}

}  // namespace rit
