#include "rit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rit/certificate.hpp"
#include "rit/error.hpp"
#include "rit/field_oracle.hpp"
#include "rit/numtheory.hpp"
#include "rit/reduction.hpp"
#include "rit/two_rit.hpp"

namespace rit {

namespace {

using Json = nlohmann::ordered_json;

struct Outcome {
    int code;
    Json json;
    std::string text;
};

std::string read_input(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    buf << in.rdbuf();
    return buf.str();
}

BigInt parse_big(const std::string& text, const char* what) {
    BigInt v;
    if (!parse_decimal(text, v)) throw Error(ErrorKind::InvalidInput, std::string("bad ") + what + ": '" + text + "'");
    return v;
}

std::vector<BigInt> parse_list(const std::string& text, const char* what) {
    std::vector<BigInt> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_big(item, what));
    return out;
}

Json decimal_list(const std::vector<BigInt>& values) {
    Json arr = Json::array();
    for (const auto& v : values) arr.push_back(to_decimal(v));
    return arr;
}

Json optional_decimal(const std::optional<BigInt>& v) { return v ? Json(to_decimal(*v)) : Json(nullptr); }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

CanonicalInstance load(const std::string& path) {
    Instance parsed = parse_circuit(read_input(path));
    return normalize_instance(parsed.circuit, parsed.binding);
}

Json witness_json(const FieldElement& w) {
    Json arr = Json::array();
    for (const auto& [mono, c] : w.terms()) arr.push_back(Json::array({Json(mono), to_decimal(c)}));
    return arr;
}

std::string witness_text(const FieldElement& w) {
    std::string s;
    for (const auto& [mono, c] : w.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + to_decimal(c) + ")";
        for (std::size_t j = 0; j < mono.size(); ++j) {
            if (mono[j] != 0) s += "*y" + std::to_string(j) + "^" + std::to_string(mono[j]);
        }
    }
    return s.empty() ? "0" : s;
}

bool two_rit_eligible(const CanonicalInstance& inst) {
    return std::all_of(inst.radicals.begin(), inst.radicals.end(),
                       [](const CanonicalRadical& r) { return r.degree == 2 && is_probable_prime(r.radicand); });
}

// Report skeleton shared by every `check` mode.
Json report_json(const RunConfig& cfg, std::string_view mode) {
    Json j;
    j["mode"] = mode;
    j["verdict"] = "Unknown";
    j["prime"] = nullptr;
    j["roots"] = Json::array();
    j["trials"] = 0;
    j["seed"] = std::to_string(cfg.seed);
    j["flags"] = Json::array();
    return j;
}

Outcome from_oracle(const OracleResult& res, Json j) {
    Outcome o{kExitUnknown, std::move(j), {}};
    switch (res.kind) {
        case OracleResult::Kind::Zero:
            o.code = kExitZero;
            o.json["verdict"] = "Zero";
            o.text = "Zero (exact)";
            break;
        case OracleResult::Kind::NonZero:
            o.code = kExitNonZero;
            o.json["verdict"] = "NonZero";
            o.json["witness"] = witness_json(*res.witness);
            o.text = "NonZero (exact): value = " + witness_text(*res.witness);
            break;
        case OracleResult::Kind::Infeasible:
            o.json["verdict"] = "Infeasible";
            o.json["reason"] = res.reason;
            o.text = "Infeasible: " + res.reason;
            break;
    }
    return o;
}

Outcome from_certificate(const Certificate& cert, const CanonicalInstance& inst, Json j) {
    const Verdict v = verify_certificate(inst, cert);
    j["verdict"] = "NonZero";
    j["prime"] = to_decimal(cert.prime);
    j["roots"] = decimal_list(cert.roots);
    j["value"] = to_decimal(v.value);
    std::string text = "NonZero: certificate p = " + to_decimal(cert.prime) + ", roots [";
    for (std::size_t i = 0; i < cert.roots.size(); ++i) text += (i ? ", " : "") + to_decimal(cert.roots[i]);
    text += "], value " + to_decimal(v.value) + " mod p";
    return Outcome{kExitNonZero, std::move(j), std::move(text)};
}

OracleCaps caps_of(const RunConfig& cfg) { return OracleCaps{cfg.basis_cap, static_cast<std::size_t>(cfg.digit_cap)}; }

Outcome run_two_rit(const CanonicalInstance& inst, const RunConfig& cfg, std::string_view mode) {
    if (!two_rit_eligible(inst)) {
        throw Error(ErrorKind::InvalidInput, "two-rit mode needs square roots of distinct primes after reduction");
    }
    std::vector<BigInt> radicands;
    for (const auto& r : inst.radicals) radicands.push_back(r.radicand);
    TwoRitConfig tc;
    tc.seed = cfg.seed;
    tc.trials = cfg.trials;
    tc.max_attempts = cfg.max_attempts;
    const Report rep = two_rit_decide(inst.circuit, radicands, tc);
    Json j = report_json(cfg, mode);
    j["verdict"] = to_string(rep.verdict);
    j["prime"] = optional_decimal(rep.prime);
    j["roots"] = decimal_list(rep.roots);
    j["trials"] = rep.trials;
    j["flags"] = rep.flags;
    j["value"] = optional_decimal(rep.value);
    j["evaluations"] = rep.evaluations;
    Outcome o{kExitUnknown, std::move(j), {}};
    std::string text = "two-rit: " + std::string(to_string(rep.verdict));
    if (rep.verdict == Decision::NonZero) {
        o.code = kExitNonZero;
        text += " (p = " + to_decimal(*rep.prime) + ", value " + to_decimal(*rep.value) + ", trial " +
                std::to_string(*rep.witness_trial) + ")";
    } else if (rep.verdict == Decision::Zero) {
        o.code = kExitZero;
        text += " (" + std::to_string(rep.evaluations) + " evaluations, all zero)";
    } else {
        text += " (no prime found)";
    }
    for (const auto& f : rep.flags) text += " [" + f + "]";
    o.text = std::move(text);
    return o;
}

Outcome cmd_check(const std::string& file, const RunConfig& cfg) {
    const CanonicalInstance inst = load(file);
    const BigInt cap = parse_big(cfg.prime_cap, "prime cap");
    switch (cfg.mode) {
        case Mode::TwoRit: return run_two_rit(inst, cfg, "two-rit");
        case Mode::Oracle: return from_oracle(oracle_is_zero(inst, caps_of(cfg)), report_json(cfg, "oracle"));
        case Mode::Search: {
            if (auto cert = search_certificate(inst, cap, cfg.budget)) {
                return from_certificate(*cert, inst, report_json(cfg, "search"));
            }
            // No certificate: only the exact oracle can still decide.
            Outcome o = from_oracle(oracle_is_zero(inst, caps_of(cfg)), report_json(cfg, "search"));
            o.json["flags"].push_back("oracle-fallback");
            o.text += " [no certificate below cap; oracle fallback]";
            return o;
        }
        case Mode::Auto: {
            if (two_rit_eligible(inst)) return run_two_rit(inst, cfg, "auto");
            Outcome o = from_oracle(oracle_is_zero(inst, caps_of(cfg)), report_json(cfg, "auto"));
            if (o.code != kExitUnknown) return o;
            if (auto cert = search_certificate(inst, cap, cfg.budget)) {
                Outcome s = from_certificate(*cert, inst, report_json(cfg, "auto"));
                s.json["flags"].push_back("search-fallback");
                return s;
            }
            if (numeric_interval_eval(inst, 256) == IntervalVerdict::NonZero) {
                o.code = kExitNonZero;
                o.json["verdict"] = "NonZero";
                o.json["flags"].push_back("interval");
                o.text = "NonZero (interval enclosure excludes 0)";
            }
            return o;
        }
    }
    return Outcome{kExitUsage, {}, {}};
}

Outcome cmd_verify(const std::string& file, const std::string& prime, const std::string& roots) {
    const CanonicalInstance inst = load(file);
    const Certificate cert{parse_big(prime, "prime"), parse_list(roots, "root")};
    const Verdict v = verify_certificate(inst, cert);
    Json j;
    j["verdict"] = to_string(v.kind);
    j["prime"] = to_decimal(cert.prime);
    j["roots"] = decimal_list(cert.roots);
    j["value"] = v.kind == Verdict::Kind::Invalid ? Json(nullptr) : Json(to_decimal(v.value));
    j["reason"] = v.kind == Verdict::Kind::Invalid ? Json(v.reason) : Json(nullptr);
    std::string text(to_string(v.kind));
    if (v.kind == Verdict::Kind::Invalid) {
        text += ": " + v.reason;
    } else {
        text += ": value " + to_decimal(v.value) + " mod " + to_decimal(cert.prime);
    }
    return Outcome{v.kind == Verdict::Kind::NonZeroWitnessed ? kExitNonZero : kExitUnknown, std::move(j), text};
}

Outcome cmd_witness(const std::string& file, const RunConfig& cfg) {
    const CanonicalInstance inst = load(file);
    SearchLog log;
    auto cert = search_certificate(inst, parse_big(cfg.prime_cap, "prime cap"), cfg.budget, &log);
    Json j;
    j["found"] = cert.has_value();
    j["prime"] = cert ? Json(to_decimal(cert->prime)) : Json(nullptr);
    j["roots"] = cert ? decimal_list(cert->roots) : Json::array();
    j["primes_examined"] = log.primes_examined;
    j["zero_primes"] = decimal_list(log.zero_primes);
    if (!cert) {
        return Outcome{kExitUnknown, std::move(j),
                       "no certificate (" + std::to_string(log.primes_examined) + " primes examined)"};
    }
    Outcome o = from_certificate(*cert, inst, {});
    for (auto& [k, v] : o.json.items()) j[k] = v;
    o.json = std::move(j);
    return o;
}

Outcome cmd_reduce(const std::string& file) {
    const CanonicalInstance inst = load(file);
    const std::string text = print_circuit(inst.circuit, inst.binding());
    Json j;
    j["circuit"] = text;
    Json rads = Json::array();
    for (std::size_t i = 0; i < inst.radicals.size(); ++i) {
        rads.push_back({{"var", inst.circuit.variables()[i]},
                        {"degree", to_decimal(inst.radicals[i].degree)},
                        {"radicand", to_decimal(inst.radicals[i].radicand)}});
    }
    j["radicals"] = rads;
    Json prov = Json::array();
    for (const auto& p : inst.provenance) {
        prov.push_back({{"var", p.variable},
                        {"degree", to_decimal(p.original.degree)},
                        {"radicand", to_decimal(p.original.radicand)},
                        {"constant", to_decimal(p.constant)},
                        {"exponents", decimal_list(p.exponents)}});
    }
    j["provenance"] = prov;
    return Outcome{kExitZero, std::move(j), text};
}

Outcome cmd_oracle(const std::string& file, const RunConfig& cfg) {
    const CanonicalInstance inst = load(file);
    Outcome o = from_oracle(oracle_is_zero(inst, caps_of(cfg)), Json::object());
    if (!o.json.contains("witness")) o.json["witness"] = nullptr;
    if (!o.json.contains("reason")) o.json["reason"] = nullptr;
    return o;
}

Outcome cmd_density(const std::string& radicands, const std::string& limit_text) {
    const auto rads = parse_list(radicands, "radicand");
    const BigInt limit = parse_big(limit_text, "limit");
    const ProgressionSpec spec = build_progression(rads, limit);
    const DensityResult d = density_experiment(spec, limit);
    Json j;
    j["radicands"] = decimal_list(rads);
    j["modulus"] = to_decimal(spec.modulus);
    j["first_term"] = to_decimal(spec.first_term);
    j["limit"] = to_decimal(limit);
    j["members"] = to_decimal(d.members);
    j["primes_found"] = d.primes_found;
    j["dirichlet_estimate"] = d.dirichlet_estimate;
    j["flags"] = spec.radicand_two_override ? Json::array({"radicand-2-override"}) : Json::array();
    std::ostringstream text;
    text << "progression " << spec.modulus << "n + " << spec.first_term << ": " << d.primes_found << " primes among "
         << d.members << " members <= " << limit << " (estimate " << d.dirichlet_estimate << ")";
    return Outcome{kExitZero, std::move(j), text.str()};
}

void print_explain(std::ostream& os, const RunConfig& cfg) {
    os << "Bounds and desk-scale substitutions\n"
       << "  certificate prime bound:  p <= 2^(4 s^3) for a circuit of size s\n"
       << "  search cap in use:        " << cfg.prime_cap << " (primes p = d k + 1, d = lcm of degrees)\n"
       << "  progression count:        pi(x; 8A, b+1) ~ x / (phi(8A) ln x)\n"
       << "  sampling bound B:         max(2^40, smallest power of two above (8A)^3) instead of 2^(5 k^3)\n"
       << "  trials / attempts:        " << cfg.trials << " trials, "
       << (cfg.max_attempts ? std::to_string(*cfg.max_attempts) : std::string("512 ceil(ln B)")) << " draws each\n"
       << "  radicand 2:               progression 1 mod 8 with Tonelli-Shanks roots\n"
       << "  primality:                Miller-Rabin, 40 rounds (certificates verify with high probability)\n";
}

Outcome error_outcome(const Error& e) {
    Json j;
    j["error"] = to_string(e.kind());
    j["line"] = e.line() ? Json(e.line()) : Json(nullptr);
    j["message"] = e.detail();
    return Outcome{kExitUsage, std::move(j), std::string("error: ") + e.what()};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Zero testing for arithmetic circuits over real radicals", "ritcheck"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.add_flag("--json", cfg.json, "Machine-readable output");
    app.add_option("--seed", cfg.seed, "Seed for randomized modes");
    app.add_flag("--explain", cfg.explain, "Print the bounds and substitutions in use");

    std::string file;
    std::string prime;
    std::string roots;
    std::string radicands;
    std::string limit;
    std::string mode = "auto";

    auto add_caps = [&](CLI::App* sub) {
        sub->add_option("--basis-cap", cfg.basis_cap, "Largest basis the exact oracle accepts");
        sub->add_option("--digit-cap", cfg.digit_cap, "Longest coefficient (decimal digits) the oracle accepts");
    };
    auto add_search = [&](CLI::App* sub) {
        sub->add_option("--prime-cap", cfg.prime_cap, "Largest prime tried by certificate search");
        sub->add_option("--budget", cfg.budget, "Most primes examined by certificate search");
    };

    CLI::App* check = app.add_subcommand("check", "Decide whether the circuit is zero");
    check->add_option("file", file, "Circuit file ('-' for stdin)")->required();
    check->add_option("--mode", mode, "auto, two-rit, search or oracle")
        ->check(CLI::IsMember({"auto", "two-rit", "search", "oracle"}));
    check->add_option("--trials", cfg.trials, "Two-rit trials");
    check->add_option("--max-attempts", cfg.max_attempts, "Draws per two-rit trial");
    add_caps(check);
    add_search(check);

    CLI::App* verify = app.add_subcommand("verify", "Check a certificate (p, roots) against the reduced instance");
    verify->add_option("file", file, "Circuit file")->required();
    verify->add_option("--prime", prime, "Prime p")->required();
    verify->add_option("--roots", roots, "Comma-separated roots mod p, one per reduced radical")->required();

    CLI::App* witness = app.add_subcommand("witness", "Search for a certificate");
    witness->add_option("file", file, "Circuit file")->required();
    add_search(witness);

    CLI::App* reduce = app.add_subcommand("reduce", "Print the canonical form");
    reduce->add_option("file", file, "Circuit file")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "Exact zero test in the quotient ring");
    oracle->add_option("file", file, "Circuit file")->required();
    add_caps(oracle);

    CLI::App* density = app.add_subcommand("density", "Count primes in the progression");
    density->add_option("--radicands", radicands, "Comma-separated distinct primes")->required();
    density->add_option("--limit", limit, "Upper limit (at most 10^9)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : kExitUsage;
    }
    if (mode == "two-rit") cfg.mode = Mode::TwoRit;
    if (mode == "search") cfg.mode = Mode::Search;
    if (mode == "oracle") cfg.mode = Mode::Oracle;

    const bool any = app.get_subcommands().size() > 0;
    if (cfg.explain) print_explain(any ? err : out, cfg);
    if (!any) {
        if (!cfg.explain) out << app.help();
        return 0;
    }

    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        if (check->parsed()) {
            o = cmd_check(file, cfg);
            o.json["timings_ms"] = elapsed_ms(start);
        } else if (verify->parsed()) {
            o = cmd_verify(file, prime, roots);
        } else if (witness->parsed()) {
            o = cmd_witness(file, cfg);
        } else if (reduce->parsed()) {
            o = cmd_reduce(file);
        } else if (oracle->parsed()) {
            o = cmd_oracle(file, cfg);
        } else {
            o = cmd_density(radicands, limit);
        }
    } catch (const Error& e) {
        o = error_outcome(e);
    }
    if (cfg.json) {
        out << o.json.dump(2) << '\n';
    } else if (o.code == kExitUsage) {
        err << o.text << '\n';
    } else {
        out << o.text << (o.text.ends_with('\n') ? "" : "\n");
    }
    return o.code;
}

}  // namespace rit
