#include <doctest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rit/cli.hpp"
#include "rit/circuit.hpp"

using namespace rit;
using Json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args, int* code = nullptr) {
    args.insert(args.begin(), "--json");
    const Run r = run(args);
    if (code) *code = r.code;
    return Json::parse(r.out);
}

class TempFile {
public:
    explicit TempFile(const std::string& text) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ritcheck_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".txt");
        std::ofstream(path_) << text;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

const char* kExample = "var x\ngate sq mul x x\ngate f add 1 sq 10 neg1\nout f\nbind x 2 5\n";
const char* kZero = "var x\ngate sq mul x x\ngate f add 1 sq 5 neg1\nout f\nbind x 2 5\n";

}  // namespace

TEST_CASE("check: worked example in search mode") {
    TempFile f(kExample);
    int code = 0;
    const Json j = run_json({"check", f.path(), "--mode", "search"}, &code);
    CHECK(code == kExitNonZero);
    CHECK(j["mode"] == "search");
    CHECK(j["verdict"] == "NonZero");
    CHECK(j["prime"] == "11");
    CHECK(j["roots"] == Json::array({"4"}));
    CHECK(j["value"] == "6");
    CHECK(j["seed"] == "0");
    CHECK(j["timings_ms"].is_number());
    CHECK(j["flags"].is_array());
    CHECK(j["trials"].is_number());
}

TEST_CASE("check: zero instance exits 0 in every mode") {
    TempFile f(kZero);
    for (const char* mode : {"auto", "two-rit", "search", "oracle"}) {
        int code = -1;
        const Json j = run_json({"check", f.path(), "--mode", mode}, &code);
        CHECK(code == kExitZero);
        CHECK(j["verdict"] == "Zero");
    }
    CHECK(run({"check", f.path()}).code == kExitZero);
}

TEST_CASE("check: auto mode picks two-rit for square roots of primes") {
    TempFile f("var x1\nvar x2\ngate p mul x1 x2\nout p\nbind x1 2 2\nbind x2 2 3\n");
    int code = 0;
    const Json j = run_json({"--seed", "5", "check", f.path()}, &code);
    CHECK(code == kExitNonZero);
    CHECK(j["mode"] == "auto");
    CHECK(j["verdict"] == "NonZero");
    CHECK(j["seed"] == "5");
    CHECK(j["flags"] == Json::array({"radicand-2-override"}));
    CHECK(j["prime"].is_string());

    TempFile cube("var x\nout x\nbind x 3 2\n");
    CHECK(run({"check", cube.path(), "--mode", "two-rit"}).code == kExitUsage);
    CHECK(run({"check", cube.path()}).code == kExitNonZero);
}

TEST_CASE("check: oracle caps") {
    TempFile f("var x\nvar y\ngate p mul x y\nout p\nbind x 1009 2\nbind y 1013 3\n");
    int code = 0;
    const Json j = run_json({"check", f.path(), "--mode", "oracle"}, &code);
    CHECK(code == kExitUnknown);
    CHECK(j["verdict"] == "Infeasible");
    CHECK(j["reason"].is_string());
    // d = 1009 * 1013 leaves few candidate primes below the cap; the
    // interval enclosure decides.
    const Json a = run_json({"check", f.path()}, &code);
    CHECK(code == kExitNonZero);
    CHECK(a["flags"] == Json::array({"interval"}));

    TempFile g("var x\nout x\nbind x 3 2\n");
    const Json s = run_json({"check", g.path(), "--basis-cap", "2"}, &code);
    CHECK(code == kExitNonZero);
    CHECK(s["flags"] == Json::array({"search-fallback"}));
    CHECK(s["prime"].is_string());
}

TEST_CASE("check: two-rit is reproducible") {
    TempFile f(
        "var a\nvar b\nvar c\ngate s add 1 a 2 b 3 c\ngate t mul s s\ngate u add 1 t 7 neg1\nout u\n"
        "bind a 2 3\nbind b 2 7\nbind c 2 11\n");
    for (const char* seed : {"0", "1", "18446744073709551615"}) {
        Json x = run_json({"--seed", seed, "check", f.path(), "--mode", "two-rit", "--trials", "3"});
        Json y = run_json({"--seed", seed, "check", f.path(), "--mode", "two-rit", "--trials", "3"});
        x.erase("timings_ms");
        y.erase("timings_ms");
        CHECK(x.dump() == y.dump());
        CHECK(x["seed"] == seed);
    }
}

TEST_CASE("verify") {
    TempFile f(kExample);
    int code = 0;
    Json j = run_json({"verify", f.path(), "--prime", "11", "--roots", "4"}, &code);
    CHECK(code == kExitNonZero);
    CHECK(j["verdict"] == "NonZeroWitnessed");
    CHECK(j["value"] == "6");
    j = run_json({"verify", f.path(), "--prime", "11", "--roots", "3"}, &code);
    CHECK(code == kExitUnknown);
    CHECK(j["verdict"] == "Invalid");
    CHECK(j["reason"] == "root check failed");
    j = run_json({"verify", f.path(), "--prime", "5", "--roots", "0"}, &code);
    CHECK(code == kExitUnknown);
    CHECK(j["verdict"] == "EvaluatesZero");
    CHECK(run({"verify", f.path(), "--prime", "eleven", "--roots", "4"}).code == kExitUsage);
    CHECK(run({"verify", f.path(), "--roots", "4"}).code == kExitUsage);
}

TEST_CASE("witness") {
    TempFile f(kExample);
    int code = 0;
    Json j = run_json({"witness", f.path(), "--prime-cap", "50"}, &code);
    CHECK(code == kExitNonZero);
    CHECK(j["found"] == true);
    CHECK(j["prime"] == "11");
    CHECK(j["zero_primes"] == Json::array({"5"}));
    TempFile z(kZero);
    j = run_json({"witness", z.path(), "--prime-cap", "1000"}, &code);
    CHECK(code == kExitUnknown);
    CHECK(j["found"] == false);
    CHECK(j["prime"].is_null());
}

TEST_CASE("reduce round-trips and is idempotent") {
    TempFile f("var x1\nvar x2\ngate p mul x1 x2\nout p\nbind x1 2 12\nbind x2 2 18\n");
    const Run first = run({"reduce", f.path()});
    REQUIRE(first.code == kExitZero);
    const Instance parsed = parse_circuit(first.out);
    CHECK(parsed.binding.size() == 2);
    TempFile g(first.out);
    const Run second = run({"reduce", g.path()});
    CHECK(second.code == kExitZero);
    CHECK(second.out == first.out);

    const Json j = run_json({"reduce", f.path()});
    CHECK(j["circuit"] == first.out.substr(0, first.out.size() - (first.out.ends_with("\n\n") ? 1 : 0)));
    CHECK(j["radicals"].size() == 2);
    CHECK(j["provenance"].size() == 2);
}

TEST_CASE("oracle subcommand") {
    TempFile f(kExample);
    int code = 0;
    const Json j = run_json({"oracle", f.path()}, &code);
    CHECK(code == kExitNonZero);
    CHECK(j["verdict"] == "NonZero");
    CHECK(j["witness"] == Json::array({Json::array({Json::array({0}), "-5"})}));
    TempFile z(kZero);
    CHECK(run({"oracle", z.path()}).code == kExitZero);
    CHECK(run({"oracle", f.path(), "--basis-cap", "1"}).code == kExitUnknown);
}

TEST_CASE("density") {
    int code = 0;
    const Json j = run_json({"density", "--radicands", "5", "--limit", "1000000"}, &code);
    CHECK(code == kExitZero);
    CHECK(j["modulus"] == "40");
    CHECK(j["first_term"] == "21");
    CHECK(j["members"] == "25000");
    CHECK(j["primes_found"].get<double>() > j["dirichlet_estimate"].get<double>() / 2);
    CHECK(j["primes_found"].get<double>() < j["dirichlet_estimate"].get<double>() * 2);
    const Json e = run_json({"density", "--radicands", "5", "--limit", "2000000000"}, &code);
    CHECK(code == kExitUsage);
    CHECK(e["error"] == "LimitTooLarge");
    CHECK(run({"density", "--radicands", "4", "--limit", "100"}).code == kExitUsage);
}

TEST_CASE("errors") {
    TempFile bad("var x\ngate g mul x y\nout g\nbind x 2 2\n");
    int code = 0;
    const Json j = run_json({"check", bad.path()}, &code);
    CHECK(code == kExitUsage);
    CHECK(j["error"] == "UnboundVariable");
    CHECK(j["line"] == 2);
    CHECK(j["message"].is_string());

    const Run text = run({"check", bad.path()});
    CHECK(text.code == kExitUsage);
    CHECK(text.out.empty());
    CHECK(text.err.find("UnboundVariable") != std::string::npos);

    CHECK(run({"check", "/nonexistent/circuit.txt"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"check", bad.path(), "--mode", "fast"}).code == kExitUsage);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("explain") {
    const Run r = run({"--explain"});
    CHECK(r.code == 0);
    CHECK(r.out.find("2^(4 s^3)") != std::string::npos);
    TempFile f(kZero);
    const Run c = run({"--explain", "--json", "check", f.path()});
    CHECK(c.err.find("2^(4 s^3)") != std::string::npos);
    CHECK(Json::parse(c.out)["verdict"] == "Zero");
}

TEST_CASE("process exit codes") {
    const char* exe = std::getenv("RITCHECK");
    if (!exe) return;
    TempFile f(kExample);
    TempFile z(kZero);
    auto status = [&](const std::string& args) {
        const int s = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("check " + f.path() + " --mode search") == kExitNonZero);
    CHECK(status("check " + z.path()) == kExitZero);
    CHECK(status("verify " + f.path() + " --prime 11 --roots 3") == kExitUnknown);
    CHECK(status("check /nonexistent") == kExitUsage);
}
