#pragma once

// Command-line front end. run_cli is the whole program minus process setup,
// so tests can drive it with in-memory streams.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rit {

enum class Mode { Auto, TwoRit, Search, Oracle };

struct RunConfig {
    Mode mode = Mode::Auto;
    std::uint64_t seed = 0;
    std::string prime_cap = "16777216";
    std::uint64_t budget = 1000000;
    std::uint64_t trials = 20;
    std::optional<std::uint64_t> max_attempts;
    std::uint64_t basis_cap = 1000000;
    std::uint64_t digit_cap = 1000000;
    bool json = false;
    bool explain = false;
};

/// Exit codes: 0 zero, 3 nonzero, 4 unknown or refused, 2 usage or input error.
inline constexpr int kExitZero = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonZero = 3;
inline constexpr int kExitUnknown = 4;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rit
