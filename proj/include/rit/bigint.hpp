#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rit {

using BigInt = mpz_class;

/// Seeded randomness source used wherever an operation is randomized.
using Rng = std::mt19937_64;

inline std::string to_decimal(const BigInt& v) { return v.get_str(10); }

/// Parses an optionally signed decimal integer. Returns false on malformed input.
bool parse_decimal(std::string_view text, BigInt& out);

/// Uniform draw from [0, bound]. Built from 64-bit words of `rng` so the
/// draw sequence depends only on the seed.
BigInt uniform_upto(Rng& rng, const BigInt& bound);

/// Non-negative remainder of `a` modulo `m` (m > 0).
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool fits_u64(const BigInt& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& v);
BigInt from_u64(std::uint64_t v);

/// splitmix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace rit
