#include "rit/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "rit/error.hpp"

namespace rit {

// ---------------------------------------------------------------------------
// error.hpp / bigint.hpp support
// ---------------------------------------------------------------------------

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidModulus: return "InvalidModulus";
        case ErrorKind::InvalidPrime: return "InvalidPrime";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NoSolution: return "NoSolution";
        case ErrorKind::NotAResidue: return "NotAResidue";
        case ErrorKind::WrongResidueClass: return "WrongResidueClass";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::UnboundVariable: return "UnboundVariable";
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::InvalidRadical: return "InvalidRadical";
        case ErrorKind::DigitCapExceeded: return "DigitCapExceeded";
        case ErrorKind::ExponentNotRepresentable: return "ExponentNotRepresentable";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::MissingRoot: return "MissingRoot";
        case ErrorKind::DuplicateRadicand: return "DuplicateRadicand";
        case ErrorKind::NonPrimeRadicand: return "NonPrimeRadicand";
        case ErrorKind::EmptyProgression: return "EmptyProgression";
        case ErrorKind::LimitTooLarge: return "LimitTooLarge";
    }
    return "Unknown";
}

namespace {

std::string format_error(ErrorKind kind, const std::string& detail, std::size_t line) {
    std::string msg(to_string(kind));
    if (line != 0) msg += " (line " + std::to_string(line) + ")";
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail, std::size_t line)
    : std::runtime_error(format_error(kind, detail, line)), kind_(kind), line_(line), detail_(detail) {}

bool parse_decimal(std::string_view text, BigInt& out) {
    if (text.empty()) return false;
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) return false;
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return out.set_str(digits, 10) == 0;
}

std::uint64_t to_u64(const BigInt& v) {
    if (!fits_u64(v)) throw Error(ErrorKind::TooLarge, "value does not fit in 64 bits: " + to_decimal(v));
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

BigInt from_u64(std::uint64_t v) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return out;
}

BigInt uniform_upto(Rng& rng, const BigInt& bound) {
    if (sgn(bound) <= 0) return 0;
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
    const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
    std::vector<std::uint64_t> buf(words);
    BigInt candidate;
    for (;;) {
        for (auto& w : buf) w = rng();
        buf.back() &= top_mask;
        mpz_import(candidate.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
        if (candidate <= bound) return candidate;
    }
}

// ---------------------------------------------------------------------------
// 64-bit helpers
// ---------------------------------------------------------------------------

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod64(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) result = mulmod64(result, base, m);
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    return result;
}

constexpr std::array<u64, 12> kWitnesses64 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin_u64(u64 n) {
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses64) {
        if (a % n == 0) continue;
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool miller_rabin_witness(const BigInt& n, const BigInt& a, const BigInt& d, unsigned s) {
    BigInt x;
    const BigInt n_minus_1 = n - 1;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) return false;
    for (unsigned r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == n_minus_1) return false;
    }
    return true;
}

// Cheap rejection before Miller-Rabin.
constexpr std::array<unsigned, 24> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                                   41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

void require_modulus(const BigInt& m) {
    if (m < 2) throw Error(ErrorKind::InvalidModulus, "modulus must be >= 2, got " + to_decimal(m));
}

void require_odd_prime(const BigInt& p) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p)) {
        throw Error(ErrorKind::InvalidPrime, "expected an odd prime, got " + to_decimal(p));
    }
}

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& m) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

int jacobi(const BigInt& a, const BigInt& n) { return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t()); }

// Square root of a nonzero residue ar mod an odd prime p; the caller has
// checked both. Returns the smaller of the two roots.
BigInt sqrt_mod_prime(const BigInt& ar, const BigInt& p, Rng& rng) {
    BigInt q = p - 1;
    unsigned s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    BigInt z;
    do {
        z = uniform_upto(rng, p - 3) + 2;
    } while (jacobi(z, p) != -1);

    unsigned m = s;
    BigInt c = powm(z, q, p);
    BigInt t = powm(ar, q, p);
    BigInt r = powm(ar, (q + 1) / 2, p);
    while (t != 1) {
        unsigned i = 0;
        BigInt t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        BigInt b = c;
        for (unsigned j = 0; j + 1 < m - i; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    const BigInt other = p - r;
    return r < other ? r : other;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Residue mod_pow(const BigInt& base, const BigInt& exp, const BigInt& m) {
    require_modulus(m);
    if (sgn(exp) < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
    return Residue{powm(base, exp, m), m};
}

bool is_probable_prime(const BigInt& n, unsigned rounds) {
    if (n < 2) return false;
    for (unsigned q : kSmallPrimes) {
        if (n == q) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return false;
    }
    if (fits_u64(n)) return miller_rabin_u64(to_u64(n));

    BigInt d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses64) {
        if (miller_rabin_witness(n, from_u64(a), d, s)) return false;
    }
    // Further bases come from a generator seeded by n, keeping the test a
    // pure function of its arguments.
    Rng rng(mpz_get_ui(n.get_mpz_t()) ^ (mpz_sizeinbase(n.get_mpz_t(), 2) * 0x9e3779b97f4a7c15ULL));
    const BigInt span = n - 4;
    for (unsigned i = 0; i < rounds; ++i) {
        BigInt a = uniform_upto(rng, span) + 2;
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

int legendre(const BigInt& a, const BigInt& p) {
    require_odd_prime(p);
    const BigInt r = powm(mod_floor(a, p), (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

std::pair<BigInt, BigInt> crt_solve(const std::vector<std::pair<BigInt, BigInt>>& congruences) {
    if (congruences.empty()) throw Error(ErrorKind::InvalidInput, "empty congruence system");
    BigInt x = 0;
    BigInt modulus = 1;
    for (const auto& [residue, m] : congruences) {
        if (m < 1) throw Error(ErrorKind::InvalidModulus, "CRT modulus must be >= 1, got " + to_decimal(m));
        const BigInt r = mod_floor(residue, m);
        const BigInt g = gcd(modulus, m);
        const BigInt diff = r - x;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) {
            throw Error(ErrorKind::NoSolution, "inconsistent congruences modulo " + to_decimal(g));
        }
        const BigInt m_reduced = m / g;
        BigInt k = 0;
        if (m_reduced > 1) {
            BigInt inv;
            const BigInt step = mod_floor(modulus / g, m_reduced);
            mpz_invert(inv.get_mpz_t(), step.get_mpz_t(), m_reduced.get_mpz_t());
            k = mod_floor((diff / g) * inv, m_reduced);
        }
        x += modulus * k;
        modulus *= m_reduced;
        x = mod_floor(x, modulus);
    }
    return {x, modulus};
}

std::pair<Residue, Residue> pocklington_sqrt(const BigInt& a, const BigInt& p) {
    require_odd_prime(p);
    if (mpz_fdiv_ui(p.get_mpz_t(), 8) != 5) {
        throw Error(ErrorKind::WrongResidueClass, "Pocklington requires p = 5 (mod 8), got " + to_decimal(p));
    }
    const BigInt ar = mod_floor(a, p);
    if (ar == 0) return {Residue{0, p}, Residue{0, p}};
    if (legendre(ar, p) == -1) {
        throw Error(ErrorKind::NotAResidue, to_decimal(ar) + " is not a square modulo " + to_decimal(p));
    }
    const BigInt m = (p - 5) / 8;
    const BigInt s = powm(ar, 2 * m + 1, p);
    BigInt x;
    if (s == 1) {
        x = powm(ar, m + 1, p);
    } else {
        // s = -1: 2 is a non-residue for p = 5 (mod 8), so (4a)^(2m+1) = 1
        // and y = (4a)^(m+1) squares to 4a.
        const BigInt y = powm(4 * ar, m + 1, p);
        x = mpz_even_p(y.get_mpz_t()) ? BigInt(y / 2) : BigInt((p + y) / 2);
    }
    if (x * x % p != ar) throw std::logic_error("pocklington_sqrt: root check failed");
    const BigInt neg = x == 0 ? BigInt(0) : BigInt(p - x);
    return {Residue{x, p}, Residue{neg, p}};
}

Residue tonelli_shanks_sqrt(const BigInt& a, const BigInt& p, Rng& rng) {
    require_odd_prime(p);
    const BigInt ar = mod_floor(a, p);
    if (ar == 0) return Residue{0, p};
    if (jacobi(ar, p) != 1) {
        throw Error(ErrorKind::NotAResidue, to_decimal(ar) + " is not a square modulo " + to_decimal(p));
    }
    return Residue{sqrt_mod_prime(ar, p, rng), p};
}

std::vector<std::uint32_t> primes_upto(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

CoprimeBase factor_refine(const std::vector<BigInt>& inputs, std::uint64_t trial_limit) {
    for (const auto& a : inputs) {
        if (a < 2) throw Error(ErrorKind::InvalidInput, "factor_refine inputs must be >= 2, got " + to_decimal(a));
    }
    const auto small = primes_upto(static_cast<std::uint32_t>(std::min<std::uint64_t>(trial_limit, 0xffffffffu)));

    std::vector<BigInt> factors;
    std::vector<BigInt> cofactors;
    std::vector<bool> small_seen(small.size(), false);
    for (const auto& a : inputs) {
        BigInt rest = a;
        for (std::size_t i = 0; i < small.size() && rest > 1; ++i) {
            if (mpz_divisible_ui_p(rest.get_mpz_t(), small[i])) {
                small_seen[i] = true;
                do {
                    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), small[i]);
                } while (mpz_divisible_ui_p(rest.get_mpz_t(), small[i]));
            }
        }
        if (rest > 1) cofactors.push_back(rest);
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
        if (small_seen[i]) factors.emplace_back(static_cast<unsigned long>(small[i]));
    }

    // Refinement: splitting b and x along g = gcd(b, x) strictly shrinks
    // the product of outstanding numbers, so the loop terminates.
    std::vector<BigInt> base;
    for (const auto& c : cofactors) {
        std::vector<BigInt> todo{c};
        while (!todo.empty()) {
            BigInt x = std::move(todo.back());
            todo.pop_back();
            if (x == 1) continue;
            bool absorbed = false;
            for (std::size_t i = 0; i < base.size(); ++i) {
                const BigInt g = gcd(base[i], x);
                if (g == 1) continue;
                absorbed = true;
                if (g == base[i] && g == x) break;
                BigInt b = std::move(base[i]);
                base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
                todo.push_back(b / g);
                todo.push_back(g);
                todo.push_back(x / g);
                break;
            }
            if (!absorbed) base.push_back(std::move(x));
        }
    }
    factors.insert(factors.end(), base.begin(), base.end());
    std::sort(factors.begin(), factors.end());

    CoprimeBase out;
    out.factors = factors;
    out.exponents.reserve(inputs.size());
    for (const auto& a : inputs) {
        BigInt rest = a;
        std::vector<std::uint64_t> row(factors.size(), 0);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            row[j] = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), factors[j].get_mpz_t());
        }
        if (rest != 1) throw std::logic_error("factor_refine: reconstruction failed for " + to_decimal(a));
        out.exponents.push_back(std::move(row));
    }
    return out;
}

BigInt floor_root(const BigInt& m, std::uint64_t r) {
    if (r == 0) throw Error(ErrorKind::InvalidInput, "root index must be >= 1");
    if (sgn(m) < 0) throw Error(ErrorKind::InvalidInput, "floor_root of a negative number");
    if (m < 2 || r == 1) return m;
    const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    if (r >= bits) return 1;
    // Start above the root; Newton's step is monotone decreasing from there.
    BigInt x = 1;
    x <<= static_cast<mp_bitcnt_t>((bits + r - 1) / r);
    const BigInt rm1 = from_u64(r - 1);
    const BigInt rr = from_u64(r);
    BigInt xp;
    for (;;) {
        mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(r - 1));
        BigInt y = (rm1 * x + m / xp) / rr;
        if (y >= x) break;
        x = std::move(y);
    }
    return x;
}

std::optional<BigInt> integer_root(const BigInt& m, std::uint64_t r) {
    if (r == 0) throw Error(ErrorKind::InvalidInput, "root index must be >= 1");
    if (sgn(m) < 0) return std::nullopt;
    const BigInt c = floor_root(m, r);
    BigInt check;
    mpz_pow_ui(check.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(r));
    if (check == m) return c;
    return std::nullopt;
}

std::vector<BigInt> prime_divisors_small(const BigInt& n) {
    std::vector<BigInt> out;
    u64 rest = to_u64(n);
    if (rest < 2) return out;
    for (u64 q = 2; q * q <= rest; q += (q == 2 ? 1 : 2)) {
        if (rest % q == 0) {
            out.push_back(from_u64(q));
            while (rest % q == 0) rest /= q;
        }
    }
    if (rest > 1) out.push_back(from_u64(rest));
    return out;
}

Residue find_generator(const BigInt& p, const std::vector<BigInt>& factors_of_p_minus_1) {
    require_modulus(p);
    if (p == 2) return Residue{1, p};
    const BigInt order = p - 1;
    for (BigInt g = 2; g < p; ++g) {
        bool generator = true;
        for (const auto& q : factors_of_p_minus_1) {
            if (powm(g, order / q, p) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) return Residue{g, p};
    }
    throw Error(ErrorKind::InvalidPrime, "no generator modulo " + to_decimal(p));
}

std::uint64_t discrete_log_bsgs(const Residue& g, const Residue& h, const BigInt& p, std::uint64_t bound) {
    require_modulus(p);
    if (p > from_u64(bound)) {
        throw Error(ErrorKind::TooLarge, "prime " + to_decimal(p) + " exceeds the BSGS bound");
    }
    const u64 mod = to_u64(p);
    const u64 base = to_u64(mod_floor(g.value, p));
    const u64 target = to_u64(mod_floor(h.value, p));
    if (target == 0) throw Error(ErrorKind::InvalidInput, "discrete log of 0");
    if (mod == 2) return 0;
    const u64 order = mod - 1;
    const u64 steps = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(order))));

    std::unordered_map<u64, u64> baby;
    baby.reserve(static_cast<std::size_t>(steps) * 2);
    u64 cur = 1;
    for (u64 j = 0; j < steps; ++j) {
        baby.emplace(cur, j);
        cur = mulmod64(cur, base, mod);
    }
    const u64 giant = powmod64(base, order - (steps % order), mod);
    u64 gamma = target;
    for (u64 i = 0; i <= steps; ++i) {
        if (auto it = baby.find(gamma); it != baby.end()) return (i * steps + it->second) % order;
        gamma = mulmod64(gamma, giant, mod);
    }
    throw Error(ErrorKind::InvalidInput, "no discrete logarithm; is g a generator?");
}

std::optional<Residue> dth_root_modp(const BigInt& a, const BigInt& d, const BigInt& p,
                                     std::uint64_t brute_force_bound) {
    require_modulus(p);
    if (d < 1) throw Error(ErrorKind::InvalidInput, "root degree must be >= 1");
    const BigInt order = p - 1;
    if (!mpz_divisible_p(order.get_mpz_t(), d.get_mpz_t())) {
        throw Error(ErrorKind::WrongResidueClass, to_decimal(d) + " does not divide p - 1 = " + to_decimal(order));
    }
    const BigInt ar = mod_floor(a, p);
    if (ar == 0) return Residue{0, p};
    if (d == 1) return Residue{ar, p};
    if (powm(ar, order / d, p) != 1) return std::nullopt;

    if (p < from_u64(brute_force_bound)) {
        const u64 mod = to_u64(p);
        const u64 deg = to_u64(d);
        const u64 want = to_u64(ar);
        for (u64 x = 1; x < mod; ++x) {
            if (powmod64(x, deg, mod) == want) return Residue{from_u64(x), p};
        }
        throw std::logic_error("dth_root_modp: residue test passed but no root found");
    }

    BigInt root;
    if (d == 2) {
        Rng rng(0x5eedULL);
        root = sqrt_mod_prime(ar, p, rng);
    } else {
        const Residue g = find_generator(p, prime_divisors_small(order));
        const u64 e = discrete_log_bsgs(g, Residue{ar, p}, p);
        const u64 deg = to_u64(d);
        root = powm(g.value, from_u64(e / deg), p);
    }
    // Every root is root * zeta^k for the primitive d-th root of unity zeta.
    if (d > (std::uint64_t{1} << 26)) {
        throw Error(ErrorKind::TooLarge, "too many roots to scan for the smallest: d = " + to_decimal(d));
    }
    BigInt zeta;
    if (d == 2) {
        zeta = p - 1;
    } else {
        const Residue g = find_generator(p, prime_divisors_small(order));
        zeta = powm(g.value, order / d, p);
    }
    BigInt best = root;
    BigInt cur = root;
    const u64 count = to_u64(d);
    for (u64 k = 1; k < count; ++k) {
        cur = cur * zeta % p;
        if (cur < best) best = cur;
    }
    return Residue{best, p};
}

}  // namespace rit
