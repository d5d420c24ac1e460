#include "rit/two_rit.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rit/error.hpp"
#include "rit/numtheory.hpp"

namespace rit {

ProgressionSpec build_progression(const std::vector<BigInt>& radicands, const BigInt& bound) {
    ProgressionSpec spec;
    spec.radicands = radicands;
    spec.odd_product = 1;
    std::set<BigInt> seen;
    for (const auto& a : radicands) {
        if (!is_probable_prime(a)) throw Error(ErrorKind::NonPrimeRadicand, to_decimal(a) + " is not prime");
        if (!seen.insert(a).second) throw Error(ErrorKind::DuplicateRadicand, to_decimal(a) + " appears twice");
        if (a == 2) {
            spec.radicand_two_override = true;
        } else {
            spec.odd_product *= a;
        }
    }
    std::vector<std::pair<BigInt, BigInt>> system;
    system.emplace_back(spec.radicand_two_override ? 0 : 4, 8);
    for (const auto& a : radicands) {
        if (a != 2) system.emplace_back(0, a);
    }
    auto [b, modulus] = crt_solve(system);
    spec.offset = b;
    spec.modulus = modulus;
    spec.first_term = b + 1;
    spec.bound = bound;

    BigInt g;
    mpz_gcd(g.get_mpz_t(), spec.first_term.get_mpz_t(), spec.modulus.get_mpz_t());
    const unsigned long want8 = spec.radicand_two_override ? 1 : 5;
    bool ok = modulus == 8 * spec.odd_product && g == 1 && mpz_fdiv_ui(spec.first_term.get_mpz_t(), 8) == want8;
    for (const auto& a : radicands) ok = ok && (a == 2 || spec.first_term % a == 1);
    if (!ok) throw std::logic_error("progression invariants violated");
    return spec;
}

BigInt default_bound(const BigInt& odd_product) {
    const BigInt cube = 512 * odd_product * odd_product * odd_product;
    BigInt bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, 40);
    while (bound <= cube) bound *= 2;
    return bound;
}

std::uint64_t default_max_attempts(const BigInt& bound) {
    // ln B from the bit length and leading bits; exact enough for a ceiling.
    long exp2 = 0;
    const double mantissa = mpz_get_d_2exp(&exp2, bound.get_mpz_t());
    const double ln = std::log(mantissa) + static_cast<double>(exp2) * std::log(2.0);
    return 512 * static_cast<std::uint64_t>(std::ceil(std::max(ln, 1.0)));
}

std::optional<BigInt> sample_prime(const ProgressionSpec& spec, Rng& rng, std::uint64_t max_attempts) {
    if (spec.bound < spec.first_term) {
        throw Error(ErrorKind::EmptyProgression, "no progression member below " + to_decimal(spec.bound));
    }
    const BigInt top = (spec.bound - spec.first_term) / spec.modulus;
    for (std::uint64_t i = 0; i < max_attempts; ++i) {
        BigInt candidate = spec.modulus * uniform_upto(rng, top) + spec.first_term;
        if (is_probable_prime(candidate)) return candidate;
    }
    return std::nullopt;
}

std::string_view to_string(Decision d) noexcept {
    switch (d) {
        case Decision::Zero: return "Zero";
        case Decision::NonZero: return "NonZero";
        case Decision::Unknown: return "Unknown";
    }
    return "?";
}

Report two_rit_decide(const Circuit& circuit, const std::vector<BigInt>& radicands, const TwoRitConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    if (radicands.size() != circuit.variables().size()) {
        throw Error(ErrorKind::InvalidInput, "circuit has " + std::to_string(circuit.variables().size()) +
                                                 " variables but " + std::to_string(radicands.size()) + " radicands");
    }
    ProgressionSpec probe = build_progression(radicands, 0);
    const BigInt bound = cfg.bound ? *cfg.bound : default_bound(probe.odd_product);
    const ProgressionSpec spec = build_progression(radicands, bound);
    const std::uint64_t attempts = cfg.max_attempts ? *cfg.max_attempts : default_max_attempts(bound);

    Report report;
    report.seed = cfg.seed;
    if (spec.radicand_two_override) report.flags.emplace_back("radicand-2-override");

    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        ++report.trials;
        Rng rng(mix_seed(cfg.seed, trial));
        auto p = sample_prime(spec, rng, attempts);
        if (!p) continue;
        ++report.evaluations;
        const bool pocklington = !spec.radicand_two_override && mpz_fdiv_ui(p->get_mpz_t(), 8) == 5;
        std::vector<BigInt> roots;
        roots.reserve(radicands.size());
        for (const auto& a : radicands) {
            roots.push_back(pocklington ? pocklington_sqrt(a, *p).first.value : tonelli_shanks_sqrt(a, *p, rng).value);
        }
        PrimeField field(*p);
        BigInt value = eval_indexed(circuit, std::span<const BigInt>(roots), field);
        if (value != 0) {
            report.verdict = Decision::NonZero;
            report.prime = *p;
            report.roots = std::move(roots);
            report.value = std::move(value);
            report.witness_trial = trial;
            break;
        }
        if (!report.prime) {
            report.prime = *p;
            report.roots = std::move(roots);
            report.value = BigInt(0);
        }
    }
    if (report.verdict != Decision::NonZero) report.verdict = report.evaluations > 0 ? Decision::Zero : Decision::Unknown;
    report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

DensityResult density_experiment(const ProgressionSpec& spec, const BigInt& limit) {
    if (limit > from_u64(kDensityLimitMax)) {
        throw Error(ErrorKind::LimitTooLarge, "density limit " + to_decimal(limit) + " exceeds 10^9");
    }
    DensityResult result;
    result.members = 0;
    BigInt phi = 4;
    for (const auto& a : spec.radicands) {
        if (a != 2) phi *= a - 1;
    }
    if (limit >= 2) {
        const double lim = limit.get_d();
        result.dirichlet_estimate = lim / (phi.get_d() * std::log(lim));
    }
    if (limit < spec.first_term) return result;

    const std::uint64_t lim = to_u64(limit);
    const std::uint64_t m = to_u64(spec.modulus);
    const std::uint64_t r = to_u64(spec.first_term);
    const std::uint64_t count = (lim - r) / m + 1;
    result.members = from_u64(count);

    // Index k stands for m*k + r. For each base prime q not dividing m the
    // multiples of q form one residue class of k mod q.
    const auto base = primes_upto(static_cast<std::uint32_t>(std::sqrt(static_cast<double>(lim))) + 1);
    struct Sieving {
        std::uint64_t q;
        std::uint64_t next;
    };
    std::vector<Sieving> active;
    for (std::uint64_t q : base) {
        if (m % q == 0) continue;
        BigInt inv;
        const BigInt mq = from_u64(m % q);
        const BigInt qq = from_u64(q);
        mpz_invert(inv.get_mpz_t(), mq.get_mpz_t(), qq.get_mpz_t());
        std::uint64_t k0 = ((q - r % q) % q) * to_u64(inv) % q;
        if (m * k0 + r == q) k0 += q;  // q itself is prime
        active.push_back({q, k0});
    }

    constexpr std::uint64_t kSegment = std::uint64_t{1} << 18;
    std::vector<char> composite;
    for (std::uint64_t lo = 0; lo < count; lo += kSegment) {
        const std::uint64_t hi = std::min(count, lo + kSegment);
        composite.assign(hi - lo, 0);
        for (auto& s : active) {
            for (; s.next < hi; s.next += s.q) composite[s.next - lo] = 1;
        }
        if (lo == 0 && r == 1) composite[0] = 1;
        for (char c : composite) result.primes_found += c == 0;
    }
    return result;
}

}  // namespace rit
