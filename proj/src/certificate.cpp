#include "rit/certificate.hpp"

#include "rit/error.hpp"
#include "rit/numtheory.hpp"

namespace rit {

namespace {

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& m) {
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Cheap necessary test before any root extraction.
bool has_root(const CanonicalRadical& r, const BigInt& p) {
    const BigInt n = mod_floor(r.radicand, p);
    if (n == 0) return true;
    return powm(n, (p - 1) / r.degree, p) == 1;
}

}  // namespace

BigInt prime_bound_formula(std::uint64_t s) {
    if (s == 0) throw Error(ErrorKind::InvalidInput, "size must be positive");
    if (s > 1000000) throw Error(ErrorKind::TooLarge, "size too large for an explicit bound");
    BigInt out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, 4 * s * s * s);
    return out;
}

std::string_view to_string(Verdict::Kind kind) noexcept {
    switch (kind) {
        case Verdict::Kind::NonZeroWitnessed: return "NonZeroWitnessed";
        case Verdict::Kind::EvaluatesZero: return "EvaluatesZero";
        case Verdict::Kind::Invalid: return "Invalid";
    }
    return "?";
}

BigInt eval_mod_p(const Circuit& circuit, const std::vector<BigInt>& roots, const BigInt& p) {
    PrimeField field(p);
    return eval_indexed(circuit, std::span<const BigInt>(roots), field);
}

Verdict verify_certificate(const CanonicalInstance& inst, const Certificate& cert) {
    auto invalid = [](std::string reason) { return Verdict{Verdict::Kind::Invalid, 0, std::move(reason)}; };
    const BigInt& p = cert.prime;
    if (!is_probable_prime(p)) return invalid("modulus is not prime");
    if (cert.roots.size() != inst.radicals.size()) {
        return invalid("expected " + std::to_string(inst.radicals.size()) + " roots, got " +
                       std::to_string(cert.roots.size()));
    }
    const BigInt d = inst.degree_lcm();
    if ((p - 1) % d != 0) return invalid("prime is not 1 mod " + to_decimal(d));
    for (const auto& r : cert.roots) {
        if (sgn(r) < 0 || r >= p) return invalid("root out of range");
    }
    for (std::size_t j = 0; j < cert.roots.size(); ++j) {
        const auto& rad = inst.radicals[j];
        if (powm(cert.roots[j], rad.degree, p) != mod_floor(rad.radicand, p)) return invalid("root check failed");
    }
    BigInt value = eval_mod_p(inst.circuit, cert.roots, p);
    if (value == 0) return Verdict{Verdict::Kind::EvaluatesZero, 0, {}};
    return Verdict{Verdict::Kind::NonZeroWitnessed, std::move(value), {}};
}

std::optional<Certificate> search_certificate(const CanonicalInstance& inst, const BigInt& prime_cap,
                                              std::uint64_t budget, SearchLog* log) {
    const BigInt d = inst.degree_lcm();
    std::uint64_t examined = 0;
    std::optional<Certificate> found;
    for (BigInt p = d + 1; p <= prime_cap && examined < budget; p += d) {
        if (!is_probable_prime(p)) continue;
        ++examined;
        bool all = true;
        for (const auto& r : inst.radicals) {
            if (!has_root(r, p)) {
                all = false;
                break;
            }
        }
        if (!all) continue;
        Certificate cert{p, {}};
        for (const auto& r : inst.radicals) cert.roots.push_back(dth_root_modp(r.radicand, r.degree, p)->value);
        if (eval_mod_p(inst.circuit, cert.roots, p) != 0) {
            found = std::move(cert);
            break;
        }
        if (log) log->zero_primes.push_back(p);
    }
    if (log) log->primes_examined = examined;
    return found;
}

RootTupleReport all_root_tuples_check(const CanonicalInstance& inst, const BigInt& p, std::uint64_t tuple_cap) {
    const BigInt d = inst.degree_lcm();
    if (!is_probable_prime(p) || (p - 1) % d != 0) {
        throw Error(ErrorKind::WrongResidueClass, to_decimal(p) + " is not a prime 1 mod " + to_decimal(d));
    }
    BigInt total = 1;
    for (const auto& r : inst.radicals) total *= r.degree;
    if (total > from_u64(tuple_cap)) throw Error(ErrorKind::TooLarge, "too many root tuples: " + to_decimal(total));

    // Every root of x^t - n is r0 * zeta^k with zeta of order t.
    std::vector<std::vector<BigInt>> choices;
    std::optional<BigInt> generator;
    for (std::size_t j = 0; j < inst.radicals.size(); ++j) {
        const auto& r = inst.radicals[j];
        auto r0 = dth_root_modp(r.radicand, r.degree, p);
        if (!r0) {
            throw Error(ErrorKind::MissingRoot,
                        to_decimal(r.radicand) + " has no " + to_decimal(r.degree) + "-th root mod " + to_decimal(p));
        }
        if (!generator) generator = find_generator(p, prime_divisors_small(p - 1)).value;
        const BigInt zeta = powm(*generator, (p - 1) / r.degree, p);
        std::vector<BigInt> roots;
        BigInt x = r0->value;
        for (std::uint64_t k = 0; k < to_u64(r.degree); ++k) {
            roots.push_back(x);
            x = x * zeta % p;
        }
        choices.push_back(std::move(roots));
    }

    RootTupleReport report{total, 0, true};
    std::vector<std::size_t> pick(choices.size(), 0);
    std::vector<BigInt> tuple(choices.size());
    for (;;) {
        for (std::size_t j = 0; j < choices.size(); ++j) tuple[j] = choices[j][pick[j]];
        if (eval_mod_p(inst.circuit, tuple, p) == 0) ++report.tuples_zero;
        std::size_t j = 0;
        while (j < choices.size() && ++pick[j] == choices[j].size()) pick[j++] = 0;
        if (j == choices.size()) break;
    }
    report.consistent = report.tuples_zero == 0 || report.tuples_zero == report.tuples_total;
    return report;
}

}  // namespace rit
