#include "rit/field_oracle.hpp"

#include <algorithm>

#include "rit/error.hpp"

namespace rit {

namespace {

void require_same_shape(const FieldElement& u, const FieldElement& v) {
    if (u.shape() == v.shape()) return;
    if (!u.shape() || !v.shape() || !(*u.shape() == *v.shape())) {
        throw Error(ErrorKind::ShapeError, "field elements live in different quotient rings");
    }
}

}  // namespace

FieldElement FieldElement::constant(ShapePtr shape, const BigInt& c) {
    FieldElement out(std::move(shape));
    if (c != 0) out.terms_.emplace(Monomial(out.shape_->degrees.size(), 0), c);
    return out;
}

FieldElement FieldElement::generator(ShapePtr shape, std::size_t j) {
    FieldElement out(std::move(shape));
    const auto& degrees = out.shape_->degrees;
    if (j >= degrees.size()) throw Error(ErrorKind::ShapeError, "no generator " + std::to_string(j));
    Monomial m(degrees.size(), 0);
    if (degrees[j] == 1) {
        out.terms_.emplace(m, out.shape_->radicands[j]);
    } else {
        m[j] = 1;
        out.terms_.emplace(m, 1);
    }
    return out;
}

FieldElement FieldElement::from_terms(ShapePtr shape, const std::map<Monomial, BigInt>& terms) {
    FieldElement out(std::move(shape));
    const auto& degrees = out.shape_->degrees;
    for (const auto& [mono, c] : terms) {
        if (mono.size() != degrees.size()) throw Error(ErrorKind::ShapeError, "monomial length mismatch");
        for (std::size_t j = 0; j < mono.size(); ++j) {
            if (mono[j] >= degrees[j]) throw Error(ErrorKind::ShapeError, "exponent out of range");
        }
        if (c != 0) out.terms_.emplace(mono, c);
    }
    return out;
}

std::size_t FieldElement::max_digits() const {
    std::size_t best = 0;
    for (const auto& term : terms_) best = std::max(best, mpz_sizeinbase(term.second.get_mpz_t(), 10));
    return best;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    require_same_shape(a, b);
    return a.terms_ == b.terms_;
}

FieldElement fe_add(const FieldElement& u, const FieldElement& v) {
    require_same_shape(u, v);
    FieldElement out = u;
    for (const auto& [mono, c] : v.terms_) {
        auto [it, fresh] = out.terms_.emplace(mono, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) out.terms_.erase(it);
        }
    }
    return out;
}

FieldElement fe_neg(const FieldElement& u) {
    FieldElement out = u;
    for (auto& term : out.terms_) term.second = -term.second;
    return out;
}

FieldElement fe_scale(const FieldElement& u, const BigInt& w) {
    FieldElement out(u.shape_);
    if (w == 0) return out;
    out.terms_ = u.terms_;
    for (auto& term : out.terms_) term.second *= w;
    return out;
}

FieldElement fe_mul(const FieldElement& u, const FieldElement& v) {
    require_same_shape(u, v);
    FieldElement out(u.shape_);
    const auto& degrees = u.shape_->degrees;
    const auto& radicands = u.shape_->radicands;
    Monomial mono(degrees.size());
    BigInt coeff;
    for (const auto& [ma, ca] : u.terms_) {
        for (const auto& [mb, cb] : v.terms_) {
            coeff = ca * cb;
            for (std::size_t j = 0; j < degrees.size(); ++j) {
                mono[j] = ma[j] + mb[j];
                if (mono[j] >= degrees[j]) {
                    mono[j] -= degrees[j];
                    coeff *= radicands[j];
                }
            }
            auto [it, fresh] = out.terms_.emplace(mono, coeff);
            if (!fresh) it->second += coeff;
        }
    }
    std::erase_if(out.terms_, [](const auto& term) { return term.second == 0; });
    return out;
}

FieldElement QuotientRing::checked(FieldElement x) const {
    if (digit_cap_ != static_cast<std::size_t>(-1) && x.max_digits() > digit_cap_ + 1) {
        throw Error(ErrorKind::DigitCapExceeded, "coefficient exceeds " + std::to_string(digit_cap_) + " digits");
    }
    return x;
}

std::optional<ShapePtr> shape_of(const CanonicalInstance& inst) {
    auto shape = std::make_shared<QuotientShape>();
    for (const auto& r : inst.radicals) {
        if (!fits_u64(r.degree)) return std::nullopt;
        shape->degrees.push_back(to_u64(r.degree));
        shape->radicands.push_back(r.radicand);
    }
    return ShapePtr(std::move(shape));
}

OracleResult oracle_is_zero(const CanonicalInstance& inst, const OracleCaps& caps) {
    auto shape = shape_of(inst);
    if (!shape) return OracleResult{OracleResult::Kind::Infeasible, std::nullopt, "a radical degree exceeds 64 bits"};
    BigInt basis = 1;
    for (auto t : (*shape)->degrees) basis *= from_u64(t);
    if (basis > from_u64(caps.basis_cap)) {
        return OracleResult{OracleResult::Kind::Infeasible, std::nullopt,
                            "basis size " + to_decimal(basis) + " exceeds cap " + std::to_string(caps.basis_cap)};
    }
    QuotientRing ring(*shape, caps.digit_cap);
    std::vector<FieldElement> values;
    for (std::size_t j = 0; j < inst.radicals.size(); ++j) values.push_back(FieldElement::generator(*shape, j));
    try {
        FieldElement result = eval_indexed(inst.circuit, std::span<const FieldElement>(values), ring);
        // The digit check above tolerates one extra digit; settle it exactly.
        if (result.max_digits() > caps.digit_cap) {
            BigInt limit;
            mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(caps.digit_cap));
            for (const auto& term : result.terms()) {
                if (abs(term.second) >= limit) throw Error(ErrorKind::DigitCapExceeded, "final coefficient too long");
            }
        }
        if (result.is_zero()) return OracleResult{OracleResult::Kind::Zero, std::nullopt, {}};
        return OracleResult{OracleResult::Kind::NonZero, std::move(result), {}};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DigitCapExceeded) throw;
        return OracleResult{OracleResult::Kind::Infeasible, std::nullopt, e.detail()};
    }
}

}  // namespace rit
