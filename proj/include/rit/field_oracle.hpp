#pragma once

// Exact zero test for canonical instances. Elements of
// Z[y_1..y_l] / (y_j^t_j - n_j) are kept on the monomial basis
// prod y_j^e_j, 0 <= e_j < t_j; for canonical radicals this basis is
// linearly independent, so an element is zero iff every coefficient is.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rit/bigint.hpp"
#include "rit/reduction.hpp"

namespace rit {

/// Ambient ring: degrees t_j and radicands n_j.
struct QuotientShape {
    std::vector<std::uint64_t> degrees;
    std::vector<BigInt> radicands;

    friend bool operator==(const QuotientShape& a, const QuotientShape& b) {
        return a.degrees == b.degrees && a.radicands == b.radicands;
    }
};

using ShapePtr = std::shared_ptr<const QuotientShape>;
using Monomial = std::vector<std::uint64_t>;

/// Sparse element: exponent vector -> nonzero coefficient. Zero is the
/// empty map.
class FieldElement {
public:
    explicit FieldElement(ShapePtr shape) : shape_(std::move(shape)) {}

    static FieldElement constant(ShapePtr shape, const BigInt& c);
    /// The basis monomial y_j.
    static FieldElement generator(ShapePtr shape, std::size_t j);
    /// Builds an element from raw terms, dropping zero coefficients.
    /// Throws ShapeError when an exponent is out of range.
    static FieldElement from_terms(ShapePtr shape, const std::map<Monomial, BigInt>& terms);

    const std::map<Monomial, BigInt>& terms() const noexcept { return terms_; }
    const ShapePtr& shape() const noexcept { return shape_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Decimal digits of the longest coefficient.
    std::size_t max_digits() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b);

private:
    friend FieldElement fe_add(const FieldElement&, const FieldElement&);
    friend FieldElement fe_mul(const FieldElement&, const FieldElement&);
    friend FieldElement fe_scale(const FieldElement&, const BigInt&);
    friend FieldElement fe_neg(const FieldElement&);

    ShapePtr shape_;
    std::map<Monomial, BigInt> terms_;
};

FieldElement fe_add(const FieldElement& u, const FieldElement& v);
/// Exponents add componentwise; each wrap past t_j multiplies by n_j.
FieldElement fe_mul(const FieldElement& u, const FieldElement& v);
FieldElement fe_scale(const FieldElement& u, const BigInt& w);
FieldElement fe_neg(const FieldElement& u);

/// RingInterface adaptor; optionally refuses coefficients longer than
/// `digit_cap` digits (DigitCapExceeded).
class QuotientRing {
public:
    using Element = FieldElement;

    explicit QuotientRing(ShapePtr shape, std::size_t digit_cap = static_cast<std::size_t>(-1))
        : shape_(std::move(shape)), digit_cap_(digit_cap) {}

    const ShapePtr& shape() const noexcept { return shape_; }

    Element zero() const { return FieldElement(shape_); }
    Element one() const { return FieldElement::constant(shape_, 1); }
    Element neg(const Element& x) const { return fe_neg(x); }
    Element add(const Element& x, const Element& y) const { return checked(fe_add(x, y)); }
    Element mul(const Element& x, const Element& y) const { return checked(fe_mul(x, y)); }
    Element scale(const Element& x, const BigInt& w) const { return checked(fe_scale(x, w)); }
    Element from_integer(const BigInt& w) const { return checked(FieldElement::constant(shape_, w)); }
    bool equal(const Element& x, const Element& y) const { return x == y; }

private:
    Element checked(Element x) const;
    ShapePtr shape_;
    std::size_t digit_cap_;
};

/// Shape of a canonical instance; nullopt when some t_j exceeds 64 bits.
std::optional<ShapePtr> shape_of(const CanonicalInstance& inst);

struct OracleCaps {
    std::uint64_t basis_cap = 1000000;
    std::size_t digit_cap = 1000000;
};

struct OracleResult {
    enum class Kind { Zero, NonZero, Infeasible };
    Kind kind;
    std::optional<FieldElement> witness;  // set for NonZero
    std::string reason;                   // set for Infeasible
};

/// Evaluates the circuit in the quotient ring with y_j -> basis monomial.
/// Never answers wrongly; refuses (Infeasible) when prod t_j exceeds the
/// basis cap or a coefficient exceeds the digit cap.
OracleResult oracle_is_zero(const CanonicalInstance& inst, const OracleCaps& caps = {});

enum class IntervalVerdict { NonZero, Inconclusive };

/// One-sided numeric check with outward-rounded MPFR intervals seeded by
/// enclosures of n_j^(1/t_j). Never claims zero.
IntervalVerdict numeric_interval_eval(const CanonicalInstance& inst, unsigned precision_bits);

/// Same check for arbitrary radicals d-th root of a (no canonical form needed).
IntervalVerdict numeric_interval_eval(const Circuit& circuit, const std::vector<Radical>& radicals,
                                      unsigned precision_bits);

}  // namespace rit
