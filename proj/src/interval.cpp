// Outward-rounded interval evaluation on MPFR endpoints.

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <utility>

#include "rit/error.hpp"
#include "rit/field_oracle.hpp"

namespace rit {

namespace {

class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);  // same precision: exact
    }
    Real(Real&& o) noexcept : Real(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
    Real& operator=(Real o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }

private:
    mpfr_t v_;
};

struct Interval {
    Real lo;
    Real hi;
};

class IntervalRing {
public:
    using Element = Interval;

    explicit IntervalRing(mpfr_prec_t prec) : prec_(prec) {}

    Element from_integer(const BigInt& w) const {
        Interval out{Real(prec_), Real(prec_)};
        mpfr_set_z(out.lo.get(), w.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(out.hi.get(), w.get_mpz_t(), MPFR_RNDU);
        return out;
    }
    Element zero() const { return from_integer(0); }
    Element one() const { return from_integer(1); }
    Element neg(const Element& x) const {
        Interval out{Real(prec_), Real(prec_)};
        mpfr_neg(out.lo.get(), x.hi.get(), MPFR_RNDD);
        mpfr_neg(out.hi.get(), x.lo.get(), MPFR_RNDU);
        return out;
    }
    Element add(const Element& x, const Element& y) const {
        Interval out{Real(prec_), Real(prec_)};
        mpfr_add(out.lo.get(), x.lo.get(), y.lo.get(), MPFR_RNDD);
        mpfr_add(out.hi.get(), x.hi.get(), y.hi.get(), MPFR_RNDU);
        return out;
    }
    Element mul(const Element& x, const Element& y) const {
        Interval out{Real(prec_), Real(prec_)};
        Real t(prec_);
        bool first = true;
        for (mpfr_srcptr a : {x.lo.get(), x.hi.get()}) {
            for (mpfr_srcptr b : {y.lo.get(), y.hi.get()}) {
                mpfr_mul(t.get(), a, b, MPFR_RNDD);
                if (first || mpfr_less_p(t.get(), out.lo.get()) || mpfr_nan_p(t.get())) mpfr_set(out.lo.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), a, b, MPFR_RNDU);
                if (first || mpfr_greater_p(t.get(), out.hi.get()) || mpfr_nan_p(t.get())) mpfr_set(out.hi.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        }
        return out;
    }
    Element scale(const Element& x, const BigInt& w) const {
        Interval out{Real(prec_), Real(prec_)};
        if (sgn(w) >= 0) {
            mpfr_mul_z(out.lo.get(), x.lo.get(), w.get_mpz_t(), MPFR_RNDD);
            mpfr_mul_z(out.hi.get(), x.hi.get(), w.get_mpz_t(), MPFR_RNDU);
        } else {
            mpfr_mul_z(out.lo.get(), x.hi.get(), w.get_mpz_t(), MPFR_RNDD);
            mpfr_mul_z(out.hi.get(), x.lo.get(), w.get_mpz_t(), MPFR_RNDU);
        }
        return out;
    }
    bool equal(const Element& x, const Element& y) const {
        return mpfr_equal_p(x.lo.get(), y.lo.get()) && mpfr_equal_p(x.hi.get(), y.hi.get());
    }

    // Enclosure of a^(1/d).
    Element root(const BigInt& a, const BigInt& d) const {
        Interval out{Real(prec_), Real(prec_)};
        if (a == 0 || a == 1) return from_integer(a);
        if (mpz_fits_ulong_p(d.get_mpz_t())) {
            const unsigned long k = mpz_get_ui(d.get_mpz_t());
            Real base(prec_);
            mpfr_set_z(base.get(), a.get_mpz_t(), MPFR_RNDD);
            mpfr_rootn_ui(out.lo.get(), base.get(), k, MPFR_RNDD);
            mpfr_set_z(base.get(), a.get_mpz_t(), MPFR_RNDU);
            mpfr_rootn_ui(out.hi.get(), base.get(), k, MPFR_RNDU);
            return out;
        }
        // d >= 2^64 > log2(a): the root lies in [1, 2].
        mpfr_set_ui(out.lo.get(), 1, MPFR_RNDD);
        mpfr_set_ui(out.hi.get(), 2, MPFR_RNDU);
        return out;
    }

private:
    mpfr_prec_t prec_;
};

IntervalVerdict classify(const Interval& v) {
    if (mpfr_nan_p(v.lo.get()) || mpfr_nan_p(v.hi.get())) return IntervalVerdict::Inconclusive;
    if (mpfr_sgn(v.lo.get()) > 0 || mpfr_sgn(v.hi.get()) < 0) return IntervalVerdict::NonZero;
    return IntervalVerdict::Inconclusive;
}

IntervalVerdict run(const Circuit& circuit, const std::vector<Radical>& radicals, unsigned precision_bits) {
    if (precision_bits < 32) throw Error(ErrorKind::InvalidInput, "precision must be at least 32 bits");
    if (radicals.size() != circuit.variables().size()) {
        throw Error(ErrorKind::UnboundVariable, "radical count does not match variable count");
    }
    IntervalRing ring(static_cast<mpfr_prec_t>(precision_bits));
    std::vector<Interval> values;
    values.reserve(radicals.size());
    for (const auto& r : radicals) values.push_back(ring.root(r.radicand, r.degree));
    return classify(eval_indexed(circuit, std::span<const Interval>(values), ring));
}

}  // namespace

IntervalVerdict numeric_interval_eval(const Circuit& circuit, const std::vector<Radical>& radicals,
                                      unsigned precision_bits) {
    return run(circuit, radicals, precision_bits);
}

IntervalVerdict numeric_interval_eval(const CanonicalInstance& inst, unsigned precision_bits) {
    std::vector<Radical> radicals;
    for (const auto& r : inst.radicals) radicals.push_back(Radical{r.degree, r.radicand});
    return run(inst.circuit, radicals, precision_bits);
}

}  // namespace rit
