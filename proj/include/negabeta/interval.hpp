// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "negabeta/rational.hpp"

namespace negabeta {

/// Minimal RAII wrapper over one mpfr value.
class Mp {
public:
    explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mp(Mp&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    Mp& operator=(const Mp& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Mp& operator=(Mp&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Mp() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

/// Closed interval with directed-rounding endpoints. The represented real is
/// guaranteed to lie in [lo, hi] after every operation.
class Iv {
public:
    Iv(mpfr_prec_t prec = 64) : lo_(prec), hi_(prec), prec_(prec) {}

    static Iv from_rat(const Rat& q, mpfr_prec_t prec) {
        Iv r(prec);
        mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    static Iv from_rat_pair(const Rat& lo, const Rat& hi, mpfr_prec_t prec) {
        Iv r(prec);
        mpfr_set_q(r.lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    static Iv from_long(long v, mpfr_prec_t prec) {
        Iv r(prec);
        mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
        mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return prec_; }
    mpfr_srcptr lo() const { return lo_.get(); }
    mpfr_srcptr hi() const { return hi_.get(); }

    friend Iv operator+(const Iv& a, const Iv& b) {
        Iv r(a.prec_);
        mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return r;
    }
    friend Iv operator-(const Iv& a, const Iv& b) {
        Iv r(a.prec_);
        mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend Iv operator-(const Iv& a) {
        Iv r(a.prec_);
        mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
        mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
        return r;
    }
    friend Iv operator*(const Iv& a, const Iv& b) {
        Iv r(a.prec_);
        Mp t(a.prec_), best_lo(a.prec_), best_hi(a.prec_);
        bool first = true;
        mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
        mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
        for (auto x : as)
            for (auto y : bs) {
                mpfr_mul(t.get(), x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), best_lo.get()) < 0) mpfr_set(best_lo.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), best_hi.get()) > 0) mpfr_set(best_hi.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        r.lo_ = best_lo;
        r.hi_ = best_hi;
        return r;
    }
    /// Requires the divisor interval to exclude zero.
    friend Iv operator/(const Iv& a, const Iv& b) {
        Iv r(a.prec_);
        Mp t(a.prec_), best_lo(a.prec_), best_hi(a.prec_);
        bool first = true;
        mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
        mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
        for (auto x : as)
            for (auto y : bs) {
                mpfr_div(t.get(), x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t.get(), best_lo.get()) < 0) mpfr_set(best_lo.get(), t.get(), MPFR_RNDD);
                mpfr_div(t.get(), x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t.get(), best_hi.get()) > 0) mpfr_set(best_hi.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        r.lo_ = best_lo;
        r.hi_ = best_hi;
        return r;
    }

    Iv pow_si(long e) const {
        Iv acc = from_long(1, prec_);
        if (e == 0) return acc;
        Iv base = *this;
        if (e < 0) base = from_long(1, prec_) / base;
        unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
        Iv p = base;
        while (n) {
            if (n & 1) acc = acc * p;
            p = p * p;
            n >>= 1;
        }
        return acc;
    }

    /// Widens by +/- 2^expo (a tail or truncation bound).
    Iv widened_pow2(long expo) const {
        Iv r = *this;
        Mp eps(prec_);
        mpfr_set_ui_2exp(eps.get(), 1, expo, MPFR_RNDU);
        mpfr_sub(r.lo_.get(), lo_.get(), eps.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), hi_.get(), eps.get(), MPFR_RNDU);
        return r;
    }
    Iv widened(const Iv& mag) const {
        Iv r = *this;
        mpfr_sub(r.lo_.get(), lo_.get(), mag.hi_.get(), MPFR_RNDD);
        mpfr_add(r.hi_.get(), hi_.get(), mag.hi_.get(), MPFR_RNDU);
        return r;
    }

    bool strictly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool strictly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
    bool is_point_zero() const { return mpfr_zero_p(lo_.get()) && mpfr_zero_p(hi_.get()); }

    /// True when hi - lo <= 2^expo.
    bool width_below_pow2(long expo) const {
        Mp w(prec_);
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        Mp bound(prec_);
        mpfr_set_ui_2exp(bound.get(), 1, expo, MPFR_RNDD);
        return mpfr_cmp(w.get(), bound.get()) <= 0;
    }

    Rat lo_rat() const {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), lo_.get());
        q.canonicalize();
        return q;
    }
    Rat hi_rat() const {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), hi_.get());
        q.canonicalize();
        return q;
    }

    /// Upper bound on |value| as an exact rational.
    Rat abs_upper() const {
        mpq_class ql, qh;
        mpfr_get_q(ql.get_mpq_t(), lo_.get());
        mpfr_get_q(qh.get_mpq_t(), hi_.get());
        Rat a = abs(ql), b = abs(qh);
        return a > b ? a : b;
    }

    Rat mid_rat() const {
        Mp m(prec_);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), m.get());
        q.canonicalize();
        return q;
    }

    /// Decimal of the midpoint; callers must ensure the width supports `places`.
    std::string decimal(int places) const { return decimal_string(mid_rat(), places); }

private:
    Mp lo_, hi_;
    mpfr_prec_t prec_;
};

} // namespace negabeta
