// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "negabeta/polynomial.hpp"

namespace negabeta {

/// A real algebraic number: a square-free integer polynomial plus a rational
/// bracket containing exactly one of its real roots. A degenerate bracket
/// (lo == hi) encodes an exact rational root.
class AlgebraicReal {
public:
    /// Verifies isolation (square-free Sturm count) and that the root is > 1.
    static AlgebraicReal make(const Poly& poly, Rat lo, Rat hi) {
        if (poly.is_zero() || poly.degree() < 1) throw PreconditionFailed("minimal polynomial must be nonconstant");
        if (lo > hi) std::swap(lo, hi);
        Poly p = poly.square_free_part().primitive();
        // roots at 0 and +/-1 can never be the base; dropping them keeps
        // beta and beta+1 invertible modulo the stored polynomial
        for (long r : {-1L, 0L, 1L})
            while (p.degree() >= 2 && p.eval(Rat(r)) == 0)
                p = p.divmod(Poly({Rat(-r), Rat(1)})).first.primitive();

        if (p.eval(lo) == 0) {
            // root sits on the left edge; treat as exact if nothing else is inside
            SturmChain chain(p);
            if (chain.count_roots(lo, hi) > 0) throw NotIsolating(p.to_string());
            return finish(p, lo, lo);
        }
        if (p.eval(hi) == 0) {
            SturmChain chain(p);
            if (chain.count_roots(lo, hi) != 1) throw NotIsolating(p.to_string());
            return finish(p, hi, hi);
        }
        SturmChain chain(p);
        int n = chain.count_roots(lo, hi);
        if (n != 1) throw NotIsolating(p.to_string() + " has " + std::to_string(n) + " roots in bracket");
        AlgebraicReal a(p, std::move(lo), std::move(hi));
        // tighten until the bracket sits strictly right of 1
        while (a.lo_ <= 1) {
            if (a.hi_ <= 1) throw RootNotGreaterThanOne(p.to_string());
            a.refine_once();
            if (a.lo_ == a.hi_) break;
        }
        if (a.lo_ <= 1) throw RootNotGreaterThanOne(p.to_string());
        return a;
    }

    static AlgebraicReal from_rational(const Rat& v) {
        Poly p({-v, Rat(1)});
        return finish(p.primitive(), v, v);
    }

    const Poly& poly() const { return poly_; }
    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    bool is_rational() const { return lo_ == hi_; }
    std::optional<Rat> rational_value() const {
        if (is_rational()) return lo_;
        return std::nullopt;
    }

    void refine_once() {
        if (is_rational()) return;
        Rat mid = (lo_ + hi_) / 2;
        Rat fm = poly_.eval(mid);
        if (fm == 0) { lo_ = hi_ = mid; return; }
        if (sgn(fm) == sign_lo_) lo_ = mid;
        else hi_ = mid;
    }

    /// Shrinks the bracket width to at most 2^-bits.
    void refine_to_bits(long bits) {
        Rat target = pow_rat(Rat(1, 2), bits);
        while (!is_rational() && hi_ - lo_ > target) refine_once();
    }

    /// Exact value-equality with another algebraic number.
    bool same_value(const AlgebraicReal& o) const {
        Rat l = std::max(lo_, o.lo_), h = std::min(hi_, o.hi_);
        if (l > h) return false;
        if (is_rational() && o.is_rational()) return lo_ == o.lo_;
        if (is_rational()) return o.poly_.eval(lo_) == 0 && o.lo_ <= lo_ && lo_ <= o.hi_;
        if (o.is_rational()) return poly_.eval(o.lo_) == 0 && lo_ <= o.lo_ && o.lo_ <= hi_;
        Poly g = Poly::gcd(poly_, o.poly_);
        if (g.degree() < 1) return false;
        // each bracket holds exactly one root of its polynomial, so the values
        // coincide exactly when the common factor has a root in the overlap
        if (g.eval(l) == 0) return true;
        SturmChain chain(g.primitive());
        return chain.count_roots(l, h) >= 1;
    }

private:
    AlgebraicReal(Poly p, Rat lo, Rat hi) : poly_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (!is_rational()) sign_lo_ = sgn(poly_.eval(lo_));
    }
    static AlgebraicReal finish(Poly p, Rat lo, Rat hi) { return AlgebraicReal(std::move(p), std::move(lo), std::move(hi)); }

    Poly poly_;
    Rat lo_, hi_;
    int sign_lo_ = 0;
};

} // namespace negabeta
