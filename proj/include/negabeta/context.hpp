// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "negabeta/algebraic.hpp"
#include "negabeta/digits.hpp"
#include "negabeta/errors.hpp"
#include "negabeta/index_ext.hpp"
#include "negabeta/interval.hpp"
#include "negabeta/polynomial.hpp"
#include "negabeta/rational.hpp"

namespace negabeta {

class BetaContext;
class Value;
using CtxPtr = std::shared_ptr<const BetaContext>;

/// Converts the sum of the series a_1/(-x) + a_2/(-x)^2 + ... for an eventually
/// periodic digit stream into an integer polynomial whose roots include every x
/// with series(x) = -x/(x+1). Used for exact solving of declared-periodic bases.
inline Poly periodic_series_poly(const std::vector<int>& prefix, const std::vector<int>& period) {
    // Work with u = -1/x: series = P(u) + u^p * Q(u) / (1 - u^q), target 1/(u - 1).
    // Clearing denominators and substituting u = -1/x gives an integer polynomial in x.
    size_t p = prefix.size(), q = period.size();
    std::vector<Rat> pc(p + 1, Rat(0));
    for (size_t k = 0; k < p; ++k) pc[k + 1] = Rat(prefix[k]);
    Poly P(pc);
    std::vector<Rat> qc(q + 1, Rat(0));
    for (size_t k = 0; k < q; ++k) qc[k + 1] = Rat(period[k]);
    Poly Q(qc);
    Poly one = Poly::constant(Rat(1));
    Poly u = Poly::x();
    Poly u_pow_p = one;
    for (size_t k = 0; k < p; ++k) u_pow_p = u_pow_p * u;
    Poly u_pow_q = one;
    for (size_t k = 0; k < q; ++k) u_pow_q = u_pow_q * u;
    Poly denom = q ? (one - u_pow_q) : one;          // 1 - u^q
    Poly u_minus_1 = u - one;
    // (P*(1-u^q) + u^p*Q) * (u-1) - (1-u^q) = 0
    Poly lhs = (P * denom + (q ? u_pow_p * Q : Poly())) * u_minus_1 - denom;
    // substitute u = -1/x: multiply by (-x)^deg and reverse coefficients with signs
    int d = lhs.degree();
    std::vector<Rat> out(d + 1, Rat(0));
    for (int k = 0; k <= d; ++k) {
        // u^k -> (-1)^k x^(d-k)
        Rat c = lhs.coeff(k);
        if (k % 2) c = -c;
        out[d - k] += c;
    }
    return Poly(std::move(out)).primitive();
}

namespace detail {

/// Algebraic payload: polynomial in beta reduced mod the minimal polynomial.
struct PolyVal {
    std::vector<Rat> c; // degree < deg(minpoly)
    bool operator==(const PolyVal& o) const { return c == o.c; }
};

/// Streamed payload: canonical coordinates over the basis
///   beta^k (k in Z)  and  s = 1/(beta+1).
/// Orbit values reduce into this basis through t_n = -beta*t_{n-1} - a_n with
/// t_0 = s - 1, so equal symbolic forms mean equal values; distinct forms are
/// distinct for any base not algebraic of low degree, and are otherwise settled
/// (or reported undecidable) numerically.
struct SymVal {
    std::map<std::int64_t, Rat> pow; // beta^k
    Rat s{0};

    void prune() {
        for (auto it = pow.begin(); it != pow.end();)
            it = (it->second == 0) ? pow.erase(it) : std::next(it);
    }
    bool is_sym_zero() const { return pow.empty() && s == 0; }
    bool is_laurent() const { return s == 0; }
};

} // namespace detail

enum class Mode { algebraic, streamed };

struct ContextOptions {
    long bracket_bits_cap = 4096;   // max bracket refinement
    long digit_terms_cap = 4096;    // max series terms consulted per enclosure
    long start_bits = 64;           // first rung of the refinement ladder
};

/// Exact element of Q(beta) (algebraic mode) or of the module spanned by
/// beta powers and 1/(beta+1), into which all orbit values reduce (streamed
/// mode). Immutable.
class Value {
public:
    Value() = default;

    const CtxPtr& ctx() const { return ctx_; }

    friend Value operator+(const Value& a, const Value& b);
    friend Value operator-(const Value& a, const Value& b);
    friend Value operator-(const Value& a);
    friend Value operator*(const Value& a, const Value& b);
    friend Value operator/(const Value& a, const Value& b);
    Value scaled(const Rat& r) const;
    Value times_beta_pow(std::int64_t k) const;

    std::string exact_string() const;
    std::string exact_key() const;

private:
    friend class BetaContext;
    CtxPtr ctx_;
    detail::PolyVal pv_;
    detail::SymVal sv_;
};

struct OrbitCycle {
    bool found = false;
    std::int64_t preperiod = 0; // smallest m with t_m = t_{m+period}
    std::int64_t period = 0;
};

/// A base beta > 1 with memoized orbit data and certified comparison services.
/// Immutable after construction in the as-if sense: memo tables refine under an
/// internal mutex and every query is deterministic.
class BetaContext : public std::enable_shared_from_this<BetaContext> {
public:
    // ---- construction ------------------------------------------------------

    static CtxPtr make_algebraic(const Poly& minpoly, const Rat& lo, const Rat& hi,
                                 ContextOptions opt = {}) {
        auto base = AlgebraicReal::make(minpoly, lo, hi);
        return make_algebraic(base, opt);
    }
    static CtxPtr make_algebraic(AlgebraicReal base, ContextOptions opt = {}) {
        auto ctx = std::shared_ptr<BetaContext>(new BetaContext());
        ctx->mode_ = Mode::algebraic;
        ctx->opt_ = opt;
        ctx->alg_ = std::move(base);
        ctx->init_algebraic();
        return ctx;
    }

    /// Streamed base defined by its expansion digits. Requires a_1 >= 2.
    /// Declared eventually periodic streams get an exact polynomial bracket;
    /// aperiodic streams are bracketed by certified series bisection.
    static CtxPtr make_streamed(DigitSequence seq, ContextOptions opt = {}) {
        if (seq.digit(1) < 2) throw PreconditionFailed("streamed base needs first digit >= 2");
        auto ctx = std::shared_ptr<BetaContext>(new BetaContext());
        ctx->mode_ = Mode::streamed;
        ctx->opt_ = opt;
        ctx->seq_ = std::move(seq);
        ctx->a1_ = ctx->seq_.digit(1);
        ctx->amax_ = std::max(ctx->seq_.alphabet_max(), 1);
        ctx->init_streamed();
        return ctx;
    }

    Mode mode() const { return mode_; }
    bool algebraic() const { return mode_ == Mode::algebraic; }
    const DigitSequence& digit_source() const {
        if (mode_ != Mode::streamed) throw PreconditionFailed("no digit source in algebraic mode");
        return seq_;
    }
    AlgebraicReal base() const {
        if (mode_ != Mode::algebraic && !alg_backed_) throw PreconditionFailed("no algebraic base for this context");
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return alg_.value();
    }
    const ContextOptions& options() const { return opt_; }

    // ---- value constructors ------------------------------------------------

    Value from_rat(const Rat& r) const {
        Value v = blank();
        if (algebraic()) { if (r != 0) v.pv_.c = {r}; }
        else if (r != 0) v.sv_.pow[0] = r;
        return v;
    }
    Value from_int(long n) const { return from_rat(Rat(n)); }
    Value beta() const { return from_rat(Rat(1)).times_beta_pow(1); }
    Value beta_pow(std::int64_t k) const { return from_rat(Rat(1)).times_beta_pow(k); }
    /// 1/(beta+1); also the right endpoint sentinel t_{-1}.
    Value one_over_beta_plus_1() const {
        Value v = blank();
        if (algebraic()) v.pv_ = inv1p_;
        else v.sv_.s = 1;
        return v;
    }
    /// Builds a value from polynomial coefficients in beta, lowest degree first.
    Value from_poly(const std::vector<Rat>& coeffs) const {
        Value v = from_rat(Rat(0));
        for (size_t i = 0; i < coeffs.size(); ++i)
            v = add(v, from_rat(coeffs[i]).times_beta_pow(static_cast<std::int64_t>(i)));
        return v;
    }

    // ---- orbit -------------------------------------------------------------

    /// t_n for n >= 0; n = -1 yields the sentinel 1/(beta+1). IndexExt::inf
    /// maps to the exact zero t_infinity.
    Value t(std::int64_t n) const {
        if (n < -1) throw PreconditionFailed("orbit index below -1");
        if (n == -1) return one_over_beta_plus_1();
        if (algebraic()) {
            extend_orbit(n);
            Value v = blank();
            std::lock_guard<std::recursive_mutex> lock(mu_);
            v.pv_ = orbit_t_[n];
            return v;
        }
        if (n > opt_.digit_terms_cap)
            throw UndecidableAtPrecision("orbit depth beyond the digit budget");
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (orbit_sym_.empty()) {
            detail::SymVal t0;
            t0.s = 1;
            t0.pow[0] = -1; // t_0 = s - 1
            orbit_sym_.push_back(std::move(t0));
        }
        while (static_cast<std::int64_t>(orbit_sym_.size()) <= n) {
            std::int64_t k = static_cast<std::int64_t>(orbit_sym_.size());
            detail::SymVal tk = times_beta_once(orbit_sym_.back());
            for (auto& [e, c] : tk.pow) c = -c;
            tk.s = -tk.s;
            tk.pow[0] -= Rat(seq_.digit(k));
            tk.prune();
            orbit_sym_.push_back(std::move(tk));
        }
        Value v = blank();
        v.sv_ = orbit_sym_[n];
        return v;
    }
    Value t_ext(const IndexExt& idx) const { return idx.is_inf() ? from_rat(Rat(0)) : t(idx.value()); }
    /// t_{2i} with the infinity convention.
    Value t_even(const IndexExt& i) const { return i.is_inf() ? from_rat(Rat(0)) : t(2 * i.value()); }
    /// t_{2j-1}; j = 0 gives the sentinel t_{-1}.
    Value t_odd(const IndexExt& j) const { return j.is_inf() ? from_rat(Rat(0)) : t(2 * j.value() - 1); }
    /// t_{2i+1} with 2*inf + 1 = inf.
    Value t_odd_after(const IndexExt& i) const { return i.is_inf() ? from_rat(Rat(0)) : t(2 * i.value() + 1); }

    /// a_n for n >= 1; a_0 = 0 by convention.
    long a(std::int64_t n) const {
        if (n <= 0) return 0;
        if (mode_ == Mode::streamed) return seq_.digit(n);
        extend_orbit(n);
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return orbit_a_[n];
    }
    long a_ext(const IndexExt& idx) const { return idx.is_inf() ? 0 : a(idx.value()); }
    /// a_{2i+1} with 2*inf + 1 = inf.
    long a_odd_after(const IndexExt& i) const { return i.is_inf() ? 0 : a(2 * i.value() + 1); }
    /// a_{2j} with 2*inf = inf.
    long a_even(const IndexExt& j) const { return j.is_inf() ? 0 : a(2 * j.value()); }

    Value t0() const { return t(0); }
    Value t_minus1() const { return one_over_beta_plus_1(); }

    // ---- certified queries --------------------------------------------------

    /// Exact in algebraic mode. In streamed mode refines up to the precision cap
    /// and throws UndecidableAtPrecision when the enclosure still straddles zero;
    /// symbolically zero values report 0 without numeric work.
    int sign(const Value& v) const {
        check_ctx(v);
        if (algebraic()) return sign_alg(v.pv_);
        if (v.sv_.is_sym_zero()) return 0;
        for (long bits = first_useful_bits(v.sv_);; bits *= 2) {
            bool capped = bits >= opt_.bracket_bits_cap;
            Iv iv = enclosure_sym(v.sv_, capped ? opt_.bracket_bits_cap : bits);
            if (iv.strictly_positive()) return 1;
            if (iv.strictly_negative()) return -1;
            if (iv.is_point_zero()) return 0; // exact rational bracket, exact arithmetic
            if (capped) throw UndecidableAtPrecision("sign of " + v.exact_string());
        }
    }

    bool is_zero(const Value& v) const {
        if (!algebraic() && v.sv_.is_sym_zero()) return true;
        return sign(v) == 0;
    }

    /// Exact floor. Streamed mode refines until the enclosure pins the floor or
    /// the value is symbolically an integer.
    Int floor_of(const Value& v) const {
        check_ctx(v);
        if (algebraic()) return floor_alg(v.pv_);
        // symbolic integer short cut
        if (v.sv_.is_laurent() && v.sv_.pow.size() <= 1) {
            auto it = v.sv_.pow.find(0);
            if (v.sv_.pow.empty()) return Int(0);
            if (it != v.sv_.pow.end()) return floor_int(it->second);
        }
        for (long bits = first_useful_bits(v.sv_);; bits *= 2) {
            bool capped = bits >= opt_.bracket_bits_cap;
            Iv iv = enclosure_sym(v.sv_, capped ? opt_.bracket_bits_cap : bits);
            Int fl = mpfr_floor_int(iv.lo());
            Int fh = mpfr_floor_int(iv.hi());
            if (fl == fh) return fl;
            if (capped) throw UndecidableAtPrecision("floor of " + v.exact_string());
        }
    }

    /// Exact in algebraic mode. Streamed: true only for identical symbolic forms,
    /// false once enclosures separate, otherwise undecidable.
    bool equals(const Value& a, const Value& b) const {
        if (!algebraic()) {
            detail::SymVal d = sub_sym(a.sv_, b.sv_);
            if (d.is_sym_zero()) return true;
        }
        return sign(sub(a, b)) == 0;
    }

    /// sign(a - b).
    int compare(const Value& a, const Value& b) const { return sign(sub(a, b)); }

    /// Certified enclosure of width roughly 2^-bits (never wider than the cap allows).
    Iv enclosure(const Value& v, long bits) const {
        check_ctx(v);
        bits = std::min(bits, opt_.bracket_bits_cap);
        if (algebraic()) return enclosure_alg(v.pv_, bits);
        return enclosure_sym(v.sv_, bits);
    }

    /// Decimal approximation, accurate to within one unit in the last place.
    std::string decimal(const Value& v, int places) const {
        long need = static_cast<long>(places * 3.33) + 4;
        for (long bits = need + 12;; bits *= 2) {
            bool capped = bits >= opt_.bracket_bits_cap;
            Iv iv = enclosure(v, capped ? opt_.bracket_bits_cap : bits);
            if (iv.width_below_pow2(-need)) return iv.decimal(places);
            if (capped) throw UndecidableAtPrecision("decimal of " + v.exact_string());
        }
    }

    // ---- the transformation -------------------------------------------------

    /// T(x) = -beta*x - floor(beta/(beta+1) - beta*x) on [t_0, t_{-1}).
    Value t_map(const Value& x) const {
        domain_check(x);
        return t_map_unchecked(x);
    }

    /// First n digits of the expansion of x read off by iterating the map.
    std::vector<long> expansion_of_point(const Value& x, std::int64_t n) const {
        domain_check(x);
        std::vector<long> digits;
        digits.reserve(n);
        Value cur = x;
        for (std::int64_t k = 0; k < n; ++k) {
            auto [next, d] = step(cur);
            digits.push_back(d);
            cur = next;
        }
        return digits;
    }

    /// (t_n, a_n) with the orbit table extended through n.
    std::pair<Value, long> orbit_extend(std::int64_t n) const {
        if (n < 0) throw PreconditionFailed("orbit index must be >= 0");
        return {t(n), a(n)};
    }

    /// Normalisation onto [t_0, t_{-1}): scales x down by powers of -beta until
    /// strictly interior, then transforms back. Uses the smallest such power.
    Value iota(const Value& x) const {
        check_ctx(x);
        Value v = x;
        for (int n = 0; n <= kIotaGuard; ++n) {
            if (sign(sub(v, t0())) > 0 && sign(sub(v, t_minus1())) < 0) {
                Value r = v;
                for (int k = 0; k < n; ++k) r = t_map_unchecked(r);
                return r;
            }
            v = v.times_beta_pow(-1).scaled(Rat(-1));
        }
        throw PreconditionFailed("iota failed to normalise within guard depth");
    }

    /// Detects a repeated orbit value t_m = t_n (m < n <= bound). Exact equality,
    /// so this needs the algebraic backend.
    OrbitCycle orbit_cycle(std::int64_t bound) const {
        if (!algebraic()) throw RequiresAlgebraicMode("orbit finiteness needs exact equality");
        if (bound < 1) throw PreconditionFailed("bound must be >= 1");
        std::map<std::string, std::int64_t> seen;
        for (std::int64_t n = 0; n <= bound; ++n) {
            std::string key = t(n).exact_key();
            auto [it, fresh] = seen.emplace(std::move(key), n);
            if (!fresh) return {true, it->second, n - it->second};
        }
        return {false, 0, 0};
    }

    // ---- internals shared with value operations -----------------------------

    Value add(const Value& a, const Value& b) const {
        check_ctx(a); check_ctx(b);
        Value r = blank();
        if (algebraic()) {
            size_t n = std::max(a.pv_.c.size(), b.pv_.c.size());
            r.pv_.c.assign(n, Rat(0));
            for (size_t i = 0; i < a.pv_.c.size(); ++i) r.pv_.c[i] += a.pv_.c[i];
            for (size_t i = 0; i < b.pv_.c.size(); ++i) r.pv_.c[i] += b.pv_.c[i];
            trim(r.pv_);
        } else {
            r.sv_ = a.sv_;
            for (const auto& [k, c] : b.sv_.pow) r.sv_.pow[k] += c;
            r.sv_.s += b.sv_.s;
            r.sv_.prune();
        }
        return r;
    }
    Value sub(const Value& a, const Value& b) const { return add(a, neg(b)); }
    Value neg(const Value& a) const { return a.scaled(Rat(-1)); }

    Value mul(const Value& a, const Value& b) const {
        check_ctx(a); check_ctx(b);
        if (algebraic()) {
            Value r = blank();
            r.pv_ = reduce(poly_of(a.pv_) * poly_of(b.pv_));
            return r;
        }
        if (a.sv_.s != 0 && b.sv_.s != 0)
            throw RequiresAlgebraicMode("product would need powers of 1/(beta+1)");
        const detail::SymVal& laur = a.sv_.is_laurent() ? a.sv_ : b.sv_;
        const detail::SymVal& other = a.sv_.is_laurent() ? b.sv_ : a.sv_;
        Value acc = from_rat(Rat(0));
        Value o = blank();
        o.sv_ = other;
        for (const auto& [k, c] : laur.pow)
            acc = add(acc, o.times_beta_pow(k).scaled(c));
        return acc;
    }

    Value div(const Value& a, const Value& b) const {
        check_ctx(a); check_ctx(b);
        if (algebraic()) {
            Value r = blank();
            r.pv_ = reduce(poly_of(a.pv_) * poly_of(invert(b.pv_)));
            return r;
        }
        if (b.sv_.is_laurent() && b.sv_.pow.size() == 1) {
            auto [k, c] = *b.sv_.pow.begin();
            if (c == 0) throw PreconditionFailed("division by zero");
            return a.times_beta_pow(-k).scaled(Rat(1) / c);
        }
        throw RequiresAlgebraicMode("streamed division limited to monomials in beta");
    }

    Value scale(const Value& a, const Rat& r) const {
        check_ctx(a);
        Value out = blank();
        if (algebraic()) {
            out.pv_ = a.pv_;
            if (r == 0) { out.pv_.c.clear(); return out; }
            for (auto& c : out.pv_.c) c *= r;
        } else {
            if (r == 0) return out;
            out.sv_ = a.sv_;
            for (auto& [k, c] : out.sv_.pow) c *= r;
            out.sv_.s *= r;
        }
        return out;
    }

    Value mul_beta_pow(const Value& a, std::int64_t k) const {
        check_ctx(a);
        Value out = blank();
        if (algebraic()) {
            out.pv_ = a.pv_;
            for (; k > 0; --k) out.pv_ = reduce(poly_of(out.pv_) * Poly::x());
            for (; k < 0; ++k) out.pv_ = reduce(poly_of(out.pv_) * poly_of(inv_beta_));
            return out;
        }
        out.sv_ = a.sv_;
        for (; k > 0; --k) out.sv_ = times_beta_once(out.sv_);
        for (; k < 0; ++k) out.sv_ = div_beta_once(out.sv_);
        return out;
    }

    std::string exact_string_of(const Value& v) const {
        if (algebraic()) return poly_of(v.pv_).to_string("b");
        return sym_string(v.sv_);
    }
    std::string exact_key_of(const Value& v) const {
        if (algebraic()) {
            std::string key = "P";
            for (const auto& c : v.pv_.c) key += ":" + c.get_str();
            return key;
        }
        return sym_string(v.sv_);
    }

    /// Certified enclosure of sum a_k (-beta)^-k + beta/(beta+1) over the current
    /// bracket; the defining residual of a streamed base.
    Iv solver_residual(long bits) const {
        if (mode_ != Mode::streamed) throw PreconditionFailed("residual is defined for streamed bases");
        auto [lo, hi] = beta_bracket(bits);
        long terms = std::min(opt_.digit_terms_cap, bits + 64);
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
        return series_g_iv(Iv::from_rat_pair(lo, hi, prec), terms, prec);
    }

    /// Refines the shared beta bracket to width <= 2^-bits and returns it.
    std::pair<Rat, Rat> beta_bracket(long bits) const {
        ensure_bracket_bits(std::min(bits, opt_.bracket_bits_cap));
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (mode_ == Mode::algebraic || alg_backed_) return {alg_->lo(), alg_->hi()};
        return {br_lo_, br_hi_};
    }

private:
    BetaContext() = default;
    static constexpr int kIotaGuard = 4096;

    Value blank() const {
        Value v;
        v.ctx_ = shared_from_this();
        return v;
    }
    void check_ctx(const Value& v) const {
        if (v.ctx_.get() != this) throw PreconditionFailed("value belongs to a different base context");
    }

    // ---- algebraic backend ---------------------------------------------------

    void init_algebraic() {
        minpoly_ = alg_->poly();
        deg_ = minpoly_.degree();
        // 1/(beta+1) and 1/beta via the extended euclidean algorithm
        inv1p_ = invert(reduce(Poly({Rat(1), Rat(1)})));
        inv_beta_ = invert(reduce(Poly::x()));
        detail::PolyVal t0 = reduce((-Poly::x()) * poly_of(inv1p_));
        {
            std::lock_guard<std::recursive_mutex> lock(mu_);
            orbit_t_.push_back(std::move(t0));
            orbit_a_.push_back(0);
        }
    }

    Poly poly_of(const detail::PolyVal& v) const { return Poly(v.c); }
    static void trim(detail::PolyVal& v) {
        while (!v.c.empty() && v.c.back() == 0) v.c.pop_back();
    }
    detail::PolyVal reduce(const Poly& p) const {
        detail::PolyVal out;
        out.c = p.mod(minpoly_).coeffs();
        return out;
    }

    detail::PolyVal invert(const detail::PolyVal& v) const {
        // extended euclid in Q[x] mod minpoly
        Poly a = poly_of(v);
        if (a.is_zero()) throw PreconditionFailed("division by zero");
        if (deg_ == 0) throw PreconditionFailed("degenerate minimal polynomial");
        Poly r0 = minpoly_, r1 = a;
        Poly s0, s1 = Poly::constant(Rat(1));
        while (!r1.is_zero() && r1.degree() > 0) {
            auto [q, r2] = r0.divmod(r1);
            Poly s2 = s0 - q * s1;
            r0 = r1; r1 = r2;
            s0 = s1; s1 = s2;
        }
        if (r1.is_zero()) {
            // common factor; invertible only if the factor avoids our root
            throw PreconditionFailed("non-invertible element (reducible minimal polynomial)");
        }
        Poly inv = s1 * (Rat(1) / r1.coeff(0));
        return reduce(inv);
    }

    int sign_alg(const detail::PolyVal& v) const {
        if (v.c.empty()) return 0;
        if (v.c.size() == 1) return sgn(v.c[0]);
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (alg_->is_rational()) return sgn(poly_of(v).eval(alg_->lo()));
        Poly r = poly_of(v);
        Poly g = Poly::gcd(minpoly_, r);
        if (g.degree() >= 1) {
            // a common root inside the bracket can only be the base itself; the
            // bracket endpoints are never roots of the stored polynomial
            SturmChain chain(g.square_free_part().primitive());
            if (chain.count_roots(alg_->lo(), alg_->hi()) >= 1) return 0;
        }
        for (;;) {
            auto [l, h] = r.eval_interval(alg_->lo(), alg_->hi());
            if (sgn(l) > 0) return 1;
            if (sgn(h) < 0) return -1;
            alg_->refine_once();
            if (alg_->is_rational()) return sgn(r.eval(alg_->lo()));
        }
    }

    Int floor_alg(const detail::PolyVal& v) const {
        if (v.c.size() <= 1) return floor_int(v.c.empty() ? Rat(0) : v.c[0]);
        Int m;
        {
            std::lock_guard<std::recursive_mutex> lock(mu_);
            Poly r = poly_of(v);
            for (;;) {
                auto [l, h] = r.eval_interval(alg_->lo(), alg_->hi());
                Int fl = floor_int(l), fh = floor_int(h);
                if (fl == fh) return fl;
                if (h - l < 1) { m = fl; break; } // narrow; settle exactly below
                alg_->refine_once();
                if (alg_->is_rational()) return floor_int(r.eval(alg_->lo()));
            }
        }
        // v is within (m, m+2); decide with exact signs
        Value val = blank();
        val.pv_ = v;
        for (;;) {
            if (sign(sub(val, from_rat(Rat(m)))) < 0) { m -= 1; continue; }
            if (sign(sub(val, from_rat(Rat(m + 1)))) >= 0) { m += 1; continue; }
            return m;
        }
    }

    Iv enclosure_alg(const detail::PolyVal& v, long bits) const {
        auto [lo, hi] = beta_bracket(bits + 8);
        std::pair<Rat, Rat> ev = poly_of(v).eval_interval(lo, hi);
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
        return Iv::from_rat_pair(ev.first, ev.second, prec);
    }

    void extend_orbit(std::int64_t n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        while (static_cast<std::int64_t>(orbit_t_.size()) <= n) {
            const detail::PolyVal prev = orbit_t_.back();
            // a_k = floor(-t_0 - beta * t_{k-1})
            Poly arg = -poly_of(orbit_t_[0]) - Poly::x() * poly_of(prev);
            Int ak = floor_alg(reduce(arg));
            detail::PolyVal tk = reduce(Poly::x() * (-poly_of(prev)) - Poly::constant(Rat(ak)));
            orbit_t_.push_back(std::move(tk));
            orbit_a_.push_back(ak.get_si());
        }
    }

    // ---- streamed backend ------------------------------------------------------

    void init_streamed() {
        if (seq_.is_eventually_periodic()) {
            Poly p = periodic_series_poly(seq_.prefix(), seq_.period());
            Poly sf = p.square_free_part().primitive();
            Rat lo(a1_), hi(a1_ + 1);
            // exact endpoint roots first
            if (sf.eval(lo) == 0) { alg_ = AlgebraicReal::from_rational(lo); alg_backed_ = true; return; }
            if (sf.eval(hi) == 0) {
                SturmChain chain(sf);
                if (chain.count_roots(lo, hi) == 1) { alg_ = AlgebraicReal::from_rational(hi); alg_backed_ = true; return; }
            }
            SturmChain chain(sf);
            int n = chain.count_roots(lo, hi);
            if (n < 1) throw NoSignChange("no root of the closed form in [a1, a1+1]");
            // Multiple candidates are possible for a reducible closed form; narrow
            // to the unique admissible one by checking the tail inequalities.
            alg_ = pick_periodic_root(sf, lo, hi, n);
            alg_backed_ = true;
            return;
        }
        br_lo_ = Rat(a1_);
        br_hi_ = Rat(a1_ + 1);
        int slo = series_sign_at(br_lo_), shi = series_sign_at(br_hi_);
        if (slo == 0 || shi == 0 || slo == shi)
            throw NoSignChange("series residual has equal certified signs at bracket ends");
        g_sign_lo_ = slo;
        br_bits_ = 0;
    }

    AlgebraicReal pick_periodic_root(const Poly& sf, const Rat& lo, const Rat& hi, int count) const {
        // bisect into single-root cells, then verify the defining series identity
        struct Cell { Rat l, h; };
        std::vector<Cell> cells{{lo, hi}}, isolated;
        SturmChain chain(sf);
        while (!cells.empty()) {
            Cell c = cells.back();
            cells.pop_back();
            int n = chain.count_roots(c.l, c.h);
            if (n == 0) continue;
            if (n == 1) { isolated.push_back(c); continue; }
            Rat mid = (c.l + c.h) / 2;
            if (sf.eval(mid) == 0) {
                AlgebraicReal exact = AlgebraicReal::from_rational(mid);
                if (periodic_root_admissible(exact)) return exact;
                // strip that root and isolate the rest
                Poly reduced2 = sf.divmod(Poly({-mid, Rat(1)})).first.primitive();
                return pick_periodic_root(reduced2, lo, hi, count);
            }
            cells.push_back({c.l, mid});
            cells.push_back({mid, c.h});
        }
        for (const auto& c : isolated) {
            AlgebraicReal cand = c.l == c.h ? AlgebraicReal::from_rational(c.l)
                                            : AlgebraicReal::make(sf, c.l, c.h);
            if (periodic_root_admissible(cand)) return cand;
        }
        throw NoSignChange("no admissible root of the closed form in [a1, a1+1]");
    }

    bool periodic_root_admissible(const AlgebraicReal& cand) const {
        // all shifted tails must satisfy t_0 <= tail <= t_{-1} (closed form, exact)
        auto tmp = make_algebraic(cand, opt_);
        size_t p = seq_.prefix().size(), q = std::max<size_t>(seq_.period().size(), 1);
        std::vector<int> pref = seq_.prefix(), per = seq_.period();
        for (size_t n = 0; n <= p + q; ++n) {
            // tail after shift n is again eventually periodic; sum it exactly
            Value tail = tmp->from_rat(Rat(0));
            // tail = sum_{k>=1} a_{n+k} (-beta)^{-k}; split prefix part and periodic part
            // evaluate by Horner over one period using geometric series:
            // sum = pre + (-b)^{-m} * per_sum / (1 - (-b)^{-q})
            std::vector<int> head;
            for (size_t k = n; k < pref.size(); ++k) head.push_back(pref[k]);
            size_t shift_in_period = per.empty() ? 0 : (n > pref.size() ? (n - pref.size()) % per.size() : 0);
            std::vector<int> cyc;
            for (size_t k = 0; k < per.size(); ++k) cyc.push_back(per[(shift_in_period + k) % per.size()]);
            Value pre = tmp->from_rat(Rat(0));
            for (size_t k = 0; k < head.size(); ++k)
                pre = tmp->add(pre, tmp->from_rat(Rat(head[k])).times_beta_pow(-(std::int64_t)(k + 1)).scaled((k + 1) % 2 ? Rat(-1) : Rat(1)));
            Value tail_val = pre;
            if (!cyc.empty()) {
                Value per_sum = tmp->from_rat(Rat(0));
                for (size_t k = 0; k < cyc.size(); ++k)
                    per_sum = tmp->add(per_sum, tmp->from_rat(Rat(cyc[k])).times_beta_pow(-(std::int64_t)(k + 1)).scaled((k + 1) % 2 ? Rat(-1) : Rat(1)));
                // geometric: factor = (-b)^{-m} / (1 - (-b)^{-q]), m = |head|
                Value mb_min_q = tmp->beta_pow(-(std::int64_t)cyc.size()).scaled(cyc.size() % 2 ? Rat(-1) : Rat(1));
                Value denom = tmp->sub(tmp->from_rat(Rat(1)), mb_min_q);
                Value factor = tmp->div(tmp->beta_pow(-(std::int64_t)head.size()).scaled(head.size() % 2 ? Rat(-1) : Rat(1)), denom);
                tail_val = tmp->add(tail_val, tmp->mul(per_sum, factor));
            }
            if (n == 0) {
                if (!tmp->equals(tail_val, tmp->t0())) return false;
            } else {
                if (tmp->sign(tmp->sub(tail_val, tmp->t0())) < 0) return false;
                if (tmp->sign(tmp->sub(tail_val, tmp->t_minus1())) > 0) return false;
            }
        }
        return true;
    }

    /// Certified sign of g(x) = sum a_k (-x)^{-k} + x/(x+1) at an exact rational x > 1.
    /// Nearby probes need similar budgets, so the last successful ones seed the next call.
    int series_sign_at(const Rat& x) const {
        long terms = sign_terms_hint_.load();
        long prec = sign_prec_hint_.load();
        for (;;) {
            Iv gx = series_residual_iv(x, terms, static_cast<mpfr_prec_t>(prec));
            if (gx.strictly_positive() || gx.strictly_negative()) {
                sign_terms_hint_.store(terms);
                sign_prec_hint_.store(prec);
                return gx.strictly_positive() ? 1 : -1;
            }
            if (terms >= opt_.digit_terms_cap && prec >= opt_.bracket_bits_cap + 64)
                throw UndecidableAtPrecision("series residual sign at " + x.get_str());
            terms = std::min(terms * 2, opt_.digit_terms_cap);
            prec = std::min(prec * 2, opt_.bracket_bits_cap + 64);
        }
    }

    Iv series_residual_iv(const Rat& x, long terms, mpfr_prec_t prec) const {
        return series_g_iv(Iv::from_rat(x, prec), terms, prec);
    }

    /// g(x) = sum a_k (-x)^{-k} + x/(x+1) over an interval x > 1.
    Iv series_g_iv(const Iv& xi, long terms, mpfr_prec_t prec) const {
        Iv minus_inv = Iv::from_long(-1, prec) / xi;
        Iv acc = Iv::from_long(0, prec);
        for (long k = terms; k >= 1; --k) {
            acc = (acc + Iv::from_long(seq_.digit(k), prec)) * minus_inv;
        }
        // tail magnitude <= amax * x^-terms / (x - 1)
        Iv amax = Iv::from_long(amax_, prec);
        Iv tail = amax * xi.pow_si(-terms) / (xi - Iv::from_long(1, prec));
        Iv with_tail = acc.widened(tail);
        Iv target = xi / (xi + Iv::from_long(1, prec));
        return with_tail + target;
    }

    /// g'(x) = sum k a_k (-1)^{k+1} x^{-k-1} + 1/(x+1)^2 over an interval x > 1.
    Iv series_gprime_iv(const Iv& xi, long terms, mpfr_prec_t prec) const {
        Iv inv = Iv::from_long(1, prec) / xi;
        Iv acc = Iv::from_long(0, prec);
        for (long k = terms; k >= 1; --k) {
            long coeff = (k % 2 ? k : -k) * seq_.digit(k);
            acc = (acc + Iv::from_long(coeff, prec)) * inv;
        }
        acc = acc * inv; // shift all exponents to -(k+1)
        // tail magnitude <= amax * (terms + 2) * x^{-terms+1} / (x-1)^2
        Iv amax = Iv::from_long(amax_ * (terms + 2), prec);
        Iv xm1 = xi - Iv::from_long(1, prec);
        Iv tail = amax * xi.pow_si(-terms + 1) / (xm1 * xm1);
        Iv with_tail = acc.widened(tail);
        Iv xp1 = xi + Iv::from_long(1, prec);
        return with_tail + Iv::from_long(1, prec) / (xp1 * xp1);
    }

    void ensure_bracket_bits(long bits) const {
        std::unique_lock<std::recursive_mutex> lock(mu_);
        if (mode_ == Mode::algebraic || alg_backed_) {
            alg_->refine_to_bits(bits);
            return;
        }
        if (br_bits_ >= bits) return;
        Rat target = pow_rat(Rat(1, 2), bits);
        double log2b = std::log2(static_cast<double>(a1_));
        while (br_hi_ - br_lo_ > target) {
            // certified interval Newton step: root in mid - g(mid)/g'([lo,hi]);
            // quadratic shrink while the derivative stays away from zero
            long terms = std::min<long>(static_cast<long>((bits + 96) / std::max(log2b, 1.0)) + 16,
                                        opt_.digit_terms_cap);
            mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 128);
            Rat mid = (br_lo_ + br_hi_) / 2;
            Iv gm = series_g_iv(Iv::from_rat(mid, prec), terms, prec);
            Iv gd = series_gprime_iv(Iv::from_rat_pair(br_lo_, br_hi_, prec), terms, prec);
            bool stepped = false;
            if (gd.strictly_positive() || gd.strictly_negative()) {
                Iv cand = Iv::from_rat(mid, prec) - gm / gd;
                Rat cl = cand.lo_rat(), ch = cand.hi_rat();
                Rat nl = std::max(br_lo_, cl), nh = std::min(br_hi_, ch);
                if (nl <= nh && nh - nl < (br_hi_ - br_lo_) * Rat(3, 4)) {
                    br_lo_ = nl;
                    br_hi_ = nh;
                    stepped = true;
                }
            }
            if (!stepped) {
                lock.unlock();
                int sm;
                try { sm = series_sign_at(mid); } catch (...) { lock.lock(); throw; }
                lock.lock();
                if (sm == g_sign_lo_) br_lo_ = mid;
                else br_hi_ = mid;
            }
        }
        br_bits_ = bits;
    }

    Iv enclosure_sym(const detail::SymVal& v, long bits) const {
        auto [lo, hi] = beta_bracket(bits);
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
        Iv beta_iv = Iv::from_rat_pair(lo, hi, prec);
        Iv acc = Iv::from_long(0, prec);
        if (!v.pow.empty()) {
            // Horner from the highest power down to the lowest, then shift
            std::int64_t kmin = v.pow.begin()->first;
            std::int64_t kmax = v.pow.rbegin()->first;
            for (std::int64_t k = kmax; k >= kmin; --k) {
                acc = acc * beta_iv;
                auto it = v.pow.find(k);
                if (it != v.pow.end()) acc = acc + Iv::from_rat(it->second, prec);
            }
            if (kmin != 0) acc = acc * beta_iv.pow_si(kmin);
        }
        if (v.s != 0)
            acc = acc + Iv::from_rat(v.s, prec) / (beta_iv + Iv::from_long(1, prec));
        return acc;
    }

    static detail::SymVal times_beta_once(const detail::SymVal& v) {
        detail::SymVal out;
        for (const auto& [k, c] : v.pow) out.pow[k + 1] += c;
        if (v.s != 0) {
            out.pow[0] += v.s;  // s*b = 1 - s
            out.s -= v.s;
        }
        out.prune();
        return out;
    }

    static detail::SymVal div_beta_once(const detail::SymVal& v) {
        detail::SymVal out;
        for (const auto& [k, c] : v.pow) out.pow[k - 1] += c;
        if (v.s != 0) {
            out.pow[-1] += v.s;  // s/b = 1/b - s
            out.s -= v.s;
        }
        out.prune();
        return out;
    }

    /// Bracket precision below this drowns the value in cancellation; skip
    /// straight to a rung where the enclosure width can be meaningful.
    long first_useful_bits(const detail::SymVal& v) const {
        double worst = 0;
        double log2b = std::log2(static_cast<double>(a1_ + 1));
        for (const auto& [k, c] : v.pow) {
            double mag = static_cast<double>(mpz_sizeinbase(c.get_num_mpz_t(), 2)) -
                         static_cast<double>(mpz_sizeinbase(c.get_den_mpz_t(), 2)) +
                         static_cast<double>(k) * log2b;
            worst = std::max(worst, mag);
        }
        long bits = opt_.start_bits + static_cast<long>(worst) + 8;
        return std::min(std::max(bits, opt_.start_bits), opt_.bracket_bits_cap);
    }

    static detail::SymVal sub_sym(const detail::SymVal& a, const detail::SymVal& b) {
        detail::SymVal r = a;
        for (const auto& [k, c] : b.pow) r.pow[k] -= c;
        r.s -= b.s;
        r.prune();
        return r;
    }

    static std::string sym_string(const detail::SymVal& v) {
        if (v.is_sym_zero()) return "0";
        std::ostringstream out;
        bool first = true;
        auto emit = [&](const Rat& c, const std::string& sym) {
            if (c == 0) return;
            Rat a = abs(c);
            if (first) out << (sgn(c) < 0 ? "-" : "");
            else out << (sgn(c) < 0 ? " - " : " + ");
            if (a != 1 || sym.empty()) {
                out << a.get_str();
                if (!sym.empty()) out << "*";
            }
            out << sym;
            first = false;
        };
        for (const auto& [k, c] : v.pow) {
            std::string sym;
            if (k == 1) sym = "b";
            else if (k != 0) sym = "b^" + std::to_string(k);
            emit(c, sym);
        }
        emit(v.s, "s"); // s denotes 1/(b+1)
        return out.str();
    }

    static Int mpfr_floor_int(mpfr_srcptr x) {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDD);
        return z;
    }

    void domain_check(const Value& x) const {
        check_ctx(x);
        if (sign(sub(x, t0())) < 0 || sign(sub(x, t_minus1())) >= 0)
            throw OutOfDomain("point outside [t_0, t_{-1})");
    }

    Value t_map_unchecked(const Value& x) const {
        auto [next, d] = step(x);
        (void)d;
        return next;
    }

    std::pair<Value, long> step(const Value& x) const {
        Value w = x.times_beta_pow(1).scaled(Rat(-1)); // -beta*x
        Value arg = add(neg(t0()), w);                 // -t_0 - beta*x
        Int d = floor_of(arg);
        Value next = sub(w, from_rat(Rat(d)));
        return {next, d.get_si()};
    }

    // ---- data ----------------------------------------------------------------

    Mode mode_ = Mode::algebraic;
    ContextOptions opt_;

    // algebraic (also backs declared-periodic streamed bases)
    mutable std::optional<AlgebraicReal> alg_;
    bool alg_backed_ = false;
    Poly minpoly_;
    int deg_ = 0;
    detail::PolyVal inv1p_, inv_beta_;
    mutable std::vector<detail::PolyVal> orbit_t_;
    mutable std::vector<long> orbit_a_;

    // streamed
    DigitSequence seq_;
    long a1_ = 0;
    int amax_ = 0;
    mutable std::vector<detail::SymVal> orbit_sym_;
    mutable Rat br_lo_, br_hi_;
    mutable long br_bits_ = -1;
    int g_sign_lo_ = 0;
    mutable std::atomic<long> sign_terms_hint_{64};
    mutable std::atomic<long> sign_prec_hint_{128};

    mutable std::recursive_mutex mu_;
};

inline Value operator+(const Value& a, const Value& b) { return a.ctx()->add(a, b); }
inline Value operator-(const Value& a, const Value& b) { return a.ctx()->sub(a, b); }
inline Value operator-(const Value& a) { return a.ctx()->neg(a); }
inline Value operator*(const Value& a, const Value& b) { return a.ctx()->mul(a, b); }
inline Value operator/(const Value& a, const Value& b) { return a.ctx()->div(a, b); }
inline Value Value::scaled(const Rat& r) const { return ctx_->scale(*this, r); }
inline Value Value::times_beta_pow(std::int64_t k) const { return ctx_->mul_beta_pow(*this, k); }
inline std::string Value::exact_string() const { return ctx_ ? ctx_->exact_string_of(*this) : "0"; }
inline std::string Value::exact_key() const { return ctx_ ? ctx_->exact_key_of(*this) : "0"; }

inline int sign(const Value& v) { return v.ctx()->sign(v); }
inline Int floor_of(const Value& v) { return v.ctx()->floor_of(v); }
inline bool equals(const Value& a, const Value& b) { return a.ctx()->equals(a, b); }
inline int compare(const Value& a, const Value& b) { return a.ctx()->compare(a, b); }

} // namespace negabeta
