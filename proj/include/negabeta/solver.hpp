// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "negabeta/context.hpp"
#include "negabeta/digits.hpp"

namespace negabeta {

enum class AltOrder { less, equal_up_to_horizon, greater };

/// Alternate order on digit streams: the first disagreement at position n+1
/// (after n agreeing letters) decides via the sign of (-1)^n (x_{n+1} - y_{n+1}).
inline AltOrder alt_compare(const DigitSequence& x, std::int64_t x_shift,
                            const DigitSequence& y, std::int64_t y_shift, std::int64_t horizon) {
    if (horizon < 1) throw PreconditionFailed("horizon must be >= 1");
    for (std::int64_t n = 0; n < horizon; ++n) {
        long xv = x.digit(x_shift + n + 1);
        long yv = y.digit(y_shift + n + 1);
        if (xv == yv) continue;
        long d = (n % 2 == 0) ? (xv - yv) : (yv - xv);
        return d < 0 ? AltOrder::less : AltOrder::greater;
    }
    return AltOrder::equal_up_to_horizon;
}

/// Strict variant: needs a jump of at least 2 at the first disagreement.
inline bool alt_compare_strict(const DigitSequence& x, std::int64_t x_shift,
                               const DigitSequence& y, std::int64_t y_shift, std::int64_t horizon) {
    for (std::int64_t n = 0; n < horizon; ++n) {
        long xv = x.digit(x_shift + n + 1);
        long yv = y.digit(y_shift + n + 1);
        if (xv == yv) continue;
        long d = (n % 2 == 0) ? (xv - yv) : (yv - xv);
        return d < -1;
    }
    return false;
}

/// Checks the two admissibility conditions on a digit stream:
///  - every shifted tail is alternate-below the stream itself (with a_1 >= 2);
///  - after every zero digit, the tail is strictly alternate-below.
/// Both are verified to a horizon and reported separately.
struct AdmissibilityReport {
    bool first_digit_ok = false;
    bool shift_condition_ok = false;       // tails <=_alt stream, n <= shift_horizon
    std::optional<std::int64_t> shift_violation;
    bool zero_tail_condition_ok = false;   // tails after zeros <'_alt stream
    std::optional<std::int64_t> zero_tail_violation; // index n of the zero digit
    std::int64_t shift_horizon = 0;
    std::int64_t letter_horizon = 0;

    bool admissible() const { return first_digit_ok && shift_condition_ok; }
    bool expansion_certified() const { return admissible() && zero_tail_condition_ok; }
};

inline AdmissibilityReport validate_admissibility(const DigitSequence& a, std::int64_t shift_horizon = 10000,
                                std::int64_t letter_horizon = 10000) {
    AdmissibilityReport rep;
    rep.shift_horizon = shift_horizon;
    rep.letter_horizon = letter_horizon;
    rep.first_digit_ok = a.digit(1) >= 2;
    rep.shift_condition_ok = true;
    rep.zero_tail_condition_ok = true;
    for (std::int64_t n = 1; n <= shift_horizon; ++n) {
        if (rep.shift_condition_ok &&
            alt_compare(a, n, a, 0, letter_horizon) == AltOrder::greater) {
            rep.shift_condition_ok = false;
            rep.shift_violation = n;
        }
        if (n >= 2 && rep.zero_tail_condition_ok && a.digit(n) == 0 &&
            !alt_compare_strict(a, n, a, 0, letter_horizon)) {
            rep.zero_tail_condition_ok = false;
            rep.zero_tail_violation = n;
        }
        if (!rep.shift_condition_ok && !rep.zero_tail_condition_ok) break;
    }
    return rep;
}

struct SolveResult {
    CtxPtr context;                 // base recovered from the digits
    bool exact = false;             // true when the base is an algebraic number
    AdmissibilityReport admissibility;
    bool is_expansion = false;      // whether the digits are the actual expansion
    Rat residual_upper;             // certified bound on the defining residual
};

/// Validates that the digits of the context's base expand as declared, to the
/// horizon. For an exact algebraic base the orbit digits are recomputed through
/// the transformation; for a streamed base the domain condition on every tail
/// value is certified instead (the two are equivalent).
///
/// The streamed check runs the orbit recurrence in interval arithmetic; the
/// interval width grows by a factor of beta per step, so one pass at a
/// precision proportional to the horizon certifies almost every step, and only
/// straddles fall back to exact comparisons.
inline bool validate_expansion(const DigitSequence& a, const CtxPtr& ctx, std::int64_t horizon = 256) {
    if (ctx->algebraic()) {
        for (std::int64_t n = 1; n <= horizon; ++n)
            if (ctx->a(n) != a.digit(n)) return false;
        return true;
    }
    long log2b = 2;
    while ((1L << log2b) < a.digit(1) + 1) ++log2b;
    long bits = std::min(horizon * log2b + 128, ctx->options().bracket_bits_cap);
    auto [blo, bhi] = ctx->beta_bracket(bits);
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
    Iv beta = Iv::from_rat_pair(blo, bhi, prec);
    Iv one = Iv::from_long(1, prec);
    Iv s = one / (beta + one);
    Iv t0 = s - one;
    Iv t = t0;
    auto exact_step = [&](std::int64_t n) {
        // interval too wide here; settle this index exactly
        Value tn = ctx->t(n);
        if (ctx->compare(tn, ctx->t0()) < 0) return false;
        if (ctx->compare(tn, ctx->t_minus1()) >= 0) return false;
        return true;
    };
    for (std::int64_t n = 1; n <= horizon; ++n) {
        t = -(beta * t) - Iv::from_long(a.digit(n), prec);
        Iv above = t - t0;   // need t_n >= t_0
        Iv below = s - t;    // need t_n < t_{-1}
        if (above.strictly_negative() || below.strictly_negative()) return false;
        bool above_ok = above.strictly_positive() || above.is_point_zero();
        bool below_ok = below.strictly_positive();
        if (!above_ok || !below_ok) {
            if (!exact_step(n)) return false;
            // restart the interval orbit from the exact value's enclosure
            t = ctx->enclosure(ctx->t(n), bits);
        }
    }
    return true;
}

/// Recovers the unique base in [a_1, a_1+1] whose left-endpoint expansion
/// series matches the digit stream. Declared eventually periodic streams are
/// solved in closed form to an exact algebraic number (bracket endpoint roots
/// included); other streams get a certified bisection bracket.
inline SolveResult solve_beta(const DigitSequence& a, long target_bits = 128,
                              std::int64_t validation_horizon = 4096,
                              ContextOptions opt = {}) {
    SolveResult res;
    res.admissibility = validate_admissibility(a, validation_horizon, validation_horizon);
    if (!res.admissibility.first_digit_ok)
        throw PreconditionFailed("solver needs a first digit >= 2");
    if (!res.admissibility.shift_condition_ok)
        throw PreconditionFailed("digit stream violates the alternate-order shift condition at n = " +
                                 std::to_string(*res.admissibility.shift_violation));

    if (a.is_eventually_periodic()) {
        // exact closed form; reuse the streamed constructor's root selection
        auto probe = BetaContext::make_streamed(a, opt);
        AlgebraicReal root = probe->base();
        res.context = BetaContext::make_algebraic(root, opt);
        res.exact = true;
        res.residual_upper = Rat(0);
    } else {
        auto ctx = BetaContext::make_streamed(a, opt);
        ctx->beta_bracket(target_bits);
        res.context = ctx;
        res.exact = false;
        res.residual_upper = ctx->solver_residual(target_bits).abs_upper();
    }
    res.is_expansion = validate_expansion(a, res.context,
                                          std::min<std::int64_t>(validation_horizon, 512));
    return res;
}

/// Named digit streams used throughout the examples and probes.
inline std::vector<std::string> builtin_sequence_names() { return {"prop11", "prop12", "prop13"}; }

inline DigitSequence builtin_sequence(const std::string& name) {
    if (name == "prop11") return builtin::prop11();
    if (name == "prop12") return builtin::prop12();
    if (name == "prop13") return builtin::prop13();
    throw PreconditionFailed("unknown builtin sequence: " + name);
}

} // namespace negabeta
