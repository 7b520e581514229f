// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "negabeta/pointset.hpp"
#include "negabeta/solver.hpp"

namespace negabeta {

// ---------------------------------------------------------------------------
// Uniform discreteness probe: positive odd-index orbit values.
// ---------------------------------------------------------------------------

enum class UdVerdict { holds_to_bound, inf_zero_witnessed, unknown };

struct UdWitness {
    std::int64_t n;      // orbit index (odd)
    std::string decimal; // t_n to 12 places
};

struct UdProbe {
    UdVerdict verdict = UdVerdict::unknown;
    bool exact = false;                 // finite orbit, verdict is not budget-limited
    std::optional<Value> inf_positive;  // smallest positive odd-index value seen
    std::vector<UdWitness> witnesses;   // strictly decreasing positive values
    std::int64_t bound = 0;
};

/// Scans t_1, t_3, t_5, ... for positive values approaching zero. For a finite
/// orbit the scan covers a full cycle and the verdict is exact; otherwise the
/// returned witnesses are the running minima up to the bound.
inline UdProbe ud_condition_probe(const CtxPtr& ctx, std::int64_t n_bound) {
    if (n_bound < 1) throw PreconditionFailed("n_bound must be >= 1");
    UdProbe probe;
    probe.bound = n_bound;
    std::int64_t scan = n_bound;
    if (ctx->algebraic()) {
        auto yr = ctx->orbit_cycle(2 * n_bound + 2);
        if (yr.found) {
            // odd indices cycle after the preperiod; one doubled period covers them
            scan = (yr.preperiod + 2 * yr.period + 2) / 2 + 1;
            probe.exact = true;
        }
    }
    for (std::int64_t n = 1; n <= scan; ++n) {
        Value t = ctx->t(2 * n - 1);
        if (ctx->sign(t) <= 0) continue;
        if (!probe.inf_positive || ctx->compare(t, *probe.inf_positive) < 0) {
            probe.inf_positive = t;
            probe.witnesses.push_back({2 * n - 1, ctx->decimal(t, 12)});
        }
    }
    if (!probe.inf_positive) {
        probe.verdict = UdVerdict::holds_to_bound; // empty positive set
        probe.exact = probe.exact || ctx->algebraic();
        return probe;
    }
    if (probe.exact) {
        probe.verdict = UdVerdict::holds_to_bound; // finite set with a positive minimum
        return probe;
    }
    probe.verdict = probe.witnesses.size() >= 3 ? UdVerdict::inf_zero_witnessed : UdVerdict::unknown;
    return probe;
}

// ---------------------------------------------------------------------------
// Gap extremes and the bundled report.
// ---------------------------------------------------------------------------

inline std::pair<Value, Value> gap_extremes(const PointSetWindow& window) {
    auto zs = window.z_points();
    if (zs.size() < 2) throw TooFewPoints("need two points in the window for gap extremes");
    const CtxPtr& ctx = window.ctx;
    Value min_gap = zs[1]->y - zs[0]->y;
    Value max_gap = min_gap;
    for (size_t i = 2; i < zs.size(); ++i) {
        Value g = zs[i]->y - zs[i - 1]->y;
        if (ctx->compare(g, min_gap) < 0) min_gap = g;
        if (ctx->compare(g, max_gap) > 0) max_gap = g;
    }
    return {min_gap, max_gap};
}

struct DeloneReport {
    std::string window_lo, window_hi; // decimals, 6 places
    std::int64_t points = 0;
    std::int64_t z_points = 0;
    std::optional<std::string> min_gap, max_gap;       // decimals
    std::optional<std::string> min_gap_exact, max_gap_exact;
    UdProbe ud;
    std::optional<OrbitCycle> finite_orbit;
    std::int64_t n_bound = 0;
};

/// Window-relative evidence only: gap extremes over the window plus the
/// discreteness probe. Never claims a global verdict.
inline DeloneReport delone_report(std::shared_ptr<FixedPointView> view, const Value& lo, const Value& hi,
                                  std::int64_t n_bound) {
    const CtxPtr& ctx = view->ctx();
    DeloneReport rep;
    rep.n_bound = n_bound;
    rep.window_lo = ctx->decimal(lo, 6);
    rep.window_hi = ctx->decimal(hi, 6);
    auto window = z_enumerate(view, lo, hi);
    rep.points = static_cast<std::int64_t>(window.points.size());
    rep.z_points = static_cast<std::int64_t>(window.z_points().size());
    if (rep.z_points >= 2) {
        auto [mn, mx] = gap_extremes(window);
        rep.min_gap = ctx->decimal(mn, 6);
        rep.max_gap = ctx->decimal(mx, 6);
        rep.min_gap_exact = mn.exact_string();
        rep.max_gap_exact = mx.exact_string();
    }
    rep.ud = ud_condition_probe(ctx, n_bound);
    if (ctx->algebraic()) rep.finite_orbit = ctx->orbit_cycle(2 * n_bound + 2);
    return rep;
}

// ---------------------------------------------------------------------------
// Word-level gap scans (windows spanned by iterated images, no positions).
// ---------------------------------------------------------------------------

/// Splits a word at the marked internal boundaries; the word is assumed to
/// start and end at marked points, so every factor is a complete gap.
inline std::vector<Word> split_word_at_marks(const Alphabet& alpha, const Word& w) {
    std::vector<Word> factors;
    Word cur{w.front()};
    for (size_t p = 0; p + 1 < w.size(); ++p) {
        if (alpha.info(w[p]).t2jm1_zero || alpha.info(w[p + 1]).t2i_zero) {
            factors.push_back(cur);
            cur.clear();
        }
        cur.push_back(w[p + 1]);
    }
    factors.push_back(cur);
    return factors;
}

/// Smallest and largest gap lengths inside the word spanned by the m-th image
/// of the unit seed. Distinct factors are interned first, so the certified
/// comparisons run once per distinct gap.
inline std::pair<Value, Value> image_window_gap_extremes(std::shared_ptr<FixedPointView> view, int iterations) {
    auto alpha = view->alphabet();
    Word w{view->letter(0), view->letter(1)};
    for (int i = 0; i < iterations; ++i) w = alpha->psi_word(w);
    auto factors = split_word_at_marks(*alpha, w);
    if (factors.size() < 1) throw TooFewPoints("image window has no complete gap");
    std::map<Word, Value> distinct;
    for (const auto& f : factors) distinct.try_emplace(f, alpha->word_length(f));
    const CtxPtr& ctx = view->ctx();
    auto it = distinct.begin();
    Value mn = it->second, mx = it->second;
    for (++it; it != distinct.end(); ++it) {
        if (ctx->compare(it->second, mn) < 0) mn = it->second;
        if (ctx->compare(it->second, mx) > 0) mx = it->second;
    }
    return {mn, mx};
}

/// Minimum gap over a two-sided window of the given letter count, centred at 0.
inline Value window_min_gap(std::shared_ptr<FixedPointView> view, std::int64_t letters) {
    Word w = view->window(-letters / 2, letters - letters / 2 - 1);
    auto alpha = view->alphabet();
    // trim to whole gaps: drop letters before the first mark and after the last
    auto factors = split_word_at_marks(*alpha, w);
    if (factors.size() < 3) throw TooFewPoints("window too small for an interior gap");
    std::map<Word, Value> distinct;
    for (size_t i = 1; i + 1 < factors.size(); ++i) distinct.try_emplace(factors[i], alpha->word_length(factors[i]));
    const CtxPtr& ctx = view->ctx();
    auto it = distinct.begin();
    Value mn = it->second;
    for (++it; it != distinct.end(); ++it)
        if (ctx->compare(it->second, mn) < 0) mn = it->second;
    return mn;
}

// ---------------------------------------------------------------------------
// Boundary-segment iteration: head letters of huge iterated images.
// ---------------------------------------------------------------------------

/// First `keep` letters of the m-th image of (inf, 0), computed without
/// materialising the image (whose length grows like beta^m). Tracks only a
/// prefix and a suffix segment per iteration.
inline Word image_head_letters(std::shared_ptr<Alphabet> alpha, int m, size_t keep) {
    if (m < 1) throw PreconditionFailed("need at least one iteration");
    LetterId seed = alpha->letter(IndexExt::inf(), IndexExt::finite(0));
    Word pref = alpha->psi(seed);
    Word suf = pref;
    auto trim_front = [&](Word& w) { if (w.size() > keep) w.resize(keep); };
    auto trim_back = [&](Word& w) {
        if (w.size() > keep) w.erase(w.begin(), w.end() - static_cast<std::ptrdiff_t>(keep));
    };
    trim_front(pref);
    trim_back(suf);
    for (int step = 1; step < m; ++step) {
        // head of the image comes from the image of the tail, and vice versa
        Word new_pref;
        for (auto it = suf.rbegin(); it != suf.rend() && new_pref.size() < keep; ++it) {
            const Word& img = alpha->psi(*it);
            new_pref.insert(new_pref.end(), img.begin(), img.end());
        }
        Word new_suf;
        for (auto it = pref.rbegin(); it != pref.rend(); ++it) {
            const Word& img = alpha->psi(*it);
            new_suf.insert(new_suf.end(), img.begin(), img.end());
        }
        trim_front(new_pref);
        trim_back(new_suf);
        pref = std::move(new_pref);
        suf = std::move(new_suf);
    }
    return pref;
}

struct UnboundedGapWitness {
    bool verified = false;     // letters match the predicted index pattern
    int consecutive = 0;       // unmarked consecutive letters found
    Value gap;                 // their total length
    Value threshold;           // k / beta
    std::string letters;       // display form
};

/// Looks for k consecutive intervals, none of whose shared endpoints is marked,
/// at the head of the |sigma^k(seed)|-th image of (inf,0). Each has length
/// above 1/beta, so together they witness a gap longer than k/beta.
inline UnboundedGapWitness relative_denseness_gap_witness(std::shared_ptr<FixedPointView> view,
                                                          const Morphism& sigma, int k) {
    const CtxPtr& ctx = view->ctx();
    auto alpha = view->alphabet();
    Int m_big = sigma.iterate_length(sigma.seed, k);
    if (!m_big.fits_sint_p()) throw PreconditionFailed("iteration count overflows");
    int m = static_cast<int>(m_big.get_si());
    Word head = image_head_letters(alpha, m, static_cast<size_t>(k) + 3);

    UnboundedGapWitness wit;
    wit.letters = alpha->word_string(Word(head.begin(), head.begin() + std::min<size_t>(head.size(), k + 1)));
    // predicted pattern: (floor(|s^k|/2), ceil(|s^{k-1}|/2)) ... (0, inf)
    bool pattern_ok = head.size() >= static_cast<size_t>(k) + 1;
    for (int j = 0; pattern_ok && j < k; ++j) {
        Int li = sigma.iterate_length(sigma.seed, k - j);
        Int lj = sigma.iterate_length(sigma.seed, k - j - 1);
        IndexExt want_i = IndexExt::finite((li.get_si()) / 2);
        IndexExt want_j = IndexExt::finite((lj.get_si() + 1) / 2);
        const LetterInfo& got = alpha->info(head[j]);
        if (!(got.i == want_i && got.j == want_j)) pattern_ok = false;
    }
    if (pattern_ok) {
        const LetterInfo& last = alpha->info(head[k]);
        if (!(last.i == IndexExt::finite(0) && last.j == IndexExt::inf())) pattern_ok = false;
    }
    wit.verified = pattern_ok;

    // count unmarked boundaries from the head and accumulate the gap
    Value gap = ctx->from_rat(Rat(0));
    int run = 0;
    for (size_t p = 0; p + 1 < head.size(); ++p) {
        gap = gap + alpha->info(head[p]).length;
        ++run;
        bool marked = alpha->info(head[p]).t2jm1_zero || alpha->info(head[p + 1]).t2i_zero;
        if (marked) break;
    }
    wit.consecutive = run;
    wit.gap = gap;
    wit.threshold = ctx->from_int(k).times_beta_pow(-1);
    return wit;
}

/// Witness indices n_k for the discreteness probe of the sigma_1 stream:
/// n_k = |sigma^k(prefix3)| + |sigma^{k-1}(seed)| + 1, where prefix3 is the
/// first three letters of the fixed point. Computed from morphism lengths.
inline std::int64_t ud_witness_index(const DigitSequence& seq, int k) {
    if (seq.kind() != DigitSequence::Kind::morphic)
        throw PreconditionFailed("witness indices need a morphic stream");
    const Morphism& sigma = seq.morphism();
    std::vector<int> prefix3{static_cast<int>(seq.digit(1)), static_cast<int>(seq.digit(2)),
                             static_cast<int>(seq.digit(3))};
    Int n = sigma.word_iterate_length(prefix3, k) + sigma.iterate_length(sigma.seed, k - 1) + 1;
    return n.get_si();
}

} // namespace negabeta
