// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "negabeta/fixed_point.hpp"

namespace negabeta {

/// Membership test for the integer-like points: y_k belongs to the point set
/// exactly when the right endpoint value of u_{k-1} or the left endpoint value
/// of u_k is zero. This is a value test; identified letters share the answer.
inline bool is_z_point(const FixedPointView& view, std::int64_t k) {
    const auto& alpha = *view.alphabet();
    return alpha.info(view.letter(k - 1)).t2jm1_zero || alpha.info(view.letter(k)).t2i_zero;
}

/// A sorted finite view of the tiling endpoints inside [lo, hi], with flags for
/// the distinguished subset and the letter of the interval starting at each point.
struct PointSetWindow {
    struct Entry {
        std::int64_t k;
        Value y;
        bool is_z;
        LetterId letter; // u_k, the interval to the right
    };
    CtxPtr ctx;
    std::shared_ptr<FixedPointView> view;
    Value lo, hi;
    std::vector<Entry> points;

    // the pointers alias this window, so the call is blocked on temporaries
    std::vector<const Entry*> z_points() const& {
        std::vector<const Entry*> out;
        for (const auto& e : points)
            if (e.is_z) out.push_back(&e);
        return out;
    }
    std::vector<const Entry*> z_points() const&& = delete;
};

/// All y_k in [lo, hi] with membership flags. Enumeration extends one letter
/// past each edge so boundary points are never dropped.
inline PointSetWindow z_enumerate(std::shared_ptr<FixedPointView> view, const Value& lo, const Value& hi) {
    const CtxPtr& ctx = view->ctx();
    if (ctx->compare(lo, hi) > 0) throw PreconditionFailed("window is empty");
    std::int64_t k_lo = 0;
    if (ctx->compare(view->y(0), lo) >= 0) {
        while (ctx->compare(view->y(k_lo - 1), lo) >= 0) --k_lo;
    } else {
        while (ctx->compare(view->y(k_lo), lo) < 0) ++k_lo;
    }
    std::int64_t k_hi = k_lo - 1;
    while (ctx->compare(view->y(k_hi + 1), hi) <= 0) ++k_hi;

    PointSetWindow out;
    out.ctx = ctx;
    out.view = view;
    out.lo = lo;
    out.hi = hi;
    for (std::int64_t k = k_lo; k <= k_hi; ++k)
        out.points.push_back({k, view->y(k), is_z_point(*view, k), view->letter(k)});
    return out;
}

/// Distinct consecutive distances between marked points, sorted ascending,
/// with multiplicities.
struct GapStat {
    Value length;
    std::int64_t count = 0;
};

inline std::vector<GapStat> gap_distances(const PointSetWindow& window) {
    auto zs = window.z_points();
    if (zs.size() < 2) throw TooFewPoints("need at least two marked points for gaps");
    const CtxPtr& ctx = window.ctx;
    std::vector<Value> gaps;
    for (size_t i = 1; i < zs.size(); ++i) gaps.push_back(zs[i]->y - zs[i - 1]->y);
    std::map<std::string, GapStat> grouped;
    for (auto& g : gaps) {
        auto [it, fresh] = grouped.try_emplace(g.exact_key(), GapStat{g, 0});
        it->second.count += 1;
    }
    std::vector<GapStat> out;
    for (auto& [key, st] : grouped) out.push_back(st);
    std::sort(out.begin(), out.end(),
              [&](const GapStat& a, const GapStat& b) { return ctx->compare(a.length, b.length) < 0; });
    return out;
}

// ---------------------------------------------------------------------------
// Gap anti-morphism: factors between consecutive marked points, as letters.
// ---------------------------------------------------------------------------

struct GapLetterInfo {
    Word word;    // factor of the fixed point between consecutive marked points
    Value length; // total interval length
    std::string name;
};

struct GapMorphism {
    std::shared_ptr<Alphabet> alphabet;
    std::vector<GapLetterInfo> letters;       // index = gap letter id; 0 is the seed
    std::vector<std::vector<int>> rules;      // image word per gap letter
    bool closed = false;
    bool budget_exceeded = false;

    std::string rule_string(int id) const {
        std::string out = letters[id].name + " -> ";
        for (size_t p = 0; p < rules[id].size(); ++p) {
            if (p) out += " ";
            out += letters[rules[id][p]].name;
        }
        return out;
    }
};

namespace detail {

inline std::string gap_name(size_t index) {
    std::string name;
    size_t n = index;
    do {
        name.insert(name.begin(), static_cast<char>('A' + n % 26));
        n = n / 26;
    } while (n-- > 0 && name.size() < 8);
    return name;
}

} // namespace detail

/// Derives the induced anti-morphism on gaps, starting from the unit factor
/// spanning [0, 1]. Splitting positions follow the membership value test.
/// Returns a partial table with budget_exceeded set instead of failing when
/// max_letters is hit.
inline GapMorphism derive_gap_morphism(std::shared_ptr<FixedPointView> view, size_t max_letters = 64) {
    const CtxPtr& ctx = view->ctx();
    auto alpha = view->alphabet();
    // need beta >= (1+sqrt(5))/2, i.e. beta^2 - beta - 1 >= 0
    Value crit = ctx->beta_pow(2) - ctx->beta() - ctx->from_rat(Rat(1));
    if (ctx->sign(crit) < 0)
        throw BetaTooSmall("gap structure needs beta at least the golden ratio");

    GapMorphism gm;
    gm.alphabet = alpha;
    std::map<Word, int> intern;
    std::deque<int> todo;

    auto intern_gap = [&](const Word& w) {
        auto it = intern.find(w);
        if (it != intern.end()) return it->second;
        int id = static_cast<int>(gm.letters.size());
        GapLetterInfo info;
        info.word = w;
        info.length = alpha->word_length(w);
        info.name = detail::gap_name(id);
        gm.letters.push_back(std::move(info));
        gm.rules.emplace_back();
        intern.emplace(w, id);
        todo.push_back(id);
        return id;
    };

    Word seed{view->letter(0), view->letter(1)};
    if (!(alpha->info(seed[0]).i == IndexExt::inf() && alpha->info(seed[1]).i == IndexExt::finite(0)))
        throw FixedPointConsistency("fixed point does not start with the unit factor");
    intern_gap(seed);

    while (!todo.empty()) {
        if (gm.letters.size() > max_letters) {
            gm.budget_exceeded = true;
            gm.closed = false;
            return gm;
        }
        int id = todo.front();
        todo.pop_front();
        Word img = alpha->psi_word(gm.letters[id].word);
        // split at marked positions
        std::vector<Word> factors;
        Word cur{img.front()};
        for (size_t p = 0; p + 1 < img.size(); ++p) {
            bool marked = alpha->info(img[p]).t2jm1_zero || alpha->info(img[p + 1]).t2i_zero;
            if (marked) {
                factors.push_back(cur);
                cur.clear();
            }
            cur.push_back(img[p + 1]);
        }
        factors.push_back(cur);
        for (const Word& f : factors) {
            int gid = intern_gap(f); // may grow the rule table
            gm.rules[id].push_back(gid);
        }
    }
    gm.closed = true;
    return gm;
}

/// Lazy two-sided fixed point of a closed gap morphism, seeded at the unit gap.
inline TwoSidedWord gap_fixed_point(const GapMorphism& gm) {
    if (gm.budget_exceeded) throw LetterBudgetExceeded("gap table is partial");
    if (!gm.closed) throw PreconditionFailed("gap morphism is not closed");
    std::vector<std::vector<int>> rules = gm.rules;
    return TwoSidedWord(0, [rules](int id) {
        Word w;
        for (int g : rules.at(id)) w.push_back(g);
        return w;
    });
}

/// Names of the gaps between consecutive marked points of a window, matched
/// against the gap table (letters absent from the table are shown as '?').
inline std::string gap_sequence(const PointSetWindow& window, const GapMorphism& gm) {
    auto zs = window.z_points();
    std::string out;
    std::map<Word, int> intern;
    for (size_t g = 0; g < gm.letters.size(); ++g) intern.emplace(gm.letters[g].word, static_cast<int>(g));
    for (size_t i = 0; i + 1 < zs.size(); ++i) {
        Word factor;
        for (std::int64_t k = zs[i]->k; k < zs[i + 1]->k; ++k) factor.push_back(window.view->letter(k));
        auto it = intern.find(factor);
        out += it == intern.end() ? std::string("?") : gm.letters[it->second].name;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Independent oracles.
// ---------------------------------------------------------------------------

struct OracleResult {
    std::vector<Value> points;          // sorted ascending
    std::vector<std::string> warnings;  // undecidable comparisons, if any
};

/// Enumerates every admissible digit string of length <= n_max through the
/// state recursion v' = (v + d)/(-beta), v_0 = 0, keeping states inside
/// [t_0, t_{-1}), and returns the distinct represented values inside [lo, hi].
/// Completely independent of the substitution machinery.
inline OracleResult brute_force_oracle(const CtxPtr& ctx, int n_max, const Value& lo, const Value& hi) {
    if (n_max < 1) throw PreconditionFailed("n_max must be >= 1");
    OracleResult res;
    Value t0 = ctx->t0();
    Value digit_cap = t0.times_beta_pow(1).scaled(Rat(-1)); // beta^2/(beta+1)
    std::set<std::string> seen;
    std::vector<Value> collected;

    struct Node {
        Value v; // scaled state
        Value x; // represented value
        int depth;
    };
    std::vector<Node> stack;
    stack.push_back({ctx->from_rat(Rat(0)), ctx->from_rat(Rat(0)), 0});
    // the empty string represents 0
    collected.push_back(ctx->from_rat(Rat(0)));
    seen.insert(collected.back().exact_key());

    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.depth >= n_max) continue;
        long d_lo, d_hi;
        try {
            d_lo = static_cast<long>(floor_of(t0 - node.v).get_si()) + 1;
            d_hi = static_cast<long>(floor_of(digit_cap - node.v).get_si());
        } catch (const UndecidableAtPrecision& e) {
            res.warnings.push_back(e.what());
            continue;
        }
        for (long d = d_lo; d <= d_hi; ++d) {
            Value v2 = (node.v + ctx->from_int(d)).times_beta_pow(-1).scaled(Rat(-1));
            Value x2 = node.x + ctx->from_int(d).times_beta_pow(node.depth).scaled(node.depth % 2 ? Rat(-1) : Rat(1));
            if (seen.insert(x2.exact_key()).second) collected.push_back(x2);
            stack.push_back({std::move(v2), std::move(x2), node.depth + 1});
        }
    }

    for (auto& x : collected) {
        int c_lo, c_hi;
        try {
            c_lo = ctx->compare(x, lo);
            c_hi = ctx->compare(x, hi);
        } catch (const UndecidableAtPrecision& e) {
            res.warnings.push_back(e.what());
            continue;
        }
        if (c_lo >= 0 && c_hi <= 0) res.points.push_back(x);
    }
    std::sort(res.points.begin(), res.points.end(),
              [&](const Value& a, const Value& b) { return ctx->compare(a, b) < 0; });
    return res;
}

/// Reconstructs the full endpoint set from scaled preimages of the left
/// endpoint, union the digit-string values: an oracle for the y_k positions.
inline OracleResult y_enumerate(const CtxPtr& ctx, const Value& lo, const Value& hi,
                                int m_max, int n_max) {
    OracleResult res = brute_force_oracle(ctx, std::max(1, m_max + n_max), lo, hi);
    Value t0 = ctx->t0();
    Value digit_cap = t0.times_beta_pow(1).scaled(Rat(-1));
    std::set<std::string> seen;
    std::vector<Value> out;
    for (auto& p : res.points) {
        seen.insert(p.exact_key());
        out.push_back(p);
    }

    std::vector<Value> level{t0};
    for (int n = 0; n <= n_max; ++n) {
        // contribute (-beta)^{m+n} * x for every preimage x at depth n
        for (const Value& x : level) {
            for (int m = 0; m + n <= m_max + n_max && m <= m_max; ++m) {
                long p = m + n;
                Value y = x.times_beta_pow(p).scaled(p % 2 ? Rat(-1) : Rat(1));
                int c_lo, c_hi;
                try {
                    c_lo = ctx->compare(y, lo);
                    c_hi = ctx->compare(y, hi);
                } catch (const UndecidableAtPrecision& e) {
                    res.warnings.push_back(e.what());
                    continue;
                }
                if (c_lo >= 0 && c_hi <= 0 && seen.insert(y.exact_key()).second) out.push_back(y);
            }
        }
        if (n == n_max) break;
        // next preimage level
        std::vector<Value> next;
        for (const Value& y : level) {
            long d_lo, d_hi;
            try {
                d_lo = static_cast<long>(floor_of(t0 - y).get_si()) + 1;
                d_hi = static_cast<long>(floor_of(digit_cap - y).get_si());
            } catch (const UndecidableAtPrecision& e) {
                res.warnings.push_back(e.what());
                continue;
            }
            for (long d = d_lo; d <= d_hi; ++d)
                next.push_back((y + ctx->from_int(d)).times_beta_pow(-1).scaled(Rat(-1)));
        }
        level = std::move(next);
    }
    std::sort(out.begin(), out.end(), [&](const Value& a, const Value& b) { return ctx->compare(a, b) < 0; });
    res.points = std::move(out);
    return res;
}

} // namespace negabeta
