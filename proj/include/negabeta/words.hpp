// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "negabeta/context.hpp"
#include "negabeta/index_ext.hpp"

namespace negabeta {

using LetterId = int;
using Word = std::vector<LetterId>;

/// One alphabet letter (i, j): the open interval (t_2i, t_{2j-1}) on one side
/// of zero. Letters are identified by the pair of orbit values, not by the
/// index pair, so equal-valued indices collapse to one letter.
struct LetterInfo {
    IndexExt i, j;         // representative indices (first seen)
    Value t2i, t2jm1;      // canonical key
    Value length;          // t_{2j-1} - t_2i > 0
    bool t2i_zero = false; // cached zero tests for membership queries
    bool t2jm1_zero = false;

    std::string str() const { return "(" + i.str() + "," + j.str() + ")"; }
};

/// Registry of interned letters plus the anti-morphism acting on them.
/// Thread-safe in the as-if-pure sense; memoization is internal.
class Alphabet {
public:
    explicit Alphabet(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    const CtxPtr& ctx() const { return ctx_; }

    /// Interns (i, j), validating alphabet membership:
    /// 0 <= t_2i < t_{2j-1} or t_2i < t_{2j-1} <= 0.
    LetterId letter(const IndexExt& i, const IndexExt& j) {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        Value t2i = ctx_->t_even(i);
        Value t2jm1 = ctx_->t_odd(j);
        std::pair<std::string, std::string> key{t2i.exact_key(), t2jm1.exact_key()};
        auto it = intern_.find(key);
        if (it != intern_.end()) {
            LetterId id = it->second;
            const LetterInfo& rep = letters_[id];
            if (!(rep.i == i && rep.j == j)) note_alias(id, i, j);
            return id;
        }
        int s_lo = ctx_->sign(t2i);
        int s_hi = ctx_->sign(t2jm1);
        if (ctx_->compare(t2i, t2jm1) >= 0 || !(s_lo >= 0 || s_hi <= 0))
            throw NotInAlphabet("(" + i.str() + "," + j.str() + ")");
        LetterInfo info;
        info.i = i;
        info.j = j;
        info.t2i = t2i;
        info.t2jm1 = t2jm1;
        info.length = t2jm1 - t2i;
        info.t2i_zero = (s_lo == 0);
        info.t2jm1_zero = (s_hi == 0);
        LetterId id = static_cast<LetterId>(letters_.size());
        letters_.push_back(std::move(info));
        psi_cache_.emplace_back();
        alias_queue_.emplace_back();
        noted_.emplace_back();
        intern_.emplace(std::move(key), id);
        return id;
    }

    const LetterInfo& info(LetterId id) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return letters_.at(id);
    }
    size_t size() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return letters_.size();
    }

    /// Image of one letter under the anti-morphism, selected by exact
    /// comparisons of orbit digits and signs. Memoized per letter.
    const Word& psi(LetterId id) {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!psi_cache_[id]) {
            LetterInfo rep = letters_[id];
            psi_cache_[id] = image_of(rep.i, rep.j);
        }
        verify_aliases(id);
        return *psi_cache_[id];
    }

    /// Anti-morphism on words: psi(vw) = psi(w) psi(v).
    Word psi_word(const Word& w) {
        Word out;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            const Word& img = psi(*it);
            out.insert(out.end(), img.begin(), img.end());
        }
        return out;
    }

    Word psi_square(LetterId id) {
        Word img = psi(id); // copy: psi_word below may intern new letters
        return psi_word(img);
    }

    Value word_length(const Word& w) const {
        Value total = ctx_->from_rat(Rat(0));
        for (LetterId id : w) total = total + info(id).length;
        return total;
    }

    std::string word_string(const Word& w) const {
        std::string out;
        for (size_t k = 0; k < w.size(); ++k) {
            if (k) out += " ";
            out += info(w[k]).str();
        }
        return out;
    }

private:
    void note_alias(LetterId id, const IndexExt& i, const IndexExt& j) {
        if (in_verify_) return; // aliases met while re-deriving an image need no check of their own
        std::string key = i.str() + "|" + j.str();
        if (!noted_[id].insert(key).second) return;
        alias_queue_[id].emplace_back(i, j);
    }

    /// Identified index pairs must produce identified images.
    void verify_aliases(LetterId id) {
        while (!alias_queue_[id].empty()) {
            auto [ai, aj] = alias_queue_[id].back();
            alias_queue_[id].pop_back();
            in_verify_ = true;
            Word alt;
            try { alt = image_of(ai, aj); } catch (...) { in_verify_ = false; throw; }
            in_verify_ = false;
            if (alt != *psi_cache_[id])
                throw CaseAssertionFailed("identified letters (" + ai.str() + "," + aj.str() +
                                          ") and " + letters_[id].str() + " map to different images");
        }
    }

    Word image_of(const IndexExt& i, const IndexExt& j) {
        long a_i = ctx_->a_odd_after(i); // a_{2i+1}
        long a_j = ctx_->a_even(j);      // a_{2j}
        Value t_i = ctx_->t_odd_after(i); // t_{2i+1}
        Value t_j = ctx_->t_even(j);
        int s_i = ctx_->sign(t_i);
        int s_j = ctx_->sign(t_j);

        const IndexExt inf = IndexExt::inf();
        const IndexExt zero = IndexExt::finite(0);
        const IndexExt i1 = i.plus_one();

        if (a_i == a_j && s_i * s_j >= 0) return {letter(j, i1)};

        auto block = [&](const IndexExt& first_i, const IndexExt& first_j,
                         const IndexExt& second_i, const IndexExt& second_j, long count, Word& out) {
            for (long r = 0; r < count; ++r) {
                out.push_back(letter(first_i, first_j));
                out.push_back(letter(second_i, second_j));
            }
        };

        Word out;
        if (s_i > 0 && s_j < 0) {
            long e = a_i - a_j;
            if (e < 0) throw CaseAssertionFailed("negative repeat count in image of (" + i.str() + "," + j.str() + ")");
            out.push_back(letter(j, inf));
            block(inf, zero, zero, inf, e, out);
            out.push_back(letter(inf, i1));
            return out;
        }
        if (s_i > 0 && s_j >= 0) {
            long e = a_i - a_j - 1;
            if (e < 0) throw CaseAssertionFailed("negative repeat count in image of (" + i.str() + "," + j.str() + ")");
            out.push_back(letter(j, zero));
            block(zero, inf, inf, zero, e, out);
            out.push_back(letter(zero, inf));
            out.push_back(letter(inf, i1));
            return out;
        }
        // now t_{2i+1} <= 0; distinguish the boundary value t_0
        bool at_t0 = ctx_->equals(t_i, ctx_->t0());
        long e = a_i - a_j - 1;
        if (e < 0) throw CaseAssertionFailed("negative repeat count in image of (" + i.str() + "," + j.str() + ")");
        if (!at_t0 && s_j >= 0) {
            out.push_back(letter(j, zero));
            block(zero, inf, inf, zero, e, out);
            out.push_back(letter(zero, i1));
            return out;
        }
        if (!at_t0 && s_j < 0) {
            out.push_back(letter(j, inf));
            out.push_back(letter(inf, zero));
            block(zero, inf, inf, zero, e, out);
            out.push_back(letter(zero, i1));
            return out;
        }
        if (at_t0 && s_j >= 0) {
            out.push_back(letter(j, zero));
            block(zero, inf, inf, zero, e, out);
            return out;
        }
        out.push_back(letter(j, inf));
        out.push_back(letter(inf, zero));
        block(zero, inf, inf, zero, e, out);
        return out;
    }

    CtxPtr ctx_;
    mutable std::recursive_mutex mu_;
    // deques keep references to letters and cached images stable while the
    // alphabet grows mid-operation
    std::deque<LetterInfo> letters_;
    std::deque<std::optional<Word>> psi_cache_;
    std::deque<std::vector<std::pair<IndexExt, IndexExt>>> alias_queue_;
    std::deque<std::set<std::string>> noted_; // alias pairs already queued or checked
    std::map<std::pair<std::string, std::string>, LetterId> intern_;
    bool in_verify_ = false;
};

} // namespace negabeta
