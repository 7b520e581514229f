// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "negabeta/words.hpp"

namespace negabeta {

/// Two-sided fixed point of an anti-morphism, generated lazily.
/// The right half u_0 u_1 ... is the fixed point of the squared map grown by
/// repeated application (each iterate must extend the previous prefix); the
/// left half ... u_-2 u_-1 is the image of the right half.
class TwoSidedWord {
public:
    using Apply = std::function<Word(int)>;

    TwoSidedWord(int seed, Apply apply) : apply_(std::move(apply)) { right_.push_back(seed); }

    int at(std::int64_t k) const {
        if (k >= 0) {
            ensure_right(k + 1);
            return right_[k];
        }
        ensure_left(-k);
        return leftrev_[-k - 1];
    }

    Word window(std::int64_t k_min, std::int64_t k_max) const {
        if (k_min > k_max) throw PreconditionFailed("empty fixed point window");
        Word out;
        out.reserve(k_max - k_min + 1);
        for (std::int64_t k = k_min; k <= k_max; ++k) out.push_back(at(k));
        return out;
    }

    std::int64_t right_size() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        return static_cast<std::int64_t>(right_.size());
    }

private:
    Word apply_word(const Word& w) const {
        Word out;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            Word img = apply_(*it);
            out.insert(out.end(), img.begin(), img.end());
        }
        return out;
    }

    void ensure_right(std::int64_t n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        while (static_cast<std::int64_t>(right_.size()) < n) {
            Word next = apply_word(apply_word(right_));
            if (next.size() <= right_.size())
                throw FixedPointConsistency("iterate does not grow");
            for (size_t k = 0; k < right_.size(); ++k)
                if (next[k] != right_[k])
                    throw FixedPointConsistency("iterate does not extend the previous prefix");
            right_ = std::move(next);
        }
    }

    void ensure_left(std::int64_t n) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        while (static_cast<std::int64_t>(leftrev_.size()) < n) {
            ensure_right(left_feed_ + 1);
            Word img = apply_(right_[left_feed_]);
            // the image of u_m lands left of the image of u_0 ... u_{m-1}
            leftrev_.insert(leftrev_.end(), img.rbegin(), img.rend());
            ++left_feed_;
        }
    }

    Apply apply_;
    mutable std::recursive_mutex mu_;
    mutable Word right_;
    mutable Word leftrev_; // leftrev_[m] = u_{-1-m}
    mutable std::int64_t left_feed_ = 0;
};

/// The fixed point of the alphabet anti-morphism with u_0 = (inf, 0), plus the
/// tiling positions y_k. Windows of letters and positions are memoized.
class FixedPointView {
public:
    explicit FixedPointView(std::shared_ptr<Alphabet> alphabet)
        : alphabet_(std::move(alphabet)),
          ctx_(alphabet_->ctx()),
          word_(alphabet_->letter(IndexExt::inf(), IndexExt::finite(0)),
                [a = alphabet_](int id) { return a->psi(id); }) {
        // u_-1 = (0, inf) is forced; check it once
        LetterId um1 = word_.at(-1);
        LetterId expect = alphabet_->letter(IndexExt::finite(0), IndexExt::inf());
        if (um1 != expect) throw FixedPointConsistency("u_-1 is not (0, inf)");
        ypos_right_.push_back(ctx_->from_rat(Rat(0)));
    }

    const CtxPtr& ctx() const { return ctx_; }
    const std::shared_ptr<Alphabet>& alphabet() const { return alphabet_; }

    LetterId letter(std::int64_t k) const { return word_.at(k); }
    Word window(std::int64_t k_min, std::int64_t k_max) const { return word_.window(k_min, k_max); }

    /// y_k: cumulative interval lengths, y_0 = 0.
    Value y(std::int64_t k) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (k >= 0) {
            while (static_cast<std::int64_t>(ypos_right_.size()) <= k) {
                std::int64_t m = static_cast<std::int64_t>(ypos_right_.size()); // computing y_m
                ypos_right_.push_back(ypos_right_.back() + alphabet_->info(word_.at(m - 1)).length);
            }
            return ypos_right_[k];
        }
        while (static_cast<std::int64_t>(ypos_left_.size()) < -k) {
            std::int64_t m = -static_cast<std::int64_t>(ypos_left_.size()) - 1; // computing y_m
            const Value& above = ypos_left_.empty() ? ypos_right_.front() : ypos_left_.back();
            ypos_left_.push_back(above - alphabet_->info(word_.at(m)).length);
        }
        return ypos_left_[-k - 1];
    }

private:
    std::shared_ptr<Alphabet> alphabet_;
    CtxPtr ctx_;
    TwoSidedWord word_;
    mutable std::recursive_mutex mu_;
    mutable std::vector<Value> ypos_right_{};
    mutable std::vector<Value> ypos_left_{};
};

inline std::shared_ptr<FixedPointView> make_fixed_point(const CtxPtr& ctx) {
    auto alphabet = std::make_shared<Alphabet>(ctx);
    return std::make_shared<FixedPointView>(alphabet);
}

} // namespace negabeta
