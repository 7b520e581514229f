// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "negabeta/errors.hpp"
#include "negabeta/rational.hpp"

namespace negabeta {

/// Letter-to-word substitution on integer digits.
struct Morphism {
    std::map<int, std::vector<int>> rules;
    int seed = 0;

    const std::vector<int>& image(int letter) const {
        auto it = rules.find(letter);
        if (it == rules.end()) throw PreconditionFailed("morphism has no rule for letter " + std::to_string(letter));
        return it->second;
    }

    /// The seed image must start with the seed and grow, so the fixed point exists.
    void validate_prolongable() const {
        const auto& img = image(seed);
        if (img.empty() || img.front() != seed)
            throw PreconditionFailed("morphism is not prolongable from seed " + std::to_string(seed));
        if (img.size() < 2)
            throw PreconditionFailed("seed image does not grow; fixed point would be finite");
    }

    /// Length of sigma^k(letter), computed from occurrence counts.
    Int iterate_length(int letter, int k) const {
        std::map<int, Int> counts{{letter, Int(1)}};
        for (int step = 0; step < k; ++step) {
            std::map<int, Int> next;
            for (const auto& [l, c] : counts)
                for (int out : image(l)) next[out] += c;
            counts = std::move(next);
        }
        Int total(0);
        for (const auto& [l, c] : counts) total += c;
        return total;
    }
    Int word_iterate_length(const std::vector<int>& word, int k) const {
        Int total(0);
        for (int l : word) total += iterate_length(l, k);
        return total;
    }

    /// Parses "3>30032;2>2;0>00@3" (single-character digits).
    static Morphism parse(const std::string& text) {
        Morphism m;
        auto at = text.rfind('@');
        if (at == std::string::npos || at + 1 >= text.size())
            throw PreconditionFailed("morphism literal needs '@seed': " + text);
        m.seed = text[at + 1] - '0';
        std::string body = text.substr(0, at);
        std::istringstream ss(body);
        std::string rule;
        while (std::getline(ss, rule, ';')) {
            auto gt = rule.find('>');
            if (gt != 1 || rule.empty()) throw PreconditionFailed("bad morphism rule: " + rule);
            int from = rule[0] - '0';
            std::vector<int> img;
            for (size_t i = gt + 1; i < rule.size(); ++i) {
                if (rule[i] < '0' || rule[i] > '9') throw PreconditionFailed("bad morphism digit: " + rule);
                img.push_back(rule[i] - '0');
            }
            m.rules[from] = img;
        }
        m.validate_prolongable();
        return m;
    }
};

/// Lazy stream of non-negative integer digits a_1 a_2 ... with declared structure.
/// Digit indices are 1-based.
class DigitSequence {
public:
    enum class Kind { eventually_periodic, morphic, mapped_morphic, rule };

    static DigitSequence eventually_periodic(std::vector<int> prefix, std::vector<int> period) {
        DigitSequence s;
        s.kind_ = Kind::eventually_periodic;
        s.prefix_ = std::move(prefix);
        s.period_ = std::move(period);
        if (s.prefix_.empty() && s.period_.empty()) throw PreconditionFailed("empty digit sequence");
        return s;
    }

    static DigitSequence morphic(Morphism m) {
        m.validate_prolongable();
        DigitSequence s;
        s.kind_ = Kind::morphic;
        s.morphism_ = std::move(m);
        s.state_ = std::make_shared<MorphicState>();
        s.state_->buf.push_back(s.morphism_.seed);
        return s;
    }

    /// outer applied letterwise to the fixed point of inner.
    static DigitSequence mapped_morphic(Morphism inner, std::map<int, std::vector<int>> outer) {
        DigitSequence s = morphic(std::move(inner));
        s.kind_ = Kind::mapped_morphic;
        s.outer_ = std::move(outer);
        return s;
    }

    /// Arbitrary closed-form generator (used by the built-in catalog).
    static DigitSequence rule(int (*fn)(std::int64_t), int alphabet_max, std::string name) {
        DigitSequence s;
        s.kind_ = Kind::rule;
        s.rule_fn_ = fn;
        s.rule_alphabet_max_ = alphabet_max;
        s.name_ = std::move(name);
        return s;
    }

    Kind kind() const { return kind_; }
    bool is_eventually_periodic() const { return kind_ == Kind::eventually_periodic; }
    const std::vector<int>& prefix() const { return prefix_; }
    const std::vector<int>& period() const { return period_; }
    const Morphism& morphism() const { return morphism_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    /// a_n for n >= 1; a_0 is 0 by convention.
    int digit(std::int64_t n) const {
        if (n <= 0) return 0;
        switch (kind_) {
            case Kind::eventually_periodic: {
                if (n <= static_cast<std::int64_t>(prefix_.size())) return prefix_[n - 1];
                if (period_.empty())
                    throw PreconditionFailed("finite digit sequence exhausted at index " + std::to_string(n));
                return period_[(n - 1 - prefix_.size()) % period_.size()];
            }
            case Kind::morphic:
                return morphic_digit(n);
            case Kind::mapped_morphic:
                return mapped_digit(n);
            case Kind::rule:
                return rule_fn_(n);
        }
        return 0;
    }

    int alphabet_max() const {
        switch (kind_) {
            case Kind::eventually_periodic: {
                int m = 0;
                for (int d : prefix_) m = std::max(m, d);
                for (int d : period_) m = std::max(m, d);
                return m;
            }
            case Kind::morphic:
            case Kind::mapped_morphic: {
                int m = 0;
                for (const auto& [l, img] : morphism_.rules)
                    for (int d : img) m = std::max(m, d);
                if (kind_ == Kind::mapped_morphic) {
                    m = 0;
                    for (const auto& [l, img] : outer_)
                        for (int d : img) m = std::max(m, d);
                }
                return m;
            }
            case Kind::rule:
                return rule_alphabet_max_;
        }
        return 0;
    }

    /// "3 (0 1)" -> prefix 3, period 0 1. A trailing '^' after ')' is accepted.
    static DigitSequence parse(const std::string& text) {
        std::vector<int> prefix, period;
        bool in_period = false, seen_period = false;
        std::istringstream ss(text);
        std::string tok;
        while (ss >> tok) {
            if (tok == "(") { in_period = true; continue; }
            if (tok == ")" || tok == ")^") { in_period = false; seen_period = true; continue; }
            if (!tok.empty() && tok.front() == '(') { in_period = true; tok = tok.substr(1); }
            bool close = false;
            while (!tok.empty() && (tok.back() == ')' || tok.back() == '^')) {
                if (tok.back() == ')') close = true;
                tok.pop_back();
            }
            if (!tok.empty()) {
                int v;
                try { v = std::stoi(tok); } catch (...) { throw PreconditionFailed("bad digit token: '" + tok + "'"); }
                if (v < 0) throw PreconditionFailed("digits must be non-negative");
                (in_period ? period : prefix).push_back(v);
            }
            if (close) { in_period = false; seen_period = true; }
        }
        if (in_period) throw PreconditionFailed("unclosed period in sequence literal");
        (void)seen_period;
        return eventually_periodic(std::move(prefix), std::move(period));
    }

private:
    struct MorphicState {
        std::vector<int> buf;       // expanded fixed-point prefix
        std::vector<int> mapped;    // outer images of buf, flattened
        size_t feed = 0;            // next buf index to expand
        size_t mapped_feed = 0;
        std::mutex mu;
    };

    int morphic_digit(std::int64_t n) const {
        auto& st = *state_;
        std::lock_guard<std::mutex> lock(st.mu);
        while (static_cast<std::int64_t>(st.buf.size()) < n) {
            if (st.feed == 0) {
                // replace seed by its image once, then feed letterwise
                st.buf = morphism_.image(morphism_.seed);
                st.feed = 1;
                continue;
            }
            if (st.feed >= st.buf.size())
                throw PreconditionFailed("morphic sequence stopped growing");
            const auto& img = morphism_.image(st.buf[st.feed]);
            st.buf.insert(st.buf.end(), img.begin(), img.end());
            ++st.feed;
        }
        return st.buf[n - 1];
    }

    int mapped_digit(std::int64_t n) const {
        auto& st = *state_;
        {
            std::lock_guard<std::mutex> lock(st.mu);
            while (static_cast<std::int64_t>(st.mapped.size()) < n) {
                std::int64_t need = static_cast<std::int64_t>(st.mapped_feed) + 1;
                int inner;
                {
                    // reuse morphic expansion under the same lock
                    while (static_cast<std::int64_t>(st.buf.size()) < need) {
                        if (st.feed == 0) { st.buf = morphism_.image(morphism_.seed); st.feed = 1; continue; }
                        if (st.feed >= st.buf.size()) throw PreconditionFailed("morphic sequence stopped growing");
                        const auto& img = morphism_.image(st.buf[st.feed]);
                        st.buf.insert(st.buf.end(), img.begin(), img.end());
                        ++st.feed;
                    }
                    inner = st.buf[need - 1];
                }
                auto it = outer_.find(inner);
                if (it == outer_.end()) throw PreconditionFailed("outer morphism missing rule for " + std::to_string(inner));
                st.mapped.insert(st.mapped.end(), it->second.begin(), it->second.end());
                ++st.mapped_feed;
            }
        }
        return st.mapped[n - 1];
    }

    Kind kind_ = Kind::eventually_periodic;
    std::vector<int> prefix_, period_;
    Morphism morphism_;
    std::map<int, std::vector<int>> outer_;
    std::shared_ptr<MorphicState> state_;
    int (*rule_fn_)(std::int64_t) = nullptr;
    int rule_alphabet_max_ = 0;
    std::string name_;
};

namespace builtin {

/// 3 0 1 0^3 1 0^5 1 ...: after the leading 3, blocks 0^(2k-1) 1.
inline int block_rule_digit(std::int64_t n) {
    if (n == 1) return 3;
    // positions k(k-1)+2 .. k(k+1)+1 hold 0^(2k-1) 1
    for (std::int64_t k = 1;; ++k) {
        std::int64_t last = k * (k + 1) + 1;
        if (n <= last) return n == last ? 1 : 0;
    }
}

inline DigitSequence prop11() {
    auto s = DigitSequence::rule(&block_rule_digit, 3, "prop11");
    return s;
}

inline Morphism sigma1() {
    Morphism m;
    m.rules = {{3, {3, 0, 0, 3, 2}}, {2, {2}}, {0, {0, 0}}};
    m.seed = 3;
    return m;
}

inline Morphism sigma2() {
    Morphism m;
    m.rules = {{3, {3, 1, 2, 3, 2}}, {2, {2}}, {1, {1}}};
    m.seed = 3;
    return m;
}

inline DigitSequence prop12() {
    auto s = DigitSequence::morphic(sigma1());
    s.set_name("prop12");
    return s;
}

inline DigitSequence prop13() {
    auto s = DigitSequence::morphic(sigma2());
    s.set_name("prop13");
    return s;
}

} // namespace builtin

} // namespace negabeta
