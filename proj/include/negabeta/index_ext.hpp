// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "negabeta/errors.hpp"

namespace negabeta {

/// Non-negative index extended with infinity. Arithmetic follows the usual
/// conventions for this alphabet: 2*inf = inf, inf + 1 = inf, inf - 1 = inf.
class IndexExt {
public:
    IndexExt() : v_(0) {}
    static IndexExt finite(std::int64_t n) {
        if (n < 0) throw PreconditionFailed("IndexExt must be non-negative");
        IndexExt i;
        i.v_ = n;
        return i;
    }
    static IndexExt inf() {
        IndexExt i;
        i.v_ = kInf;
        return i;
    }

    bool is_inf() const { return v_ == kInf; }
    std::int64_t value() const {
        if (is_inf()) throw PreconditionFailed("IndexExt is infinite");
        return v_;
    }

    IndexExt twice() const { return is_inf() ? inf() : finite(2 * v_); }
    IndexExt twice_minus_one() const {
        if (is_inf()) return inf();
        if (v_ == 0) throw PreconditionFailed("2*0 - 1 is negative");
        return finite(2 * v_ - 1);
    }
    IndexExt plus_one() const { return is_inf() ? inf() : finite(v_ + 1); }

    bool operator==(const IndexExt& o) const { return v_ == o.v_; }
    bool operator<(const IndexExt& o) const { return v_ < o.v_; }

    std::string str() const { return is_inf() ? "inf" : std::to_string(v_); }

private:
    static constexpr std::int64_t kInf = INT64_MAX;
    std::int64_t v_;
};

} // namespace negabeta
