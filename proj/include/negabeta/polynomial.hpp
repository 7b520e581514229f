// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "negabeta/rational.hpp"

namespace negabeta {

/// Dense univariate polynomial over the rationals, coefficients lowest degree first.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(Rat v) { return Poly(std::vector<Rat>{std::move(v)}); }
    static Poly x() { return Poly({Rat(0), Rat(1)}); }
    static Poly from_ints(const std::vector<long>& v) {
        std::vector<Rat> c;
        c.reserve(v.size());
        for (long a : v) c.emplace_back(a);
        return Poly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    const Rat& lead() const { return c_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a) {
        std::vector<Rat> c = a.c_;
        for (auto& v : c) v = -v;
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Rat& s) {
        std::vector<Rat> c = a.c_;
        for (auto& v : c) v *= s;
        return Poly(std::move(c));
    }
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw PreconditionFailed("division by zero polynomial");
        Poly rem = *this;
        std::vector<Rat> q(rem.c_.size() > d.c_.size() ? rem.c_.size() - d.c_.size() + 1 : 1, Rat(0));
        while (!rem.is_zero() && rem.degree() >= d.degree()) {
            Rat f = rem.lead() / d.lead();
            int shift = rem.degree() - d.degree();
            q[shift] += f;
            std::vector<Rat> sub(rem.c_);
            for (size_t i = 0; i < d.c_.size(); ++i) sub[i + shift] -= f * d.c_[i];
            rem = Poly(std::move(sub));
        }
        return {Poly(std::move(q)), rem};
    }
    Poly mod(const Poly& d) const { return divmod(d).second; }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Rat> c(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return Poly(std::move(c));
    }

    Rat eval(const Rat& x) const {
        Rat r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    /// Exact interval Horner over [xl, xh].
    std::pair<Rat, Rat> eval_interval(const Rat& xl, const Rat& xh) const {
        Rat lo(0), hi(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            Rat p1 = lo * xl, p2 = lo * xh, p3 = hi * xl, p4 = hi * xh;
            Rat nlo = std::min(std::min(p1, p2), std::min(p3, p4));
            Rat nhi = std::max(std::max(p1, p2), std::max(p3, p4));
            lo = nlo + *it;
            hi = nhi + *it;
        }
        return {lo, hi};
    }

    /// Monic multiple (same roots).
    Poly monic() const {
        if (is_zero()) return *this;
        return *this * (Rat(1) / lead());
    }

    /// Integer-coefficient multiple with content 1 and positive leading coefficient.
    Poly primitive() const {
        if (is_zero()) return *this;
        Int den_lcm(1);
        for (const auto& v : c_) {
            Int d = v.get_den();
            Int g = ::gcd(den_lcm, d);
            den_lcm = den_lcm / g * d;
        }
        std::vector<Rat> scaled = c_;
        for (auto& v : scaled) v *= Rat(den_lcm);
        Int content(0);
        for (const auto& v : scaled) content = ::gcd(content, v.get_num());
        if (content == 0) content = 1;
        Poly out(std::move(scaled));
        out = out * Rat(Int(1), content);
        if (sgn(out.lead()) < 0) out = -out;
        return out;
    }

    static Poly gcd(const Poly& a, const Poly& b) {
        Poly x = a, y = b;
        while (!y.is_zero()) {
            Poly r = x.mod(y);
            x = y;
            y = r.is_zero() ? r : r.monic();
        }
        return x.is_zero() ? x : x.monic();
    }

    Poly square_free_part() const {
        Poly d = derivative();
        if (d.is_zero()) return monic();
        Poly g = gcd(*this, d);
        if (g.degree() == 0) return monic();
        return divmod(g).first.monic();
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            std::string term;
            if (i == 0) term = c_[i].get_str();
            else {
                Rat a = c_[i];
                if (a == 1) term = "";
                else if (a == -1) term = "-";
                else term = a.get_str() + "*";
                term += var;
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (out.empty()) out = term;
            else if (!term.empty() && term[0] == '-') out += " - " + term.substr(1);
            else out += " + " + term;
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

/// Sturm chain of a square-free polynomial.
class SturmChain {
public:
    explicit SturmChain(const Poly& p) {
        seq_.push_back(p);
        Poly d = p.derivative();
        if (!d.is_zero()) seq_.push_back(d);
        while (seq_.size() >= 2) {
            Poly r = seq_[seq_.size() - 2].mod(seq_.back());
            if (r.is_zero()) break;
            r = -r;
            // scale by a positive constant only; sign structure must be preserved
            Rat lead_abs = abs(r.lead());
            seq_.push_back(r * (Rat(1) / lead_abs));
        }
    }

    int sign_changes_at(const Rat& x) const {
        int changes = 0, prev = 0;
        for (const auto& p : seq_) {
            int s = sgn(p.eval(x));
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
        return changes;
    }

    /// Number of distinct roots in the half-open interval (lo, hi].
    int count_roots(const Rat& lo, const Rat& hi) const {
        return sign_changes_at(lo) - sign_changes_at(hi);
    }

private:
    std::vector<Poly> seq_;
};

} // namespace negabeta
