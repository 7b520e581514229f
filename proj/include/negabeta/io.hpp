// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "negabeta/diagnostics.hpp"
#include "negabeta/pointset.hpp"

namespace negabeta {

/// Parses one window endpoint: a rational literal ("-2.5", "7/3", "10") or a
/// signed power of the base ("b^3", "-b", "2*b^2", "3b").
inline Value parse_extent(const CtxPtr& ctx, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw PreconditionFailed("empty window endpoint");
    bool neg = false;
    size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
    std::string coef;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == '/'))
        coef += s[pos++];
    if (pos < s.size() && s[pos] == '*') ++pos;
    Rat c = coef.empty() ? Rat(1) : parse_rat(coef);
    if (neg) c = -c;
    if (pos == s.size()) {
        if (coef.empty()) throw PreconditionFailed("bad window endpoint: '" + text + "'");
        return ctx->from_rat(c);
    }
    if (s[pos] != 'b') throw PreconditionFailed("bad window endpoint: '" + text + "'");
    ++pos;
    long e = 1;
    if (pos < s.size()) {
        if (s[pos] != '^') throw PreconditionFailed("bad window endpoint: '" + text + "'");
        try { e = std::stol(s.substr(pos + 1)); } catch (...) {
            throw PreconditionFailed("bad exponent in window endpoint: '" + text + "'");
        }
    }
    return ctx->from_rat(c).times_beta_pow(e);
}

/// "lo,hi" with the endpoint grammar above.
inline std::pair<Value, Value> parse_window(const CtxPtr& ctx, const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw PreconditionFailed("window must be 'lo,hi'");
    return {parse_extent(ctx, text.substr(0, comma)), parse_extent(ctx, text.substr(comma + 1))};
}

// ---------------------------------------------------------------------------
// CSV emitters. Exact columns never contain floating point.
// ---------------------------------------------------------------------------

inline std::string orbit_csv(const CtxPtr& ctx, std::int64_t n_max, int places) {
    std::ostringstream out;
    out << "n,a_n,t_exact,t_decimal\n";
    for (std::int64_t n = 0; n <= n_max; ++n) {
        auto [t, a] = ctx->orbit_extend(n);
        out << n << "," << a << ",\"" << t.exact_string() << "\"," << ctx->decimal(t, places) << "\n";
    }
    return out.str();
}

inline std::string alphabet_csv(const Alphabet& alpha, int places) {
    std::ostringstream out;
    out << "i,j,t_2i,t_2j-1,length\n";
    const CtxPtr& ctx = alpha.ctx();
    for (size_t id = 0; id < alpha.size(); ++id) {
        const LetterInfo& info = alpha.info(static_cast<LetterId>(id));
        out << info.i.str() << "," << info.j.str() << "," << ctx->decimal(info.t2i, places) << ","
            << ctx->decimal(info.t2jm1, places) << "," << ctx->decimal(info.length, places) << "\n";
    }
    return out.str();
}

inline std::string points_csv(const PointSetWindow& window, int places) {
    std::ostringstream out;
    out << "k,y_exact,y_decimal,is_z,letter\n";
    const CtxPtr& ctx = window.ctx;
    for (const auto& e : window.points) {
        out << e.k << ",\"" << e.y.exact_string() << "\"," << ctx->decimal(e.y, places) << ","
            << (e.is_z ? 1 : 0) << "," << window.view->alphabet()->info(e.letter).str() << "\n";
    }
    return out.str();
}

inline std::string gap_morphism_csv(const GapMorphism& gm, int places) {
    std::ostringstream out;
    out << "letter_id,length_exact,length_decimal,word\n";
    const CtxPtr& ctx = gm.alphabet->ctx();
    for (size_t g = 0; g < gm.letters.size(); ++g) {
        const auto& info = gm.letters[g];
        out << info.name << ",\"" << info.length.exact_string() << "\"," << ctx->decimal(info.length, places)
            << ",\"" << gm.alphabet->word_string(info.word) << "\"\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG: schematic tick marks with labels, positions fixed at 6 decimal places.
// ---------------------------------------------------------------------------

inline std::string window_svg(const PointSetWindow& window, const GapMorphism* gm = nullptr) {
    const CtxPtr& ctx = window.ctx;
    auto zs = window.z_points();
    double lo = std::stod(ctx->decimal(window.lo, 6));
    double hi = std::stod(ctx->decimal(window.hi, 6));
    double span = hi > lo ? hi - lo : 1.0;
    const double width = 1000.0, margin = 40.0, base = 70.0;
    auto xpos = [&](double v) { return margin + (v - lo) / span * (width - 2 * margin); };

    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(width)
        << "\" height=\"130\" viewBox=\"0 0 " << static_cast<int>(width) << " 130\">\n";
    out << "  <line x1=\"" << xpos(lo) << "\" y1=\"" << base << "\" x2=\"" << xpos(hi) << "\" y2=\"" << base
        << "\" stroke=\"black\"/>\n";
    std::string labels;
    std::vector<double> zxs;
    for (const auto& e : window.points) {
        std::string dec = ctx->decimal(e.y, 6);
        double x = xpos(std::stod(dec));
        double h = e.is_z ? 12.0 : 5.0;
        out << "  <line x1=\"" << x << "\" y1=\"" << base - h << "\" x2=\"" << x << "\" y2=\"" << base + h
            << "\" stroke=\"black\"" << (e.is_z ? "" : " stroke-dasharray=\"1,1\"") << "/>\n";
        if (e.is_z) {
            zxs.push_back(x);
            out << "  <text x=\"" << x << "\" y=\"" << base + 28 << "\" font-size=\"8\" text-anchor=\"middle\">"
                << dec << "</text>\n";
        }
    }
    if (gm && zxs.size() >= 2) {
        std::string seq = gap_sequence(window, *gm);
        for (size_t i = 0; i + 1 < zxs.size() && i < seq.size(); ++i) {
            out << "  <text x=\"" << (zxs[i] + zxs[i + 1]) / 2 << "\" y=\"" << base - 18
                << "\" font-size=\"11\" text-anchor=\"middle\">" << seq[i] << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace negabeta
