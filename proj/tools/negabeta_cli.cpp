// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: orbits, point-set windows, gap morphisms, the digit
// solver and Delone probes, with text/CSV/JSON/SVG output.

#include <iostream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "negabeta/negabeta.hpp"

namespace {

using namespace negabeta;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "negabeta 0.1.0";

struct RunConfig {
    std::string poly;
    std::string bracket;
    std::string seq;
    std::string morphism;
    std::string named;
    std::string window;
    long depth = 64;          // orbit length / letter budget / probe bound
    long horizon = 10000;     // admissibility checks
    long precision = 4096;    // bracket bits and digit budget cap
    int places = 6;
    std::string format = "text";
    std::string backend = "auto";
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--poly", cfg.poly, "integer polynomial coefficients, lowest degree first, comma separated");
    cmd->add_option("--bracket", cfg.bracket, "root bracket 'lo,hi' (rationals or decimals)");
    cmd->add_option("--seq", cfg.seq, "digit sequence literal, e.g. '3 (0 1)'");
    cmd->add_option("--morphism", cfg.morphism, "digit morphism, e.g. '3>30032;2>2;0>00@3'");
    cmd->add_option("--named", cfg.named, "named base: golden, gm2, two, prop11, prop12, prop13");
    cmd->add_option("--window", cfg.window, "window 'lo,hi'; endpoints may use b^k");
    cmd->add_option("--depth", cfg.depth, "orbit length / letter budget / probe bound");
    cmd->add_option("--horizon", cfg.horizon, "digit horizon for admissibility checks");
    cmd->add_option("--precision", cfg.precision, "precision cap in bits / consulted digits");
    cmd->add_option("--places", cfg.places, "decimal places in output");
    cmd->add_option("--format", cfg.format, "output format: text, csv, json, svg")
        ->check(CLI::IsMember({"text", "csv", "json", "svg"}));
    cmd->add_option("--backend", cfg.backend, "auto, algebraic or streamed (for --seq bases)")
        ->check(CLI::IsMember({"auto", "algebraic", "streamed"}));
}

ContextOptions options_from(const RunConfig& cfg) {
    ContextOptions opt;
    opt.bracket_bits_cap = cfg.precision;
    opt.digit_terms_cap = cfg.precision;
    return opt;
}

DigitSequence sequence_from(const RunConfig& cfg) {
    if (!cfg.seq.empty()) return DigitSequence::parse(cfg.seq);
    if (!cfg.morphism.empty()) return DigitSequence::morphic(Morphism::parse(cfg.morphism));
    if (!cfg.named.empty()) return builtin_sequence(cfg.named);
    throw PreconditionFailed("no digit sequence given");
}

CtxPtr context_from(const RunConfig& cfg) {
    ContextOptions opt = options_from(cfg);
    if (!cfg.named.empty()) {
        if (cfg.named == "golden")
            return BetaContext::make_algebraic(Poly::from_ints({-1, -1, 1}), Rat(3, 2), Rat(17, 10), opt);
        if (cfg.named == "gm2")
            return BetaContext::make_algebraic(Poly::from_ints({1, -3, 1}), Rat(2), Rat(3), opt);
        if (cfg.named == "two")
            return BetaContext::make_algebraic(Poly::from_ints({-2, 1}), Rat(3, 2), Rat(5, 2), opt);
        return solve_beta(builtin_sequence(cfg.named), 128, cfg.horizon, opt).context;
    }
    if (!cfg.poly.empty()) {
        std::vector<long> coeffs;
        std::istringstream ss(cfg.poly);
        std::string tok;
        while (std::getline(ss, tok, ','))
            try { coeffs.push_back(std::stol(tok)); } catch (...) {
                throw PreconditionFailed("bad coefficient: '" + tok + "'");
            }
        Poly poly = Poly::from_ints(coeffs);
        if (cfg.bracket.empty()) {
            // no bracket given: try the whole region above 1 (Cauchy bound);
            // isolation fails loudly if more than one root lives there
            Rat bound(1);
            for (const auto& c : poly.coeffs()) {
                Rat m = abs(c / poly.lead());
                if (m > bound) bound = m;
            }
            return BetaContext::make_algebraic(poly, Rat(1), bound + 1, opt);
        }
        auto comma = cfg.bracket.find(',');
        if (comma == std::string::npos) throw PreconditionFailed("--bracket must be 'lo,hi'");
        Rat lo = parse_rat(cfg.bracket.substr(0, comma));
        Rat hi = parse_rat(cfg.bracket.substr(comma + 1));
        return BetaContext::make_algebraic(poly, lo, hi, opt);
    }
    if (!cfg.seq.empty() || !cfg.morphism.empty()) {
        DigitSequence seq = sequence_from(cfg);
        if (cfg.backend == "algebraic" && !seq.is_eventually_periodic())
            throw PreconditionFailed("only declared-periodic sequences have an algebraic backend");
        if (cfg.backend == "streamed" || (cfg.backend == "auto" && !seq.is_eventually_periodic()))
            return BetaContext::make_streamed(seq, opt);
        return solve_beta(seq, 128, cfg.horizon, opt).context;
    }
    throw PreconditionFailed("give a base via --poly/--bracket, --seq, --morphism or --named");
}

std::string header(const RunConfig& cfg, const std::string& cmd) {
    std::ostringstream out;
    out << "# " << kVersion << " | " << cmd << " | depth=" << cfg.depth << " horizon=" << cfg.horizon
        << " precision=" << cfg.precision << " places=" << cfg.places << " format=" << cfg.format << "\n";
    return out.str();
}

std::pair<Value, Value> window_from(const RunConfig& cfg, const CtxPtr& ctx, const char* fallback) {
    return parse_window(ctx, cfg.window.empty() ? fallback : cfg.window);
}

int cmd_orbit(const RunConfig& cfg) {
    CtxPtr ctx = context_from(cfg);
    std::cout << header(cfg, "orbit");
    if (cfg.format == "csv" || cfg.format == "text") {
        std::cout << orbit_csv(ctx, cfg.depth, cfg.places);
        return 0;
    }
    if (cfg.format == "json") {
        ordered_json rows = ordered_json::array();
        for (long n = 0; n <= cfg.depth; ++n) {
            auto [t, a] = ctx->orbit_extend(n);
            rows.push_back({{"n", n}, {"a", a}, {"exact", t.exact_string()}, {"decimal", ctx->decimal(t, cfg.places)}});
        }
        std::cout << rows.dump(2) << "\n";
        return 0;
    }
    throw PreconditionFailed("orbit supports text, csv, json");
}

int cmd_zset(const RunConfig& cfg) {
    CtxPtr ctx = context_from(cfg);
    auto view = make_fixed_point(ctx);
    auto [lo, hi] = window_from(cfg, ctx, "-b^3,b^2");
    auto window = z_enumerate(view, lo, hi);
    std::cout << header(cfg, "zset");
    if (cfg.format == "svg") {
        std::optional<GapMorphism> gm;
        try {
            gm = derive_gap_morphism(view, static_cast<size_t>(cfg.depth));
        } catch (const BetaTooSmall&) {
        }
        std::cout << window_svg(window, gm ? &*gm : nullptr);
        return 0;
    }
    if (cfg.format == "json") {
        ordered_json doc;
        doc["points"] = ordered_json::array();
        for (const auto& e : window.points)
            doc["points"].push_back({{"k", e.k},
                                     {"y_exact", e.y.exact_string()},
                                     {"y", ctx->decimal(e.y, cfg.places)},
                                     {"is_z", e.is_z},
                                     {"letter", view->alphabet()->info(e.letter).str()}});
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    std::cout << points_csv(window, cfg.places);
    if (cfg.format == "text") {
        std::int64_t zc = static_cast<std::int64_t>(window.z_points().size());
        std::cout << "# z-points: " << zc << " of " << window.points.size() << " endpoints\n";
    }
    return 0;
}

int cmd_gapmorphism(const RunConfig& cfg) {
    CtxPtr ctx = context_from(cfg);
    auto view = make_fixed_point(ctx);
    GapMorphism gm = derive_gap_morphism(view, static_cast<size_t>(cfg.depth));
    std::cout << header(cfg, "gapmorphism");
    if (cfg.format == "csv") {
        std::cout << gap_morphism_csv(gm, cfg.places);
        return gm.budget_exceeded ? 4 : 0;
    }
    if (cfg.format == "json") {
        ordered_json doc;
        doc["closed"] = gm.closed;
        doc["letters"] = ordered_json::array();
        for (size_t g = 0; g < gm.letters.size(); ++g)
            doc["letters"].push_back({{"name", gm.letters[g].name},
                                      {"length", ctx->decimal(gm.letters[g].length, cfg.places)},
                                      {"rule", gm.rule_string(static_cast<int>(g))}});
        std::cout << doc.dump(2) << "\n";
        return gm.budget_exceeded ? 4 : 0;
    }
    for (size_t g = 0; g < gm.letters.size(); ++g)
        std::cout << gm.rule_string(static_cast<int>(g))
                  << "   (length " << ctx->decimal(gm.letters[g].length, cfg.places) << ")\n";
    std::cout << (gm.closed ? "# closed alphabet\n" : "# letter budget exceeded; table is partial\n");
    return gm.budget_exceeded ? 4 : 0;
}

int cmd_solve(const RunConfig& cfg) {
    DigitSequence seq = sequence_from(cfg);
    SolveResult res = solve_beta(seq, std::max(128L, cfg.precision / 8), cfg.horizon, options_from(cfg));
    std::cout << header(cfg, "solve");
    if (cfg.format == "json") {
        ordered_json doc;
        doc["exact"] = res.exact;
        if (res.exact) {
            AlgebraicReal base = res.context->base();
            doc["minimal_polynomial"] = base.poly().to_string();
            ordered_json coeffs = ordered_json::array();
            for (const auto& c : base.poly().coeffs()) coeffs.push_back(c.get_str());
            doc["minimal_polynomial_coeffs"] = coeffs; // lowest degree first
            doc["bracket"] = {base.lo().get_str(), base.hi().get_str()};
        } else {
            auto [lo, hi] = res.context->beta_bracket(128);
            doc["bracket"] = {lo.get_str(), hi.get_str()};
            doc["residual_upper"] = res.residual_upper.get_str();
        }
        doc["beta"] = res.context->decimal(res.context->beta(), cfg.places);
        doc["admissible"] = res.admissibility.admissible();
        doc["is_expansion"] = res.is_expansion;
        std::cout << doc.dump(2) << "\n";
    } else {
        if (res.exact) {
            auto base = res.context->base();
            if (base.is_rational())
                std::cout << "beta = " << base.lo().get_str() << " (exact)\n";
            else
                std::cout << "beta root of " << base.poly().to_string() << " in [" << base.lo().get_str()
                          << ", " << base.hi().get_str() << "] ~ "
                          << res.context->decimal(res.context->beta(), cfg.places) << "\n";
        } else {
            auto [lo, hi] = res.context->beta_bracket(128);
            std::cout << "beta in [" << lo.get_str() << ", " << hi.get_str() << "] ~ "
                      << res.context->decimal(res.context->beta(), cfg.places)
                      << "  (residual <= " << decimal_string(res.residual_upper, 40) << ")\n";
        }
        std::cout << "admissibility: shift condition " << (res.admissibility.shift_condition_ok ? "pass" : "FAIL")
                  << ", zero-tail condition " << (res.admissibility.zero_tail_condition_ok ? "pass" : "FAIL") << "\n";
        if (!res.is_expansion)
            std::cout << "WARNING: digits are not the expansion of the left endpoint\n";
    }
    return 0;
}

int cmd_delone(const RunConfig& cfg) {
    CtxPtr ctx = context_from(cfg);
    auto view = make_fixed_point(ctx);
    auto [lo, hi] = window_from(cfg, ctx, "-b^3,b^3");
    DeloneReport rep = delone_report(view, lo, hi, cfg.depth);
    std::cout << header(cfg, "delone");
    ordered_json doc;
    doc["window"] = {rep.window_lo, rep.window_hi};
    doc["points"] = rep.points;
    doc["z_points"] = rep.z_points;
    if (rep.min_gap) {
        doc["min_gap"] = *rep.min_gap;
        doc["max_gap"] = *rep.max_gap;
        doc["min_gap_exact"] = *rep.min_gap_exact;
        doc["max_gap_exact"] = *rep.max_gap_exact;
    }
    switch (rep.ud.verdict) {
        case UdVerdict::holds_to_bound: doc["ud_condition"] = "holds_to_bound"; break;
        case UdVerdict::inf_zero_witnessed: doc["ud_condition"] = "inf_zero_witnessed"; break;
        case UdVerdict::unknown: doc["ud_condition"] = "unknown"; break;
    }
    doc["ud_exact"] = rep.ud.exact;
    doc["ud_witnesses"] = ordered_json::array();
    for (const auto& w : rep.ud.witnesses)
        doc["ud_witnesses"].push_back({{"n", w.n}, {"t", w.decimal}});
    if (rep.finite_orbit)
        doc["finite_orbit"] = {{"found", rep.finite_orbit->found}, {"preperiod", rep.finite_orbit->preperiod}, {"period", rep.finite_orbit->period}};
    // for morphic bases, also show the witnessed ever-growing gaps, one row per
    // iteration depth, when the head letters match the predicted pattern
    if (!ctx->algebraic() && ctx->digit_source().kind() == DigitSequence::Kind::morphic) {
        ordered_json rows = ordered_json::array();
        for (int k = 1; k <= std::min<long>(cfg.depth, 6); ++k) {
            try {
                auto wit = relative_denseness_gap_witness(view, ctx->digit_source().morphism(), k);
                if (!wit.verified) break;
                rows.push_back({{"k", k},
                                {"gap_above", ctx->decimal(wit.gap, cfg.places)},
                                {"threshold_k_over_beta", ctx->decimal(wit.threshold, cfg.places)}});
            } catch (const Error&) {
                break;
            }
        }
        if (!rows.empty()) doc["growing_gap_witnesses"] = rows;
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"negative-base numeration toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* orbit = app.add_subcommand("orbit", "orbit of the left endpoint with its digits");
    auto* zset = app.add_subcommand("zset", "point-set window with membership flags");
    auto* gapm = app.add_subcommand("gapmorphism", "induced anti-morphism on gaps");
    auto* solve = app.add_subcommand("solve", "recover the base from a digit sequence");
    auto* delone = app.add_subcommand("delone", "gap extremes and discreteness probe");
    for (auto* cmd : {orbit, zset, gapm, solve, delone}) add_common(cmd, cfg);

    CLI11_PARSE(app, argc, argv);
    try {
        if (orbit->parsed()) return cmd_orbit(cfg);
        if (zset->parsed()) return cmd_zset(cfg);
        if (gapm->parsed()) return cmd_gapmorphism(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (delone->parsed()) return cmd_delone(cfg);
    } catch (const negabeta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case negabeta::ErrorKind::undecidable: return 3;
            case negabeta::ErrorKind::budget: return 4;
            default: return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
