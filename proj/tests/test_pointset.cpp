// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "negabeta/pointset.hpp"

using namespace negabeta;

namespace {

CtxPtr gm2() { return BetaContext::make_algebraic(Poly::from_ints({1, -3, 1}), Rat(2), Rat(3)); }
CtxPtr golden() { return BetaContext::make_algebraic(Poly::from_ints({-1, -1, 1}), Rat(3, 2), Rat(17, 10)); }
CtxPtr two() { return BetaContext::make_algebraic(Poly::from_ints({-2, 1}), Rat(3, 2), Rat(5, 2)); }

Value poly_point(const CtxPtr& ctx, std::vector<Rat> coeffs) { return ctx->from_poly(coeffs); }

// the marked points of the golden window [-b^3, b^4]
std::vector<Value> golden_reference_points(const CtxPtr& g) {
    auto P = [&](std::vector<Rat> c) { return poly_point(g, std::move(c)); };
    Value b = g->beta(), b2 = g->beta_pow(2), b3 = g->beta_pow(3), b4 = g->beta_pow(4);
    Value one = g->from_rat(Rat(1));
    return {
        -b3,
        -b3 + b2 - b,
        -b3 + b2 - b + one,
        -b,
        -b + one,
        g->from_rat(Rat(0)),
        one,
        b2 - b + one,
        b2,
        b4 - b3 + b2 - b,
        b4 - b3 + b2 - b + one,
        b4 - b3 + b2,
        b4 - b + one,
        b4,
    };
}

} // namespace

TEST_CASE("membership of the origin and its neighbours") {
    for (auto ctx : {gm2(), golden(), two()}) {
        auto fp = make_fixed_point(ctx);
        CHECK(is_z_point(*fp, 0)); // 0 always belongs
    }
    auto m = gm2();
    auto fp = make_fixed_point(m);
    // u_0 = (inf,0), u_1 = (0,inf): y_1 = 1/(beta+1) is an endpoint but not marked
    CHECK_FALSE(is_z_point(*fp, 1));
}

TEST_CASE("window enumeration at the golden base matches the reference points") {
    auto g = golden();
    auto fp = make_fixed_point(g);
    auto window = z_enumerate(fp, -g->beta_pow(3), g->beta_pow(4));
    auto zs = window.z_points();
    auto ref = golden_reference_points(g);
    REQUIRE(zs.size() == ref.size());
    for (size_t i = 0; i < ref.size(); ++i) CHECK(equals(zs[i]->y, ref[i]));
}

TEST_CASE("integer base windows are the integers") {
    auto c = two();
    auto fp = make_fixed_point(c);
    auto window = z_enumerate(fp, c->from_rat(Rat(-4)), c->from_rat(Rat(4)));
    auto zs = window.z_points();
    REQUIRE(zs.size() == 9);
    for (int i = 0; i < 9; ++i) CHECK(equals(zs[i]->y, c->from_rat(Rat(i - 4))));
}

TEST_CASE("bases below the golden ratio keep only the origin") {
    auto c13 = BetaContext::make_algebraic(Poly::from_ints({-13, 10}), Rat(12, 10), Rat(14, 10));
    auto fp = make_fixed_point(c13);
    auto window = z_enumerate(fp, c13->from_rat(Rat(-5)), c13->from_rat(Rat(5)));
    auto zs = window.z_points();
    REQUIRE(zs.size() == 1);
    CHECK(c13->is_zero(zs[0]->y));

    auto c15 = BetaContext::make_algebraic(Poly::from_ints({-3, 2}), Rat(14, 10), Rat(16, 10));
    auto fp15 = make_fixed_point(c15);
    auto w15 = z_enumerate(fp15, c15->from_rat(Rat(-5)), c15->from_rat(Rat(5)));
    auto zs15 = w15.z_points();
    REQUIRE(zs15.size() == 1);
    CHECK(c15->is_zero(zs15[0]->y));
}

TEST_CASE("gap statistics of the worked examples") {
    auto m = gm2();
    auto mfp = make_fixed_point(m);
    auto mw = z_enumerate(mfp, -m->beta_pow(3), m->beta_pow(2));
    auto stats = gap_distances(mw);
    REQUIRE(stats.size() == 2);
    CHECK(equals(stats[0].length, m->from_rat(Rat(1))));
    CHECK(equals(stats[1].length, m->beta() - m->from_rat(Rat(1))));
    CHECK(stats[0].count + stats[1].count == 18);

    auto g = golden();
    auto gfp = make_fixed_point(g);
    auto gw = z_enumerate(gfp, -g->beta_pow(3), g->beta_pow(4));
    auto gstats = gap_distances(gw);
    REQUIRE(gstats.size() == 2);
    // here beta - 1 < 1
    CHECK(equals(gstats[0].length, g->beta() - g->from_rat(Rat(1))));
    CHECK(equals(gstats[1].length, g->from_rat(Rat(1))));

    auto c = two();
    auto cw = z_enumerate(make_fixed_point(c), c->from_rat(Rat(-6)), c->from_rat(Rat(6)));
    auto cstats = gap_distances(cw);
    REQUIRE(cstats.size() == 1);
    CHECK(equals(cstats[0].length, c->from_rat(Rat(1))));

    PointSetWindow tiny = z_enumerate(mfp, m->from_rat(Rat(1, 10)), m->from_rat(Rat(2, 10)));
    CHECK_THROWS_AS(gap_distances(tiny), TooFewPoints);
}

TEST_CASE("gap rules of the worked examples") {
    auto m = gm2();
    auto gm = derive_gap_morphism(make_fixed_point(m));
    REQUIRE(gm.closed);
    REQUIRE(gm.letters.size() == 2);
    CHECK(gm.rule_string(0) == "A -> A B");
    CHECK(gm.rule_string(1) == "B -> A B B");
    CHECK(equals(gm.letters[0].length, m->from_rat(Rat(1))));
    CHECK(equals(gm.letters[1].length, m->beta() - m->from_rat(Rat(1))));

    auto g = golden();
    auto gg = derive_gap_morphism(make_fixed_point(g));
    REQUIRE(gg.closed);
    REQUIRE(gg.letters.size() == 2);
    CHECK(gg.rule_string(0) == "A -> A B");
    CHECK(gg.rule_string(1) == "B -> A");

    auto c = two();
    auto gc = derive_gap_morphism(make_fixed_point(c));
    REQUIRE(gc.closed);
    REQUIRE(gc.letters.size() == 1);
    CHECK(gc.rule_string(0) == "A -> A A");

    // below the golden ratio there is no gap structure
    auto c13 = BetaContext::make_algebraic(Poly::from_ints({-13, 10}), Rat(12, 10), Rat(14, 10));
    CHECK_THROWS_AS(derive_gap_morphism(make_fixed_point(c13)), BetaTooSmall);
}

TEST_CASE("gap image lengths scale by beta") {
    for (auto ctx : {gm2(), golden(), two()}) {
        auto gm = derive_gap_morphism(make_fixed_point(ctx));
        for (size_t g = 0; g < gm.letters.size(); ++g) {
            Value img = ctx->from_rat(Rat(0));
            for (int to : gm.rules[g]) img = img + gm.letters[to].length;
            CHECK(equals(img, gm.letters[g].length.times_beta_pow(1)));
        }
    }
}

TEST_CASE("figure window letter sequence at the quadratic base") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    auto window = z_enumerate(fp, -m->beta_pow(3), m->beta_pow(2));
    REQUIRE(window.z_points().size() == 19);
    auto gm = derive_gap_morphism(fp);
    CHECK(gap_sequence(window, gm) == "ABBABABBABBABABBAB");
}

TEST_CASE("gap fixed point reproduces the window sequences") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    auto gm = derive_gap_morphism(fp);
    auto gw = gap_fixed_point(gm);
    auto window = z_enumerate(fp, -m->beta_pow(3), m->beta_pow(2));
    std::string seq = gap_sequence(window, gm);
    // 13 gaps lie left of the origin in this window
    std::string from_fp;
    for (std::int64_t k = -13; k < static_cast<std::int64_t>(seq.size()) - 13; ++k)
        from_fp += gm.letters[gw.at(k)].name;
    CHECK(from_fp == seq);

    auto g = golden();
    auto gfp = make_fixed_point(g);
    auto ggm = derive_gap_morphism(gfp);
    auto ggw = gap_fixed_point(ggm);
    auto gwindow = z_enumerate(gfp, -g->beta_pow(3), g->beta_pow(4));
    std::string gseq = gap_sequence(gwindow, ggm);
    // 5 gaps left of the origin: -b^3 .. 0 splits as A A B A B
    std::string gfrom;
    for (std::int64_t k = -5; k < static_cast<std::int64_t>(gseq.size()) - 5; ++k)
        gfrom += ggm.letters[ggw.at(k)].name;
    CHECK(gfrom == gseq);
}

TEST_CASE("oracle enumerates single digit strings") {
    auto m = gm2();
    auto res = brute_force_oracle(m, 1, m->from_rat(Rat(-10)), m->from_rat(Rat(10)));
    CHECK(res.warnings.empty());
    // depth one: 0 and the admissible single digits (here 0 and 1)
    REQUIRE(res.points.size() == 2);
    CHECK(m->is_zero(res.points[0]));
    CHECK(equals(res.points[1], m->from_rat(Rat(1))));
}

TEST_CASE("oracle equals the pipeline on the golden window") {
    auto g = golden();
    auto fp = make_fixed_point(g);
    auto window = z_enumerate(fp, -g->beta_pow(3), g->beta_pow(4));
    auto zs = window.z_points();
    auto oracle = brute_force_oracle(g, 8, -g->beta_pow(3), g->beta_pow(4));
    CHECK(oracle.warnings.empty());
    REQUIRE(oracle.points.size() == zs.size());
    for (size_t i = 0; i < zs.size(); ++i) CHECK(equals(oracle.points[i], zs[i]->y));
}

TEST_CASE("oracle equals the pipeline at an integer base") {
    auto c = two();
    auto fp = make_fixed_point(c);
    auto window = z_enumerate(fp, c->from_rat(Rat(-8)), c->from_rat(Rat(8)));
    auto zs = window.z_points();
    auto oracle = brute_force_oracle(c, 5, c->from_rat(Rat(-8)), c->from_rat(Rat(8)));
    REQUIRE(oracle.points.size() == zs.size());
    for (size_t i = 0; i < zs.size(); ++i) CHECK(equals(oracle.points[i], zs[i]->y));
}

TEST_CASE("endpoint reconstruction covers the fixed point positions") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    Value lo = -m->beta_pow(2), hi = m->beta_pow(2);
    auto rec = y_enumerate(m, lo, hi, 6, 6);
    // every reconstructed point is a y_k
    std::int64_t k_lo = 0, k_hi = 0;
    while (m->compare(fp->y(k_lo - 1), lo) >= 0) --k_lo;
    while (m->compare(fp->y(k_hi + 1), hi) <= 0) ++k_hi;
    std::set<std::string> ys;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) ys.insert(fp->y(k).exact_key());
    for (const auto& p : rec.points) CHECK(ys.count(p.exact_key()) == 1);
    // and every y_k in the window is reconstructed
    std::set<std::string> recs;
    for (const auto& p : rec.points) recs.insert(p.exact_key());
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        if (m->compare(fp->y(k), lo) >= 0 && m->compare(fp->y(k), hi) <= 0)
            CHECK(recs.count(fp->y(k).exact_key()) == 1);
    }
    // reference ticks present at the golden base
    auto g = golden();
    auto grec = y_enumerate(g, g->from_rat(Rat(-3)), g->from_rat(Rat(3)), 6, 6);
    std::set<std::string> gkeys;
    for (const auto& p : grec.points) gkeys.insert(p.exact_key());
    CHECK(gkeys.count((-g->beta() + g->from_rat(Rat(1))).exact_key()) == 1);
    CHECK(gkeys.count(g->from_rat(Rat(0)).exact_key()) == 1);
    CHECK(gkeys.count(g->from_rat(Rat(1)).exact_key()) == 1);
}

TEST_CASE("scaled marked points stay marked") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    auto window = z_enumerate(fp, m->from_rat(Rat(-5)), m->from_rat(Rat(5)));
    // multiplying by -beta flips the window
    auto scaled = z_enumerate(fp, m->from_rat(Rat(5)).times_beta_pow(1).scaled(Rat(-1)),
                              m->from_rat(Rat(-5)).times_beta_pow(1).scaled(Rat(-1)));
    std::set<std::string> marked;
    for (auto* e : scaled.z_points()) marked.insert(e->y.exact_key());
    for (auto* e : window.z_points()) {
        Value image = e->y.times_beta_pow(1).scaled(Rat(-1));
        CHECK(marked.count(image.exact_key()) == 1);
    }
}

TEST_CASE("closure of the gap table tracks orbit finiteness") {
    // finite orbits close
    for (auto ctx : {gm2(), golden(), two()}) {
        CHECK(ctx->orbit_cycle(16).found);
        CHECK(derive_gap_morphism(make_fixed_point(ctx), 8).closed);
    }
    // a rational non-integer base above the golden ratio never closes
    auto c25 = BetaContext::make_algebraic(Poly::from_ints({-5, 2}), Rat(24, 10), Rat(26, 10));
    CHECK_FALSE(c25->orbit_cycle(48).found);
    auto gm25 = derive_gap_morphism(make_fixed_point(c25), 24);
    CHECK_FALSE(gm25.closed);
    CHECK(gm25.budget_exceeded);
    // streamed base: budget exhausted without closure
    auto p11 = BetaContext::make_streamed(builtin::prop11());
    auto gmp = derive_gap_morphism(make_fixed_point(p11), 64);
    CHECK_FALSE(gmp.closed);
    CHECK(gmp.budget_exceeded);
}

TEST_CASE("the quadratic window points match the labelled reference values") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    auto window = z_enumerate(fp, -m->beta_pow(3), m->beta_pow(2));
    auto zs = window.z_points();
    REQUIRE(zs.size() == 19);
    Value b = m->beta(), b2 = m->beta_pow(2), b3 = m->beta_pow(3);
    Value one = m->from_rat(Rat(1)), two_ = m->from_rat(Rat(2));
    std::vector<Value> ref{
        -b3,
        -b3 + one,
        -b3 + b2 - b.scaled(Rat(2)) + one,
        -b3 + b2 - b,
        -b3 + b2 - b + one,
        -b3 + b2,
        -b3 + b2 + one,
        -b3 + b2.scaled(Rat(2)) - b.scaled(Rat(2)) + one,
        -b3 + b2.scaled(Rat(2)) - b,
        -b3 + b2.scaled(Rat(2)) - b + one,
        -b.scaled(Rat(2)) + one,
        -b,
        -b + one,
        m->from_rat(Rat(0)),
        one,
        b2 - b.scaled(Rat(2)) + one,
        b2 - b,
        b2 - b + one,
        b2,
    };
    (void)two_;
    for (size_t i = 0; i < ref.size(); ++i) CHECK(equals(zs[i]->y, ref[i]));
}

TEST_CASE("windows away from the origin") {
    auto m = gm2();
    auto fp = make_fixed_point(m);
    auto right = z_enumerate(fp, m->from_rat(Rat(1)), m->beta_pow(2));
    auto zs = right.z_points();
    REQUIRE(zs.size() == 5);
    CHECK(equals(zs.front()->y, m->from_rat(Rat(1))));
    CHECK(equals(zs.back()->y, m->beta_pow(2)));
    auto left = z_enumerate(fp, -m->beta_pow(2), -m->from_rat(Rat(1)));
    CHECK(left.z_points().size() >= 2);
    for (auto* e : left.z_points()) CHECK(m->sign(e->y) < 0);
}

TEST_CASE("pipeline and oracle agree on assorted quadratic bases") {
    // bases beyond the worked examples, including ones with infinite alphabets
    struct Q {
        long p, q;        // x^2 - p x + q
        long blo, bhi;
    };
    for (Q c : {Q{3, 1, 2, 3}, Q{4, 1, 3, 4}, Q{4, 2, 3, 4}, Q{5, 3, 4, 5}, Q{3, -1, 3, 4}}) {
        auto ctx = BetaContext::make_algebraic(Poly::from_ints({c.q, -c.p, 1}), Rat(c.blo), Rat(c.bhi));
        auto fp = make_fixed_point(ctx);
        Value hi = ctx->beta_pow(2);
        auto window = z_enumerate(fp, -hi, hi);
        auto zs = window.z_points();
        auto oracle = brute_force_oracle(ctx, 5, -hi, hi);
        REQUIRE(oracle.warnings.empty());
        REQUIRE(oracle.points.size() == zs.size());
        for (size_t i = 0; i < zs.size(); ++i) CHECK(equals(oracle.points[i], zs[i]->y));
    }
}
