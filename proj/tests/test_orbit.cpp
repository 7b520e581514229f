// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "negabeta/context.hpp"

using namespace negabeta;

namespace {

CtxPtr gm2() { return BetaContext::make_algebraic(Poly::from_ints({1, -3, 1}), Rat(2), Rat(3)); }
CtxPtr golden() { return BetaContext::make_algebraic(Poly::from_ints({-1, -1, 1}), Rat(3, 2), Rat(17, 10)); }
CtxPtr two() { return BetaContext::make_algebraic(Poly::from_ints({-2, 1}), Rat(3, 2), Rat(5, 2)); }

} // namespace

TEST_CASE("the map fixes -2/3 at base two") {
    auto c = two();
    Value x = c->from_rat(Rat(-2, 3));
    CHECK(equals(c->t_map(x), x));
}

TEST_CASE("the map sends t_0 to zero at the golden base") {
    auto g = golden();
    CHECK(g->is_zero(g->t_map(g->t0())));
}

TEST_CASE("the map sends t_1 back to t_0 at the quadratic base") {
    auto m = gm2();
    CHECK(equals(m->t_map(m->t(1)), m->t0()));
}

TEST_CASE("orbit digits of the example bases") {
    auto m = gm2();
    long d_m[4] = {2, 1, 2, 1};
    for (int n = 1; n <= 4; ++n) CHECK(m->a(n) == d_m[n - 1]);

    auto c = two();
    for (int n = 1; n <= 4; ++n) CHECK(c->a(n) == 2);

    auto g = golden();
    CHECK(g->a(1) == 1);
    CHECK(g->is_zero(g->t(1)));
    for (int n = 2; n <= 6; ++n) CHECK(g->a(n) == 0);
}

TEST_CASE("expansion of a point") {
    auto m = gm2();
    auto zeros = m->expansion_of_point(m->from_rat(Rat(0)), 3);
    CHECK(zeros == std::vector<long>{0, 0, 0});

    auto c = two();
    auto rep = c->expansion_of_point(c->from_rat(Rat(-2, 3)), 4);
    CHECK(rep == std::vector<long>{2, 2, 2, 2});

    auto own = m->expansion_of_point(m->t0(), 4);
    CHECK(own == std::vector<long>{2, 1, 2, 1});
    // the point expansion of t_0 is the orbit digit stream by definition
    for (int n = 1; n <= 4; ++n) CHECK(own[n - 1] == m->a(n));

    CHECK_THROWS_AS(m->expansion_of_point(m->from_rat(Rat(1)), 2), OutOfDomain);
}

TEST_CASE("normalisation onto the fundamental interval") {
    auto g = golden();
    // interior points are fixed
    Value inside = g->from_rat(Rat(1, 5));
    CHECK(equals(g->iota(inside), inside));
    // 1 needs three scalings; the first two hit the interval endpoints
    CHECK(g->is_zero(g->iota(g->from_rat(Rat(1)))));
    CHECK(g->is_zero(g->iota(g->beta_pow(2))));
    // and a point that is not integer-like keeps a nonzero image
    CHECK_FALSE(g->is_zero(g->iota(g->from_rat(Rat(1, 2)))));
}

TEST_CASE("orbit finiteness detection") {
    auto c = two();
    auto y2 = c->orbit_cycle(10);
    CHECK(y2.found);
    CHECK(y2.preperiod == 0);
    CHECK(y2.period == 1);

    auto m = gm2();
    auto ym = m->orbit_cycle(10);
    CHECK(ym.found);
    CHECK(ym.preperiod == 0);
    CHECK(ym.period == 2);

    auto g = golden();
    auto yg = g->orbit_cycle(10);
    CHECK(yg.found);
    CHECK(yg.preperiod == 1);
    CHECK(yg.period == 1);

    // rational non-integer bases never revisit an orbit value
    auto c13 = BetaContext::make_algebraic(Poly::from_ints({-13, 10}), Rat(12, 10), Rat(14, 10));
    CHECK_FALSE(c13->orbit_cycle(64).found);

    auto p11 = BetaContext::make_streamed(builtin::prop11());
    CHECK_THROWS_AS(p11->orbit_cycle(10), RequiresAlgebraicMode);
}

TEST_CASE("conjugacy of the normalisation with the map") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coin(-6, 6);
    for (auto ctx : {gm2(), golden()}) {
        for (int trial = 0; trial < 100; ++trial) {
            Value x = ctx->from_poly({Rat(coin(rng)), Rat(coin(rng), 5), Rat(coin(rng), 3)});
            Value lhs = ctx->iota(x.times_beta_pow(1).scaled(Rat(-1)));
            Value rhs = ctx->t_map(ctx->iota(x));
            CHECK(equals(lhs, rhs));
        }
    }
}

TEST_CASE("orbit values satisfy the series identity") {
    // |t_n - sum_{k<=K} a_{n+k} (-beta)^-k| <= amax * beta^-K / (beta - 1), K = 50
    const int K = 50;
    for (auto ctx : {gm2(), two()}) {
        long amax = 0;
        for (int n = 1; n <= 12 + K; ++n) amax = std::max(amax, ctx->a(n));
        for (int n = 0; n <= 12; ++n) {
            Value partial = ctx->from_rat(Rat(0));
            for (int k = 1; k <= K; ++k) {
                Value term = ctx->from_int(ctx->a(n + k)).times_beta_pow(-k).scaled(k % 2 ? Rat(-1) : Rat(1));
                partial = partial + term;
            }
            Value err = ctx->t(n) - partial;
            // beta >= 2 here, so amax * beta^-K / (beta - 1) <= amax * 2^-K
            Value bound = ctx->from_rat(Rat(amax)).times_beta_pow(-K) / (ctx->beta() - ctx->from_rat(Rat(1)));
            CHECK(ctx->compare(err, bound) <= 0);
            CHECK(ctx->compare(err, -bound) >= 0);
        }
    }
}

TEST_CASE("the map preserves its domain") {
    for (auto ctx : {gm2(), golden(), two()}) {
        Value t0 = ctx->t0(), tm1 = ctx->t_minus1();
        for (int n = 0; n <= 24; ++n) {
            Value t = ctx->t(n);
            CHECK(ctx->compare(t, t0) >= 0);
            CHECK(ctx->compare(t, tm1) < 0);
        }
    }
}

TEST_CASE("digit bounds") {
    for (auto ctx : {gm2(), golden(), two()}) {
        Int fb = floor_of(ctx->beta());
        long fl = fb.get_si();
        CHECK((ctx->a(1) == fl || ctx->a(1) == fl + 1));
        for (int n = 1; n <= 32; ++n) {
            CHECK(ctx->a(n) >= 0);
            CHECK(ctx->a(n) <= fl + 1);
        }
    }
}

TEST_CASE("orbit table memoizes and extends") {
    auto m = gm2();
    auto [t5, a5] = m->orbit_extend(5);
    CHECK(a5 == m->a(5));
    CHECK(equals(t5, m->t(5)));
    CHECK_THROWS_AS(m->orbit_extend(-1), PreconditionFailed);
}

TEST_CASE("streamed conjugacy holds through symbolic reduction") {
    auto p11 = BetaContext::make_streamed(builtin::prop11());
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coin(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        Value x = p11->from_poly({Rat(coin(rng)), Rat(coin(rng)), Rat(coin(rng))});
        Value lhs = p11->iota(x.times_beta_pow(1).scaled(Rat(-1)));
        Value rhs = p11->t_map(p11->iota(x));
        CHECK(equals(lhs, rhs));
    }
}
