// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "negabeta/fixed_point.hpp"

using namespace negabeta;

namespace {

CtxPtr gm2() { return BetaContext::make_algebraic(Poly::from_ints({1, -3, 1}), Rat(2), Rat(3)); }
CtxPtr golden() { return BetaContext::make_algebraic(Poly::from_ints({-1, -1, 1}), Rat(3, 2), Rat(17, 10)); }

const IndexExt kInf = IndexExt::inf();
IndexExt fin(long n) { return IndexExt::finite(n); }

} // namespace

TEST_CASE("index arithmetic with infinity") {
    CHECK(kInf.twice().is_inf());
    CHECK(kInf.plus_one().is_inf());
    CHECK(kInf.twice_minus_one().is_inf());
    CHECK(fin(3).twice().value() == 6);
    CHECK(fin(3).twice_minus_one().value() == 5);
    CHECK(fin(3).plus_one().value() == 4);
    CHECK(kInf.str() == "inf");
}

TEST_CASE("substitution rules at the quadratic base") {
    auto alpha = std::make_shared<Alphabet>(gm2());
    LetterId inf0 = alpha->letter(kInf, fin(0));
    LetterId zi = alpha->letter(fin(0), kInf);
    LetterId z1 = alpha->letter(fin(0), fin(1));
    CHECK(alpha->word_string(alpha->psi(inf0)) == "(0,inf)");
    CHECK(alpha->word_string(alpha->psi(zi)) == "(inf,0) (0,inf) (inf,0) (0,1)");
    CHECK(alpha->word_string(alpha->psi(z1)) == "(0,inf) (inf,0) (0,1)");
    CHECK(alpha->size() == 3);
}

TEST_CASE("substitution rules at the golden base") {
    auto alpha = std::make_shared<Alphabet>(golden());
    LetterId inf0 = alpha->letter(kInf, fin(0));
    LetterId zi = alpha->letter(fin(0), kInf);
    CHECK(alpha->word_string(alpha->psi(inf0)) == "(0,inf)");
    CHECK(alpha->word_string(alpha->psi(zi)) == "(inf,0) (0,inf)");
    // (0,1) collapses onto (0,inf) because t_1 = 0
    CHECK(alpha->letter(fin(0), fin(1)) == zi);
    CHECK(alpha->size() == 2);
}

TEST_CASE("word images reverse concatenation") {
    auto alpha = std::make_shared<Alphabet>(golden());
    LetterId inf0 = alpha->letter(kInf, fin(0));
    LetterId zi = alpha->letter(fin(0), kInf);
    CHECK(alpha->psi_word({}).empty());
    Word img = alpha->psi_word({inf0, zi});
    CHECK(alpha->word_string(img) == "(inf,0) (0,inf) (0,inf)");
    CHECK(alpha->psi_word({zi}) == alpha->psi(zi));
}

TEST_CASE("letters must straddle neither zero nor reverse order") {
    auto alpha = std::make_shared<Alphabet>(gm2());
    // (0,0) is the interval (t_0, t_-1), which straddles zero
    CHECK_THROWS_AS(alpha->letter(fin(0), fin(0)), NotInAlphabet);
    // (inf,1) would be the interval (0, t_1) with t_1 < 0: reversed, empty
    CHECK_THROWS_AS(alpha->letter(kInf, fin(1)), NotInAlphabet);
}

TEST_CASE("two-sided fixed point windows") {
    auto mfp = make_fixed_point(gm2());
    CHECK(mfp->alphabet()->word_string(mfp->window(0, 3)) == "(inf,0) (0,inf) (inf,0) (0,1)");
    auto gfp = make_fixed_point(golden());
    CHECK(gfp->alphabet()->word_string(gfp->window(-3, 2)) ==
          "(inf,0) (0,inf) (0,inf) (inf,0) (0,inf) (inf,0)");
    // u_-1 u_0 is always (0,inf) (inf,0)
    for (auto fp : {mfp, gfp})
        CHECK(fp->alphabet()->word_string(fp->window(-1, 0)) == "(0,inf) (inf,0)");
}

TEST_CASE("positions along the tiling") {
    auto gfp = make_fixed_point(golden());
    CHECK(gfp->ctx()->is_zero(gfp->y(0)));
    CHECK(equals(gfp->y(2), gfp->ctx()->from_rat(Rat(1))));

    auto mfp = make_fixed_point(gm2());
    // y_-2 = t_0 - t_1 + t_0
    auto ctx = mfp->ctx();
    Value expect = ctx->t0() - ctx->t(1) + ctx->t0();
    CHECK(equals(mfp->y(-2), expect));
    CHECK(ctx->decimal(mfp->y(-2), 3) == "-1.342");
    // y_1 is the length of (inf,0), strictly between 0 and 1
    CHECK(ctx->sign(mfp->y(1)) > 0);
    CHECK(ctx->compare(mfp->y(1), ctx->from_rat(Rat(1))) < 0);
}

TEST_CASE("image lengths scale by beta") {
    auto bases = std::vector<CtxPtr>{gm2(), golden(),
                                     BetaContext::make_algebraic(Poly::from_ints({-2, 1}), Rat(3, 2), Rat(5, 2))};
    for (auto ctx : bases) {
        auto fp = make_fixed_point(ctx);
        fp->window(-50, 50); // populate some alphabet
        auto alpha = fp->alphabet();
        size_t count = alpha->size();
        for (size_t id = 0; id < count; ++id) {
            Value img_len = alpha->word_length(alpha->psi(static_cast<LetterId>(id)));
            Value scaled = alpha->info(static_cast<LetterId>(id)).length.times_beta_pow(1);
            CHECK(equals(img_len, scaled));
        }
    }
}

TEST_CASE("alphabet closure under the substitution") {
    // every interned letter was validated on creation; walking images must not throw
    auto fp = make_fixed_point(gm2());
    auto alpha = fp->alphabet();
    fp->window(-200, 200);
    size_t count = alpha->size();
    for (size_t id = 0; id < count; ++id) CHECK_NOTHROW(alpha->psi(static_cast<LetterId>(id)));
}

TEST_CASE("squared image starts with the unit factor for large bases") {
    for (auto ctx : {gm2(), golden()}) {
        auto fp = make_fixed_point(ctx);
        auto alpha = fp->alphabet();
        LetterId u0 = fp->letter(0);
        Word sq = alpha->psi_square(u0);
        REQUIRE(sq.size() >= 2);
        CHECK(sq[0] == fp->letter(0));
        CHECK(sq[1] == fp->letter(1));
        CHECK(alpha->info(sq[0]).i == kInf);
        CHECK(alpha->info(sq[1]).i == fin(0));
    }
}

TEST_CASE("small bases still generate a fixed point") {
    auto c13 = BetaContext::make_algebraic(Poly::from_ints({-13, 10}), Rat(12, 10), Rat(14, 10));
    auto fp = make_fixed_point(c13);
    Word w = fp->window(-20, 20);
    CHECK(w.size() == 41);
    // scaling law holds there as well
    auto alpha = fp->alphabet();
    size_t count = alpha->size();
    for (size_t id = 0; id < count; ++id) {
        Value img_len = alpha->word_length(alpha->psi(static_cast<LetterId>(id)));
        CHECK(equals(img_len, alpha->info(static_cast<LetterId>(id)).length.times_beta_pow(1)));
    }
}

TEST_CASE("streamed alphabet letters and scaling") {
    auto p13 = BetaContext::make_streamed(builtin::prop13());
    auto fp = make_fixed_point(p13);
    fp->window(-100, 100);
    auto alpha = fp->alphabet();
    size_t count = alpha->size();
    CHECK(count >= 4);
    for (size_t id = 0; id < count; ++id) {
        Value img_len = alpha->word_length(alpha->psi(static_cast<LetterId>(id)));
        CHECK(equals(img_len, alpha->info(static_cast<LetterId>(id)).length.times_beta_pow(1)));
    }
}

TEST_CASE("images refine the tiling geometrically") {
    // the image of the interval (y_k, y_{k+1}) under multiplication by -beta
    // is again a run of tiling intervals, carrying the image word
    for (auto ctx : {gm2(), golden()}) {
        auto fp = make_fixed_point(ctx);
        auto alpha = fp->alphabet();
        for (std::int64_t k = -6; k <= 6; ++k) {
            Word img = alpha->psi(fp->letter(k));
            std::int64_t kp;
            if (k >= 0)
                kp = -static_cast<std::int64_t>(alpha->psi_word(fp->window(0, k)).size());
            else if (k == -1)
                kp = 0;
            else
                kp = static_cast<std::int64_t>(alpha->psi_word(fp->window(k + 1, -1)).size());
            for (size_t p = 0; p < img.size(); ++p) CHECK(fp->letter(kp + static_cast<std::int64_t>(p)) == img[p]);
            CHECK(equals(fp->y(k + 1).times_beta_pow(1).scaled(Rat(-1)), fp->y(kp)));
            CHECK(equals(fp->y(k).times_beta_pow(1).scaled(Rat(-1)),
                         fp->y(kp + static_cast<std::int64_t>(img.size()))));
        }
    }
}

TEST_CASE("normalisation translates each tile onto its letter interval") {
    for (auto ctx : {gm2(), golden()}) {
        auto fp = make_fixed_point(ctx);
        auto alpha = fp->alphabet();
        for (std::int64_t k = -5; k <= 5; ++k) {
            const LetterInfo& info = alpha->info(fp->letter(k));
            for (Rat frac : {Rat(1, 3), Rat(1, 2), Rat(7, 11)}) {
                Value x = fp->y(k) + info.length.scaled(frac);
                Value expect = (x - fp->y(k)) + info.t2i;
                CHECK(equals(ctx->iota(x), expect));
            }
        }
    }
}

TEST_CASE("two-sided display at the quadratic base") {
    auto fp = make_fixed_point(gm2());
    CHECK(fp->alphabet()->word_string(fp->window(-9, -1)) ==
          "(0,inf) (inf,0) (0,1) (0,inf) (inf,0) (0,inf) (inf,0) (0,1) (0,inf)");
}
