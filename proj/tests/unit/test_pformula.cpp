#include "bbp/error.hpp"
#include "bbp/generator.hpp"
#include "bbp/pformula.hpp"
#include "bbp/reference.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bbp;

namespace {

const char* kLog2SqText =
    "1/2^10 * P(2, 2^12, 24, [2^11, 0, -5*2^11, -7*2^10, -2^9, 0, 2^8, 7*2^8, 5*2^8, 0, -2^6, 2^7,"
    " -2^5, 0, 5*2^5, 7*2^4, 2^3, 0, -2^2, -7*2^2, -5*2^2, 0, 1, -2])";

std::vector<BigInt> ints(std::initializer_list<long> xs) {
    std::vector<BigInt> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

PFormula make(int s, long B, long l, std::vector<BigInt> A, BigRat pre) {
    PFormula p;
    p.s = s;
    p.B = B;
    p.l = l;
    p.A = std::move(A);
    p.pre = pre;
    return p;
}

bool same_value(const PFormula& a, const PFormula& b, long bits) {
    return fix_overlap(evaluate(a, bits), evaluate(b, bits));
}

}  // namespace

TEST(PFormula, ParsesWorkedLog2SqExample) {
    PFormula p = parse_p(kLog2SqText);
    EXPECT_EQ(p.s, 2);
    EXPECT_EQ(p.B, 12);
    EXPECT_EQ(p.l, 24);
    EXPECT_EQ(p.pre, make_rat(1, 1024));
    ASSERT_EQ(p.A.size(), 24u);
    EXPECT_EQ(p.A[0], 2048);
    EXPECT_EQ(p.A[2], -10240);
    EXPECT_EQ(p.A[23], -2);
}

TEST(PFormula, ParsesSimplest) {
    PFormula p = parse_p("P(1, 2^1, 1, [1])");
    EXPECT_EQ(p.s, 1);
    EXPECT_EQ(p.B, 1);
    EXPECT_EQ(p.l, 1);
    EXPECT_EQ(p.A, ints({1}));
    EXPECT_EQ(p.pre, 1);
}

TEST(PFormula, ArityMismatchIsParseError) {
    EXPECT_THROW(parse_p("P(2, 2^4, 8, [1,2])"), ParseError);
}

TEST(PFormula, MalformedInputsAreParseErrors) {
    EXPECT_THROW(parse_p("P(2, 3^4, 1, [1])"), ParseError);
    EXPECT_THROW(parse_p("P(0, 2^4, 1, [1])"), ParseError);
    EXPECT_THROW(parse_p("P(2, 2^4, 1, [1]"), ParseError);
    EXPECT_THROW(parse_p("1/0 * P(2, 2^4, 1, [1])"), ParseError);
    EXPECT_THROW(parse_p("P(2, 2^4, 1, [1]) trailing"), ParseError);
}

TEST(PFormula, ParseErrorCarriesOffset) {
    try {
        parse_p("P(2, 2^4, 2, [1, x])");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.pos(), 17u);
    }
}

TEST(PFormula, SerializeRoundTrip) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        int s = 1 + static_cast<int>(rng() % 5);
        long B = 1 + static_cast<long>(rng() % 70);
        long l = 1 + static_cast<long>(rng() % 30);
        std::vector<BigInt> A;
        for (long j = 0; j < l; ++j) {
            BigInt a = static_cast<long>(rng() % 2001) - 1000;
            if (rng() % 3 == 0) a *= pow2(static_cast<long>(rng() % 80));
            A.push_back(a);
        }
        PFormula p = canonicalize(make(s, B, l, A, make_rat(static_cast<long>(rng() % 50) + 1,
                                                            pow2(static_cast<long>(rng() % 70)))));
        PFormula q = parse_p(serialize(p));
        ASSERT_EQ(p, q) << serialize(p);
        ASSERT_EQ(serialize(q), serialize(p));
    }
}

TEST(PFormula, CanonicalizeAbsorbsGcd) {
    PFormula c = canonicalize(make(1, 1, 3, ints({2, 4, 6}), make_rat(1, 2)));
    EXPECT_EQ(c.A, ints({1, 2, 3}));
    EXPECT_EQ(c.pre, 1);
}

TEST(PFormula, CanonicalizeNormalizesSign) {
    PFormula c = canonicalize(make(1, 1, 3, ints({-3, 0, 9}), 1));
    EXPECT_EQ(c.A, ints({1, 0, -3}));
    EXPECT_EQ(c.pre, -3);
}

TEST(PFormula, CanonicalizeIsIdempotent) {
    PFormula p = canonicalize(parse_p(kLog2SqText));
    EXPECT_EQ(canonicalize(p), p);
}

TEST(PFormula, StretchByThreeGivesLength24Form) {
    PFormula p8 = generate(make_point(2, 1, 1, 4, Part::Re), 8);
    PFormula p24 = stretch(p8, 3);
    EXPECT_EQ(p24.B, p8.B);
    EXPECT_EQ(p24.l, 24);
    EXPECT_EQ(p24.pre, p8.pre * 9);
    for (long j = 1; j <= 24; ++j) {
        if (j % 3 != 0) EXPECT_EQ(p24.A[j - 1], 0) << j;
        else EXPECT_EQ(p24.A[j - 1], p8.A[j / 3 - 1]) << j;
    }
    EXPECT_TRUE(same_value(p8, p24, 300));
}

TEST(PFormula, StretchAndRebaseByOneAreIdentity) {
    PFormula p = parse_p(kLog2SqText);
    EXPECT_EQ(stretch(p, 1), p);
    EXPECT_EQ(rebase(p, 1), p);
}

TEST(PFormula, RebasePreservesValue) {
    PFormula p = generate(make_point(2, 1, 3, 4, Part::Im), 8);
    ASSERT_EQ(p.B, 4);
    PFormula r = rebase(p, 3);
    EXPECT_EQ(r.B, 12);
    EXPECT_EQ(r.l, 24);
    EXPECT_TRUE(same_value(p, r, 400));
}

TEST(PFormula, CommonHeaderExample) {
    PHeader h = common_header({{2, 4, 2}, {2, 4, 8}, {2, 12, 8}});
    EXPECT_EQ(h, (PHeader{2, 12, 24}));
    EXPECT_EQ(common_header({{3, 5, 7}}), (PHeader{3, 5, 7}));
    EXPECT_EQ(common_header({{2, 12, 24}, {2, 12, 24}}), (PHeader{2, 12, 24}));
}

TEST(PFormula, CommonHeaderIsMinimal) {
    // exhaustive search over small multipliers
    std::vector<PHeader> in{{2, 4, 2}, {2, 4, 8}, {2, 12, 8}};
    PHeader best{2, 1 << 30, 1 << 30};
    for (long B = 1; B <= 48; ++B) {
        for (long l = 1; l <= 96; ++l) {
            PHeader cand{2, B, l};
            bool ok = true;
            for (const auto& h : in) ok = ok && header_reachable(h, cand);
            if (ok && (B < best.B || (B == best.B && l < best.l))) best = cand;
        }
    }
    EXPECT_EQ(common_header(in), best);
}

TEST(PFormula, AlignMixedDegreesFails) {
    EXPECT_THROW(align({make(1, 1, 1, ints({1}), 1), make(2, 1, 1, ints({1}), 1)}), DomainError);
}

TEST(PFormula, CombineReproducesWorkedVector) {
    PHeader h{2, 12, 24};
    PFormula a = to_header(generate(make_point(2, 4, 1, 1, Part::Re), 2), h);
    PFormula b = to_header(generate(make_point(2, 1, 3, 4, Part::Re), 8), h);
    PFormula c = to_header(generate(make_point(2, 3, 1, 4, Part::Re), 8), h);
    PFormula sum = combine({{BigRat(2), a}, {BigRat(-4), b}, {BigRat(-4), c}});
    EXPECT_EQ(sum, canonicalize(parse_p(kLog2SqText)));
}

TEST(PFormula, CombineSingleAndCancelling) {
    PFormula p = generate(make_point(2, 2, 1, 2, Part::Im), 4);
    EXPECT_EQ(combine({{BigRat(1), p}}), canonicalize(p));
    PFormula z = combine({{BigRat(1), p}, {BigRat(-1), p}});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.s, p.s);
}

TEST(PFormula, EvaluateTwoLog2) {
    FixReal v = evaluate(parse_p("P(1, 2^1, 1, [1])"), 300);
    FixReal ref = fix_mul_int(log2_value(300), 2);
    EXPECT_TRUE(fix_overlap(v, ref));
    EXPECT_EQ(fix_to_decimal(v, 6), "1.386294");
}

TEST(PFormula, EvaluateZeroIsExact) {
    FixReal v = evaluate(make_zero_formula(2, 12), 100);
    EXPECT_EQ(v.mantissa, 0);
    EXPECT_EQ(v.err_ulp, 0);
}

TEST(PFormula, EvaluateErrorBoundHolds) {
    PFormula p = parse_p(kLog2SqText);
    FixReal lo = evaluate(p, 200);
    FixReal hi = evaluate(p, 800);
    EXPECT_TRUE(fix_overlap(lo, hi));
    EXPECT_LE(fix_error_log2(lo), -200);
    FixReal l2 = log2_value(800);
    EXPECT_TRUE(fix_overlap(hi, fix_mul(l2, l2, 800 + kGuardBits)));
}

TEST(PFormula, HeaderParsing) {
    EXPECT_EQ(parse_header("2,12,24"), (PHeader{2, 12, 24}));
    EXPECT_EQ(parse_header("(2, 2^12, 24)"), (PHeader{2, 12, 24}));
    EXPECT_THROW(parse_header("2,12"), ParseError);
}
