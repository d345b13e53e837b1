#include "bbp/error.hpp"
#include "bbp/extractor.hpp"
#include "bbp/generator.hpp"

#include <gtest/gtest.h>

using namespace bbp;

namespace {

PFormula zeta3_formula() {
    auto g = [](int q, long n, long d) {
        LiPoint pt = make_point(3, q, n, d, Part::Re);
        return generate(pt, period(pt));
    };
    return combine({{make_rat(128, 21), g(1, 1, 4)},
                    {make_rat(-88, 21), g(2, 0, 1)},
                    {make_rat(12, 7), g(4, 0, 1)},
                    {make_rat(-8, 21), g(6, 1, 1)}});
}

ExtractResult run(const PFormula& p, long pos, long hex = 8, PowmodPath path = PowmodPath::Auto,
                  unsigned threads = 1) {
    ExtractRequest r;
    r.formula = p;
    r.bit_pos = pos;
    r.hex_digits = hex;
    r.path = path;
    r.threads = threads;
    return extract(r);
}

}  // namespace

TEST(Extractor, TwoLog2AtZero) {
    PFormula p = parse_p("P(1, 2^1, 1, [1])");
    ExtractResult r = run(p, 0);
    EXPECT_EQ(r.digits, "62E42FEF");
    EXPECT_EQ(r.sign, 1);
    EXPECT_GT(r.confidence_bits, 0);
    EXPECT_EQ(digit_window(p, 0, 8, 128), "62E42FEF");
}

TEST(Extractor, ZeroFormula) {
    PFormula z = make_zero_formula(2, 12);
    EXPECT_EQ(run(z, 100).digits, "00000000");
    EXPECT_EQ(digit_window(z, 0, 8, 128), "00000000");
}

TEST(Extractor, NegativeValueGivesMagnitudeDigits) {
    PFormula p = parse_p("-1 * P(1, 2^1, 1, [1])");
    ExtractResult r = run(p, 0);
    EXPECT_EQ(r.digits, "62E42FEF");
    EXPECT_EQ(r.sign, -1);
    // negative prefactor with a negative sum is a positive value
    PFormula q = parse_p("-1 * P(1, 2^1, 1, [-1])");
    EXPECT_EQ(run(q, 0).digits, "62E42FEF");
    EXPECT_EQ(run(q, 0).sign, 1);
}

TEST(Extractor, Zeta3AgreesWithEvaluation) {
    PFormula p = zeta3_formula();
    EXPECT_EQ(p.B, 12);
    for (long pos : {0L, 40L, 1000L, 10000L}) {
        ExtractResult r = run(p, pos);
        EXPECT_EQ(r.digits, digit_window(p, pos, 8, pos + 200)) << pos;
    }
    EXPECT_EQ(run(p, 0).digits, "33BA004F");
}

TEST(Extractor, WindowsConcatenate) {
    PFormula p = zeta3_formula();
    std::string joined;
    for (long pos = 500; pos < 500 + 4 * 32; pos += 32) joined += run(p, pos).digits;
    EXPECT_EQ(joined, digit_window(p, 500, 32, 800));
}

TEST(Extractor, PathsAndThreadsAgree) {
    PFormula p = zeta3_formula();
    ExtractResult a = run(p, 3000, 8, PowmodPath::Big, 1);
    ExtractResult b = run(p, 3000, 8, PowmodPath::Auto, 3);
    EXPECT_EQ(a.digits, b.digits);
    EXPECT_EQ(a.confidence_bits, b.confidence_bits);
}

TEST(Extractor, PositiveTwoAdicPrefactor) {
    // 2^5 * 2log2 shifts the window by five bits
    PFormula p = parse_p("2^5 * P(1, 2^1, 1, [1])");
    PFormula base = parse_p("P(1, 2^1, 1, [1])");
    EXPECT_EQ(run(p, 100).digits, run(base, 105).digits);
}

TEST(Extractor, RejectsIrrationalPrefactorAndBadArgs) {
    PFormula p = generate(make_point(2, 2, 1, 3, Part::Im), 6);
    ASSERT_EQ(p.surd, 3u);
    EXPECT_THROW(run(p, 0), DomainError);
    EXPECT_THROW(run(parse_p("P(1, 2^1, 1, [1])"), -1), DomainError);
    EXPECT_THROW(run(parse_p("P(1, 2^1, 1, [1])"), 0, 0), DomainError);
}

TEST(Extractor, WindowNeedsPrecision) {
    EXPECT_THROW(digit_window(parse_p("P(1, 2^1, 1, [1])"), 100, 8, 120), PrecisionError);
}

TEST(Extractor, ZeroValuedFormulaHitsCarryBoundary) {
    // a base 2^12 zero relation: its value is exactly 0, so no window is certain
    PFormula z = parse_p("P(2, 2^12, 24, [2^11, -5*2^11, -2^12, 3*2^12, -2^9, 5*2^10, 2^8, 3^2*2^9, 2^9, -5*2^7, -2^6, 0, -2^5, -5*2^5, 2^6, 3^2*2^5, 2^3, 5*2^4, -2^2, 3*2^4, -2^3, -5*2, 1, 0])");
    ASSERT_FALSE(z.is_zero());
    EXPECT_THROW(run(z, 0), PrecisionError);
    EXPECT_THROW(run(z, 4000), PrecisionError);
}
