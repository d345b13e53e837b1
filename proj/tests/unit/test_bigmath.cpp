#include "bbp/bigmath.hpp"
#include "bbp/error.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bbp;

namespace {

BigInt random_big(std::mt19937_64& rng, int max_bits) {
    std::uniform_int_distribution<int> bits_dist(1, max_bits);
    int bits = bits_dist(rng);
    BigInt x = 0;
    for (int done = 0; done < bits; done += 32) {
        x <<= 32;
        x += static_cast<unsigned long>(rng() & 0xffffffffu);
    }
    x >>= static_cast<mp_bitcnt_t>((bits + 31) / 32 * 32 - bits);
    return x;
}

BigRat random_rat(std::mt19937_64& rng) {
    BigInt num = random_big(rng, 80);
    BigInt den = random_big(rng, 40) + 1;
    if (rng() & 1) num = -num;
    return make_rat(num, den);
}

}  // namespace

TEST(BigMath, AddExactSmallIntegers) {
    FixReal a{3, 1, 0}, b{1, 1, 0};
    FixReal c = fix_add(a, b);
    EXPECT_EQ(c.mantissa, 4);
    EXPECT_EQ(c.frac_bits, 1);
    EXPECT_EQ(c.err_ulp, 0);
}

TEST(BigMath, AddZeroIsIdentity) {
    FixReal x{12345, 20, 3};
    FixReal y = fix_add(x, fix_exact(0, 20));
    EXPECT_EQ(y.mantissa, x.mantissa);
    EXPECT_EQ(y.err_ulp, x.err_ulp);
}

TEST(BigMath, AddErrorsAccumulate) {
    FixReal a{1, 2, 1}, b{1, 2, 1};
    FixReal c = fix_add(a, b);
    EXPECT_EQ(c.mantissa, 2);
    EXPECT_EQ(c.frac_bits, 2);
    EXPECT_GE(c.err_ulp, 2);
}

TEST(BigMath, MulQuarterExact) {
    FixReal half = fix_from_rat(make_rat(1, 2), 8);
    FixReal q = fix_mul(half, half, 8);
    EXPECT_EQ(q.mantissa, 64);
    EXPECT_EQ(q.frac_bits, 8);
    EXPECT_LE(q.err_ulp, 1);
}

TEST(BigMath, MulByOneWithinOneUlp) {
    FixReal x = fix_from_rat(make_rat(22, 7), 100);
    FixReal y = fix_mul(x, fix_exact(1), 100);
    EXPECT_LE(abs(BigInt(y.mantissa - x.mantissa)), 1);
    EXPECT_LE(y.err_ulp, x.err_ulp + 1);
    EXPECT_TRUE(fix_contains(y, make_rat(22, 7)));
}

TEST(BigMath, RandomExpressionTreesContainExactValue) {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> op_dist(0, 6);
    std::uniform_int_distribution<long> bits_dist(8, 200);
    for (int trial = 0; trial < 400; ++trial) {
        BigRat exact = random_rat(rng);
        FixReal approx = fix_from_rat(exact, bits_dist(rng));
        for (int step = 0; step < 12; ++step) {
            BigRat r = random_rat(rng);
            FixReal fr = fix_from_rat(r, bits_dist(rng));
            switch (op_dist(rng)) {
                case 0: exact += r; approx = fix_add(approx, fr); break;
                case 1: exact -= r; approx = fix_sub(approx, fr); break;
                case 2: exact *= r; approx = fix_mul(approx, fr, bits_dist(rng)); break;
                case 3: {
                    BigInt k = random_big(rng, 30) - BigInt(1) * (1 << 29);
                    exact *= k;
                    approx = fix_mul_int(approx, k);
                    break;
                }
                case 4: {
                    BigInt d = random_big(rng, 20) + 1;
                    exact /= d;
                    approx = fix_div_int(approx, d);
                    break;
                }
                case 5: approx = fix_rescale(approx, bits_dist(rng)); break;
                default: exact *= r; approx = fix_mul_rat(approx, r, bits_dist(rng)); break;
            }
            exact.canonicalize();
            ASSERT_TRUE(fix_contains(approx, exact)) << "trial " << trial << " step " << step;
        }
    }
}

TEST(BigMath, SqrtBrackets) {
    for (unsigned long n : {2ul, 3ul, 5ul, 1000003ul}) {
        FixReal r = fix_sqrt(n, 300);
        BigRat lo = fix_value(r) - make_rat(r.err_ulp, pow2(r.frac_bits));
        BigRat hi = fix_value(r) + make_rat(r.err_ulp, pow2(r.frac_bits));
        EXPECT_LE(lo * lo, BigRat(n));
        EXPECT_GE(hi * hi, BigRat(n));
    }
}

TEST(BigMath, DecimalRendering) {
    FixReal x = fix_from_rat(make_rat(1, 3), 200);
    EXPECT_EQ(fix_to_decimal(x, 10), "0.3333333333");
    EXPECT_EQ(fix_to_decimal(fix_neg(fix_from_rat(make_rat(5, 2), 10)), 3), "-2.500");
}

TEST(BigMath, DigitsToBitsRoundsUp) {
    EXPECT_EQ(digits_to_bits(1), 4);
    EXPECT_EQ(digits_to_bits(100), 333);
    EXPECT_GE(digits_to_bits(200), 664);
}

TEST(BigMath, SignAndOverlap) {
    EXPECT_EQ(fix_sign(FixReal{5, 4, 1}), 1);
    EXPECT_EQ(fix_sign(FixReal{-5, 4, 1}), -1);
    EXPECT_EQ(fix_sign(FixReal{1, 4, 2}), 0);
    EXPECT_TRUE(fix_overlap(FixReal{10, 4, 1}, FixReal{12, 4, 1}));
    EXPECT_FALSE(fix_overlap(FixReal{10, 4, 1}, FixReal{13, 4, 1}));
}

TEST(BigMath, PowmodSmallCases) {
    EXPECT_EQ(powmod(2, 10, 7), 2);
    EXPECT_EQ(powmod(5, 0, 13), 1);
    EXPECT_EQ(powmod(5, 0, 1), 0);
    EXPECT_EQ(powmod(-3, 3, 10), 3);
    EXPECT_THROW(powmod(2, 3, 0), DomainError);
    EXPECT_THROW(powmod(2, -1, 5), DomainError);
}

TEST(BigMath, PowmodLargeExponentAgreesAcrossPaths) {
    BigInt m = 999999937;
    BigInt e = 1000000;
    EXPECT_EQ(powmod(2, e, m, PowmodPath::Native), powmod(2, e, m, PowmodPath::Big));
}

TEST(BigMath, PowmodCrossPathRandom) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 10000; ++i) {
        int mbits = 1 + static_cast<int>(rng() % kNativeModulusBits);
        BigInt m = random_big(rng, mbits) + 1;
        if (bit_length(m) > kNativeModulusBits) m >>= 1;
        BigInt b = random_big(rng, 70);
        BigInt e = random_big(rng, 90);
        ASSERT_EQ(powmod(b, e, m, PowmodPath::Native), powmod(b, e, m, PowmodPath::Big))
            << b.get_str() << "^" << e.get_str() << " mod " << m.get_str();
    }
}

TEST(BigMath, PowmodPathBoundary) {
    BigInt widest = pow2(kNativeModulusBits) - 1;
    BigInt too_wide = pow2(kNativeModulusBits) + 1;
    BigInt e = pow2(100) + 12345;
    EXPECT_EQ(powmod(3, e, widest, PowmodPath::Native), powmod(3, e, widest, PowmodPath::Big));
    EXPECT_EQ(powmod(3, e, widest), powmod(3, e, widest, PowmodPath::Big));
    EXPECT_THROW(powmod(3, e, too_wide, PowmodPath::Native), DomainError);
    EXPECT_EQ(powmod(3, e, too_wide), powmod(3, e, too_wide, PowmodPath::Big));
}
