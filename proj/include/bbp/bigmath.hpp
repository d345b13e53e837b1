#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace bbp {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Bits added on top of every requested precision.
inline constexpr long kGuardBits = 64;

BigRat make_rat(const BigInt& num, const BigInt& den);
BigInt pow2(long e);
BigInt ipow(const BigInt& base, unsigned long e);
BigRat rat_pow(const BigRat& base, long e);
long bit_length(const BigInt& x);
BigInt isqrt(const BigInt& x);
// ceil(a / b) for a >= 0, b > 0
BigInt ceil_div(const BigInt& a, const BigInt& b);
std::string to_string(const BigInt& x);
std::string to_string(const BigRat& x);
// Decimal digits -> bits, rounded up.
long digits_to_bits(long digits);

// value = mantissa * 2^-frac_bits, true value within err_ulp * 2^-frac_bits.
struct FixReal {
    BigInt mantissa;
    long frac_bits = 0;
    BigInt err_ulp;
};

FixReal fix_exact(const BigInt& mantissa, long frac_bits = 0);
FixReal fix_from_rat(const BigRat& r, long frac_bits);
FixReal fix_rescale(const FixReal& x, long frac_bits);
FixReal fix_neg(const FixReal& x);
FixReal fix_add(const FixReal& a, const FixReal& b);
FixReal fix_sub(const FixReal& a, const FixReal& b);
FixReal fix_mul(const FixReal& a, const FixReal& b, long out_bits);
FixReal fix_mul_int(const FixReal& a, const BigInt& k);
FixReal fix_mul_rat(const FixReal& a, const BigRat& r, long out_bits);
FixReal fix_div_int(const FixReal& a, const BigInt& d);
FixReal fix_sqrt(unsigned long n, long frac_bits);
// value - floor(value), error carried over unchanged
FixReal fix_frac(const FixReal& x);

// Exact rational value of the represented point.
BigRat fix_value(const FixReal& x);
// |value| + err, an upper bound on the absolute true value.
BigRat fix_abs_upper(const FixReal& x);
// true iff the true value is certainly below bound in absolute value
bool fix_abs_below(const FixReal& x, const BigRat& bound);
// true iff the interval [value - err, value + err] contains t
bool fix_contains(const FixReal& x, const BigRat& t);
// true iff the two error intervals intersect
bool fix_overlap(const FixReal& a, const FixReal& b);
// -1, 0, +1 when the sign is certain; 0 also when undetermined
int fix_sign(const FixReal& x);
double fix_to_double(const FixReal& x);
// Truncated decimal rendering with the given number of fractional digits.
std::string fix_to_decimal(const FixReal& x, long digits);
// Upper bound on log2 of the absolute error radius.
long fix_error_log2(const FixReal& x);

// Moduli below 2^kNativeModulusBits take the 128-bit product path.
inline constexpr int kNativeModulusBits = 64;

enum class PowmodPath { Auto, Native, Big };

BigInt powmod(const BigInt& base, const BigInt& exp, const BigInt& modulus,
              PowmodPath path = PowmodPath::Auto);
std::uint64_t powmod_u64(std::uint64_t base, const BigInt& exp, std::uint64_t modulus);

}  // namespace bbp
