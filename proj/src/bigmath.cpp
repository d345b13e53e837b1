#include "bbp/bigmath.hpp"

#include "bbp/error.hpp"

#include <algorithm>
#include <cmath>

namespace bbp {

BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

BigInt pow2(long e) {
    if (e < 0) throw DomainError("negative power of two");
    BigInt r;
    mpz_setbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

BigRat rat_pow(const BigRat& base, long e) {
    if (e >= 0) {
        return make_rat(ipow(base.get_num(), e), ipow(base.get_den(), e));
    }
    if (base == 0) throw DomainError("zero to a negative power");
    return make_rat(ipow(base.get_den(), -e), ipow(base.get_num(), -e));
}

long bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

BigInt isqrt(const BigInt& x) {
    if (x < 0) throw DomainError("isqrt of negative");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

long digits_to_bits(long digits) {
    // log2(10) < 3.3219281
    return (digits * 33219281L + 9999999L) / 10000000L;
}

namespace {

BigInt shift_left(const BigInt& x, long n) {
    BigInt r;
    mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return r;
}

// truncates toward zero; sets inexact when bits were dropped
BigInt shift_right_trunc(const BigInt& x, long n, bool& inexact) {
    BigInt r;
    mpz_tdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    inexact = mpz_scan1(x.get_mpz_t(), 0) < static_cast<mp_bitcnt_t>(n) && x != 0;
    return r;
}

BigInt shift_right_ceil(const BigInt& x, long n) {
    BigInt r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return r;
}

BigInt abs_int(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

}  // namespace

FixReal fix_exact(const BigInt& mantissa, long frac_bits) {
    if (frac_bits < 0) throw DomainError("negative frac_bits");
    return FixReal{shift_left(mantissa, frac_bits), frac_bits, 0};
}

FixReal fix_from_rat(const BigRat& r, long frac_bits) {
    if (frac_bits < 0) throw DomainError("negative frac_bits");
    BigInt num = shift_left(r.get_num(), frac_bits);
    BigInt q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
    return FixReal{q, frac_bits, rem == 0 ? 0 : 1};
}

FixReal fix_rescale(const FixReal& x, long frac_bits) {
    if (frac_bits < 0) throw DomainError("negative frac_bits");
    if (frac_bits >= x.frac_bits) {
        long d = frac_bits - x.frac_bits;
        return FixReal{shift_left(x.mantissa, d), frac_bits, shift_left(x.err_ulp, d)};
    }
    long d = x.frac_bits - frac_bits;
    bool inexact = false;
    BigInt m = shift_right_trunc(x.mantissa, d, inexact);
    BigInt e = shift_right_ceil(x.err_ulp, d);
    if (inexact) e += 1;
    return FixReal{m, frac_bits, e};
}

FixReal fix_neg(const FixReal& x) { return FixReal{-x.mantissa, x.frac_bits, x.err_ulp}; }

FixReal fix_add(const FixReal& a, const FixReal& b) {
    long f = std::max(a.frac_bits, b.frac_bits);
    FixReal x = fix_rescale(a, f);
    FixReal y = fix_rescale(b, f);
    return FixReal{x.mantissa + y.mantissa, f, x.err_ulp + y.err_ulp};
}

FixReal fix_sub(const FixReal& a, const FixReal& b) { return fix_add(a, fix_neg(b)); }

FixReal fix_mul(const FixReal& a, const FixReal& b, long out_bits) {
    if (out_bits < 1) throw DomainError("out_bits must be positive");
    FixReal p;
    p.mantissa = a.mantissa * b.mantissa;
    p.frac_bits = a.frac_bits + b.frac_bits;
    p.err_ulp = abs_int(a.mantissa) * b.err_ulp + abs_int(b.mantissa) * a.err_ulp +
                a.err_ulp * b.err_ulp;
    return fix_rescale(p, out_bits);
}

FixReal fix_mul_int(const FixReal& a, const BigInt& k) {
    return FixReal{a.mantissa * k, a.frac_bits, a.err_ulp * abs_int(k)};
}

FixReal fix_mul_rat(const FixReal& a, const BigRat& r, long out_bits) {
    if (out_bits < 0) throw DomainError("negative frac_bits");
    // work at out_bits + extra so the division costs at most one ulp of out_bits
    FixReal x = fix_mul_int(fix_rescale(a, std::max(a.frac_bits, out_bits)), r.get_num());
    return fix_rescale(fix_div_int(x, r.get_den()), out_bits);
}

FixReal fix_div_int(const FixReal& a, const BigInt& d) {
    if (d == 0) throw DomainError("division by zero");
    BigInt q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), a.mantissa.get_mpz_t(), d.get_mpz_t());
    BigInt e = ceil_div(a.err_ulp, abs_int(d));
    if (rem != 0) e += 1;
    return FixReal{q, a.frac_bits, e};
}

FixReal fix_sqrt(unsigned long n, long frac_bits) {
    BigInt r = isqrt(shift_left(BigInt(n), 2 * frac_bits));
    bool exact = r * r == shift_left(BigInt(n), 2 * frac_bits);
    return FixReal{r, frac_bits, exact ? 0 : 1};
}

FixReal fix_frac(const FixReal& x) {
    BigInt m;
    mpz_fdiv_r_2exp(m.get_mpz_t(), x.mantissa.get_mpz_t(), static_cast<mp_bitcnt_t>(x.frac_bits));
    return FixReal{m, x.frac_bits, x.err_ulp};
}

BigRat fix_value(const FixReal& x) { return make_rat(x.mantissa, pow2(x.frac_bits)); }

BigRat fix_abs_upper(const FixReal& x) {
    return make_rat(abs_int(x.mantissa) + x.err_ulp, pow2(x.frac_bits));
}

bool fix_abs_below(const FixReal& x, const BigRat& bound) { return fix_abs_upper(x) < bound; }

bool fix_contains(const FixReal& x, const BigRat& t) {
    BigRat d = fix_value(x) - t;
    return abs(d) <= make_rat(x.err_ulp, pow2(x.frac_bits));
}

bool fix_overlap(const FixReal& a, const FixReal& b) {
    FixReal d = fix_sub(a, b);
    return abs_int(d.mantissa) <= d.err_ulp;
}

int fix_sign(const FixReal& x) {
    if (abs_int(x.mantissa) <= x.err_ulp) return 0;
    return x.mantissa > 0 ? 1 : -1;
}

double fix_to_double(const FixReal& x) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.mantissa.get_mpz_t());
    return std::ldexp(m, static_cast<int>(e - x.frac_bits));
}

std::string fix_to_decimal(const FixReal& x, long digits) {
    BigInt a = abs_int(x.mantissa) * ipow(10, static_cast<unsigned long>(digits));
    BigInt scaled;
    mpz_tdiv_q_2exp(scaled.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(x.frac_bits));
    std::string s = scaled.get_str();
    if (static_cast<long>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out = x.mantissa < 0 ? "-" : "";
    out += s.substr(0, s.size() - digits);
    if (digits > 0) out += "." + s.substr(s.size() - digits);
    return out;
}

long fix_error_log2(const FixReal& x) {
    if (x.err_ulp == 0) return -x.frac_bits - 1;
    return bit_length(x.err_ulp) - x.frac_bits;
}

std::uint64_t powmod_u64(std::uint64_t base, const BigInt& exp, std::uint64_t modulus) {
    using u128 = unsigned __int128;
    if (modulus == 1) return 0;
    std::uint64_t result = 1;
    std::uint64_t b = base % modulus;
    long nbits = bit_length(exp);
    for (long i = nbits - 1; i >= 0; --i) {
        result = static_cast<std::uint64_t>(static_cast<u128>(result) * result % modulus);
        if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            result = static_cast<std::uint64_t>(static_cast<u128>(result) * b % modulus);
        }
    }
    return result;
}

BigInt powmod(const BigInt& base, const BigInt& exp, const BigInt& modulus, PowmodPath path) {
    if (modulus < 1) throw DomainError("powmod modulus must be positive");
    if (exp < 0) throw DomainError("powmod exponent must be non-negative");
    bool native_fits = bit_length(modulus) <= kNativeModulusBits;
    if (path == PowmodPath::Native && !native_fits) {
        throw DomainError("modulus too wide for the native powmod path");
    }
    BigInt b;
    mpz_fdiv_r(b.get_mpz_t(), base.get_mpz_t(), modulus.get_mpz_t());
    if (path == PowmodPath::Native || (path == PowmodPath::Auto && native_fits)) {
        std::uint64_t m = mpz_get_ui(modulus.get_mpz_t());
        std::uint64_t r = powmod_u64(mpz_get_ui(b.get_mpz_t()), exp, m);
        BigInt out;
        mpz_set_ui(out.get_mpz_t(), r);
        return out;
    }
    BigInt r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

}  // namespace bbp
