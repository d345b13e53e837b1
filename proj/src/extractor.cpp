#include "bbp/extractor.hpp"

#include "bbp/error.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace bbp {

namespace {

BigInt abs_int(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

std::string to_hex(const BigInt& v, long count) {
    std::string s = v.get_str(16);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (static_cast<long>(s.size()) < count) s.insert(0, static_cast<std::size_t>(count) - s.size(), '0');
    return s;
}

long two_adic(const BigInt& x) {
    if (x == 0) return 0;
    return static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
}

}  // namespace

ExtractResult extract(const ExtractRequest& req) {
    const PFormula& p = req.formula;
    if (p.surd != 1) throw DomainError("formula has an irrational prefactor; it can only be evaluated");
    if (req.hex_digits < 1 || req.guard_hex < 1) throw DomainError("hex_digits and guard_hex must be positive");
    if (req.bit_pos < 0) throw DomainError("bit position must be non-negative");

    ExtractResult res;
    const long h = req.hex_digits;
    if (p.is_zero()) {
        res.digits = std::string(static_cast<std::size_t>(h), '0');
        res.confidence_bits = 4 * req.guard_hex;
        return res;
    }

    // |pre| = N 2^shift / o with N, o odd
    BigInt num = abs_int(p.pre.get_num()), den = p.pre.get_den();
    long en = two_adic(num), ed = two_adic(den);
    BigInt N = num >> static_cast<mp_bitcnt_t>(en);
    BigInt o = den >> static_cast<mp_bitcnt_t>(ed);
    const long d = req.bit_pos + en - ed;

    std::vector<BigInt> A;
    BigInt maxa = 0;
    for (const BigInt& a : p.A) {
        A.push_back(a * N);
        maxa = std::max(maxa, abs_int(A.back()));
    }

    const long L = p.l, B = p.B;
    // number of k blocks whose 2-power is non-negative
    const long khead = d >= 0 ? d / B + 1 : 0;
    long ktail = std::max(khead, 1L);
    const long Wguess = 4 * (h + req.guard_hex);
    while (B * ktail - d <= Wguess + 16 + bit_length(maxa) + bit_length(BigInt(ktail * L + L))) ++ktail;
    const long nterms = ktail * L;
    const long W = Wguess + bit_length(BigInt(nterms)) + 4;

    unsigned nthreads = req.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : req.threads;
    nthreads = static_cast<unsigned>(std::max<long>(1, std::min<long>(nthreads, khead)));

    auto head_range = [&](long k0, long k1, BigInt& acc) {
        BigInt M, r, t, n, red;
        for (long k = k0; k < k1; ++k) {
            BigInt e = d - B * k;
            for (long j = 1; j <= L; ++j) {
                const BigInt& a = A[static_cast<std::size_t>(j - 1)];
                if (a == 0) continue;
                n = ipow(BigInt(k * L + j), static_cast<unsigned long>(p.s));
                M = o * n;
                r = powmod(2, e, M, req.path);
                mpz_fdiv_r(red.get_mpz_t(), a.get_mpz_t(), M.get_mpz_t());
                r *= red;
                mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
                mpz_mul_2exp(t.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
                mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), M.get_mpz_t());
                acc += t;
            }
        }
    };

    std::vector<BigInt> partial(nthreads, BigInt(0));
    if (nthreads == 1) {
        head_range(0, khead, partial[0]);
    } else {
        std::vector<std::thread> pool;
        long chunk = (khead + nthreads - 1) / nthreads;
        for (unsigned w = 0; w < nthreads; ++w) {
            long k0 = std::min(khead, static_cast<long>(w) * chunk), k1 = std::min(khead, k0 + chunk);
            pool.emplace_back(head_range, k0, k1, std::ref(partial[w]));
        }
        for (auto& th : pool) th.join();
    }
    BigInt acc = 0;
    for (const BigInt& x : partial) acc += x;

    // tail: 2^(d - Bk) < 1, summed directly
    BigInt t, den_k, scaled;
    for (long k = khead; k < ktail; ++k) {
        long e = B * k - d;
        for (long j = 1; j <= L; ++j) {
            const BigInt& a = A[static_cast<std::size_t>(j - 1)];
            if (a == 0) continue;
            den_k = o * ipow(BigInt(k * L + j), static_cast<unsigned long>(p.s));
            if (W >= e) {
                mpz_mul_2exp(scaled.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(W - e));
            } else {
                scaled = a;
                mpz_mul_2exp(den_k.get_mpz_t(), den_k.get_mpz_t(), static_cast<mp_bitcnt_t>(e - W));
            }
            mpz_tdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), den_k.get_mpz_t());
            acc += t;
        }
    }
    // one ulp per term, one for the omitted tail
    const BigInt err = BigInt(nterms) + 1;

    mpz_fdiv_r_2exp(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<mp_bitcnt_t>(W));

    FixReal coarse = evaluate(p, 64 + std::max(0L, -d));
    res.sign = fix_sign(coarse);
    // acc holds frac(2^pos |pre| P), which has the sign of value * sign(pre)
    if (res.sign * sgn(p.pre) < 0) {
        acc = pow2(W) - acc;
        mpz_fdiv_r_2exp(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
    }

    const long low_bits = W - 4 * h;
    BigInt digits = acc >> static_cast<mp_bitcnt_t>(low_bits);
    BigInt low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), acc.get_mpz_t(), static_cast<mp_bitcnt_t>(low_bits));
    BigInt margin = std::min(low, BigInt(pow2(low_bits) - low));
    res.digits = to_hex(digits, h);
    res.confidence_bits = margin == 0 ? 0 : (bit_length(margin) - 1) - bit_length(err);
    if (res.confidence_bits <= 0) {
        throw PrecisionError("extraction window lies on a carry boundary; retry with a larger guard");
    }
    return res;
}

std::string digit_window(const PFormula& formula, long bit_pos, long count, long prec_bits) {
    if (bit_pos < 0 || count < 1) throw DomainError("invalid digit window");
    if (prec_bits < bit_pos + 4 * count + 64) throw PrecisionError("insufficient precision for the digit window");
    FixReal v = evaluate(formula, prec_bits);
    BigInt m = abs_int(v.mantissa);
    BigInt lo = m > v.err_ulp ? BigInt(m - v.err_ulp) : BigInt(0);
    BigInt hi = m + v.err_ulp;
    const long drop = v.frac_bits - bit_pos - 4 * count;
    auto window = [&](const BigInt& x) {
        BigInt w = x >> static_cast<mp_bitcnt_t>(drop);
        mpz_fdiv_r_2exp(w.get_mpz_t(), w.get_mpz_t(), static_cast<mp_bitcnt_t>(4 * count));
        return w;
    };
    BigInt w = window(m);
    if (window(lo) != w || window(hi) != w) {
        throw PrecisionError("digit window is ambiguous at this precision");
    }
    return to_hex(w, count);
}

}  // namespace bbp
