#include "bbp/reference.hpp"

#include "bbp/error.hpp"

#include <array>
#include <map>

namespace bbp {

int ConstMonomial::degree() const {
    int d = static_cast<int>(pi_pow + log2_pow);
    switch (atom) {
        case Atom::One: return d;
        case Atom::Zeta3: return d + 3;
        case Atom::Zeta5: return d + 5;
        case Atom::G: return d + 2;
        case Atom::Cl2Pi3: return d + 2;
        case Atom::Cl4Pi2: return d + 4;
    }
    return d;
}

std::string to_string(const ConstMonomial& m) {
    std::string out;
    auto add = [&out](const std::string& f) {
        if (!out.empty()) out += "*";
        out += f;
    };
    if (m.pi_pow == 1) add("pi");
    if (m.pi_pow > 1) add("pi^" + std::to_string(m.pi_pow));
    if (m.log2_pow == 1) add("log2");
    if (m.log2_pow > 1) add("log2^" + std::to_string(m.log2_pow));
    switch (m.atom) {
        case Atom::One: break;
        case Atom::Zeta3: add("zeta3"); break;
        case Atom::Zeta5: add("zeta5"); break;
        case Atom::G: add("G"); break;
        case Atom::Cl2Pi3: add("Cl2pi3"); break;
        case Atom::Cl4Pi2: add("Cl4pi2"); break;
    }
    return out.empty() ? "1" : out;
}

BigRat BernoulliCache::get(unsigned n) {
    std::lock_guard<std::mutex> lock(mu_);
    while (table_.size() <= n) {
        unsigned m = static_cast<unsigned>(table_.size());
        if (m == 0) {
            table_.emplace_back(1);
            continue;
        }
        // B_m = -1/(m+1) sum_{k<m} C(m+1,k) B_k
        BigRat acc = 0;
        BigInt binom = 1;  // C(m+1, 0)
        for (unsigned k = 0; k < m; ++k) {
            if (k == 1 || k % 2 == 0) acc += BigRat(binom) * table_[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        table_.push_back(-acc / BigRat(m + 1));
    }
    return table_[n];
}

BernoulliCache& bernoulli_cache() {
    static BernoulliCache cache;
    return cache;
}

namespace {

constexpr long kInner = 16;  // extra bits inside each oracle

BigInt abs_int(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

class ConstantCache {
public:
    FixReal get(const std::string& name, long prec_bits, const std::function<FixReal(long)>& compute) {
        std::lock_guard<std::mutex> lock(mu_);
        long want = prec_bits + kGuardBits;
        auto it = values_.find(name);
        if (it == values_.end() || it->second.frac_bits < want) {
            values_[name] = compute(prec_bits);
            it = values_.find(name);
        }
        return fix_rescale(it->second, want);
    }

private:
    std::mutex mu_;
    std::map<std::string, FixReal> values_;
};

ConstantCache& constant_cache() {
    static ConstantCache cache;
    return cache;
}

// trunc(num * 2^bits / den), one ulp of error
BigInt scaled_quotient(const BigInt& num, long bits, const BigInt& den) {
    BigInt x, q;
    mpz_mul_2exp(x.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    mpz_tdiv_q(q.get_mpz_t(), x.get_mpz_t(), den.get_mpz_t());
    return q;
}

// a + b sqrt2 + c sqrt3 + d sqrt6
struct Quad {
    std::array<BigRat, 4> v{BigRat(0), BigRat(0), BigRat(0), BigRat(0)};
};

Quad operator*(const Quad& x, const Quad& y) {
    const auto& a = x.v;
    const auto& b = y.v;
    Quad r;
    r.v[0] = a[0] * b[0] + 2 * a[1] * b[1] + 3 * a[2] * b[2] + 6 * a[3] * b[3];
    r.v[1] = a[0] * b[1] + a[1] * b[0] + 3 * (a[2] * b[3] + a[3] * b[2]);
    r.v[2] = a[0] * b[2] + a[2] * b[0] + 2 * (a[1] * b[3] + a[3] * b[1]);
    r.v[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
    return r;
}

Quad operator+(const Quad& x, const Quad& y) {
    Quad r;
    for (int i = 0; i < 4; ++i) r.v[i] = x.v[i] + y.v[i];
    return r;
}

Quad operator-(const Quad& x, const Quad& y) {
    Quad r;
    for (int i = 0; i < 4; ++i) r.v[i] = x.v[i] - y.v[i];
    return r;
}

Quad quad(const BigRat& a, const BigRat& b = 0, const BigRat& c = 0) {
    Quad r;
    r.v[0] = a;
    r.v[1] = b;
    r.v[2] = c;
    return r;
}

// e^(i pi n/d) for d in {1,2,3,4}, from the unit-circle coordinates of the base angle
void unit_root(long n, long d, Quad& re, Quad& im) {
    BigRat h = make_rat(1, 2);
    Quad c, s;
    switch (d) {
        case 1: c = quad(-1); s = quad(0); break;
        case 2: c = quad(0); s = quad(1); break;
        case 3: c = quad(h); s = quad(0, 0, h); break;
        case 4: c = quad(0, h); s = quad(0, h); break;
        default: throw DomainError("unsupported angle denominator");
    }
    re = quad(1);
    im = quad(0);
    long m = ((n % (2 * d)) + 2 * d) % (2 * d);
    for (long k = 0; k < m; ++k) {
        Quad nr = re * c - im * s;
        Quad ni = re * s + im * c;
        re = nr;
        im = ni;
    }
}

}  // namespace

FixReal atan_inv(long x, long prec_bits) {
    if (x < 2) throw DomainError("atan_inv needs x >= 2");
    const long W = prec_bits + kGuardBits;
    const long Wi = W + kInner;
    BigInt one = pow2(Wi);
    BigInt sum = 0, xpow = x, x2 = BigInt(x) * x;
    long nterms = 0;
    for (long k = 0;; ++k) {
        BigInt t = one / (BigInt(2 * k + 1) * xpow);
        if (t == 0) break;
        sum += (k % 2 == 0) ? t : BigInt(-t);
        xpow *= x2;
        ++nterms;
    }
    // one ulp per term plus the alternating tail below one ulp
    return fix_rescale(FixReal{sum, Wi, BigInt(nterms + 1)}, W);
}

FixReal pi_value(long prec_bits) {
    return constant_cache().get("pi", prec_bits, [](long p) {
        long q = p + 8;
        FixReal a = fix_mul_int(atan_inv(5, q), 16);
        FixReal b = fix_mul_int(atan_inv(239, q), 4);
        return fix_rescale(fix_sub(a, b), p + kGuardBits);
    });
}

FixReal log2_value(long prec_bits) {
    return constant_cache().get("log2", prec_bits, [](long p) {
        const long Wi = p + kGuardBits + kInner;
        BigInt sum = 0;
        const long K = Wi;
        const BigInt one = pow2(Wi);
        for (long k = 1; k <= K; ++k) sum += BigInt(one >> k) / k;
        // tail sum_{k>K} 1/(k 2^k) < 2^-K
        return fix_rescale(FixReal{sum, Wi, BigInt(K + 2)}, p + kGuardBits);
    });
}

FixReal alt_sum(const std::function<BigRat(long)>& f, long prec_bits) {
    return alt_sum(
        [&f](long k, long bits) { return fix_from_rat(f(k), bits); }, prec_bits);
}

FixReal alt_sum(const std::function<FixReal(long, long)>& f, long prec_bits) {
    const long W = prec_bits + kGuardBits;
    const long Wi = W + kInner;
    FixReal a0 = f(0, Wi);
    long a0log = std::max(0L, bit_length(abs_int(a0.mantissa) + a0.err_ulp) - Wi);
    // (3 + sqrt 8)^n > 2^(2.54 n)
    const long n = (Wi + a0log + 4) * 100 / 254 + 2;
    BigInt d_prev = 1, d = 3;
    for (long m = 1; m < n; ++m) {
        BigInt t = 6 * d - d_prev;
        d_prev = d;
        d = t;
    }
    BigInt b = -1, c = -d;
    FixReal s{0, Wi, 0};
    for (long k = 0; k < n; ++k) {
        c = b - c;
        FixReal ak = k == 0 ? a0 : f(k, Wi);
        s = fix_add(s, fix_mul_int(ak, c));
        BigInt num = 2 * BigInt(k + n) * BigInt(k - n) * b;
        BigInt den = BigInt(2 * k + 1) * BigInt(k + 1);
        if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) throw Error("alt_sum weights lost integrality");
        mpz_divexact(b.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    FixReal r = fix_div_int(s, d);
    // acceleration error <= 2|a0| / (3+sqrt8)^n <= |a0| / d
    r.err_ulp += ceil_div(abs_int(a0.mantissa) + a0.err_ulp, d) + 1;
    return fix_rescale(r, W);
}

namespace {

FixReal eta_power(unsigned s, long prec_bits) {
    return alt_sum(
        [s](long k) { return make_rat(1, ipow(BigInt(k + 1), s)); }, prec_bits);
}

FixReal beta_power(unsigned s, long prec_bits) {
    return alt_sum(
        [s](long k) { return make_rat(1, ipow(BigInt(2 * k + 1), s)); }, prec_bits);
}

}  // namespace

FixReal zeta3_value(long prec_bits) {
    return constant_cache().get("zeta3", prec_bits, [](long p) {
        return fix_mul_rat(eta_power(3, p + 4), make_rat(4, 3), p + kGuardBits);
    });
}

FixReal zeta5_value(long prec_bits) {
    return constant_cache().get("zeta5", prec_bits, [](long p) {
        return fix_mul_rat(eta_power(5, p + 4), make_rat(16, 15), p + kGuardBits);
    });
}

FixReal catalan_value(long prec_bits) {
    return constant_cache().get("G", prec_bits, [](long p) {
        return fix_rescale(beta_power(2, p), p + kGuardBits);
    });
}

FixReal cl4_pi2_value(long prec_bits) {
    return constant_cache().get("Cl4pi2", prec_bits, [](long p) {
        return fix_rescale(beta_power(4, p), p + kGuardBits);
    });
}

FixReal cl2_pi3_value(long prec_bits) {
    return constant_cache().get("Cl2pi3", prec_bits, [](long p) {
        long q = p + 8;
        long W = q + kGuardBits;
        FixReal sum = fix_add(hurwitz_zeta(2, make_rat(1, 6), q), hurwitz_zeta(2, make_rat(1, 3), q));
        sum = fix_sub(sum, hurwitz_zeta(2, make_rat(2, 3), q));
        sum = fix_sub(sum, hurwitz_zeta(2, make_rat(5, 6), q));
        FixReal r = fix_mul(sum, fix_sqrt(3, W), W);
        return fix_rescale(fix_div_int(r, 72), p + kGuardBits);
    });
}

FixReal hurwitz_zeta(int s, const BigRat& a, long prec_bits) {
    if (s < 2) throw DomainError("hurwitz_zeta needs s >= 2");
    if (a <= 0 || a > 1) throw DomainError("hurwitz_zeta needs 0 < a <= 1");
    const long W = prec_bits + kGuardBits;
    const long Wi = W + kInner;
    const long N = Wi / 2 + 20;
    const BigInt u = a.get_num(), v = a.get_den();
    const unsigned long us = static_cast<unsigned long>(s);
    const BigInt vs = ipow(v, us);

    BigInt sum = 0;
    for (long k = 0; k < N; ++k) sum += scaled_quotient(vs, Wi, ipow(BigInt(k) * v + u, us));
    FixReal r{sum, Wi, BigInt(N)};

    const BigRat x = BigRat(N) + a;
    const BigRat xinv2 = 1 / (x * x);
    r = fix_add(r, fix_from_rat(rat_pow(x, 1 - s) / BigRat(s - 1), Wi));
    r = fix_add(r, fix_from_rat(rat_pow(x, -s) / 2, Wi));

    const BigRat stop = make_rat(1, pow2(Wi + 4));
    BigRat poch = s;                 // s (s+1) ... (s+2j-2)
    BigInt fact = 2;                 // (2j)!
    BigRat xp = rat_pow(x, -s - 1);  // x^(-s-2j+1)
    for (long j = 1;; ++j) {
        BigRat t = bernoulli_cache().get(static_cast<unsigned>(2 * j)) / BigRat(fact) * poch * xp;
        if (abs(t) < stop) {
            // remainder bounded by twice the first omitted term
            r.err_ulp += 1;
            break;
        }
        if (j > 4 * N) throw Error("Euler-Maclaurin series failed to converge");
        r = fix_add(r, fix_from_rat(t, Wi));
        poch *= BigRat((s + 2 * j - 1) * static_cast<long>(s + 2 * j));
        fact *= BigInt(2 * j + 1) * BigInt(2 * j + 2);
        xp *= xinv2;
    }
    return fix_rescale(r, W);
}

FixReal const_value(const ConstMonomial& m, long prec_bits) {
    const long W = prec_bits + kGuardBits;
    const long extra = kInner + 4 * static_cast<long>(m.pi_pow + m.log2_pow + 1);
    const long p = prec_bits + extra;
    const long Wi = p + kGuardBits;
    FixReal r = fix_exact(1, Wi);
    for (unsigned i = 0; i < m.pi_pow; ++i) r = fix_mul(r, pi_value(p), Wi);
    for (unsigned i = 0; i < m.log2_pow; ++i) r = fix_mul(r, log2_value(p), Wi);
    switch (m.atom) {
        case Atom::One: break;
        case Atom::Zeta3: r = fix_mul(r, zeta3_value(p), Wi); break;
        case Atom::Zeta5: r = fix_mul(r, zeta5_value(p), Wi); break;
        case Atom::G: r = fix_mul(r, catalan_value(p), Wi); break;
        case Atom::Cl2Pi3: r = fix_mul(r, cl2_pi3_value(p), Wi); break;
        case Atom::Cl4Pi2: r = fix_mul(r, cl4_pi2_value(p), Wi); break;
    }
    return fix_rescale(r, W);
}

FixReal li_point_value(const LiPoint& pt, long prec_bits) {
    validate(pt);
    const long W = prec_bits + kGuardBits;
    const long Wi = W + kInner;

    // z = 2^(-q/2) e^(i x)
    Quad re, im;
    if (pt.real_axis()) {
        re = quad(1);
        im = quad(0);
    } else {
        unit_root(pt.ang_num, pt.ang_den, re, im);
    }
    Quad scale = pt.q % 2 == 0 ? quad(make_rat(1, pow2(pt.q / 2)))
                               : quad(0, make_rat(1, pow2((pt.q + 1) / 2)));
    Quad zr = re * scale, zi = im * scale;

    // |tail| <= sum_{k>K} 2^(-qk/2) < 3.5 * 2^(-q(K+1)/2)
    const long K = (2 * (Wi + 2)) / pt.q + 1;
    std::array<BigInt, 4> bucket{0, 0, 0, 0};
    Quad wr = zr, wi = zi;
    for (long k = 1; k <= K; ++k) {
        const Quad& w = pt.part == Part::Re ? wr : wi;
        BigInt ks = ipow(BigInt(k), static_cast<unsigned long>(pt.s));
        for (int i = 0; i < 4; ++i) {
            const BigRat& c = w.v[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            bucket[static_cast<std::size_t>(i)] += scaled_quotient(c.get_num(), Wi, c.get_den() * ks);
        }
        Quad nr = wr * zr - wi * zi;
        Quad ni = wr * zi + wi * zr;
        wr = nr;
        wi = ni;
    }
    FixReal r{bucket[0], Wi, BigInt(K)};
    const std::array<unsigned long, 4> radicand{1, 2, 3, 6};
    for (std::size_t i = 1; i < 4; ++i) {
        if (bucket[i] == 0) continue;
        FixReal b{bucket[i], Wi, BigInt(K)};
        r = fix_add(r, fix_mul(b, fix_sqrt(radicand[i], Wi), Wi));
    }
    r.err_ulp += 1;
    return fix_rescale(r, W);
}

}  // namespace bbp
