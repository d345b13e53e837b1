#include "bbp/pformula.hpp"

#include "bbp/error.hpp"
#include "parse_detail.hpp"

#include <algorithm>
#include <numeric>

namespace bbp {

namespace {

BigInt abs_int(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

// "2^e" for large powers of two, decimal otherwise
std::string render_int(const BigInt& v) {
    if (v > 1024 && mpz_popcount(v.get_mpz_t()) == 1) {
        return "2^" + std::to_string(bit_length(v) - 1);
    }
    return v.get_str();
}

std::string render_rat(const BigRat& r) {
    std::string out = r < 0 ? "-" : "";
    out += render_int(abs_int(r.get_num()));
    if (r.get_den() != 1) out += "/" + render_int(r.get_den());
    return out;
}

}  // namespace

std::string to_string(const PHeader& h) {
    return "(" + std::to_string(h.s) + ", 2^" + std::to_string(h.B) + ", " + std::to_string(h.l) + ")";
}

PHeader parse_header(std::string_view text) {
    detail::Cursor c(text);
    bool paren = c.accept('(');
    PHeader h;
    h.s = static_cast<int>(c.small_int());
    c.expect(',');
    c.accept("2^");
    h.B = c.small_int();
    c.expect(',');
    h.l = c.small_int();
    if (paren) c.expect(')');
    if (!c.at_end()) c.fail("trailing input");
    if (h.s < 1 || h.B < 1 || h.l < 1) throw ParseError("header entries must be positive", 0);
    return h;
}

bool PFormula::is_zero() const {
    if (pre == 0) return true;
    return std::all_of(A.begin(), A.end(), [](const BigInt& a) { return a == 0; });
}

bool operator==(const PFormula& a, const PFormula& b) {
    return a.s == b.s && a.B == b.B && a.l == b.l && a.A == b.A && a.pre == b.pre && a.surd == b.surd;
}

PFormula make_zero_formula(int s, long B) {
    PFormula z;
    z.s = s;
    z.B = B;
    z.l = 1;
    z.A = {BigInt(0)};
    z.pre = 0;
    z.surd = 1;
    return z;
}

namespace detail {

BigRat parse_rat_at(Cursor& c) {
    bool neg = c.accept('-');
    auto product = [&c]() {
        BigInt v = c.power_factor();
        for (;;) {
            Cursor look = c;
            if (!look.accept('*') || !look.peek_digit()) break;
            c.accept('*');
            v *= c.power_factor();
        }
        return v;
    };
    BigInt num = product();
    BigInt den = 1;
    if (c.accept('/')) {
        std::size_t at = c.pos();
        den = product();
        if (den == 0) throw ParseError("zero denominator", at);
    }
    return make_rat(neg ? BigInt(-num) : num, den);
}

bool looks_like_p(Cursor& c) {
    Cursor look = c;
    if (look.accept("sqrt3")) return true;
    if (look.peek_digit() || look.peek() == '-') {
        try {
            parse_rat_at(look);
        } catch (const ParseError&) {
            return false;
        }
        if (!look.accept('*')) return false;
    }
    return look.accept("P(");
}

PFormula parse_p_at(Cursor& c) {
    PFormula p;
    p.pre = 1;
    if (c.accept("sqrt3")) {
        p.surd = 3;
        c.expect('*');
    }
    if (c.peek_digit() || c.peek() == '-') {
        p.pre = parse_rat_at(c);
        c.expect('*');
    }
    c.expect("P(");
    std::size_t at = c.pos();
    long s = c.small_int();
    if (s < 1) throw ParseError("degree must be positive", at);
    p.s = static_cast<int>(s);
    c.expect(',');
    at = c.pos();
    if (c.accept('-')) throw ParseError("base exponent must be positive", at);
    BigInt base = c.unsigned_int();
    if (base != 2) throw ParseError("base must be written 2^B", at);
    c.expect('^');
    at = c.pos();
    if (c.accept('-')) throw ParseError("base exponent must be positive", at);
    p.B = c.small_int();
    if (p.B <= 0) throw ParseError("base exponent must be positive", at);
    c.expect(',');
    at = c.pos();
    p.l = c.small_int();
    if (p.l <= 0) throw ParseError("length must be positive", at);
    c.expect(',');
    c.expect('[');
    std::size_t list_at = c.pos();
    p.A.clear();
    p.A.push_back(c.signed_product());
    while (c.accept(',')) p.A.push_back(c.signed_product());
    c.expect(']');
    c.expect(')');
    if (static_cast<long>(p.A.size()) != p.l) {
        throw ParseError("coefficient count " + std::to_string(p.A.size()) + " does not match length " +
                             std::to_string(p.l),
                         list_at);
    }
    return p;
}

}  // namespace detail

PFormula parse_p(std::string_view text) {
    detail::Cursor c(text);
    PFormula p = detail::parse_p_at(c);
    if (!c.at_end()) c.fail("trailing input");
    return p;
}

std::string serialize(const PFormula& input) {
    PFormula p = canonicalize(input);
    std::string out;
    if (p.surd != 1) out += "sqrt" + std::to_string(p.surd) + " * ";
    if (p.pre != 1) out += render_rat(p.pre) + " * ";
    out += "P(" + std::to_string(p.s) + ", 2^" + std::to_string(p.B) + ", " + std::to_string(p.l) + ", [";
    for (std::size_t i = 0; i < p.A.size(); ++i) {
        if (i) out += ", ";
        out += p.A[i].get_str();
    }
    out += "])";
    return out;
}

PFormula canonicalize(const PFormula& p) {
    BigInt g = 0;
    for (const BigInt& a : p.A) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 0 || p.pre == 0) return make_zero_formula(p.s, p.B);
    PFormula r = p;
    for (BigInt& a : r.A) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    r.pre = p.pre * BigRat(g);
    auto first = std::find_if(r.A.begin(), r.A.end(), [](const BigInt& a) { return a != 0; });
    if (*first < 0) {
        for (BigInt& a : r.A) a = -a;
        r.pre = -r.pre;
    }
    return r;
}

PFormula stretch(const PFormula& p, long t) {
    if (t < 1) throw DomainError("stretch factor must be positive");
    if (t == 1) return p;
    PFormula r = p;
    r.l = p.l * t;
    r.A.assign(static_cast<std::size_t>(r.l), BigInt(0));
    for (long j = 1; j <= p.l; ++j) r.A[static_cast<std::size_t>(t * j - 1)] = p.A[static_cast<std::size_t>(j - 1)];
    r.pre = p.pre * BigRat(ipow(t, static_cast<unsigned long>(p.s)));
    return r;
}

PFormula rebase(const PFormula& p, long m) {
    if (m < 1) throw DomainError("rebase factor must be positive");
    if (m == 1) return p;
    PFormula r = p;
    r.B = p.B * m;
    r.l = p.l * m;
    r.A.assign(static_cast<std::size_t>(r.l), BigInt(0));
    for (long t = 0; t < m; ++t) {
        BigInt scale = pow2(p.B * (m - 1 - t));
        for (long j = 0; j < p.l; ++j) {
            r.A[static_cast<std::size_t>(j + p.l * t)] = p.A[static_cast<std::size_t>(j)] * scale;
        }
    }
    r.pre = p.pre / BigRat(pow2(p.B * (m - 1)));
    return r;
}

bool header_reachable(const PHeader& from, const PHeader& to) {
    if (from.s != to.s || to.B % from.B != 0) return false;
    long m = to.B / from.B;
    return to.l % (from.l * m) == 0;
}

PFormula to_header(const PFormula& p, const PHeader& h) {
    if (!header_reachable(p.header(), h)) {
        throw DomainError("header " + to_string(h) + " is not reachable from " + to_string(p.header()));
    }
    PFormula r = rebase(p, h.B / p.B);
    return stretch(r, h.l / r.l);
}

PHeader common_header(const std::vector<PHeader>& hs) {
    if (hs.empty()) throw DomainError("no headers to align");
    long B = 1;
    for (const PHeader& h : hs) {
        if (h.s != hs.front().s) throw DomainError("degree mismatch in align");
        B = std::lcm(B, h.B);
    }
    long l = 1;
    for (const PHeader& h : hs) l = std::lcm(l, h.l * (B / h.B));
    return {hs.front().s, B, l};
}

std::vector<PFormula> align(const std::vector<PFormula>& ps) {
    std::vector<PHeader> hs;
    for (const PFormula& p : ps) hs.push_back(p.header());
    PHeader h = common_header(hs);
    std::vector<PFormula> out;
    for (const PFormula& p : ps) out.push_back(to_header(p, h));
    return out;
}

PFormula combine(const std::vector<std::pair<BigRat, PFormula>>& terms) {
    if (terms.empty()) throw DomainError("combine needs at least one term");
    unsigned surd = 0;
    for (const auto& [c, p] : terms) {
        if (c == 0 || p.is_zero()) continue;
        if (surd == 0) surd = p.surd;
        if (p.surd != surd) throw DomainError("cannot combine formulas with different irrational prefactors");
    }
    if (surd == 0) surd = 1;
    std::vector<PFormula> ps;
    for (const auto& term : terms) ps.push_back(term.second);
    std::vector<PFormula> aligned = align(ps);
    BigInt D = 1;
    std::vector<BigRat> scales;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        BigRat sc = terms[i].first * aligned[i].pre;
        scales.push_back(sc);
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), sc.get_den().get_mpz_t());
    }
    PFormula r = aligned.front();
    r.surd = surd;
    r.A.assign(static_cast<std::size_t>(r.l), BigInt(0));
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (scales[i] == 0) continue;
        BigInt k = scales[i].get_num() * (D / scales[i].get_den());
        for (std::size_t j = 0; j < r.A.size(); ++j) r.A[j] += k * aligned[i].A[j];
    }
    r.pre = make_rat(1, D);
    return canonicalize(r);
}

FixReal evaluate(const PFormula& p, long prec_bits) {
    if (prec_bits < 8) throw DomainError("evaluate needs at least 8 bits");
    const long W = prec_bits + kGuardBits;
    if (p.is_zero()) return FixReal{0, W, 0};

    BigInt maxa = 0;
    for (const BigInt& a : p.A) maxa = std::max(maxa, abs_int(a));
    // log2|pre * sqrt(surd)| < prelog
    long prelog = bit_length(abs_int(p.pre.get_num())) - bit_length(p.pre.get_den()) + 1;
    if (p.surd != 1) prelog += 1;
    const long lift = std::max(0L, prelog + 1);
    const long K = std::max(1L, (W + 4 + bit_length(maxa) + lift + p.B - 1) / p.B);
    const long nterms = K * p.l;
    const long Ws = W + bit_length(BigInt(nterms)) + 4 + lift;

    BigInt sum = 0, term, n, scaled;
    for (long k = 0; k < K; ++k) {
        long e = Ws - p.B * k;
        for (long j = 1; j <= p.l; ++j) {
            const BigInt& a = p.A[static_cast<std::size_t>(j - 1)];
            if (a == 0) continue;
            n = ipow(BigInt(k * p.l + j), static_cast<unsigned long>(p.s));
            if (e >= 0) {
                mpz_mul_2exp(scaled.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
            } else {
                scaled = a;
                mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
            }
            mpz_tdiv_q(term.get_mpz_t(), scaled.get_mpz_t(), n.get_mpz_t());
            sum += term;
        }
    }
    // tail: sum_{k>=K} 2^(-Bk) sum_j |a_j|/(kl+j)^s <= 2 maxa 2^(-BK)
    long te = Ws - p.B * K;
    BigInt tail = te >= 0 ? BigInt(2 * maxa * pow2(te)) : ceil_div(2 * maxa, pow2(-te));
    FixReal S{sum, Ws, BigInt(nterms) + tail};
    FixReal r = fix_mul_rat(S, p.pre, W);
    if (p.surd != 1) r = fix_mul(r, fix_sqrt(p.surd, W + 8), W);
    return r;
}

}  // namespace bbp
