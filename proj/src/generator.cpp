#include "bbp/generator.hpp"

#include "bbp/error.hpp"
#include "parse_detail.hpp"

#include <array>
#include <numeric>

namespace bbp {

namespace {

// Angles in units of pi/12; only multiples of 3 or 4 are representable.
struct Entry {
    int rat_num, rat_den;  // rational part
    int r2_num, r2_den;    // sqrt2 coefficient
    int r3_num, r3_den;    // sqrt3 coefficient
    bool valid;
};

constexpr Entry kNone{0, 1, 0, 1, 0, 1, false};

constexpr std::array<Entry, 24> make_cos() {
    std::array<Entry, 24> t{};
    for (auto& e : t) e = kNone;
    t[0] = {1, 1, 0, 1, 0, 1, true};
    t[3] = {0, 1, 1, 2, 0, 1, true};
    t[4] = {1, 2, 0, 1, 0, 1, true};
    t[6] = {0, 1, 0, 1, 0, 1, true};
    t[8] = {-1, 2, 0, 1, 0, 1, true};
    t[9] = {0, 1, -1, 2, 0, 1, true};
    t[12] = {-1, 1, 0, 1, 0, 1, true};
    t[15] = {0, 1, -1, 2, 0, 1, true};
    t[16] = {-1, 2, 0, 1, 0, 1, true};
    t[18] = {0, 1, 0, 1, 0, 1, true};
    t[20] = {1, 2, 0, 1, 0, 1, true};
    t[21] = {0, 1, 1, 2, 0, 1, true};
    return t;
}

constexpr std::array<Entry, 24> make_sin() {
    std::array<Entry, 24> t{};
    for (auto& e : t) e = kNone;
    t[0] = {0, 1, 0, 1, 0, 1, true};
    t[3] = {0, 1, 1, 2, 0, 1, true};
    t[4] = {0, 1, 0, 1, 1, 2, true};
    t[6] = {1, 1, 0, 1, 0, 1, true};
    t[8] = {0, 1, 0, 1, 1, 2, true};
    t[9] = {0, 1, 1, 2, 0, 1, true};
    t[12] = {0, 1, 0, 1, 0, 1, true};
    t[15] = {0, 1, -1, 2, 0, 1, true};
    t[16] = {0, 1, 0, 1, -1, 2, true};
    t[18] = {-1, 1, 0, 1, 0, 1, true};
    t[20] = {0, 1, 0, 1, -1, 2, true};
    t[21] = {0, 1, -1, 2, 0, 1, true};
    return t;
}

constexpr auto kCos = make_cos();
constexpr auto kSin = make_sin();

std::string part_name(const LiPoint& pt) {
    if (pt.real_axis()) return "ReLi0";
    return pt.part == Part::Re ? "ReLi" : "ImLi";
}

}  // namespace

TrigValue trig_value(Part part, long num, long den) {
    if (den != 1 && den != 2 && den != 3 && den != 4) {
        throw DomainError("unsupported angle denominator " + std::to_string(den));
    }
    long k = (num % (2 * den) + 2 * den) % (2 * den) * (12 / den);
    const Entry& e = (part == Part::Re ? kCos : kSin)[static_cast<std::size_t>(k)];
    if (!e.valid) throw DomainError("unsupported angle");
    return {make_rat(e.rat_num, e.rat_den), make_rat(e.r2_num, e.r2_den), make_rat(e.r3_num, e.r3_den)};
}

void validate(const LiPoint& pt) {
    if (pt.s < 1) throw DomainError("degree must be positive");
    if (pt.q < 1) throw DomainError("scale exponent q must be positive");
    if (pt.real_axis()) {
        if (pt.ang_den != 1 || pt.part != Part::Re) throw DomainError("angle 0 supports only the real part");
        if (pt.q % 2 != 0) throw DomainError("odd q requires an angle with denominator 4");
        return;
    }
    if (pt.ang_den != 1 && pt.ang_den != 2 && pt.ang_den != 3 && pt.ang_den != 4) {
        throw DomainError("unsupported angle denominator " + std::to_string(pt.ang_den));
    }
    if (pt.ang_num <= 0 || pt.ang_num >= 2 * pt.ang_den) throw DomainError("angle must lie in (0, 2pi)");
    if (std::gcd(pt.ang_num, pt.ang_den) != 1) throw DomainError("angle fraction must be reduced");
    if (pt.q % 2 != 0 && pt.ang_den != 4) throw DomainError("odd q requires an angle with denominator 4");
}

LiPoint make_point(int s, int q, long num, long den, Part part) {
    LiPoint pt{s, q, num, den, part};
    validate(pt);
    return pt;
}

namespace detail {

LiPoint parse_li_point_at(Cursor& c) {
    std::size_t at = c.pos();
    std::string name = c.ident();
    LiPoint pt;
    if (name == "ReLi0") {
        c.expect('(');
        pt.s = static_cast<int>(c.small_int());
        c.expect(',');
        pt.q = static_cast<int>(c.small_int());
        c.expect(')');
    } else if (name == "ReLi" || name == "ImLi") {
        pt.part = name == "ReLi" ? Part::Re : Part::Im;
        c.expect('(');
        pt.s = static_cast<int>(c.small_int());
        c.expect(',');
        pt.q = static_cast<int>(c.small_int());
        c.expect(',');
        pt.ang_num = c.small_int();
        pt.ang_den = c.accept('/') ? c.small_int() : 1;
        c.expect(')');
    } else {
        throw ParseError("unknown polylogarithm point '" + name + "'", at);
    }
    try {
        validate(pt);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), at);
    }
    return pt;
}

}  // namespace detail

LiPoint parse_li_point(std::string_view text) {
    detail::Cursor c(text);
    LiPoint pt = detail::parse_li_point_at(c);
    if (!c.at_end()) c.fail("trailing input");
    return pt;
}

std::string to_string(const LiPoint& pt) {
    std::string out = part_name(pt) + "(" + std::to_string(pt.s) + "," + std::to_string(pt.q);
    if (!pt.real_axis()) out += "," + std::to_string(pt.ang_num) + "/" + std::to_string(pt.ang_den);
    return out + ")";
}

long period(const LiPoint& pt) {
    validate(pt);
    long L0 = 1;
    if (!pt.real_axis()) {
        long two_d = 2 * pt.ang_den;
        L0 = two_d / std::gcd(two_d, pt.ang_num);
    }
    return (pt.q * L0) % 2 != 0 ? 2 * L0 : L0;
}

PHeader li_series_header(const LiPoint& pt) {
    long L = period(pt);
    return {pt.s, pt.q * L / 2, L};
}

PFormula generate(const LiPoint& pt, long target_len) {
    long P = period(pt);
    if (target_len < 1 || target_len % P != 0) {
        throw DomainError("length " + std::to_string(target_len) + " is not a multiple of the period " +
                          std::to_string(P));
    }
    const long B = pt.q * target_len / 2;
    // v_j = 2^(-qj/2) trig(j x) as rational + sqrt2 + sqrt3 parts
    std::vector<std::array<BigRat, 3>> v;
    for (long j = 1; j <= target_len; ++j) {
        TrigValue t = pt.real_axis() ? TrigValue{1, 0, 0} : trig_value(pt.part, j * pt.ang_num, pt.ang_den);
        long qj = pt.q * j;
        std::array<BigRat, 3> c;
        if (qj % 2 == 0) {
            BigRat f = make_rat(1, pow2(qj / 2));
            c = {t.rational_part * f, t.root2_part * f, t.root3_part * f};
        } else {
            // 2^(-qj/2) = 2^(-(qj+1)/2) sqrt2
            if (t.root3_part != 0) throw DomainError("non-cancelling irrational factor");
            BigRat f = make_rat(1, pow2((qj + 1) / 2));
            c = {2 * t.root2_part * f, t.rational_part * f, BigRat(0)};
        }
        v.push_back(c);
    }
    int which = -1;
    for (const auto& c : v) {
        for (int i = 0; i < 3; ++i) {
            if (c[static_cast<std::size_t>(i)] == 0) continue;
            if (which >= 0 && which != i) throw DomainError("non-cancelling irrational factor in " + to_string(pt));
            which = i;
        }
    }
    if (which < 0) {
        PFormula z = make_zero_formula(pt.s, B);
        return z;
    }
    BigInt D = 1;
    for (const auto& c : v) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c[static_cast<std::size_t>(which)].get_den().get_mpz_t());
    PFormula p;
    p.s = pt.s;
    p.B = B;
    p.l = target_len;
    p.A.clear();
    BigInt g = 0;
    for (const auto& c : v) {
        const BigRat& x = c[static_cast<std::size_t>(which)];
        BigInt a = x.get_num() * (D / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        p.A.push_back(a);
    }
    for (BigInt& a : p.A) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    p.pre = make_rat(g, D);
    p.surd = which == 0 ? 1 : (which == 1 ? 2 : 3);
    return p;
}

}  // namespace bbp
