#include "bbp/expr.hpp"

#include "bbp/error.hpp"
#include "parse_detail.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace bbp {

std::string to_string(const Term& t) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PFormula>) {
                return serialize(x);
            } else {
                return to_string(x);
            }
        },
        t);
}

void LinearExpr::add(const BigRat& c, const Term& t) {
    for (auto& [coef, term] : terms) {
        if (term == t) {
            coef += c;
            return;
        }
    }
    terms.emplace_back(c, t);
}

BigRat LinearExpr::coeff(const Term& t) const {
    for (const auto& [coef, term] : terms) {
        if (term == t) return coef;
    }
    return 0;
}

bool LinearExpr::is_zero() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& ct) { return ct.first == 0; });
}

LinearExpr operator+(const LinearExpr& a, const LinearExpr& b) {
    LinearExpr r = a;
    for (const auto& [c, t] : b.terms) r.add(c, t);
    return r;
}

LinearExpr operator*(const BigRat& k, const LinearExpr& a) {
    LinearExpr r;
    for (const auto& [c, t] : a.terms) r.add(k * c, t);
    return r;
}

LinearExpr operator-(const LinearExpr& a, const LinearExpr& b) { return a + BigRat(-1) * b; }

namespace {

struct ParsedTerm {
    BigRat coef{1};
    Term term{ConstMonomial{}};
};

ParsedTerm parse_term(detail::Cursor& c) {
    ParsedTerm out;
    ConstMonomial mono;
    std::optional<Term> special;
    bool has_sqrt3 = false;
    std::size_t sqrt3_at = 0;
    if (c.accept('-')) out.coef = -1;
    char op = '*';
    for (;;) {
        std::size_t at = c.pos();
        if (c.peek_digit()) {
            BigInt v = c.power_factor();
            if (op == '*') {
                out.coef *= BigRat(v);
            } else {
                if (v == 0) throw ParseError("division by zero", at);
                out.coef /= BigRat(v);
            }
        } else if (c.peek_alpha()) {
            if (op == '/') throw ParseError("only numbers may follow '/'", at);
            detail::Cursor look = c;
            std::string name = look.ident();
            if (name == "pi" || name == "log2") {
                c = look;
                unsigned e = 1;
                if (c.accept('^')) e = static_cast<unsigned>(c.small_int());
                (name == "pi" ? mono.pi_pow : mono.log2_pow) += e;
            } else if (name == "zeta3" || name == "zeta5" || name == "G" || name == "Cl2pi3" ||
                       name == "Cl4pi2") {
                if (mono.atom != Atom::One) throw ParseError("at most one special constant per term", at);
                c = look;
                mono.atom = name == "zeta3"   ? Atom::Zeta3
                            : name == "zeta5" ? Atom::Zeta5
                            : name == "G"     ? Atom::G
                            : name == "Cl2pi3" ? Atom::Cl2Pi3
                                               : Atom::Cl4Pi2;
            } else if (name == "ReLi" || name == "ImLi" || name == "ReLi0") {
                if (special) throw ParseError("at most one series term per product", at);
                special = detail::parse_li_point_at(c);
            } else if (name == "P") {
                if (special) throw ParseError("at most one series term per product", at);
                special = detail::parse_p_at(c);
            } else if (name == "sqrt3") {
                c = look;
                has_sqrt3 = true;
                sqrt3_at = at;
            } else {
                throw ParseError("unknown symbol '" + name + "'", at);
            }
        } else {
            c.fail("expected a number or symbol");
        }
        if (c.accept('*')) {
            op = '*';
        } else if (c.accept('/')) {
            op = '/';
        } else {
            break;
        }
    }
    if (special) {
        if (mono != ConstMonomial{}) throw ParseError("constants cannot multiply a series term", c.pos());
        if (has_sqrt3) {
            auto* p = std::get_if<PFormula>(&*special);
            if (!p || p->surd != 1) throw ParseError("sqrt3 may only scale a P formula", sqrt3_at);
            p->surd = 3;
        }
        out.term = *special;
    } else {
        if (has_sqrt3) throw ParseError("sqrt3 may only scale a P formula", sqrt3_at);
        out.term = mono;
    }
    return out;
}

}  // namespace

LinearExpr parse_expr(std::string_view text) {
    detail::Cursor c(text);
    LinearExpr e;
    if (c.at_end()) c.fail("empty expression");
    BigRat sign = 1;
    if (c.accept('+')) sign = 1;
    for (;;) {
        ParsedTerm t = parse_term(c);
        e.add(sign * t.coef, t.term);
        if (c.accept('+')) {
            sign = 1;
        } else if (c.accept('-')) {
            sign = -1;
        } else {
            break;
        }
    }
    if (!c.at_end()) c.fail("unexpected input");
    return e;
}

std::string to_string(const LinearExpr& e) {
    std::string out;
    for (const auto& [c, t] : e.terms) {
        if (!out.empty()) out += " + ";
        bool unit_mono = std::holds_alternative<ConstMonomial>(t) && std::get<ConstMonomial>(t) == ConstMonomial{};
        if (unit_mono) {
            out += to_string(c);
        } else {
            if (c != 1) out += to_string(c) + " * ";
            out += to_string(t);
        }
    }
    return out.empty() ? "0" : out;
}

FixReal evaluate_term(const Term& t, long prec_bits) {
    return std::visit(
        [prec_bits](const auto& x) -> FixReal {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PFormula>) {
                return evaluate(x, prec_bits);
            } else if constexpr (std::is_same_v<T, LiPoint>) {
                return li_point_value(x, prec_bits);
            } else {
                return const_value(x, prec_bits);
            }
        },
        t);
}

FixReal evaluate_expr(const LinearExpr& e, long prec_bits, unsigned threads) {
    const long W = prec_bits + kGuardBits;
    long cbits = 0;
    for (const auto& [c, t] : e.terms) {
        cbits = std::max(cbits, bit_length(c.get_num() < 0 ? BigInt(-c.get_num()) : c.get_num()));
    }
    const long inner = prec_bits + cbits + bit_length(BigInt(static_cast<long>(e.terms.size()) + 1)) + 8;
    const long Wi = inner + kGuardBits;

    std::vector<FixReal> vals(e.terms.size());
    auto work = [&](std::size_t i) {
        if (e.terms[i].first == 0) {
            vals[i] = FixReal{0, Wi, 0};
        } else {
            vals[i] = fix_mul_rat(evaluate_term(e.terms[i].second, inner), e.terms[i].first, Wi);
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(e.terms.size())));
    if (n <= 1) {
        for (std::size_t i = 0; i < e.terms.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex mu;
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < e.terms.size();) {
                    try {
                        work(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(mu);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    FixReal sum{0, Wi, 0};
    for (const FixReal& v : vals) sum = fix_add(sum, v);
    return fix_rescale(sum, W);
}

}  // namespace bbp
