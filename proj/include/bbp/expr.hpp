#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/generator.hpp"
#include "bbp/pformula.hpp"
#include "bbp/reference.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bbp {

using Term = std::variant<PFormula, LiPoint, ConstMonomial>;

std::string to_string(const Term& t);

// Rational combination of terms; structurally equal terms are merged.
struct LinearExpr {
    std::vector<std::pair<BigRat, Term>> terms;

    void add(const BigRat& c, const Term& t);
    // coefficient of a term, 0 when absent
    BigRat coeff(const Term& t) const;
    bool is_zero() const;
};

LinearExpr operator+(const LinearExpr& a, const LinearExpr& b);
LinearExpr operator-(const LinearExpr& a, const LinearExpr& b);
LinearExpr operator*(const BigRat& c, const LinearExpr& a);

// term := ["-"] factor (("*" | "/") factor)* ; expr := term (("+" | "-") term)*
LinearExpr parse_expr(std::string_view text);
std::string to_string(const LinearExpr& e);

FixReal evaluate_term(const Term& t, long prec_bits);
// Terms are evaluated on up to `threads` workers; the sum order is fixed.
FixReal evaluate_expr(const LinearExpr& e, long prec_bits, unsigned threads = 1);

}  // namespace bbp
