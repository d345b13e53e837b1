#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/expr.hpp"

#include <optional>
#include <vector>

namespace bbp {

struct RelationResult {
    std::vector<BigInt> coeffs;  // primitive, first nonzero entry positive
    FixReal residual;            // sum c_i v_i
    BigInt norm_bound;           // largest |coeff| searched
};

struct PslqOutcome {
    std::optional<RelationResult> relation;
    // no relation with Euclidean norm below this bound exists (valid when relation is empty)
    BigInt exclusion_bound;
    long iterations = 0;
};

// Residual of expr at decimal_digits; certified when fix_abs_below(residual, 10^-digits).
FixReal certify_zero(const LinearExpr& expr, long decimal_digits, unsigned threads = 1);
bool certified_zero(const FixReal& residual, long decimal_digits);

// Single-level PSLQ with gamma = 2/sqrt(3). Throws PrecisionError when
// prec_bits cannot separate relations of size max_norm.
PslqOutcome pslq(const std::vector<FixReal>& values, const BigInt& max_norm, long prec_bits,
                 long max_iterations = 0);

struct RelationBasis {
    std::vector<std::vector<BigInt>> relations;
    // true when every deflation step used a unit pivot, so the relations span
    // all integer relations of norm up to the final exclusion bound
    bool complete = true;
    BigInt exclusion_bound;
};

// Repeated pslq, eliminating one value per relation found.
RelationBasis relation_basis(const std::vector<FixReal>& values, const BigInt& max_norm, long prec_bits);

// Rational coordinates of target in the span of basis, if it lies there.
std::optional<std::vector<BigRat>> span_coordinates(const std::vector<std::vector<BigInt>>& basis,
                                                    const std::vector<BigInt>& target);

}  // namespace bbp
