#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/pformula.hpp"

#include <string>

namespace bbp {

struct ExtractRequest {
    PFormula formula;
    long bit_pos = 0;      // first extracted bit after the binary point
    long hex_digits = 8;
    long guard_hex = 8;
    PowmodPath path = PowmodPath::Auto;
    unsigned threads = 1;  // 0 = hardware concurrency
};

struct ExtractResult {
    std::string digits;    // uppercase hex of frac(2^bit_pos |value|)
    long confidence_bits = 0;
    int sign = 0;          // sign of the value, 0 when it is indistinguishable from zero
};

// Throws DomainError for an irrational prefactor and PrecisionError when the
// window sits too close to a carry boundary for the requested guard.
ExtractResult extract(const ExtractRequest& req);

// Hex digits of |value| in bits [bit_pos, bit_pos + 4 count) after the point,
// computed by full evaluation.
std::string digit_window(const PFormula& formula, long bit_pos, long count, long prec_bits);

}  // namespace bbp
