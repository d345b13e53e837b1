#pragma once

#include "bbp/bigmath.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bbp {

struct PHeader {
    int s = 1;
    long B = 1;
    long l = 1;
    auto operator<=>(const PHeader&) const = default;
};

std::string to_string(const PHeader& h);
PHeader parse_header(std::string_view text);  // "s,B,l"

// value = surd^(1/2) * pre * sum_k 2^(-B k) sum_j A[j-1] / (k l + j)^s
// surd is 1 except for formulas whose prefactor carries sqrt(3).
struct PFormula {
    int s = 1;
    long B = 1;
    long l = 1;
    std::vector<BigInt> A{BigInt(0)};
    BigRat pre{0};
    unsigned surd = 1;

    PHeader header() const { return {s, B, l}; }
    bool is_zero() const;
};

bool operator==(const PFormula& a, const PFormula& b);

PFormula make_zero_formula(int s, long B);
PFormula parse_p(std::string_view text);
std::string serialize(const PFormula& p);

PFormula canonicalize(const PFormula& p);
PFormula stretch(const PFormula& p, long t);
PFormula rebase(const PFormula& p, long m);
// rebase then stretch onto a header reachable from p.header()
PFormula to_header(const PFormula& p, const PHeader& h);
bool header_reachable(const PHeader& from, const PHeader& to);
PHeader common_header(const std::vector<PHeader>& hs);
std::vector<PFormula> align(const std::vector<PFormula>& ps);
PFormula combine(const std::vector<std::pair<BigRat, PFormula>>& terms);

// Result carries frac_bits = prec_bits + kGuardBits.
FixReal evaluate(const PFormula& p, long prec_bits);

}  // namespace bbp
