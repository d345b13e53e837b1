#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/generator.hpp"

#include <compare>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace bbp {

enum class Atom { One, Zeta3, Zeta5, G, Cl2Pi3, Cl4Pi2 };

struct ConstMonomial {
    unsigned pi_pow = 0;
    unsigned log2_pow = 0;
    Atom atom = Atom::One;

    int degree() const;
    auto operator<=>(const ConstMonomial&) const = default;
};

std::string to_string(const ConstMonomial& m);

// B_0..B_n with B_1 = -1/2, grown on demand.
class BernoulliCache {
public:
    BigRat get(unsigned n);

private:
    std::mutex mu_;
    std::vector<BigRat> table_;
};

BernoulliCache& bernoulli_cache();

// All oracles return frac_bits = prec_bits + kGuardBits.
FixReal hurwitz_zeta(int s, const BigRat& a, long prec_bits);
// sum_{k>=0} (-1)^k f(k) for totally monotone f
FixReal alt_sum(const std::function<BigRat(long)>& f, long prec_bits);
FixReal alt_sum(const std::function<FixReal(long, long)>& f, long prec_bits);

// arctan(1/x)
FixReal atan_inv(long x, long prec_bits);
FixReal pi_value(long prec_bits);
FixReal log2_value(long prec_bits);
FixReal zeta3_value(long prec_bits);
FixReal zeta5_value(long prec_bits);
FixReal catalan_value(long prec_bits);
FixReal cl2_pi3_value(long prec_bits);
FixReal cl4_pi2_value(long prec_bits);

FixReal const_value(const ConstMonomial& m, long prec_bits);
FixReal li_point_value(const LiPoint& pt, long prec_bits);

}  // namespace bbp
