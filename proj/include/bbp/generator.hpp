#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/pformula.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace bbp {

enum class Part { Re, Im };

// Re/Im Li_s[2^(-q/2) e^(i pi n/d)]. n = 0 is the positive real argument (ReLi0).
struct LiPoint {
    int s = 1;
    int q = 1;
    long ang_num = 0;
    long ang_den = 1;
    Part part = Part::Re;

    bool real_axis() const { return ang_num == 0; }
    auto operator<=>(const LiPoint&) const = default;
};

// rational_part + root2_part*sqrt2 + root3_part*sqrt3
struct TrigValue {
    BigRat rational_part;
    BigRat root2_part;
    BigRat root3_part;
};

// cos (Re) or sin (Im) of pi*num/den, den in {1,2,3,4}
TrigValue trig_value(Part part, long num, long den);

void validate(const LiPoint& pt);
LiPoint make_point(int s, int q, long num, long den, Part part);
LiPoint parse_li_point(std::string_view text);
std::string to_string(const LiPoint& pt);

long period(const LiPoint& pt);
PFormula generate(const LiPoint& pt, long target_len);
PHeader li_series_header(const LiPoint& pt);

}  // namespace bbp
