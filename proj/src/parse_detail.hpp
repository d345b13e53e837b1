#pragma once

#include "bbp/generator.hpp"
#include "bbp/pformula.hpp"
#include "text_cursor.hpp"

namespace bbp::detail {

bool looks_like_p(Cursor& c);
PFormula parse_p_at(Cursor& c);
LiPoint parse_li_point_at(Cursor& c);
// signed rational "a[^e]*.../b[^e]*..."; stops before a "*" not followed by a digit
BigRat parse_rat_at(Cursor& c);

}  // namespace bbp::detail
