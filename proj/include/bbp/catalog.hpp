#pragma once

#include "bbp/expr.hpp"
#include "bbp/pformula.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bbp {

enum class Kind { Generator, BbpReady, ZeroRelation, PrintedFormula };

std::string to_string(Kind k);

struct IdentityRecord {
    std::string id;
    std::string anchor;
    Kind kind = Kind::Generator;
    LinearExpr lhs;
    LinearExpr rhs;
    std::string lhs_text;
    std::string rhs_text;
    std::string notes;
    // printed_formula records: id of the record the printed vector derives from
    std::string source;
};

struct Catalog {
    std::vector<IdentityRecord> records;
    std::string version;

    const IdentityRecord* find(std::string_view id) const;
    const IdentityRecord& at(std::string_view id) const;
};

Catalog parse_catalog(std::string_view text);
Catalog load_catalog(const std::string& path);
// BBP_CATALOG environment variable, else the shipped file
std::string default_catalog_path();

struct VerifyReport {
    std::string id;
    FixReal residual;
    bool pass = false;
    long digits = 0;
    double seconds = 0;
};

VerifyReport verify(const IdentityRecord& record, long decimal_digits, unsigned threads = 1);
// Reports come back in catalog order.
std::vector<VerifyReport> verify_all(const Catalog& cat, long decimal_digits, unsigned threads = 0);

// The BBP formula for the record's value: the lhs when it is a single term
// (its coefficient divided out), otherwise lhs itself; built from the rhs.
PFormula derive_bbp(const IdentityRecord& record, std::optional<PHeader> target = std::nullopt);

// The printed P formula of a printed_formula record, with its coefficient folded in.
PFormula printed_formula(const IdentityRecord& record);

struct TableCheck {
    bool structural = false;  // canonical vectors and prefactors equal
    bool numeric = false;     // values agree at the requested digits
    PFormula derived;
    PFormula printed;
    std::string detail;       // mismatch description, empty on structural match
};

TableCheck check_printed(const Catalog& cat, const IdentityRecord& record, long decimal_digits);

// Solve the lhs/rhs equations of `records` for the given monomials: returns,
// for each monomial, its expression as a combination of the rhs terms.
std::vector<LinearExpr> solve_for(const std::vector<const IdentityRecord*>& records,
                                  const std::vector<ConstMonomial>& unknowns);

}  // namespace bbp
