#include "bbp/catalog.hpp"

#include "bbp/error.hpp"
#include "bbp/relations.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#ifndef BBP_DEFAULT_CATALOG
#define BBP_DEFAULT_CATALOG "data/catalog.txt"
#endif

namespace bbp {

std::string to_string(Kind k) {
    switch (k) {
        case Kind::Generator: return "generator";
        case Kind::BbpReady: return "bbp_ready";
        case Kind::ZeroRelation: return "zero_relation";
        case Kind::PrintedFormula: return "printed_formula";
    }
    return "?";
}

const IdentityRecord* Catalog::find(std::string_view id) const {
    for (const IdentityRecord& r : records) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

const IdentityRecord& Catalog::at(std::string_view id) const {
    const IdentityRecord* r = find(id);
    if (!r) throw DomainError("no catalog record '" + std::string(id) + "'");
    return *r;
}

namespace {

struct Field {
    std::string value;
    std::size_t offset = 0;  // byte offset of the value in the file
};

struct RawBlock {
    std::map<std::string, Field> fields;
    std::size_t offset = 0;
};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& id, const std::string& msg, std::size_t offset) {
    std::string where = id.empty() ? "" : "record '" + id + "': ";
    throw ParseError(where + msg, offset);
}

Kind parse_kind(const std::string& s, const std::string& id, std::size_t offset) {
    if (s == "generator") return Kind::Generator;
    if (s == "bbp_ready") return Kind::BbpReady;
    if (s == "zero_relation") return Kind::ZeroRelation;
    if (s == "printed_formula") return Kind::PrintedFormula;
    fail(id, "unknown kind '" + s + "'", offset);
}

LinearExpr parse_field_expr(const Field& f, const std::string& id, const char* key) {
    try {
        return parse_expr(f.value);
    } catch (const ParseError& e) {
        fail(id, std::string(key) + ": " + e.message(), f.offset + e.pos());
    }
}

bool lhs_is_zero(const IdentityRecord& r) { return r.lhs.is_zero(); }

LinearExpr pruned(const LinearExpr& e) {
    LinearExpr r;
    for (const auto& [c, t] : e.terms) {
        if (c != 0) r.terms.emplace_back(c, t);
    }
    return r;
}

}  // namespace

Catalog parse_catalog(std::string_view text) {
    Catalog cat;
    std::vector<RawBlock> blocks;
    std::size_t pos = 0;
    bool in_block = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line = trim(text.substr(pos, eol - pos));
        std::size_t line_start = pos;
        pos = eol + 1;
        if (line.empty() || line[0] == '#') continue;
        if (line == "[identity]") {
            blocks.emplace_back();
            blocks.back().offset = line_start;
            in_block = true;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("", "expected 'key = \"value\"'", line_start);
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string rest = trim(std::string_view(line).substr(eq + 1));
        Field f;
        if (rest.rfind("\"\"\"", 0) == 0) {
            std::string body = rest.substr(3);
            std::size_t close = body.find("\"\"\"");
            f.offset = line_start + line.find("\"\"\"") + 3;
            if (close != std::string::npos) {
                f.value = body.substr(0, close);
            } else {
                std::size_t end = text.find("\"\"\"", pos);
                if (end == std::string_view::npos) fail("", "unterminated \"\"\" string", line_start);
                f.value = body + "\n" + std::string(text.substr(pos, end - pos));
                eol = text.find('\n', end);
                pos = eol == std::string_view::npos ? text.size() : eol + 1;
            }
        } else if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') {
            f.value = rest.substr(1, rest.size() - 2);
            f.offset = line_start + line.find('"') + 1;
        } else {
            fail("", "value of '" + key + "' must be a quoted string", line_start);
        }
        if (!in_block) {
            if (key != "version") fail("", "unexpected key '" + key + "' outside a record", line_start);
            cat.version = f.value;
            continue;
        }
        if (blocks.back().fields.count(key)) fail("", "duplicate key '" + key + "'", line_start);
        blocks.back().fields[key] = f;
    }
    if (blocks.empty()) throw ParseError("catalog contains no records", 0);

    static const std::set<std::string> known{"id", "anchor", "kind", "lhs", "rhs", "notes", "source"};
    std::set<std::string> ids;
    for (const RawBlock& b : blocks) {
        auto get = [&b](const std::string& key) -> const Field* {
            auto it = b.fields.find(key);
            return it == b.fields.end() ? nullptr : &it->second;
        };
        const Field* idf = get("id");
        if (!idf || idf->value.empty()) fail("", "record without id", b.offset);
        IdentityRecord r;
        r.id = idf->value;
        for (const auto& [key, f] : b.fields) {
            if (!known.count(key)) fail(r.id, "unknown key '" + key + "'", f.offset);
        }
        if (!ids.insert(r.id).second) fail(r.id, "duplicate id '" + r.id + "'", idf->offset);
        for (const char* key : {"anchor", "kind", "lhs", "rhs"}) {
            if (!get(key)) fail(r.id, std::string("missing ") + key, b.offset);
        }
        r.anchor = get("anchor")->value;
        if (r.anchor.empty()) fail(r.id, "empty anchor", get("anchor")->offset);
        r.kind = parse_kind(get("kind")->value, r.id, get("kind")->offset);
        r.lhs_text = trim(get("lhs")->value);
        r.rhs_text = trim(get("rhs")->value);
        r.lhs = parse_field_expr(*get("lhs"), r.id, "lhs");
        r.rhs = parse_field_expr(*get("rhs"), r.id, "rhs");
        if (const Field* n = get("notes")) r.notes = n->value;
        if (const Field* s = get("source")) r.source = s->value;
        if (r.kind == Kind::PrintedFormula && r.source.empty()) fail(r.id, "printed_formula needs a source", b.offset);
        cat.records.push_back(std::move(r));
    }
    for (const IdentityRecord& r : cat.records) {
        if (!r.source.empty() && !cat.find(r.source)) {
            throw ParseError("record '" + r.id + "': unknown source '" + r.source + "'", 0);
        }
    }
    return cat;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open catalog '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_catalog(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.pos());
    }
}

std::string default_catalog_path() {
    if (const char* env = std::getenv("BBP_CATALOG"); env && *env) return env;
    return BBP_DEFAULT_CATALOG;
}

VerifyReport verify(const IdentityRecord& record, long decimal_digits, unsigned threads) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.id = record.id;
    rep.digits = decimal_digits;
    rep.residual = certify_zero(record.lhs - record.rhs, decimal_digits, threads);
    rep.pass = certified_zero(rep.residual, decimal_digits);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<VerifyReport> verify_all(const Catalog& cat, long decimal_digits, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<VerifyReport> out(cat.records.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < cat.records.size();) {
            try {
                out[i] = verify(cat.records[i], decimal_digits);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

PFormula derive_bbp(const IdentityRecord& record, std::optional<PHeader> target) {
    LinearExpr lhs = pruned(record.lhs);
    BigRat scale = 1;
    if (lhs.terms.size() == 1) scale = 1 / lhs.terms.front().first;

    std::vector<std::pair<BigRat, PFormula>> terms;
    for (const auto& [c, t] : record.rhs.terms) {
        PFormula p;
        if (const auto* pt = std::get_if<LiPoint>(&t)) {
            p = generate(*pt, period(*pt));
        } else if (const auto* pf = std::get_if<PFormula>(&t)) {
            p = *pf;
        } else {
            throw DomainError("record '" + record.id + "': rhs contains a constant, not a series term");
        }
        if (target) p = to_header(p, *target);
        terms.emplace_back(scale * c, p);
    }
    if (terms.empty()) throw DomainError("record '" + record.id + "' has an empty rhs");
    return combine(terms);
}

PFormula printed_formula(const IdentityRecord& record) {
    if (record.rhs.terms.size() != 1) throw DomainError("record '" + record.id + "' is not a single P formula");
    const auto& [c, t] = record.rhs.terms.front();
    const auto* p = std::get_if<PFormula>(&t);
    if (!p) throw DomainError("record '" + record.id + "' is not a single P formula");
    PFormula r = *p;
    r.pre *= c;
    return canonicalize(r);
}

TableCheck check_printed(const Catalog& cat, const IdentityRecord& record, long decimal_digits) {
    TableCheck chk;
    chk.printed = printed_formula(record);
    const IdentityRecord& src = cat.at(record.source);
    chk.derived = derive_bbp(src, chk.printed.header());
    const bool zero = lhs_is_zero(record);
    if (zero) {
        chk.structural = chk.derived.A == chk.printed.A && chk.derived.header() == chk.printed.header();
    } else {
        chk.structural = chk.derived == chk.printed;
    }
    const long bits = digits_to_bits(decimal_digits) + kGuardBits;
    const BigRat tol = make_rat(1, ipow(10, static_cast<unsigned long>(decimal_digits)));
    FixReal dv = evaluate(chk.derived, bits), pv = evaluate(chk.printed, bits);
    if (zero) {
        chk.numeric = fix_abs_below(dv, tol) && fix_abs_below(pv, tol);
    } else {
        chk.numeric = fix_abs_below(fix_sub(dv, pv), tol);
    }
    if (!chk.structural) {
        std::ostringstream ss;
        if (chk.derived.header() != chk.printed.header()) {
            ss << "header " << to_string(chk.derived.header()) << " vs printed " << to_string(chk.printed.header());
        } else {
            int shown = 0;
            for (std::size_t i = 0; i < chk.derived.A.size(); ++i) {
                if (chk.derived.A[i] == chk.printed.A[i]) continue;
                if (shown++ < 8) {
                    ss << "a_" << i + 1 << ": derived " << chk.derived.A[i] << " printed " << chk.printed.A[i] << "; ";
                }
            }
            if (!zero && chk.derived.pre != chk.printed.pre) {
                ss << "prefactor derived " << to_string(chk.derived.pre) << " printed " << to_string(chk.printed.pre);
            }
        }
        chk.detail = ss.str();
    }
    return chk;
}

std::vector<LinearExpr> solve_for(const std::vector<const IdentityRecord*>& records,
                                  const std::vector<ConstMonomial>& unknowns) {
    const std::size_t n = unknowns.size();
    if (records.size() != n) throw DomainError("solve_for needs one record per unknown");
    std::vector<std::vector<BigRat>> M(n, std::vector<BigRat>(n));
    std::vector<LinearExpr> R(n);
    for (std::size_t r = 0; r < n; ++r) {
        LinearExpr rest = records[r]->rhs;
        for (const auto& [c, t] : records[r]->lhs.terms) {
            const auto* m = std::get_if<ConstMonomial>(&t);
            std::size_t u = n;
            for (std::size_t k = 0; m && k < n; ++k) {
                if (unknowns[k] == *m) u = k;
            }
            if (u < n) {
                M[r][u] += c;
            } else {
                rest.add(-c, t);
            }
        }
        R[r] = rest;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && M[p][col] == 0) ++p;
        if (p == n) throw DomainError("records do not determine the unknowns");
        std::swap(M[p], M[col]);
        std::swap(R[p], R[col]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || M[i][col] == 0) continue;
            BigRat f = M[i][col] / M[col][col];
            for (std::size_t k = col; k < n; ++k) M[i][k] -= f * M[col][k];
            R[i] = R[i] - f * R[col];
        }
    }
    std::vector<LinearExpr> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(pruned(BigRat(1) / M[k][k] * R[k]));
    return out;
}

}  // namespace bbp
