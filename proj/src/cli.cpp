#include "bbp/cli.hpp"

#include "bbp/catalog.hpp"
#include "bbp/error.hpp"
#include "bbp/extractor.hpp"
#include "bbp/generator.hpp"
#include "bbp/relations.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <memory>
#include <optional>

namespace bbp {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::optional<long> digits;
    std::optional<long> bits;
    std::string catalog;
    unsigned threads = 0;
    std::string format = "text";
};

class UsageError : public Error {
public:
    using Error::Error;
};

class Context {
public:
    Context(const Options& o, std::ostream& out) : opt_(o), out_(out) {}

    long digits() const {
        long d = opt_.digits ? *opt_.digits : opt_.bits ? (*opt_.bits * 30103) / 100000 : 200;
        if (d < 16) throw UsageError("precision must be at least 16 digits");
        return d;
    }
    long bits() const { return opt_.bits ? *opt_.bits : digits_to_bits(digits()); }
    unsigned threads() const { return opt_.threads; }
    bool json_lines() const { return opt_.format == "json-lines"; }

    const Catalog& catalog() {
        if (!cat_) cat_ = std::make_unique<Catalog>(load_catalog(opt_.catalog.empty() ? default_catalog_path() : opt_.catalog));
        return *cat_;
    }

    // text line, or the json object on one line
    void emit(const std::string& text, const json& obj) {
        if (json_lines()) {
            out_ << obj.dump() << "\n";
        } else {
            out_ << text << "\n";
        }
    }

private:
    Options opt_;
    std::ostream& out_;
    std::unique_ptr<Catalog> cat_;
};

std::string hex_digits(const FixReal& v, long count) {
    BigInt m = v.mantissa < 0 ? BigInt(-v.mantissa) : v.mantissa;
    BigInt ip = m >> static_cast<mp_bitcnt_t>(v.frac_bits);
    BigInt frac;
    mpz_fdiv_r_2exp(frac.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(v.frac_bits));
    long shift = v.frac_bits - 4 * count;
    BigInt f = shift >= 0 ? BigInt(frac >> static_cast<mp_bitcnt_t>(shift)) : BigInt(frac << static_cast<mp_bitcnt_t>(-shift));
    std::string fs = f.get_str(16);
    fs.insert(0, static_cast<std::size_t>(std::max<long>(0, count - static_cast<long>(fs.size()))), '0');
    std::string is = ip.get_str(16);
    std::string out = (v.mantissa < 0 ? "-" : "") + is + "." + fs;
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

bool id_like(const std::string& s) {
    if (s.find('-') == std::string::npos) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '-' || c == '_'; });
}

// Catalog id or inline expression.
LinearExpr resolve_expr(Context& ctx, const std::string& target) {
    if (id_like(target)) {
        if (const IdentityRecord* r = ctx.catalog().find(target)) return r->rhs;
    }
    return parse_expr(target);
}

PFormula resolve_formula(Context& ctx, const std::string& id, const std::string& text) {
    if (!id.empty()) {
        const IdentityRecord& r = ctx.catalog().at(id);
        if (r.kind == Kind::PrintedFormula) return printed_formula(r);
        return derive_bbp(r);
    }
    LinearExpr e = parse_expr(text);
    IdentityRecord tmp;
    tmp.id = "inline";
    tmp.lhs.add(1, ConstMonomial{});
    tmp.rhs = e;
    return derive_bbp(tmp);
}

std::string residual_text(const FixReal& r) {
    BigRat up = fix_abs_upper(r);
    if (up == 0) return "0";
    // floor(log2(|r| + err)) + 1
    long e = bit_length(up.get_num()) - bit_length(up.get_den()) + 1;
    return "<2^" + std::to_string(e);
}

int cmd_eval(Context& ctx, const std::string& target) {
    LinearExpr e = resolve_expr(ctx, target);
    long digits = ctx.digits();
    long bits = ctx.bits();
    FixReal v = evaluate_expr(e, bits, ctx.threads() == 0 ? 1 : ctx.threads());
    std::string dec = fix_to_decimal(v, digits);
    std::string hex = hex_digits(v, bits / 4);
    ctx.emit(dec + "\nhex " + hex, json{{"target", target}, {"digits", digits}, {"value", dec}, {"hex", hex}});
    return 0;
}

int cmd_digits(Context& ctx, const std::string& id, const std::string& text, long pos, long count, long guard) {
    if (id.empty() == text.empty()) throw UsageError("give exactly one of --formula-id or --formula");
    ExtractRequest req;
    req.formula = resolve_formula(ctx, id, text);
    req.bit_pos = pos;
    req.hex_digits = count;
    req.guard_hex = guard;
    req.threads = ctx.threads();
    ExtractResult r = extract(req);
    std::string sign = r.sign < 0 ? "-" : "+";
    ctx.emit(r.digits + "\nconfidence_bits " + std::to_string(r.confidence_bits) + "\nsign " + sign,
             json{{"formula", id.empty() ? text : id}, {"pos", pos}, {"digits", r.digits},
                  {"confidence_bits", r.confidence_bits}, {"sign", r.sign}});
    return 0;
}

int cmd_gen(Context& ctx, const std::string& point, long len) {
    LiPoint pt = parse_li_point(point);
    long L = len > 0 ? len : period(pt);
    std::string p = serialize(generate(pt, L));
    ctx.emit(p, json{{"point", to_string(pt)}, {"len", L}, {"formula", p}});
    return 0;
}

int cmd_combine(Context& ctx, const std::string& text, const std::string& header) {
    LinearExpr e = parse_expr(text);
    IdentityRecord tmp;
    tmp.id = "inline";
    tmp.lhs.add(1, ConstMonomial{});
    tmp.rhs = e;
    std::optional<PHeader> h;
    if (!header.empty()) h = parse_header(header);
    std::string p = serialize(derive_bbp(tmp, h));
    ctx.emit(p, json{{"expr", text}, {"formula", p}});
    return 0;
}

void emit_report(Context& ctx, const VerifyReport& r) {
    std::string status = r.pass ? "PASS" : "FAIL";
    ctx.emit(status + " " + r.id + " residual " + residual_text(r.residual) + " digits " + std::to_string(r.digits),
             json{{"id", r.id}, {"status", status}, {"residual_bound", residual_text(r.residual)},
                  {"digits", r.digits}, {"seconds", r.seconds}});
}

int cmd_verify(Context& ctx, const std::string& id) {
    VerifyReport r = verify(ctx.catalog().at(id), ctx.digits(), ctx.threads() == 0 ? 1 : ctx.threads());
    emit_report(ctx, r);
    return r.pass ? 0 : 1;
}

int cmd_verify_all(Context& ctx) {
    auto reports = verify_all(ctx.catalog(), ctx.digits(), ctx.threads());
    long passed = 0;
    for (const auto& r : reports) {
        emit_report(ctx, r);
        passed += r.pass;
    }
    long total = static_cast<long>(reports.size());
    ctx.emit(std::to_string(passed) + "/" + std::to_string(total) + " records passed",
             json{{"passed", passed}, {"total", total}});
    return passed == total ? 0 : 1;
}

std::string vec_text(const std::vector<BigInt>& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + c[i].get_str();
    return s + "]";
}

json vec_json(const std::vector<BigInt>& c) {
    json a = json::array();
    for (const BigInt& x : c) a.push_back(x.get_str());
    return a;
}

int cmd_pslq(Context& ctx, const std::vector<std::string>& exprs, const std::string& unit_basis,
             const std::string& max_norm_text, bool all) {
    if (exprs.empty() == unit_basis.empty()) throw UsageError("give --value expressions or --unit-basis");
    long bits = ctx.bits();
    long eval_bits = bits + kGuardBits;
    std::vector<FixReal> values;
    if (!unit_basis.empty()) {
        PHeader h = parse_header(unit_basis);
        for (long j = 0; j < h.l; ++j) {
            PFormula p;
            p.s = h.s;
            p.B = h.B;
            p.l = h.l;
            p.A.assign(static_cast<std::size_t>(h.l), BigInt(0));
            p.A[static_cast<std::size_t>(j)] = 1;
            p.pre = 1;
            values.push_back(evaluate(p, eval_bits));
        }
    } else {
        for (const std::string& e : exprs) values.push_back(evaluate_expr(resolve_expr(ctx, e), eval_bits));
    }
    BigInt max_norm(max_norm_text);
    if (all) {
        RelationBasis b = relation_basis(values, max_norm, bits);
        for (const auto& r : b.relations) ctx.emit("relation " + vec_text(r), json{{"relation", vec_json(r)}});
        ctx.emit("basis " + std::to_string(b.relations.size()) + (b.complete ? " complete" : " partial") +
                     " exclusion_bound " + b.exclusion_bound.get_str(),
                 json{{"count", b.relations.size()}, {"complete", b.complete},
                      {"exclusion_bound", b.exclusion_bound.get_str()}});
        return 0;
    }
    PslqOutcome o = pslq(values, max_norm, bits);
    if (o.relation) {
        ctx.emit("relation " + vec_text(o.relation->coeffs) + " residual " + residual_text(o.relation->residual),
                 json{{"relation", vec_json(o.relation->coeffs)}, {"residual_bound", residual_text(o.relation->residual)},
                      {"iterations", o.iterations}});
    } else {
        ctx.emit("none exclusion_bound " + o.exclusion_bound.get_str(),
                 json{{"relation", nullptr}, {"exclusion_bound", o.exclusion_bound.get_str()}, {"iterations", o.iterations}});
    }
    return 0;
}

int cmd_catalog_list(Context& ctx) {
    for (const IdentityRecord& r : ctx.catalog().records) {
        ctx.emit(r.id + "  " + to_string(r.kind) + "  " + r.anchor,
                 json{{"id", r.id}, {"kind", to_string(r.kind)}, {"anchor", r.anchor}, {"lhs", r.lhs_text}});
    }
    return 0;
}

void add_common(CLI::App* app, Options& o, bool precision) {
    if (precision) {
        auto* d = app->add_option("--digits", o.digits, "decimal digits of precision (default 200)");
        auto* b = app->add_option("--bits", o.bits, "binary digits of precision");
        d->excludes(b);
    }
    app->add_option("--catalog", o.catalog, "catalog file");
    app->add_option("--threads", o.threads, "worker threads, 0 = auto");
    app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json-lines"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"BBP-type formula engine", "bbp"};
    app.require_subcommand(1);
    Options o;

    std::string target, formula_id, formula_text, point, expr_text, header, verify_id, unit_basis;
    std::string max_norm = "1000000";
    std::vector<std::string> values;
    long pos = 0, count = 8, guard = 8, len = 0;
    bool all = false;

    auto* eval = app.add_subcommand("eval", "evaluate an expression or catalog record");
    eval->add_option("target", target, "catalog id or expression")->required();
    add_common(eval, o, true);

    auto* digits = app.add_subcommand("digits", "hex digits at a bit position by digit extraction");
    digits->add_option("--formula-id", formula_id, "catalog id");
    digits->add_option("--formula", formula_text, "P formula or series expression");
    digits->add_option("--pos", pos, "bit position after the binary point")->check(CLI::NonNegativeNumber);
    digits->add_option("--count", count, "hex digits to report")->check(CLI::PositiveNumber);
    digits->add_option("--guard", guard, "guard hex digits")->check(CLI::PositiveNumber);
    add_common(digits, o, false);

    auto* gen = app.add_subcommand("gen", "BBP formula of one polylogarithm point");
    gen->add_option("--point", point, "ReLi(s,q,n/d), ImLi(s,q,n/d) or ReLi0(s,q)")->required();
    gen->add_option("--len", len, "formula length, a multiple of the period");
    add_common(gen, o, false);

    auto* comb = app.add_subcommand("combine", "combine series terms into one BBP formula");
    comb->add_option("expr", expr_text, "rational combination of ReLi/ImLi/ReLi0/P terms")->required();
    comb->add_option("--header", header, "target header s,B,l");
    add_common(comb, o, false);

    auto* ver = app.add_subcommand("verify", "verify one catalog record");
    ver->add_option("id", verify_id, "record id")->required();
    add_common(ver, o, true);

    auto* verall = app.add_subcommand("verify-all", "verify every catalog record");
    add_common(verall, o, true);

    auto* ps = app.add_subcommand("pslq", "integer relation search");
    ps->add_option("--value", values, "expression or catalog id (repeatable)");
    ps->add_option("--unit-basis", unit_basis, "the l unit-vector series of header s,B,l");
    ps->add_option("--max-norm", max_norm, "largest coefficient searched");
    ps->add_flag("--all", all, "collect a basis of relations by repeated search");
    add_common(ps, o, true);

    auto* cat = app.add_subcommand("catalog", "catalog commands");
    cat->require_subcommand(1);
    auto* list = cat->add_subcommand("list", "list records");
    add_common(list, o, false);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    Context ctx(o, out);
    try {
        if (*eval) return cmd_eval(ctx, target);
        if (*digits) return cmd_digits(ctx, formula_id, formula_text, pos, count, guard);
        if (*gen) return cmd_gen(ctx, point, len);
        if (*comb) return cmd_combine(ctx, expr_text, header);
        if (*ver) return cmd_verify(ctx, verify_id);
        if (*verall) return cmd_verify_all(ctx);
        if (*ps) return cmd_pslq(ctx, values, unit_basis, max_norm, all);
        if (*list) return cmd_catalog_list(ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace bbp
