#include "bbp/relations.hpp"

#include "bbp/error.hpp"

#include <algorithm>

namespace bbp {

namespace {

BigInt abs_int(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt shr_floor(const BigInt& x, long n) {
    BigInt r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return r;
}

BigInt div_floor(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt shl(const BigInt& x, long n) {
    BigInt r;
    mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return r;
}

std::vector<BigInt> primitive(std::vector<BigInt> c) {
    BigInt g = 0;
    for (const BigInt& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return c;
    for (BigInt& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    auto first = std::find_if(c.begin(), c.end(), [](const BigInt& x) { return x != 0; });
    if (*first < 0) {
        for (BigInt& x : c) x = -x;
    }
    return c;
}

FixReal combination(const std::vector<FixReal>& values, const std::vector<BigInt>& c) {
    FixReal sum{0, values.front().frac_bits, 0};
    for (std::size_t i = 0; i < values.size(); ++i) sum = fix_add(sum, fix_mul_int(values[i], c[i]));
    return sum;
}

}  // namespace

FixReal certify_zero(const LinearExpr& expr, long decimal_digits, unsigned threads) {
    if (decimal_digits < 1) throw DomainError("decimal_digits must be positive");
    return evaluate_expr(expr, digits_to_bits(decimal_digits) + kGuardBits, threads);
}

bool certified_zero(const FixReal& residual, long decimal_digits) {
    return fix_abs_below(residual, make_rat(1, ipow(10, static_cast<unsigned long>(decimal_digits))));
}

PslqOutcome pslq(const std::vector<FixReal>& values, const BigInt& max_norm, long prec_bits, long max_iterations) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("pslq needs at least two values");
    if (max_norm < 1) throw DomainError("max_norm must be positive");
    for (const FixReal& v : values) {
        if (v.frac_bits < prec_bits || bit_length(v.err_ulp) > v.frac_bits - prec_bits + 2) {
            throw PrecisionError("input values are less precise than prec_bits");
        }
    }
    // relations of size max_norm must stand clear of the detection threshold
    const long slack = bit_length(BigInt(static_cast<long>(n)) * max_norm) + 8;
    const long tol_bits = prec_bits - slack;
    if (tol_bits < prec_bits / 2) throw PrecisionError("precision too low for the requested max_norm");
    if (max_iterations <= 0) max_iterations = 2000 + 400 * static_cast<long>(n * n);

    const long prec = prec_bits + 60;
    const BigInt tol = pow2(prec - tol_bits);

    std::vector<BigInt> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = fix_rescale(values[i], prec).mantissa;

    PslqOutcome out;
    for (std::size_t i = 0; i < n; ++i) {
        if (abs_int(x[i]) < tol) {
            std::vector<BigInt> c(n, BigInt(0));
            c[i] = 1;
            out.relation = RelationResult{c, combination(values, c), max_norm};
            return out;
        }
    }

    const BigInt one = pow2(prec);
    const BigInt gamma = isqrt(shl(div_floor(shl(BigInt(4), prec), 3), prec));
    // 1-based indexing mirrors the usual presentation of the algorithm
    auto idx = [n](std::size_t i, std::size_t j) { return (i - 1) * n + (j - 1); };
    std::vector<BigInt> H(n * n, BigInt(0)), Bm(n * n, BigInt(0));
    for (std::size_t i = 1; i <= n; ++i) Bm[idx(i, i)] = 1;

    std::vector<BigInt> s(n + 2, BigInt(0)), y(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
        BigInt t = 0;
        for (std::size_t j = k; j <= n; ++j) t += shr_floor(x[j - 1] * x[j - 1], prec);
        s[k] = isqrt(shl(t, prec));
    }
    const BigInt t1 = s[1];
    for (std::size_t k = 1; k <= n; ++k) {
        y[k] = div_floor(shl(x[k - 1], prec), t1);
        s[k] = div_floor(shl(s[k], prec), t1);
    }
    for (std::size_t i = 1; i <= n; ++i) {
        if (i <= n - 1) H[idx(i, i)] = s[i] != 0 ? div_floor(shl(s[i + 1], prec), s[i]) : BigInt(0);
        for (std::size_t j = 1; j < i; ++j) {
            BigInt sjj = s[j] * s[j + 1];
            H[idx(i, j)] = sjj != 0 ? div_floor(shl(-y[i] * y[j], prec), sjj) : BigInt(0);
        }
    }

    // nearest integer to H[i][j] / H[j][j]
    auto quotient = [&](std::size_t i, std::size_t j) {
        BigInt q = div_floor(shl(H[idx(i, j)], prec), H[idx(j, j)]);
        return shr_floor(q + pow2(prec - 1), prec);
    };
    auto reduce = [&](std::size_t i, std::size_t j, const BigInt& t) {
        if (t == 0) return;
        y[j] += t * y[i];
        for (std::size_t k = 1; k <= j; ++k) H[idx(i, k)] -= t * H[idx(j, k)];
        for (std::size_t k = 1; k <= n; ++k) Bm[idx(k, j)] += t * Bm[idx(k, i)];
    };

    for (std::size_t i = 2; i <= n; ++i) {
        for (std::size_t j = i - 1; j >= 1; --j) {
            if (H[idx(j, j)] == 0) continue;
            reduce(i, j, quotient(i, j));
        }
    }

    std::vector<BigInt> gpow(n, BigInt(0));
    gpow[0] = one;
    for (std::size_t i = 1; i < n; ++i) gpow[i] = shr_floor(gpow[i - 1] * gamma, prec);

    for (long iter = 1; iter <= max_iterations; ++iter) {
        out.iterations = iter;
        std::size_t m = 1;
        BigInt best = -1;
        for (std::size_t i = 1; i < n; ++i) {
            BigInt sz = gpow[i] * abs_int(H[idx(i, i)]);
            if (sz > best) {
                best = sz;
                m = i;
            }
        }
        std::swap(y[m], y[m + 1]);
        for (std::size_t k = 1; k <= n; ++k) std::swap(H[idx(m, k)], H[idx(m + 1, k)]);
        for (std::size_t k = 1; k <= n; ++k) std::swap(Bm[idx(k, m)], Bm[idx(k, m + 1)]);
        if (m <= n - 2) {
            BigInt a = H[idx(m, m)], b = H[idx(m, m + 1)];
            BigInt t0 = isqrt(a * a + b * b);
            if (t0 == 0) break;
            BigInt c1 = div_floor(shl(a, prec), t0), c2 = div_floor(shl(b, prec), t0);
            for (std::size_t i = m; i <= n; ++i) {
                BigInt t3 = H[idx(i, m)], t4 = H[idx(i, m + 1)];
                H[idx(i, m)] = shr_floor(c1 * t3 + c2 * t4, prec);
                H[idx(i, m + 1)] = shr_floor(-c2 * t3 + c1 * t4, prec);
            }
        }
        for (std::size_t i = m + 1; i <= n; ++i) {
            for (std::size_t j = std::min(i - 1, m + 1); j >= 1; --j) {
                if (H[idx(j, j)] == 0) break;
                reduce(i, j, quotient(i, j));
            }
        }

        for (std::size_t i = 1; i <= n; ++i) {
            if (abs_int(y[i]) >= tol) continue;
            std::vector<BigInt> c(n);
            BigInt mx = 0;
            for (std::size_t k = 1; k <= n; ++k) {
                c[k - 1] = Bm[idx(k, i)];
                mx = std::max(mx, abs_int(c[k - 1]));
            }
            if (mx == 0 || mx > max_norm) continue;
            c = primitive(c);
            FixReal res = combination(values, c);
            if (!fix_abs_below(res, make_rat(1, pow2(prec_bits / 2)))) continue;
            out.relation = RelationResult{c, res, max_norm};
            return out;
        }

        BigInt hmax = 0;
        for (std::size_t j = 1; j < n; ++j) hmax = std::max(hmax, abs_int(H[idx(j, j)]));
        out.exclusion_bound = hmax == 0 ? BigInt(0) : div_floor(one, hmax);
        if (hmax != 0 && out.exclusion_bound > max_norm) return out;
    }
    return out;
}

RelationBasis relation_basis(const std::vector<FixReal>& values, const BigInt& max_norm, long prec_bits) {
    RelationBasis basis;
    std::vector<std::size_t> active(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) active[i] = i;
    while (active.size() >= 2) {
        std::vector<FixReal> sub;
        for (std::size_t i : active) sub.push_back(values[i]);
        PslqOutcome out = pslq(sub, max_norm, prec_bits);
        if (!out.relation) {
            basis.exclusion_bound = out.exclusion_bound;
            break;
        }
        const std::vector<BigInt>& c = out.relation->coeffs;
        std::vector<BigInt> full(values.size(), BigInt(0));
        for (std::size_t k = 0; k < active.size(); ++k) full[active[k]] = c[k];
        basis.relations.push_back(full);
        // drop the value with the smallest nonzero coefficient, preferring |c| = 1
        std::size_t pivot = active.size();
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (c[k] == 0) continue;
            if (pivot == active.size() || abs_int(c[k]) <= abs_int(c[pivot])) pivot = k;
        }
        if (abs_int(c[pivot]) != 1) basis.complete = false;
        active.erase(active.begin() + static_cast<long>(pivot));
    }
    return basis;
}

std::optional<std::vector<BigRat>> span_coordinates(const std::vector<std::vector<BigInt>>& basis,
                                                    const std::vector<BigInt>& target) {
    const std::size_t r = basis.size(), n = target.size();
    for (const auto& b : basis) {
        if (b.size() != n) throw DomainError("basis vectors and target differ in length");
    }
    // rows: coordinates; columns: basis vectors plus the target
    std::vector<std::vector<BigRat>> M(n, std::vector<BigRat>(r + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) M[i][j] = BigRat(basis[j][i]);
        M[i][r] = BigRat(target[i]);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < r && row < n; ++col) {
        std::size_t p = row;
        while (p < n && M[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(M[p], M[row]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || M[i][col] == 0) continue;
            BigRat f = M[i][col] / M[row][col];
            for (std::size_t k = col; k <= r; ++k) M[i][k] -= f * M[row][k];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i) {
        if (M[i][r] != 0) return std::nullopt;
    }
    std::vector<BigRat> coords(r, BigRat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) coords[pivot_col[i]] = M[i][r] / M[i][pivot_col[i]];
    return coords;
}

}  // namespace bbp
