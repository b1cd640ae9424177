#pragma once

#include "mtower/matrix.hpp"

#include <optional>

namespace mtower {

/// Smith normal form d = u * m * v over Z, with u, v unimodular and the
/// diagonal of d a divisibility chain d1 | d2 | ... Pivoting is by smallest
/// absolute value, ties broken by lowest (row, col), so the output is
/// deterministic for a fixed input.
struct SmithForm {
    ExactMatrix u, uinv, d, v, vinv;
    int rank = 0;

    std::vector<mpz_class> diagonal() const {
        int n = std::min(d.rows(), d.cols());
        std::vector<mpz_class> out(n);
        for (int i = 0; i < n; ++i) out[i] = d.at(i, i);
        return out;
    }
};

namespace detail {

inline void row_add(ExactMatrix& m, int dst, int src, const mpz_class& q) {
    for (int j = 0; j < m.cols(); ++j) m.at(dst, j) += q * m.at(src, j);
}
inline void col_add(ExactMatrix& m, int dst, int src, const mpz_class& q) {
    for (int i = 0; i < m.rows(); ++i) m.at(i, dst) += q * m.at(i, src);
}
inline void row_swap(ExactMatrix& m, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}
inline void col_swap(ExactMatrix& m, int a, int b) {
    if (a == b) return;
    for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}
inline void row_negate(ExactMatrix& m, int r) {
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
}
inline void col_negate(ExactMatrix& m, int c) {
    for (int i = 0; i < m.rows(); ++i) m.at(i, c) = -m.at(i, c);
}

} // namespace detail

/// Integer SNF of the entries of m (the ring tag is ignored; callers lift
/// Z/m inputs themselves, see smith_normal_form below).
inline SmithForm smith(const ExactMatrix& m0) {
    using namespace detail;
    const RingSpec Z = RingSpec::integers();
    int R = m0.rows(), C = m0.cols();
    SmithForm s;
    s.d = m0.with_ring(Z);
    s.u = ExactMatrix::identity(Z, R);
    s.uinv = ExactMatrix::identity(Z, R);
    s.v = ExactMatrix::identity(Z, C);
    s.vinv = ExactMatrix::identity(Z, C);
    ExactMatrix& d = s.d;

    auto apply_row = [&](int dst, int src, const mpz_class& q) {
        row_add(d, dst, src, q);
        row_add(s.u, dst, src, q);
        col_add(s.uinv, src, dst, -q);
    };
    auto apply_col = [&](int dst, int src, const mpz_class& q) {
        col_add(d, dst, src, q);
        col_add(s.v, dst, src, q);
        row_add(s.vinv, src, dst, -q);
    };

    int t = 0;
    int lim = std::min(R, C);
    while (t < lim) {
        // smallest-|pivot| in the trailing block, ties by (row, col)
        int pr = -1, pc = -1;
        mpz_class best;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j) {
                if (d.at(i, j) == 0) continue;
                mpz_class a = abs(d.at(i, j));
                if (pr < 0 || a < best) { best = a; pr = i; pc = j; }
            }
        if (pr < 0) break;
        row_swap(d, t, pr); row_swap(s.u, t, pr); col_swap(s.uinv, t, pr);
        col_swap(d, t, pc); col_swap(s.v, t, pc); row_swap(s.vinv, t, pc);

        bool clean = true;
        for (int i = t + 1; i < R; ++i) {
            if (d.at(i, t) == 0) continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
            apply_row(i, t, -q);
            if (d.at(i, t) != 0) clean = false;
        }
        if (!clean) continue; // pivot shrank; re-select
        for (int j = t + 1; j < C; ++j) {
            if (d.at(t, j) == 0) continue;
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
            apply_col(j, t, -q);
            if (d.at(t, j) != 0) clean = false;
        }
        if (!clean) continue;

        // enforce divisibility of the trailing block by the pivot
        bool divisible = true;
        for (int i = t + 1; i < R && divisible; ++i)
            for (int j = t + 1; j < C; ++j)
                if (!mpz_divisible_p(d.at(i, j).get_mpz_t(), d.at(t, t).get_mpz_t())) {
                    apply_row(t, i, 1);
                    divisible = false;
                    break;
                }
        if (!divisible) continue;

        if (d.at(t, t) < 0) {
            row_negate(d, t); row_negate(s.u, t); col_negate(s.uinv, t);
        }
        ++t;
    }
    s.rank = t;
    return s;
}

/// The exactalg operation: d = u * m * v over the matrix's ring, u and v
/// invertible over the ring. Over Z/m the computation runs on the integer
/// lift and the factors are reduced afterwards; unimodular-over-Z transforms
/// stay invertible mod m, and divisibility of the chain descends.
inline SmithForm smith_normal_form(const ExactMatrix& m) {
    SmithForm s = smith(m);
    if (m.ring().is_mod()) {
        const RingSpec& rg = m.ring();
        s.u = s.u.with_ring(rg);
        s.uinv = s.uinv.with_ring(rg);
        s.d = s.d.with_ring(rg);
        s.v = s.v.with_ring(rg);
        s.vinv = s.vinv.with_ring(rg);
    }
    return s;
}

/// Basis of the integer kernel lattice {x : m x = 0 over Z}.
inline ExactMatrix integer_kernel_basis(const ExactMatrix& m) {
    SmithForm s = smith(m);
    int C = m.cols();
    int k = C - s.rank;
    ExactMatrix out(RingSpec::integers(), C, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < C; ++i) out.at(i, j) = s.v.at(i, s.rank + j);
    return out;
}

/// Particular integer solution of m x = b (columnwise), if any.
inline std::optional<ExactMatrix> integer_solve(const ExactMatrix& m, const ExactMatrix& b) {
    if (m.rows() != b.rows()) throw ring_error("solve: row mismatch");
    SmithForm s = smith(m);
    ExactMatrix y = s.u * b.with_ring(RingSpec::integers());
    ExactMatrix x(RingSpec::integers(), m.cols(), b.cols());
    for (int col = 0; col < b.cols(); ++col) {
        for (int i = 0; i < m.rows(); ++i) {
            if (i < s.rank) {
                if (!mpz_divisible_p(y.at(i, col).get_mpz_t(), s.d.at(i, i).get_mpz_t()))
                    return std::nullopt;
                mpz_class q;
                mpz_divexact(q.get_mpz_t(), y.at(i, col).get_mpz_t(), s.d.at(i, i).get_mpz_t());
                x.at(i, col) = q;
            } else if (y.at(i, col) != 0) {
                return std::nullopt;
            }
        }
    }
    return s.v * x;
}

namespace detail {

/// Integer lift of a matrix, augmented with m * I when the ring is Z/m.
/// Column spans of the result over Z model the ring-linear span.
inline ExactMatrix span_lift(const ExactMatrix& m) {
    ExactMatrix z = m.with_ring(RingSpec::integers());
    if (m.ring().is_integers()) return z;
    ExactMatrix mi = ExactMatrix::identity(RingSpec::integers(), m.rows()).scaled(m.ring().modulus());
    return ExactMatrix::hcat(z, mi);
}

} // namespace detail

/// Generating set of {x : m x = 0 over the ring of m}. Over Z/m this is
/// read off the integer SNF of the plain lift: with d = u m v, the kernel
/// lattice is spanned by v * diag(mod / gcd(d_i, mod)).
inline ExactMatrix kernel_gens(const ExactMatrix& m) {
    if (m.ring().is_integers()) return integer_kernel_basis(m);
    const mpz_class& mod = m.ring().modulus();
    SmithForm s = smith(m);
    int C = m.cols();
    ExactMatrix out(m.ring(), C, C);
    for (int j = 0; j < C; ++j) {
        mpz_class d = (j < s.rank) ? s.d.at(j, j) : mpz_class(0);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
        mpz_class scale;
        mpz_divexact(scale.get_mpz_t(), mod.get_mpz_t(), g.get_mpz_t());
        for (int i = 0; i < C; ++i) out.at(i, j) = m.ring().reduce(scale * s.v.at(i, j));
    }
    return out;
}

/// Particular solution of m x = b over the ring of m, columnwise. Over Z/m
/// each diagonal row of the SNF becomes a one-variable congruence.
inline std::optional<ExactMatrix> solve(const ExactMatrix& m, const ExactMatrix& b) {
    require_same_ring(m.ring(), b.ring(), "solve");
    if (m.ring().is_integers()) return integer_solve(m, b);
    const mpz_class& mod = m.ring().modulus();
    SmithForm s = smith(m);
    ExactMatrix y = s.u * b.with_ring(RingSpec::integers());
    ExactMatrix xs(RingSpec::integers(), m.cols(), b.cols());
    for (int col = 0; col < b.cols(); ++col) {
        for (int i = 0; i < m.rows(); ++i) {
            mpz_class d = (i < s.rank && i < m.cols()) ? s.d.at(i, i) : mpz_class(0);
            mpz_class c;
            mpz_fdiv_r(c.get_mpz_t(), y.at(i, col).get_mpz_t(), mod.get_mpz_t());
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t()); // gcd(0, mod) = mod
            if (!mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
            if (i < s.rank && i < m.cols()) {
                mpz_class mp, dp, cp, inv;
                mpz_divexact(mp.get_mpz_t(), mod.get_mpz_t(), g.get_mpz_t());
                mpz_divexact(dp.get_mpz_t(), d.get_mpz_t(), g.get_mpz_t());
                mpz_divexact(cp.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
                if (mp == 1) {
                    xs.at(i, col) = 0;
                } else {
                    if (mpz_invert(inv.get_mpz_t(), dp.get_mpz_t(), mp.get_mpz_t()) == 0)
                        throw ring_error("solve: inverse must exist after dividing by the gcd");
                    mpz_class val = cp * inv;
                    mpz_fdiv_r(val.get_mpz_t(), val.get_mpz_t(), mp.get_mpz_t());
                    xs.at(i, col) = val;
                }
            }
        }
    }
    ExactMatrix x = s.v * xs;
    ExactMatrix out(m.ring(), m.cols(), b.cols());
    for (int j = 0; j < b.cols(); ++j)
        for (int i = 0; i < m.cols(); ++i) out.at(i, j) = m.ring().reduce(x.at(i, j));
    return out;
}

/// Generating set of the preimage {x : m x lies in the column span of n}.
inline ExactMatrix preimage_gens(const ExactMatrix& m, const ExactMatrix& n) {
    require_same_ring(m.ring(), n.ring(), "preimage_gens");
    if (m.rows() != n.rows()) throw ring_error("preimage_gens: row mismatch");
    ExactMatrix k = kernel_gens(ExactMatrix::hcat(m, -n));
    ExactMatrix out(m.ring(), m.cols(), k.cols());
    for (int j = 0; j < k.cols(); ++j)
        for (int i = 0; i < m.cols(); ++i) out.at(i, j) = m.ring().reduce(k.at(i, j));
    return out;
}

} // namespace mtower
