#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "conecell/int_matrix.hpp"

namespace conecell {

// u * m * v = diag(d) padded with zeros; u, v unimodular; each nonzero d[i]
// divides d[i+1]; d has length min(rows, cols), zeros included.
struct SNFResult {
    std::vector<Int> d;
    IntMatrix u, v;
};

// Pivot choice: minimal absolute value among nonzero entries of the working
// block, ties broken row-major. Keeps entry growth down and the result
// deterministic.
inline SNFResult snf(const IntMatrix& input) {
    IntMatrix a = input;
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix u = IntMatrix::identity(m);
    IntMatrix v = IntMatrix::identity(n);
    const std::size_t steps = std::min(m, n);

    for (std::size_t k = 0; k < steps; ++k) {
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> piv;
            Int best;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    const Int& x = a(i, j);
                    if (x == 0) continue;
                    Int ax = abs(x);
                    if (!piv || ax < best) {
                        piv = {i, j};
                        best = ax;
                    }
                }
            if (!piv) goto done;  // block is zero; remaining diagonal stays 0
            a.swap_rows(k, piv->first);
            u.swap_rows(k, piv->first);
            a.swap_cols(k, piv->second);
            v.swap_cols(k, piv->second);

            bool clean = true;
            for (std::size_t i = k + 1; i < m; ++i) {
                if (a(i, k) == 0) continue;
                Int q = a(i, k) / a(k, k);
                if (q != 0) {
                    a.add_row(i, k, -q);
                    u.add_row(i, k, -q);
                }
                if (a(i, k) != 0) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (a(k, j) == 0) continue;
                Int q = a(k, j) / a(k, k);
                if (q != 0) {
                    a.add_col(j, k, -q);
                    v.add_col(j, k, -q);
                }
                if (a(k, j) != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility repair: pull a non-multiple into the pivot row
            std::optional<std::size_t> badrow;
            for (std::size_t i = k + 1; i < m && !badrow; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (a(i, j) % a(k, k) != 0) {
                        badrow = i;
                        break;
                    }
            if (!badrow) break;
            a.add_row(k, *badrow, 1);
            u.add_row(k, *badrow, 1);
        }
        if (a(k, k) < 0) {
            a.negate_row(k);
            u.negate_row(k);
        }
    }
done:
    SNFResult r;
    r.d.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) r.d[k] = a(k, k);
    r.u = std::move(u);
    r.v = std::move(v);
    return r;
}

inline std::size_t snf_rank(const SNFResult& s) {
    std::size_t r = 0;
    for (const Int& x : s.d)
        if (x != 0) ++r;
    return r;
}

// One graded piece: free rank plus invariant torsion factors (each > 1,
// successively dividing).
struct GroupAtDegree {
    long rank = 0;
    std::vector<Int> torsion;
    bool operator==(const GroupAtDegree& o) const {
        return rank == o.rank && torsion == o.torsion;
    }
    bool trivial() const { return rank == 0 && torsion.empty(); }
};

struct GradedGroup {
    std::map<long, GroupAtDegree> parts;

    void set(long degree, GroupAtDegree g) {
        if (!g.trivial()) parts[degree] = std::move(g);
    }
    GroupAtDegree at(long degree) const {
        auto it = parts.find(degree);
        return it == parts.end() ? GroupAtDegree{} : it->second;
    }
    bool operator==(const GradedGroup& o) const { return parts == o.parts; }
    bool operator!=(const GradedGroup& o) const { return !(*this == o); }
};

// Integral basis of ker(a) as columns; the basis spans a saturated sublattice.
inline IntMatrix kernel_basis(const IntMatrix& a) {
    SNFResult s = snf(a);
    std::size_t r = snf_rank(s);
    IntMatrix k(a.cols(), a.cols() - r);
    for (std::size_t j = r; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) k(i, j - r) = s.v(i, j);
    return k;
}

// Solve a * x = b exactly over the rationals; nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_rational(const IntMatrix& a,
                                                      const std::vector<Int>& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m) fail("SHAPE_MISMATCH", "solve rhs length");
    std::vector<std::vector<Rat>> w(m, std::vector<Rat>(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = Rat(a(i, j));
        w[i][n] = Rat(b[i]);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t p = row;
        while (p < m && w[p][col] == 0) ++p;
        if (p == m) continue;
        std::swap(w[p], w[row]);
        Rat inv = w[row][col];
        for (std::size_t j = col; j <= n; ++j) w[row][j] /= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || w[i][col] == 0) continue;
            Rat f = w[i][col];
            for (std::size_t j = col; j <= n; ++j) w[i][j] -= f * w[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < m; ++i)
        if (w[i][n] != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = w[i][n];
    return x;
}

inline std::size_t rational_rank(const IntMatrix& a) { return snf_rank(snf(a)); }

// ker(d_out)/im(d_in) at the middle module. d_in maps into the middle module
// (rows = middle rank), d_out maps out of it (cols = middle rank).
inline GroupAtDegree homology_step(const IntMatrix& d_in, const IntMatrix& d_out) {
    if (d_in.rows() != d_out.cols())
        fail("SHAPE_MISMATCH", "middle rank disagrees between d_in and d_out");
    if (!(d_out * d_in).is_zero()) fail("COMPOSITION_NONZERO", "d_out * d_in != 0");

    IntMatrix k = kernel_basis(d_out);  // middle x kdim, saturated
    const std::size_t kdim = k.cols();

    // express each column of d_in in the kernel basis; entries are integral
    // because the kernel lattice is saturated
    IntMatrix y(kdim, d_in.cols());
    for (std::size_t j = 0; j < d_in.cols(); ++j) {
        auto x = solve_rational(k, d_in.col(j));
        if (!x) fail("COMPOSITION_NONZERO", "image not inside kernel");
        for (std::size_t i = 0; i < kdim; ++i) {
            if (denominator((*x)[i]) != 1) fail("COMPOSITION_NONZERO", "non-integral lift");
            y(i, j) = numerator((*x)[i]);
        }
    }

    SNFResult s = snf(y);
    GroupAtDegree g;
    std::size_t r = snf_rank(s);
    g.rank = static_cast<long>(kdim - r);
    for (const Int& x : s.d)
        if (x > 1) g.torsion.push_back(x);
    return g;
}

// True iff the vectors are linearly independent and extend to a Z-basis of
// the ambient lattice (all Smith invariants equal 1).
inline bool is_basis_extendable(const std::vector<std::vector<Int>>& vectors) {
    if (vectors.empty()) return true;
    IntMatrix m = from_rows(vectors.front().size(), vectors);
    SNFResult s = snf(m);
    if (snf_rank(s) != vectors.size()) return false;
    for (const Int& x : s.d)
        if (x != 0 && x != 1) return false;
    return true;
}

// Basis (as rows) of the saturation of the row span inside Z^width.
inline std::vector<std::vector<Int>> saturation_basis(std::size_t width,
                                                      const std::vector<std::vector<Int>>& rows) {
    if (rows.empty()) return {};
    IntMatrix m = from_rows(width, rows);
    SNFResult s = snf(m);
    std::size_t r = snf_rank(s);
    // row span of m equals row span of diag(d) * v^{-1}; saturation is spanned
    // by the first r rows of v^{-1}, recovered by inverting v exactly
    IntMatrix vt = s.v.transpose();
    std::vector<std::vector<Int>> basis;
    IntMatrix id = IntMatrix::identity(s.v.rows());
    for (std::size_t i = 0; i < r; ++i) {
        auto x = solve_rational(vt, id.col(i));  // v^T x = e_i  =>  x = row i of v^{-1}
        if (!x) fail("SHAPE_MISMATCH", "unimodular inverse failed");
        std::vector<Int> rowv(s.v.rows());
        for (std::size_t j = 0; j < rowv.size(); ++j) {
            if (denominator((*x)[j]) != 1) fail("SHAPE_MISMATCH", "non-integral inverse");
            rowv[j] = numerator((*x)[j]);
        }
        basis.push_back(std::move(rowv));
    }
    return basis;
}

}  // namespace conecell
