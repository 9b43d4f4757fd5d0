#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "conecell/snf.hpp"

namespace conecell {

// A linear constraint sum_j a[j] x_j (<= | ==) b with integer data.
struct Constraint {
    std::vector<Int> a;
    Int b;
    bool equality = false;
};

namespace detail {

inline void normalize_row(std::vector<Int>& a, Int& b) {
    Int g = 0;
    for (const Int& v : a) g = gcd(g, v);
    g = gcd(g, b);
    if (g > 1) {
        for (Int& v : a) v /= g;
        b /= g;
    }
}

}  // namespace detail

// Feasibility of a system of rational linear constraints: equalities are
// removed first by exact Gaussian substitution, then the inequalities go
// through Fourier-Motzkin elimination with redundancy pruning. Problem sizes
// here are tiny, so the worst-case blowup is acceptable.
inline bool fm_feasible(std::vector<Constraint> cons, std::size_t nvars) {
    std::vector<std::pair<std::vector<Int>, Int>> eqs, rows;  // a . x = b / a . x <= b
    for (Constraint& c : cons) {
        if (c.a.size() != nvars) fail("SHAPE_MISMATCH", "constraint width");
        if (c.equality)
            eqs.push_back({std::move(c.a), std::move(c.b)});
        else
            rows.push_back({std::move(c.a), std::move(c.b)});
    }

    // substitute equalities away one pivot variable at a time
    std::vector<bool> eliminated(nvars, false);
    for (std::size_t e = 0; e < eqs.size(); ++e) {
        auto& [a, b] = eqs[e];
        std::size_t piv = nvars;
        for (std::size_t v = 0; v < nvars; ++v)
            if (!eliminated[v] && a[v] != 0) {
                piv = v;
                break;
            }
        if (piv == nvars) {
            if (b != 0) return false;  // 0 = b inconsistency
            continue;
        }
        if (a[piv] < 0) {
            for (Int& v : a) v = -v;
            b = -b;
        }
        const Int p = a[piv];
        auto substitute = [&](std::vector<Int>& ra, Int& rb) {
            const Int q = ra[piv];
            if (q == 0) return;
            for (std::size_t v = 0; v < nvars; ++v) ra[v] = p * ra[v] - q * a[v];
            rb = p * rb - q * b;
            detail::normalize_row(ra, rb);
        };
        for (std::size_t e2 = e + 1; e2 < eqs.size(); ++e2)
            substitute(eqs[e2].first, eqs[e2].second);
        for (auto& r : rows) substitute(r.first, r.second);
        eliminated[piv] = true;
    }

    for (std::size_t var = 0; var < nvars; ++var) {
        std::vector<std::pair<std::vector<Int>, Int>> pos, neg, zero;
        for (auto& r : rows) {
            int s = sgn(r.first[var]);
            if (s > 0)
                pos.push_back(std::move(r));
            else if (s < 0)
                neg.push_back(std::move(r));
            else
                zero.push_back(std::move(r));
        }
        rows = std::move(zero);
        for (const auto& p : pos)
            for (const auto& n : neg) {
                // p.a[var] > 0, n.a[var] < 0: combine to cancel the variable
                Int cp = -n.first[var], cn = p.first[var];
                std::vector<Int> a(nvars);
                for (std::size_t j = 0; j < nvars; ++j)
                    a[j] = cp * p.first[j] + cn * n.first[j];
                Int b = cp * p.second + cn * n.second;
                detail::normalize_row(a, b);
                rows.push_back({std::move(a), std::move(b)});
            }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        // drop rows implied by 0 <= b with b >= 0
        std::erase_if(rows, [](const auto& r) {
            for (const Int& v : r.first)
                if (v != 0) return false;
            return r.second >= 0;
        });
    }
    for (const auto& r : rows)
        if (r.second < 0) return false;
    return true;
}

// Membership data for a smooth simplicial cone: x lies in cone(rays) iff the
// span rows annihilate x and the coefficient rows are all nonnegative on x.
// coeff * x recovers the unique barycentric coordinates in the ray basis.
struct ConeForm {
    IntMatrix coeff;  // k x n
    IntMatrix span;   // (n-k) x n, kernel conditions
};

inline ConeForm cone_form(std::size_t rank, const std::vector<std::vector<Int>>& rays) {
    const std::size_t k = rays.size();
    // rays as columns; smoothness gives invariants all 1, so u*m*v = [I;0]
    std::vector<std::vector<Int>> cols = rays;
    IntMatrix m(rank, k);
    for (std::size_t j = 0; j < k; ++j) {
        if (rays[j].size() != rank) fail("SHAPE_MISMATCH", "ray dimension");
        for (std::size_t i = 0; i < rank; ++i) m(i, j) = rays[j][i];
    }
    SNFResult s = snf(m);
    if (snf_rank(s) != k) fail("SHAPE_MISMATCH", "rays not linearly independent");
    for (const Int& d : s.d)
        if (d != 1) fail("SHAPE_MISMATCH", "rays not basis-extendable");
    // y = u*x has lambda = v * y[0..k) and span conditions y[k..n) = 0
    ConeForm f;
    f.coeff = IntMatrix(k, rank);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < rank; ++j) {
            Int acc = 0;
            for (std::size_t t = 0; t < k; ++t) acc += s.v(i, t) * s.u(t, j);
            f.coeff(i, j) = acc;
        }
    f.span = IntMatrix(rank - k, rank);
    for (std::size_t i = k; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j) f.span(i - k, j) = s.u(i, j);
    return f;
}

inline void append_membership(std::vector<Constraint>& cons, const ConeForm& f) {
    const std::size_t n = f.coeff.cols();
    for (std::size_t i = 0; i < f.span.rows(); ++i) {
        Constraint c;
        c.a.resize(n);
        for (std::size_t j = 0; j < n; ++j) c.a[j] = f.span(i, j);
        c.b = 0;
        c.equality = true;
        cons.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < f.coeff.rows(); ++i) {
        Constraint c;  // -coeff_i . x <= 0, i.e. coeff_i . x >= 0
        c.a.resize(n);
        for (std::size_t j = 0; j < n; ++j) c.a[j] = -f.coeff(i, j);
        c.b = 0;
        cons.push_back(std::move(c));
    }
}

// Exact test that cone(rays_a) intersect cone(rays_b) equals cone(rays_common).
// Precondition: rays_common is a subset of both ray sets. On cone(rays_a) the
// sum u of the barycentric coordinates away from the common rays vanishes
// exactly on cone(rays_common), so the meet equals the common face iff
// u = 1 is infeasible on the intersection. The empty common face is the same
// statement with u the full coordinate sum.
inline bool cone_overlap_is_face(std::size_t rank, const std::vector<std::vector<Int>>& rays_a,
                                 const std::vector<std::vector<Int>>& rays_b,
                                 const std::vector<std::vector<Int>>& rays_common) {
    for (const auto& r : rays_common) {
        if (std::find(rays_a.begin(), rays_a.end(), r) == rays_a.end() ||
            std::find(rays_b.begin(), rays_b.end(), r) == rays_b.end())
            fail("SHAPE_MISMATCH", "common rays must occur in both cones");
    }
    ConeForm fa = cone_form(rank, rays_a);
    ConeForm fb = cone_form(rank, rays_b);

    std::vector<Constraint> cons;
    append_membership(cons, fa);
    append_membership(cons, fb);

    Constraint u;
    u.a.assign(rank, Int(0));
    u.b = 1;
    u.equality = true;
    for (std::size_t i = 0; i < rays_a.size(); ++i) {
        if (std::find(rays_common.begin(), rays_common.end(), rays_a[i]) != rays_common.end())
            continue;
        for (std::size_t j = 0; j < rank; ++j) u.a[j] += fa.coeff(i, j);
    }
    cons.push_back(std::move(u));
    return !fm_feasible(cons, rank);
}

// Barycentric coordinates of x in the ray basis, or nullopt when x is outside
// the linear span of the cone.
inline std::optional<std::vector<Rat>> cone_coordinates(std::size_t rank,
                                                        const std::vector<std::vector<Int>>& rays,
                                                        const std::vector<Rat>& x) {
    ConeForm f = cone_form(rank, rays);
    for (std::size_t i = 0; i < f.span.rows(); ++i) {
        Rat acc = 0;
        for (std::size_t j = 0; j < rank; ++j) acc += Rat(f.span(i, j)) * x[j];
        if (acc != 0) return std::nullopt;
    }
    std::vector<Rat> lambda(rays.size(), Rat(0));
    for (std::size_t i = 0; i < rays.size(); ++i)
        for (std::size_t j = 0; j < rank; ++j) lambda[i] += Rat(f.coeff(i, j)) * x[j];
    return lambda;
}

inline bool in_relative_interior(std::size_t rank, const std::vector<std::vector<Int>>& rays,
                                 const std::vector<Rat>& x) {
    if (rays.empty()) {
        for (const Rat& v : x)
            if (v != 0) return false;
        return true;
    }
    auto lambda = cone_coordinates(rank, rays, x);
    if (!lambda) return false;
    for (const Rat& l : *lambda)
        if (l <= 0) return false;
    return true;
}

}  // namespace conecell
