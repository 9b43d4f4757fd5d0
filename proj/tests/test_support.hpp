#pragma once

// Shared helpers for the test suites: a seeded random smooth fan generator,
// random upward-closed subsets, random cell orders, and a homology-level
// oracle for induced isomorphisms.

#include <random>

#include "conecell/cellular.hpp"

namespace conecell_test {

using namespace conecell;

inline Ray random_primitive_ray(std::mt19937_64& rng, std::size_t rank) {
    std::uniform_int_distribution<int> coord(-2, 2);
    for (;;) {
        Ray r(rank);
        bool zero = true;
        for (std::size_t i = 0; i < rank; ++i) {
            r[i] = coord(rng);
            if (r[i] != 0) zero = false;
        }
        if (zero) continue;
        make_primitive(r);
        return r;
    }
}

// Random smooth fan: repeatedly extend an existing cone by a fresh ray when
// the result is smooth and meets every present cone in a common face. Star
// sizes are capped to keep the downstream double complexes small.
inline Fan random_smooth_fan(std::mt19937_64& rng, std::size_t max_rank = 4,
                             std::size_t max_cones = 40) {
    std::uniform_int_distribution<std::size_t> rank_dist(1, max_rank);
    std::size_t n = rank_dist(rng);
    Fan fan(n);
    int next_id = 0;
    auto fresh_id = [&]() { return "c" + std::to_string(next_id++); };

    auto ray_load = [&](const Ray& r) {
        std::size_t cnt = 0;
        for (const Cone& c : fan.cones())
            if (std::find(c.rays.begin(), c.rays.end(), r) != c.rays.end()) ++cnt;
        return cnt;
    };

    std::uniform_int_distribution<int> attempts_dist(3, 12);
    int attempts = attempts_dist(rng);
    for (int a = 0; a < attempts && fan.cones().size() < max_cones; ++a) {
        std::vector<Ray> base;
        if (!fan.cones().empty() && rng() % 2 == 0) {
            const Cone& b = fan.cone(static_cast<int>(rng() % fan.cones().size()));
            if (b.dim() < n) base = b.rays;
        }
        Ray r = random_primitive_ray(rng, n);
        if (std::find(base.begin(), base.end(), r) != base.end()) continue;
        std::vector<Ray> rays = base;
        rays.push_back(r);
        if (!is_basis_extendable(rays)) continue;
        std::vector<Ray> sorted = sorted_rays(rays);
        if (fan.index_of_rays(sorted) >= 0) continue;
        if (ray_load(r) >= 5) continue;
        // compatibility with maximal cones is enough: meets with their faces
        // are then faces automatically
        bool compatible = true;
        for (const Cone& e : fan.cones()) {
            bool is_max = true;
            for (const Cone& e2 : fan.cones())
                if (e2.rays.size() > e.rays.size() &&
                    std::includes(e2.rays.begin(), e2.rays.end(), e.rays.begin(),
                                  e.rays.end())) {
                    is_max = false;
                    break;
                }
            if (!is_max) continue;
            std::vector<Ray> common;
            std::set_intersection(sorted.begin(), sorted.end(), e.rays.begin(), e.rays.end(),
                                  std::back_inserter(common), ray_less);
            if (common.size() == sorted.size() || common.size() == e.rays.size()) continue;
            if (!cone_overlap_is_face(n, sorted, e.rays, common)) {
                compatible = false;
                break;
            }
        }
        if (!compatible) continue;
        // add the new cone and every missing face
        std::size_t k = sorted.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
            std::vector<Ray> sub;
            for (std::size_t b = 0; b < k; ++b)
                if (mask & (std::size_t(1) << b)) sub.push_back(sorted[b]);
            if (fan.index_of_rays(sub) < 0) {
                Cone c;
                c.id = fresh_id();
                c.rays = sub;
                fan.add_cone(std::move(c));
            }
        }
    }
    if (fan.cones().empty()) {
        Cone c;
        c.id = fresh_id();
        c.rays = {random_primitive_ray(rng, n)};
        fan.add_cone(std::move(c));
    }
    return fan;
}

// nonempty upward-closed subset of the nonzero cones
inline ConeSubset random_upward_closed(const Fan& fan, std::mt19937_64& rng) {
    std::set<int> seeds;
    seeds.insert(static_cast<int>(rng() % fan.cones().size()));
    for (std::size_t i = 0; i < fan.cones().size(); ++i)
        if (rng() % 3 == 0) seeds.insert(static_cast<int>(i));
    std::set<int> members = seeds;
    for (int m : seeds)
        for (std::size_t i = 0; i < fan.cones().size(); ++i)
            if (fan.is_face_of(m, static_cast<int>(i))) members.insert(static_cast<int>(i));
    ConeSubset t;
    t.fan = &fan;
    t.members.assign(members.begin(), members.end());
    return t;
}

inline CellOrder random_cell_order(const Fan& fan, std::mt19937_64& rng) {
    CellOrder ord;
    for (const Cone& c : fan.cones()) {
        std::vector<int> perm(c.rays.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        std::shuffle(perm.begin(), perm.end(), rng);
        ord.ray_perm[c.id] = perm;
        ord.cone_priority[c.id] = static_cast<int>(rng() % 1000);
    }
    return ord;
}

/* homology-level oracle, independent of the mapping cone route */

// columns of `cols` as a sublattice; equality via Hermite-style canonical SNF
inline bool same_column_lattice(const IntMatrix& a, const IntMatrix& b) {
    // lattice(a) <= lattice(b) iff every column of a solves over b integrally
    auto contained = [](const IntMatrix& x, const IntMatrix& y) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            auto s = solve_rational(y, x.col(j));
            if (!s) return false;
            for (const Rat& v : *s)
                if (denominator(v) != 1) return false;
        }
        return true;
    };
    return contained(a, b) && contained(b, a);
}

// Does the chain map f induce an isomorphism on homology in every degree?
// Computed directly from kernel lattices and image lattices.
inline bool induces_homology_iso(const ChainMap& f) {
    std::set<long> degs;
    for (const auto& [q, r] : f.source.ranks) degs.insert(q);
    for (const auto& [q, r] : f.target.ranks) degs.insert(q);
    for (long q : degs) {
        IntMatrix ks = kernel_basis(f.source.diff_at(q));
        IntMatrix kt = kernel_basis(f.target.diff_at(q));
        IntMatrix im_s = f.source.diff_at(q - 1);
        IntMatrix im_t = f.target.diff_at(q - 1);
        // f maps kernels to kernels; express in the target kernel basis
        IntMatrix fk = f.part_at(q) * ks;
        IntMatrix y(kt.cols(), fk.cols());
        for (std::size_t j = 0; j < fk.cols(); ++j) {
            auto s = solve_rational(kt, fk.col(j));
            if (!s) return false;
            for (std::size_t i = 0; i < kt.cols(); ++i) {
                if (denominator((*s)[i]) != 1) return false;
                y(i, j) = numerator((*s)[i]);
            }
        }
        IntMatrix zt(kt.cols(), im_t.cols());  // image of target diff in kernel coords
        for (std::size_t j = 0; j < im_t.cols(); ++j) {
            auto s = solve_rational(kt, im_t.col(j));
            if (!s) return false;
            for (std::size_t i = 0; i < kt.cols(); ++i) {
                if (denominator((*s)[i]) != 1) return false;
                zt(i, j) = numerator((*s)[i]);
            }
        }
        // surjectivity of H(f): columns of [y | zt] must span Z^{kt.cols()}
        IntMatrix joint(kt.cols(), y.cols() + zt.cols());
        for (std::size_t i = 0; i < kt.cols(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) joint(i, j) = y(i, j);
            for (std::size_t j = 0; j < zt.cols(); ++j) joint(i, y.cols() + j) = zt(i, j);
        }
        SNFResult s = snf(joint);
        if (snf_rank(s) != kt.cols()) return false;
        for (const Int& d : s.d)
            if (d != 0 && d != 1) return false;
        // injectivity: x in ker(source diff) with f(x) in im(target diff)
        // must lie in im(source diff); compute the preimage lattice
        IntMatrix stack(kt.cols(), y.cols() + zt.cols());
        for (std::size_t i = 0; i < kt.cols(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) stack(i, j) = y(i, j);
            for (std::size_t j = 0; j < zt.cols(); ++j) stack(i, y.cols() + j) = -zt(i, j);
        }
        IntMatrix ker = kernel_basis(stack);
        // source-kernel part of the solutions, in ambient source coordinates
        IntMatrix pre(ks.rows(), ker.cols());
        for (std::size_t j = 0; j < ker.cols(); ++j)
            for (std::size_t i = 0; i < ks.rows(); ++i) {
                Int acc = 0;
                for (std::size_t k2 = 0; k2 < y.cols(); ++k2) acc += ks(i, k2) * ker(k2, j);
                pre(i, j) = acc;
            }
        // pre + im_s must equal ker-preimage of im; compare with im_s extended
        IntMatrix lhs(ks.rows(), pre.cols() + im_s.cols());
        for (std::size_t i = 0; i < ks.rows(); ++i) {
            for (std::size_t j = 0; j < pre.cols(); ++j) lhs(i, j) = pre(i, j);
            for (std::size_t j = 0; j < im_s.cols(); ++j) lhs(i, pre.cols() + j) = im_s(i, j);
        }
        if (!same_column_lattice(lhs, im_s)) return false;
    }
    return true;
}

}  // namespace conecell_test
