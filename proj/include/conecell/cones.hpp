#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conecell/rational_lp.hpp"

namespace conecell {

using Ray = std::vector<Int>;

inline bool ray_less(const Ray& a, const Ray& b) { return a < b; }

inline bool is_zero_ray(const Ray& r) {
    return std::all_of(r.begin(), r.end(), [](const Int& v) { return v == 0; });
}

// Divide by the gcd of the coordinates; returns true when the input was
// already primitive.
inline bool make_primitive(Ray& r) {
    Int g = 0;
    for (const Int& v : r) g = gcd(g, v);
    if (g <= 1) return true;
    for (Int& v : r) v /= g;
    return false;
}

// Smooth rational polyhedral cone: primitive, linearly independent,
// basis-extendable ray generators, kept sorted in the canonical (lex) order.
struct Cone {
    std::string id;
    std::vector<Ray> rays;

    std::size_t dim() const { return rays.size(); }
    bool is_zero() const { return rays.empty(); }
};

inline std::vector<Ray> sorted_rays(std::vector<Ray> rays) {
    std::sort(rays.begin(), rays.end(), ray_less);
    return rays;
}

// Canonical total order on cones: lexicographic on the sorted ray lists.
inline bool cone_less(const Cone& a, const Cone& b) { return a.rays < b.rays; }

struct ValidationIssue {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    bool valid() const { return errors.empty(); }
};

// Finite fan in Z^rank. The zero cone is implicit: it is always a member and
// is never stored. Cones are kept sorted in canonical order.
class Fan {
  public:
    Fan() : rank_(0) {}
    explicit Fan(std::size_t rank) : rank_(rank) {}

    std::size_t rank() const { return rank_; }
    const std::vector<Cone>& cones() const { return cones_; }
    const Cone& cone(int idx) const { return cones_[static_cast<std::size_t>(idx)]; }
    std::string name;

    // Insert a cone (rays normalized, sorted). Returns its index.
    int add_cone(Cone c) {
        for (Ray& r : c.rays) {
            if (r.size() != rank_) fail("SCHEMA_ERROR", "ray dimension mismatch in " + c.id);
            if (is_zero_ray(r)) fail("SCHEMA_ERROR", "zero ray in cone " + c.id);
        }
        c.rays = sorted_rays(std::move(c.rays));
        auto pos = std::lower_bound(cones_.begin(), cones_.end(), c, cone_less);
        int idx = static_cast<int>(pos - cones_.begin());
        cones_.insert(pos, std::move(c));
        reindex();
        return idx;
    }

    int index_of_rays(const std::vector<Ray>& sorted) const {
        auto it = by_rays_.find(sorted);
        return it == by_rays_.end() ? -1 : it->second;
    }
    int index_of_id(const std::string& id) const {
        auto it = by_id_.find(id);
        return it == by_id_.end() ? -1 : it->second;
    }

    // indices of all faces present in the fan, excluding the zero cone
    std::vector<int> face_indices(int idx) const {
        const Cone& c = cone(idx);
        std::vector<int> out;
        std::size_t k = c.rays.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
            std::vector<Ray> sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::size_t(1) << i)) sub.push_back(c.rays[i]);
            int f = index_of_rays(sub);
            if (f >= 0 && f != idx) out.push_back(f);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_face_of(int small, int big) const {
        const auto& a = cone(small).rays;
        const auto& b = cone(big).rays;
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

  private:
    void reindex() {
        by_rays_.clear();
        by_id_.clear();
        for (std::size_t i = 0; i < cones_.size(); ++i) {
            if (!by_rays_.emplace(cones_[i].rays, static_cast<int>(i)).second)
                fail("SCHEMA_ERROR", "duplicate cone (same ray set): " + cones_[i].id);
            if (!by_id_.emplace(cones_[i].id, static_cast<int>(i)).second)
                fail("SCHEMA_ERROR", "duplicate cone id: " + cones_[i].id);
        }
    }

    std::size_t rank_;
    std::vector<Cone> cones_;
    std::map<std::vector<Ray>, int> by_rays_;
    std::map<std::string, int> by_id_;
};

// Distinguished subset of nonzero cones, stored as sorted cone indices.
struct ConeSubset {
    const Fan* fan = nullptr;
    std::vector<int> members;  // sorted, canonical order

    bool contains(int idx) const {
        return std::binary_search(members.begin(), members.end(), idx);
    }
};

inline ConeSubset subset_from_ids(const Fan& f, const std::vector<std::string>& ids) {
    ConeSubset s;
    s.fan = &f;
    for (const std::string& id : ids) {
        int idx = f.index_of_id(id);
        if (idx < 0) fail("UNKNOWN_CONE_ID", id);
        s.members.push_back(idx);
    }
    std::sort(s.members.begin(), s.members.end());
    s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
    return s;
}

inline ConeSubset subset_all_nonzero(const Fan& f) {
    ConeSubset s;
    s.fan = &f;
    for (std::size_t i = 0; i < f.cones().size(); ++i) s.members.push_back(static_cast<int>(i));
    return s;
}

/* fan-level checks */

inline ValidationReport validate_fan(const Fan& f) {
    ValidationReport rep;
    auto err = [&](const std::string& code, const std::string& detail) {
        rep.errors.push_back({code, detail});
    };
    for (const Cone& c : f.cones()) {
        std::vector<Ray> rays = c.rays;
        for (const Ray& r : rays) {
            Ray copy = r;
            if (!make_primitive(copy)) err("NON_PRIMITIVE_RAY", c.id);
        }
        std::set<Ray> uniq(rays.begin(), rays.end());
        if (uniq.size() != rays.size()) err("DUPLICATE_RAY", c.id);
        std::vector<std::vector<Int>> vs(rays.begin(), rays.end());
        if (!is_basis_extendable(vs)) err("NOT_SMOOTH", c.id);
    }
    // closure under faces: every nonempty ray subset must be a cone
    for (std::size_t i = 0; i < f.cones().size(); ++i) {
        const Cone& c = f.cones()[i];
        std::size_t k = c.rays.size();
        for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << k); ++mask) {
            std::vector<Ray> sub;
            for (std::size_t b = 0; b < k; ++b)
                if (mask & (std::size_t(1) << b)) sub.push_back(c.rays[b]);
            if (f.index_of_rays(sub) < 0) {
                err("MISSING_FACE", c.id);
                break;
            }
        }
    }
    if (!rep.valid()) return rep;  // geometry checks need well-formed cones
    // closure under intersections: pairwise overlap must be the common face
    for (std::size_t i = 0; i < f.cones().size(); ++i)
        for (std::size_t j = i + 1; j < f.cones().size(); ++j) {
            const Cone& a = f.cones()[i];
            const Cone& b = f.cones()[j];
            std::vector<Ray> common;
            std::set_intersection(a.rays.begin(), a.rays.end(), b.rays.begin(), b.rays.end(),
                                  std::back_inserter(common), ray_less);
            if (!common.empty() && f.index_of_rays(common) < 0) {
                err("MISSING_FACE", a.id + " ^ " + b.id);
                continue;
            }
            if (!cone_overlap_is_face(f.rank(), a.rays, b.rays, common))
                err("BAD_INTERSECTION", a.id + " ^ " + b.id);
        }
    return rep;
}

inline std::vector<int> closure_of(const Fan& f, int idx) {
    if (idx < 0 || idx >= static_cast<int>(f.cones().size()))
        fail("CONE_NOT_IN_FAN", "index out of range");
    std::vector<int> out = f.face_indices(idx);
    out.push_back(idx);
    std::sort(out.begin(), out.end());
    return out;  // zero cone is implicit and not listed
}

inline std::vector<int> codim1_faces(const Fan& f, int idx) {
    if (idx < 0 || idx >= static_cast<int>(f.cones().size()))
        fail("CONE_NOT_IN_FAN", "index out of range");
    const Cone& c = f.cone(idx);
    std::vector<int> out;
    for (std::size_t drop = 0; drop < c.rays.size(); ++drop) {
        std::vector<Ray> sub;
        for (std::size_t i = 0; i < c.rays.size(); ++i)
            if (i != drop) sub.push_back(c.rays[i]);
        if (sub.empty()) continue;  // the zero cone facet of a ray is implicit
        int fidx = f.index_of_rays(sub);
        if (fidx >= 0) out.push_back(fidx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// condition (alpha): whenever a member is a face of a fan cone, that cone is
// a member too (upward closure in the face order)
inline bool check_alpha(const ConeSubset& t) {
    const Fan& f = *t.fan;
    for (int m : t.members)
        for (std::size_t i = 0; i < f.cones().size(); ++i)
            if (f.is_face_of(m, static_cast<int>(i)) && !t.contains(static_cast<int>(i)))
                return false;
    return true;
}

// locally closed: nothing of the fan sits strictly between two members
// without being a member itself. The zero cone is a face of everything, so
// when it belongs to the set every cone below a member must be a member.
inline bool check_locally_closed(const Fan& f, const std::vector<int>& v,
                                 bool zero_in_v = false) {
    auto in = [&](int idx) { return std::binary_search(v.begin(), v.end(), idx); };
    for (std::size_t mid = 0; mid < f.cones().size(); ++mid) {
        if (in(static_cast<int>(mid))) continue;
        bool above = zero_in_v;
        for (int lo : v)
            if (f.is_face_of(lo, static_cast<int>(mid))) {
                above = true;
                break;
            }
        if (!above) continue;
        for (int hi : v)
            if (f.is_face_of(static_cast<int>(mid), hi)) return false;
    }
    return true;
}

// condition (gamma) for a finite subset: every member is a face of finitely
// many cones, trivially true. The periodic pathway has its own check.
inline bool check_gamma(const ConeSubset&) { return true; }

/* support of the subset: D = union of relative interiors */

struct SupportInfo {
    std::vector<Ray> span_basis;  // rows spanning the saturated span lattice
    std::size_t d = 0;
    bool open_in_span = false;
    bool homology_point = false;
};

namespace detail {

// linear map Z^rank -> Z^d picking coordinates in the span basis
inline std::vector<Int> span_coordinates(const std::vector<Ray>& basis, const Ray& v) {
    if (basis.empty()) return {};
    std::size_t n = v.size();
    IntMatrix bt(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) bt(i, j) = basis[j][i];
    auto x = solve_rational(bt, v);
    if (!x) fail("SHAPE_MISMATCH", "vector outside span lattice");
    std::vector<Int> out(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (denominator((*x)[i]) != 1) fail("SHAPE_MISMATCH", "non-integral span coordinate");
        out[i] = numerator((*x)[i]);
    }
    return out;
}

// quotient map Z^d -> Z^{d-k} annihilating exactly the row span of `sub`
inline IntMatrix quotient_map(std::size_t d, const std::vector<std::vector<Int>>& sub) {
    std::size_t k = sub.size();
    if (k == 0) return IntMatrix::identity(d);
    IntMatrix r = from_rows(d, sub);
    SNFResult s = snf(r);
    if (snf_rank(s) != k) fail("SHAPE_MISMATCH", "quotient by dependent rows");
    for (const Int& x : s.d)
        if (x != 1) fail("SHAPE_MISMATCH", "quotient by non-saturated sublattice");
    // y -> last d-k coordinates of y * v
    IntMatrix q(d - k, d);
    for (std::size_t i = 0; i < d - k; ++i)
        for (std::size_t j = 0; j < d; ++j) q(i, j) = s.v(j, k + i);
    return q;
}

}  // namespace detail

// Star-completeness openness criterion: every unskipped member must be
// "surrounded" - its star projects to a complete fan in the quotient of the
// span lattice by the member's ray span.
inline bool star_open_in_span(const ConeSubset& t, const std::vector<Ray>& span_basis,
                              const std::set<int>& skip = {}) {
    const Fan& f = *t.fan;
    std::size_t d = span_basis.size();
    for (int m : t.members) {
        if (skip.count(m)) continue;
        const Cone& tau = f.cone(m);
        // star of tau among members, and its maximal elements
        std::vector<int> star;
        for (int s : t.members)
            if (f.is_face_of(m, s)) star.push_back(s);
        std::vector<int> maximal;
        for (int s : star) {
            bool top = true;
            for (int s2 : star)
                if (s2 != s && f.is_face_of(s, s2)) {
                    top = false;
                    break;
                }
            if (top) maximal.push_back(s);
        }
        std::vector<std::vector<Int>> tau_span;
        for (const Ray& r : tau.rays)
            tau_span.push_back(detail::span_coordinates(span_basis, r));
        IntMatrix q = detail::quotient_map(d, tau_span);
        std::size_t qd = d - tau.dim();

        auto project = [&](const Cone& sigma) {
            std::vector<Ray> prj;
            for (const Ray& r : sigma.rays) {
                if (std::find(tau.rays.begin(), tau.rays.end(), r) != tau.rays.end()) continue;
                std::vector<Int> y = detail::span_coordinates(span_basis, r);
                Ray img(qd, Int(0));
                for (std::size_t i = 0; i < qd; ++i)
                    for (std::size_t j = 0; j < d; ++j) img[i] += q(i, j) * y[j];
                if (is_zero_ray(img)) continue;
                make_primitive(img);
                prj.push_back(std::move(img));
            }
            return sorted_rays(std::move(prj));
        };

        std::map<std::vector<Ray>, int> facet_count;
        bool ok = true;
        for (int s : maximal) {
            std::vector<Ray> prj = project(f.cone(s));
            if (prj.size() != qd || !is_basis_extendable(prj)) {
                ok = false;
                break;
            }
            for (std::size_t drop = 0; drop < prj.size(); ++drop) {
                std::vector<Ray> face;
                for (std::size_t i = 0; i < prj.size(); ++i)
                    if (i != drop) face.push_back(prj[i]);
                facet_count[face] += 1;
            }
        }
        if (!ok) return false;
        for (const auto& [face, count] : facet_count)
            if (count != 2 && qd > 0) return false;
    }
    return true;
}

inline std::vector<Ray> support_span_basis(const ConeSubset& t) {
    std::vector<std::vector<Int>> all_rays;
    for (int m : t.members)
        for (const Ray& r : t.fan->cone(m).rays) all_rays.push_back(r);
    return saturation_basis(t.fan->rank(), all_rays);
}

}  // namespace conecell
