#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "conecell/cellular.hpp"
#include "conecell/group_ring.hpp"

namespace conecell {

// A possibly infinite fan presented by orbit representatives under a
// lattice-linear group action. The representatives must cover every nonzero
// face orbit.
struct PeriodicFan {
    GroupData group;
    std::vector<Cone> reps;
    std::size_t default_radius = 3;
    std::string name;
};

namespace detail {

struct Element {
    IntMatrix mat;
    Word word;
};

// distinct group elements reachable by words of length <= radius, in BFS
// order (identity first, shortest representative word kept)
inline std::vector<Element> elements_up_to(const GroupData& g, std::size_t radius) {
    std::vector<IntMatrix> invs;
    for (const IntMatrix& m : g.generators) invs.push_back(unimodular_inverse(m));
    std::vector<Element> out;
    std::map<IntMatrix, std::size_t> seen;
    out.push_back({IntMatrix::identity(g.rank), {}});
    seen[out[0].mat] = 0;
    std::size_t frontier_begin = 0;
    for (std::size_t len = 1; len <= radius; ++len) {
        std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
                for (int dir : {1, -1}) {
                    IntMatrix m = out[i].mat * (dir > 0 ? g.generators[gi] : invs[gi]);
                    if (seen.count(m)) continue;
                    Word w = out[i].word;
                    w.push_back(dir * static_cast<int>(gi + 1));
                    seen[m] = out.size();
                    out.push_back({std::move(m), std::move(w)});
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return out;
}

inline std::vector<Ray> translate_rays(const IntMatrix& m, const std::vector<Ray>& rays) {
    std::vector<Ray> out;
    for (const Ray& r : rays) {
        Ray img(m.rows(), Int(0));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) img[i] += m(i, j) * r[j];
        out.push_back(std::move(img));
    }
    return sorted_rays(std::move(out));
}

inline std::string word_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s;
}

struct OrbitCone {
    std::vector<Ray> rays;
    int rep;
    Word word;
};

// orbit cones reachable by words of length <= radius; first (shortest) word wins
inline std::map<std::vector<Ray>, OrbitCone> orbit_cones(const PeriodicFan& pf,
                                                         std::size_t radius) {
    std::map<std::vector<Ray>, OrbitCone> out;
    for (const Element& e : elements_up_to(pf.group, radius)) {
        for (std::size_t i = 0; i < pf.reps.size(); ++i) {
            std::vector<Ray> rays = translate_rays(e.mat, pf.reps[i].rays);
            if (!out.count(rays)) out[rays] = {rays, static_cast<int>(i), e.word};
        }
    }
    return out;
}

}  // namespace detail

struct Window {
    Fan fan;
    std::vector<std::string> member_ids;         // orbit cones within the radius
    std::set<std::string> flagged;               // members with a window-truncated star
    std::map<std::string, std::pair<int, Word>> origin;  // cone id -> (rep, word)

    ConeSubset subset() const { return subset_from_ids(fan, member_ids); }
    std::set<int> flagged_indices() const {
        std::set<int> s;
        for (const std::string& id : flagged) s.insert(fan.index_of_id(id));
        return s;
    }
};

// Finite window of the periodic fan: the orbit cones within the word-length
// radius, closed under faces. Members are the orbit cones; members whose star
// is still growing at radius+1 are flagged as boundary effects.
inline Window materialize_window(const PeriodicFan& pf, std::size_t radius) {
    if (radius < 1) fail("SCHEMA_ERROR", "window radius must be >= 1");
    for (const IntMatrix& g : pf.group.generators) {
        IntMatrix inv = unimodular_inverse(g);  // throws ACTION_ESCAPES_RANK
        (void)inv;
    }
    auto orbit = detail::orbit_cones(pf, radius);
    auto orbit_next = detail::orbit_cones(pf, radius + 1);

    Window w;
    w.fan = Fan(pf.group.rank);
    w.fan.name = pf.name;
    // orbit cones with deterministic ids derived from their origin
    for (const auto& [rays, oc] : orbit) {
        Cone c;
        c.rays = rays;
        const std::string& base = pf.reps[static_cast<std::size_t>(oc.rep)].id;
        c.id = oc.word.empty() ? base : base + "@" + detail::word_string(oc.word);
        w.fan.add_cone(c);
        w.member_ids.push_back(c.id);
        w.origin[c.id] = {oc.rep, oc.word};
    }
    std::sort(w.member_ids.begin(), w.member_ids.end());
    // close under faces
    int extra = 0;
    for (;;) {
        std::vector<Cone> missing;
        std::set<std::vector<Ray>> pending;
        for (const Cone& c : w.fan.cones()) {
            std::size_t k = c.rays.size();
            for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << k); ++mask) {
                std::vector<Ray> sub;
                for (std::size_t b = 0; b < k; ++b)
                    if (mask & (std::size_t(1) << b)) sub.push_back(c.rays[b]);
                if (w.fan.index_of_rays(sub) >= 0 || pending.count(sub)) continue;
                pending.insert(sub);
                Cone f;
                f.rays = sub;
                f.id = "face" + std::to_string(extra++);
                missing.push_back(std::move(f));
            }
        }
        if (missing.empty()) break;
        for (Cone& c : missing) w.fan.add_cone(std::move(c));
    }
    // flag members whose star differs between the two radii
    for (const std::string& id : w.member_ids) {
        const Cone& tau = w.fan.cone(w.fan.index_of_id(id));
        std::set<std::vector<Ray>> star_now, star_next;
        for (const Cone& c : w.fan.cones())
            if (std::includes(c.rays.begin(), c.rays.end(), tau.rays.begin(), tau.rays.end()))
                star_now.insert(c.rays);
        for (const auto& [rays, oc] : orbit_next)
            if (std::includes(rays.begin(), rays.end(), tau.rays.begin(), tau.rays.end()))
                star_next.insert(rays);
        for (const auto& rays : star_next)
            if (!star_now.count(rays)) {
                w.flagged.insert(id);
                break;
            }
    }
    return w;
}

// Bounded freeness certificate: no nonidentity word of length <= bound maps
// any orbit cone in the window to itself.
inline bool check_freeness(const PeriodicFan& pf, std::size_t word_bound) {
    auto orbit = detail::orbit_cones(pf, pf.default_radius);
    auto elements = detail::elements_up_to(pf.group, word_bound);
    for (const auto& e : elements) {
        if (e.word.empty()) continue;
        for (const auto& [rays, oc] : orbit)
            if (detail::translate_rays(e.mat, rays) == rays) return false;
    }
    return true;
}

// Bounded local-finiteness certificate for the periodic pathway: the star of
// every representative must be identical in the radius and radius+1 windows.
inline bool check_gamma_periodic(const PeriodicFan& pf, std::size_t radius) {
    auto orbit = detail::orbit_cones(pf, radius);
    auto orbit_next = detail::orbit_cones(pf, radius + 1);
    for (const Cone& rep : pf.reps) {
        std::vector<Ray> rays = sorted_rays(rep.rays);
        std::size_t now = 0, next = 0;
        for (const auto& [r, oc] : orbit)
            if (std::includes(r.begin(), r.end(), rays.begin(), rays.end())) ++now;
        for (const auto& [r, oc] : orbit_next)
            if (std::includes(r.begin(), r.end(), rays.begin(), rays.end())) ++next;
        if (now != next) return false;
    }
    return true;
}

inline constexpr std::size_t kDefaultFreenessBound = 8;

// The orientation complex of the periodic subset as a complex of free
// ZH-modules on the orbit representatives. The differential entry from a
// representative into a cofacet records which translate of which
// representative the cofacet is, with the append-the-missing-ray sign
// composed with the orientation transport sign of the group element.
inline GroupRingComplex equivariant_cocellular(const PeriodicFan& pf,
                                               std::size_t freeness_bound = kDefaultFreenessBound) {
    if (!check_freeness(pf, freeness_bound))
        fail("FREENESS_UNCERTIFIED", "a bounded word fixes an orbit cone");
    Window win = materialize_window(pf, pf.default_radius);
    if (!check_gamma_periodic(pf, pf.default_radius))
        fail("GAMMA_VIOLATED", "representative stars keep growing with the window");

    // representatives sorted canonically per dimension; also make sure every
    // face of a representative lies in the orbit of some representative
    std::vector<int> rep_order(pf.reps.size());
    for (std::size_t i = 0; i < rep_order.size(); ++i) rep_order[i] = static_cast<int>(i);
    std::sort(rep_order.begin(), rep_order.end(), [&](int a, int b) {
        return pf.reps[static_cast<std::size_t>(a)].rays < pf.reps[static_cast<std::size_t>(b)].rays;
    });
    std::map<long, std::vector<int>> reps_by_dim;
    for (int i : rep_order)
        reps_by_dim[static_cast<long>(pf.reps[static_cast<std::size_t>(i)].dim())].push_back(i);

    for (const Cone& rep : pf.reps) {
        std::size_t k = rep.rays.size();
        std::vector<Ray> sorted = sorted_rays(rep.rays);
        for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << k); ++mask) {
            std::vector<Ray> sub;
            for (std::size_t b = 0; b < k; ++b)
                if (mask & (std::size_t(1) << b)) sub.push_back(sorted[b]);
            int idx = win.fan.index_of_rays(sub);
            if (idx < 0 || !win.origin.count(win.fan.cone(idx).id))
                fail("SCHEMA_ERROR",
                     "representatives do not cover the face orbit below " + rep.id);
        }
    }

    GroupRingComplex out;
    std::map<long, std::map<int, std::size_t>> rep_pos;
    for (const auto& [q, list] : reps_by_dim) {
        out.set_rank(q, static_cast<long>(list.size()));
        std::vector<std::string> lab;
        for (std::size_t i = 0; i < list.size(); ++i) {
            rep_pos[q][list[i]] = i;
            lab.push_back(pf.reps[static_cast<std::size_t>(list[i])].id);
        }
        out.labels[q] = std::move(lab);
    }

    auto elements = detail::elements_up_to(pf.group, pf.default_radius + 1);
    for (const auto& [q, list] : reps_by_dim) {
        auto up = reps_by_dim.find(q + 1);
        if (up == reps_by_dim.end()) continue;
        GroupRingMatrix d(up->second.size(), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            const Cone& rep = pf.reps[static_cast<std::size_t>(list[j])];
            int tau_idx = win.fan.index_of_rays(sorted_rays(rep.rays));
            if (tau_idx < 0) fail("SHAPE_MISMATCH", "representative missing from window");
            const Cone& tau = win.fan.cone(tau_idx);
            for (const Cone& eta : win.fan.cones()) {
                if (eta.dim() != tau.dim() + 1) continue;
                if (!std::includes(eta.rays.begin(), eta.rays.end(), tau.rays.begin(),
                                   tau.rays.end()))
                    continue;
                // identify eta as a translate of a representative
                int rep_i = -1;
                Word word;
                auto oit = win.origin.find(eta.id);
                if (oit != win.origin.end()) {
                    rep_i = oit->second.first;
                    word = oit->second.second;
                } else {
                    for (const auto& e : elements) {
                        for (int cand : up->second) {
                            if (detail::translate_rays(
                                    e.mat, pf.reps[static_cast<std::size_t>(cand)].rays) ==
                                eta.rays) {
                                rep_i = cand;
                                word = e.word;
                                break;
                            }
                        }
                        if (rep_i >= 0) break;
                    }
                }
                if (rep_i < 0)
                    fail("GAMMA_VIOLATED", "cofacet escapes the materialized window");
                int cell = detail::facet_sign(win.fan, tau_idx,
                                              win.fan.index_of_rays(eta.rays), nullptr);
                // orientation transport: the translate of the representative's
                // generator against the canonical generator of eta
                IntMatrix m = pf.group.evaluate(word);
                std::vector<Ray> moved;
                for (const Ray& r : pf.reps[static_cast<std::size_t>(rep_i)].rays) {
                    Ray img(m.rows(), Int(0));
                    for (std::size_t a = 0; a < m.rows(); ++a)
                        for (std::size_t b = 0; b < m.cols(); ++b) img[a] += m(a, b) * r[b];
                    moved.push_back(std::move(img));
                }
                int transport = detail::sequence_parity(moved, eta.rays);
                auto pit = rep_pos[q + 1].find(rep_i);
                if (pit == rep_pos[q + 1].end())
                    fail("SHAPE_MISMATCH", "cofacet representative has wrong dimension");
                d.at(pit->second, j).add_term(m, word, Int(cell * transport));
            }
        }
        out.set_diff(q, std::move(d));
    }
    if (!out.validate()) fail("COMPOSITION_NONZERO", "equivariant differential fails d^2 = 0");
    return out;
}

struct ConsistencyReport {
    bool match = false;
    GradedGroup invariants_side;
    GradedGroup cohomology_side;
    long d = 0;
    int orientation_character_values = 1;  // product over generators, diagnostic only
};

namespace detail {

// sign of det of the action of `g` restricted to the span lattice
inline int restricted_det_sign(const std::vector<Ray>& span_basis, const IntMatrix& g) {
    std::size_t d = span_basis.size();
    if (d == 0) return 1;
    std::vector<std::vector<Rat>> w(d, std::vector<Rat>(d));
    for (std::size_t j = 0; j < d; ++j) {
        Ray img(g.rows(), Int(0));
        for (std::size_t a = 0; a < g.rows(); ++a)
            for (std::size_t b = 0; b < g.cols(); ++b) img[a] += g(a, b) * span_basis[j][b];
        std::vector<Int> y = span_coordinates(span_basis, img);
        for (std::size_t i = 0; i < d; ++i) w[i][j] = Rat(y[i]);
    }
    int s = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t p = col;
        while (p < d && w[p][col] == 0) ++p;
        if (p == d) fail("SHAPE_MISMATCH", "action does not preserve the span lattice");
        if (p != col) {
            std::swap(w[p], w[col]);
            s = -s;
        }
        if (w[col][col] < 0) s = -s;
        for (std::size_t i = col + 1; i < d; ++i) {
            if (w[i][col] == 0) continue;
            Rat f = w[i][col] / w[col][col];
            for (std::size_t j2 = col; j2 < d; ++j2) w[i][j2] -= f * w[col][j2];
        }
    }
    return s;
}

}  // namespace detail

// Consistency check between the invariants of the equivariant orientation
// complex with coefficients in `a` and group cohomology of `a` twisted by the
// determinant character of the action on the span, shifted by the span
// dimension. Requires the window support to be open in its span with the
// homology of a point.
inline ConsistencyReport quotient_consistency_check(const PeriodicFan& pf,
                                                    const Representation& a) {
    if (!pf.group.resolution) fail("NO_RESOLUTION", "periodic fan group carries no resolution");
    validate_resolution(pf.group);
    Window win = materialize_window(pf, pf.default_radius);
    ConeSubset sub = win.subset();
    SupportInfo sup = support(sub, win.flagged_indices());
    if (!sup.open_in_span || !sup.homology_point)
        fail("HYPOTHESES_UNVERIFIED",
             "window support must be open in its span with point homology");

    GroupRingComplex eq = equivariant_cocellular(pf);
    ConsistencyReport rep;
    rep.d = static_cast<long>(sup.d);
    rep.invariants_side = homology(invariants_complex(eq, pf.group, a));

    Representation twisted = a;
    int prod = 1;
    for (std::size_t i = 0; i < pf.group.generators.size(); ++i) {
        int chi = detail::restricted_det_sign(sup.span_basis, pf.group.generators[i]);
        prod *= chi;
        if (chi < 0) twisted.matrices[i] = -twisted.matrices[i];
    }
    twisted.prepare();
    rep.orientation_character_values = prod;

    GradedGroup gc = group_cohomology(pf.group, twisted);
    for (const auto& [q, part] : gc.parts) rep.cohomology_side.set(q - rep.d, part);
    rep.match = (rep.invariants_side == rep.cohomology_side);
    return rep;
}

}  // namespace conecell
