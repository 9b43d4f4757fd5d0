#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conecell/chain_complex.hpp"
#include "conecell/cones.hpp"

namespace conecell {

// Optional non-canonical orders for the orientation modules and the bases.
// The defaults are the canonical ones: rays sorted lex, cones in fan order.
struct CellOrder {
    std::map<std::string, std::vector<int>> ray_perm;  // cone id -> permutation
    std::map<std::string, int> cone_priority;          // id -> sort priority (default 0)
};

namespace detail {

inline std::vector<Ray> ray_order(const Fan& f, int idx, const CellOrder* ord) {
    const Cone& c = f.cone(idx);
    if (!ord) return c.rays;
    auto it = ord->ray_perm.find(c.id);
    if (it == ord->ray_perm.end()) return c.rays;
    std::vector<Ray> out;
    out.reserve(c.rays.size());
    for (int i : it->second) out.push_back(c.rays[static_cast<std::size_t>(i)]);
    return out;
}

inline bool cone_before(const Fan& f, int a, int b, const CellOrder* ord) {
    if (ord) {
        auto pa = ord->cone_priority.find(f.cone(a).id);
        auto pb = ord->cone_priority.find(f.cone(b).id);
        int qa = pa == ord->cone_priority.end() ? 0 : pa->second;
        int qb = pb == ord->cone_priority.end() ? 0 : pb->second;
        if (qa != qb) return qa < qb;
    }
    return a < b;
}

// parity of the permutation taking seq to target (both sequences of the same
// distinct rays); +1 / -1
inline int sequence_parity(const std::vector<Ray>& seq, const std::vector<Ray>& target) {
    std::vector<int> pos(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        auto it = std::find(target.begin(), target.end(), seq[i]);
        if (it == target.end()) fail("SHAPE_MISMATCH", "sequences differ as sets");
        pos[i] = static_cast<int>(it - target.begin());
    }
    int inv = 0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (pos[i] > pos[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

// sign of the differential component Z(tau) -> Z(eta) for tau a facet of eta:
// append the one missing ray to tau's generator and compare against eta's
inline int facet_sign(const Fan& f, int tau, int eta, const CellOrder* ord) {
    std::vector<Ray> seq = ray_order(f, tau, ord);
    const Cone& e = f.cone(eta);
    const Cone& t = f.cone(tau);
    for (const Ray& r : e.rays)
        if (std::find(t.rays.begin(), t.rays.end(), r) == t.rays.end()) {
            seq.push_back(r);
            break;
        }
    return sequence_parity(seq, ray_order(f, eta, ord));
}

// sign of the iso Z(eta) -> Z(tau) appending all missing rays in the fixed
// (canonical ascending) order
inline int append_all_sign(const Fan& f, int eta, int tau, const CellOrder* ord) {
    std::vector<Ray> seq = ray_order(f, eta, ord);
    const Cone& e = f.cone(eta);
    const Cone& t = f.cone(tau);
    std::vector<Ray> tau_rays = ray_order(f, tau, ord);
    for (const Ray& r : tau_rays)
        if (std::find(e.rays.begin(), e.rays.end(), r) == e.rays.end()) seq.push_back(r);
    return sequence_parity(seq, tau_rays);
}

}  // namespace detail

// The complex of orientation modules of a cone set, one rank-one summand per
// cone, placed at cohomological degree = dimension. The differential
// component into each cofacet appends the missing ray and records the
// permutation sign.
struct CoCellular {
    ChainComplex cx;
    // degree -> member cone indices in basis order
    std::map<long, std::vector<int>> basis;

    std::optional<std::pair<long, int>> position_of(int cone_idx) const {
        for (const auto& [q, list] : basis) {
            auto it = std::find(list.begin(), list.end(), cone_idx);
            if (it != list.end()) return std::make_pair(q, static_cast<int>(it - list.begin()));
        }
        return std::nullopt;
    }
};

// Requires a locally closed member set (both intermediate faces of a cofacet
// pair are then present, which is what makes d^2 = 0).
inline CoCellular cocellular_lc(const Fan& f, const std::vector<int>& members,
                                const CellOrder* ord = nullptr) {
    if (!check_locally_closed(f, members))
        fail("NOT_LOCALLY_CLOSED", "cocellular needs a locally closed set");
    CoCellular out;
    std::map<long, std::vector<int>> per_dim;
    for (int m : members) per_dim[static_cast<long>(f.cone(m).dim())].push_back(m);
    for (auto& [q, list] : per_dim) {
        std::sort(list.begin(), list.end(),
                  [&](int a, int b) { return detail::cone_before(f, a, b, ord); });
        out.cx.set_rank(q, static_cast<long>(list.size()));
        std::vector<std::string> lab;
        for (int m : list) lab.push_back(f.cone(m).id);
        out.cx.labels[q] = std::move(lab);
        out.basis[q] = list;
    }
    for (const auto& [q, list] : out.basis) {
        auto up = out.basis.find(q + 1);
        if (up == out.basis.end()) continue;
        IntMatrix d(up->second.size(), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            int tau = list[j];
            for (std::size_t i = 0; i < up->second.size(); ++i) {
                int eta = up->second[i];
                if (!f.is_face_of(tau, eta)) continue;
                d(i, j) = detail::facet_sign(f, tau, eta, ord);
            }
        }
        out.cx.set_diff(q, std::move(d));
    }
    return out;
}

inline CoCellular cocellular(const ConeSubset& t, const CellOrder* ord = nullptr) {
    if (!check_alpha(t)) fail("ALPHA_VIOLATED", "subset is not upward closed");
    return cocellular_lc(*t.fan, t.members, ord);
}

// Contravariant restriction along an inclusion of locally closed sets:
// identity on common summands, zero elsewhere. The result is an honest chain
// map precisely when t_small is open in t_big (no cone outside t_small has a
// cofacet inside it); commutes() reports the failure otherwise.
inline ChainMap restriction_map(const Fan& f, const std::vector<int>& t_small,
                                const std::vector<int>& t_big, const CellOrder* ord = nullptr) {
    if (!std::includes(t_big.begin(), t_big.end(), t_small.begin(), t_small.end()))
        fail("NOT_SUBSET", "restriction needs t_small inside t_big");
    if (!check_locally_closed(f, t_small) || !check_locally_closed(f, t_big))
        fail("NOT_LOCALLY_CLOSED", "restriction needs locally closed sets");
    CoCellular big = cocellular_lc(f, t_big, ord);
    CoCellular small = cocellular_lc(f, t_small, ord);
    ChainMap m;
    m.source = big.cx;
    m.target = small.cx;
    for (const auto& [q, blist] : big.basis) {
        auto st = small.basis.find(q);
        if (st == small.basis.end()) continue;
        IntMatrix part(st->second.size(), blist.size());
        for (std::size_t j = 0; j < blist.size(); ++j) {
            auto it = std::find(st->second.begin(), st->second.end(), blist[j]);
            if (it != st->second.end())
                part(static_cast<std::size_t>(it - st->second.begin()), j) = 1;
        }
        m.set_part(q, std::move(part));
    }
    return m;
}

/* Cech nerve of the closed covering of D by the member cones */

struct CechNerve {
    ChainComplex cx;
    // degree -> tuples of member indices (strictly increasing in cone order)
    std::map<long, std::vector<std::vector<int>>> tuples;
};

// Degree -p is free on strictly increasing (p+1)-tuples whose member-wise
// intersection is itself a member; the differential drops one entry with the
// usual alternating sign. Intersections of fan cones are ray-set
// intersections, and once an intersection leaves an upward closed subset no
// extension re-enters it, which justifies the pruning.
inline CechNerve cech_nerve(const ConeSubset& t, const CellOrder* ord = nullptr) {
    if (!check_alpha(t)) fail("ALPHA_VIOLATED", "nerve needs an upward closed subset");
    const Fan& f = *t.fan;
    std::vector<int> order = t.members;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return detail::cone_before(f, a, b, ord); });

    CechNerve out;
    std::vector<int> tuple;
    auto intersect = [&](const std::vector<Ray>& a, const std::vector<Ray>& b) {
        std::vector<Ray> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c),
                              ray_less);
        return c;
    };
    std::vector<std::vector<Ray>> inter_stack;
    auto dfs = [&](auto&& self, std::size_t start) -> void {
        if (!tuple.empty())
            out.tuples[-(static_cast<long>(tuple.size()) - 1)].push_back(tuple);
        for (std::size_t i = start; i < order.size(); ++i) {
            std::vector<Ray> next = inter_stack.empty()
                                        ? f.cone(order[i]).rays
                                        : intersect(inter_stack.back(), f.cone(order[i]).rays);
            int idx = f.index_of_rays(next);
            if (idx < 0 || !t.contains(idx)) continue;
            tuple.push_back(order[i]);
            inter_stack.push_back(std::move(next));
            self(self, i + 1);
            tuple.pop_back();
            inter_stack.pop_back();
        }
    };
    dfs(dfs, 0);

    for (auto& [q, list] : out.tuples) {
        out.cx.set_rank(q, static_cast<long>(list.size()));
        std::vector<std::string> lab;
        for (const auto& tp : list) {
            std::string s;
            for (std::size_t i = 0; i < tp.size(); ++i)
                s += (i ? "|" : "") + f.cone(tp[i]).id;
            lab.push_back(s);
        }
        out.cx.labels[q] = std::move(lab);
    }
    // differential: degree -p -> -p+1, drop one entry
    for (const auto& [q, list] : out.tuples) {
        auto up = out.tuples.find(q + 1);
        if (up == out.tuples.end()) continue;
        std::map<std::vector<int>, std::size_t> index_up;
        for (std::size_t i = 0; i < up->second.size(); ++i) index_up[up->second[i]] = i;
        IntMatrix d(up->second.size(), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            const auto& tp = list[j];
            for (std::size_t drop = 0; drop < tp.size(); ++drop) {
                std::vector<int> sub;
                for (std::size_t i = 0; i < tp.size(); ++i)
                    if (i != drop) sub.push_back(tp[i]);
                auto it = index_up.find(sub);
                if (it == index_up.end()) fail("SHAPE_MISMATCH", "nerve face missing");
                d(it->second, j) += (drop % 2 == 0) ? 1 : -1;
            }
        }
        out.cx.set_diff(q, std::move(d));
    }
    return out;
}

inline GradedGroup cech_homology(const ConeSubset& t) { return homology(cech_nerve(t).cx); }

inline SupportInfo support(const ConeSubset& t, const std::set<int>& skip = {}) {
    SupportInfo info;
    info.span_basis = support_span_basis(t);
    info.d = info.span_basis.size();
    info.open_in_span = star_open_in_span(t, info.span_basis, skip);
    GradedGroup h = cech_homology(t);
    GradedGroup point;
    point.set(0, GroupAtDegree{1, {}});
    info.homology_point = (h == point);
    return info;
}

/* randomized exact cross-check of the openness criterion */

struct OpennessSample {
    std::size_t samples = 0;
    std::size_t failures = 0;  // directions that leave D arbitrarily close to it
};

// Seeded exact-rational direction sampling: from an interior point of an
// unskipped member, every direction inside the span must stay in D for all
// small positive steps when D is open in the span. Membership in the limit
// is decided exactly from the first-order coordinates.
inline OpennessSample sample_openness(const ConeSubset& t, const SupportInfo& sup,
                                      std::size_t count, std::uint64_t seed,
                                      const std::set<int>& skip = {}) {
    const Fan& f = *t.fan;
    OpennessSample out;
    std::vector<int> pool;
    for (int m : t.members)
        if (!skip.count(m)) pool.push_back(m);
    if (pool.empty() || sup.d == 0) return out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pos_coeff(1, 5);
    std::uniform_int_distribution<int> dir_coeff(-3, 3);

    struct Form {
        IntMatrix coeff, span;
    };
    std::map<int, Form> forms;
    for (int m : t.members) {
        ConeForm cf = cone_form(f.rank(), f.cone(m).rays);
        forms[m] = {cf.coeff, cf.span};
    }

    for (std::size_t s = 0; s < count; ++s) {
        int tau = pool[rng() % pool.size()];
        std::vector<Int> x(f.rank(), Int(0));
        for (const Ray& r : f.cone(tau).rays) {
            int c = pos_coeff(rng);
            for (std::size_t i = 0; i < f.rank(); ++i) x[i] += c * r[i];
        }
        std::vector<Int> v(f.rank(), Int(0));
        bool zero = true;
        for (const Ray& b : sup.span_basis) {
            int c = dir_coeff(rng);
            if (c != 0) zero = false;
            for (std::size_t i = 0; i < f.rank(); ++i) v[i] += c * b[i];
        }
        if (zero) continue;
        ++out.samples;
        bool inside = false;
        for (int m : t.members) {
            const Form& fm = forms[m];
            bool span_ok = true;
            for (std::size_t i = 0; i < fm.span.rows() && span_ok; ++i) {
                Int ax = 0, av = 0;
                for (std::size_t j = 0; j < f.rank(); ++j) {
                    ax += fm.span(i, j) * x[j];
                    av += fm.span(i, j) * v[j];
                }
                if (ax != 0 || av != 0) span_ok = false;
            }
            if (!span_ok) continue;
            bool interior = true;
            for (std::size_t i = 0; i < fm.coeff.rows() && interior; ++i) {
                Int lx = 0, lv = 0;
                for (std::size_t j = 0; j < f.rank(); ++j) {
                    lx += fm.coeff(i, j) * x[j];
                    lv += fm.coeff(i, j) * v[j];
                }
                if (!(lx > 0 || (lx == 0 && lv > 0))) interior = false;
            }
            if (interior) {
                inside = true;
                break;
            }
        }
        if (!inside) ++out.failures;
    }
    return out;
}

/* comparison of the orientation complex with the shifted nerve */

struct ComparisonReport {
    bool open_in_span = false;
    long d = 0;
    bool homology_match = false;
    std::optional<ChainMap> comparison;
    bool chain_map_certified = false;
    GradedGroup cocellular_homology;
    GradedGroup nerve_homology_shifted;
};

// When D is open in its span, a cone of dimension d-p is the intersection of
// exactly p+1 maximal members, and the tuple of all of them carries the only
// nonzero component of the comparison map. The sign on maximal cones is the
// orientation induced from the span basis; lower signs are propagated through
// the facet relations. Certification is by machine; a failed certification
// downgrades to the homology-level comparison.
inline ComparisonReport compare_with_nerve(const ConeSubset& t) {
    const Fan& f = *t.fan;
    ComparisonReport rep;
    SupportInfo sup = support(t);
    rep.open_in_span = sup.open_in_span;
    rep.d = static_cast<long>(sup.d);

    CoCellular cc = cocellular(t);
    CechNerve nerve = cech_nerve(t);
    ChainComplex shifted = shift(nerve.cx, -rep.d);
    rep.cocellular_homology = homology(cc.cx);
    rep.nerve_homology_shifted = homology(shifted);
    rep.homology_match = (rep.cocellular_homology == rep.nerve_homology_shifted);
    if (!rep.open_in_span) return rep;

    // maximal members and, per member, the set of maximal members above it
    std::set<int> maximal;
    for (int m : t.members) {
        bool top = true;
        for (int m2 : t.members)
            if (m2 != m && f.is_face_of(m, m2)) {
                top = false;
                break;
            }
        if (top) maximal.insert(m);
    }
    std::map<int, std::vector<int>> above;  // member -> sorted maximal cones over it
    bool counts_ok = true;
    for (int m : t.members) {
        std::vector<int> mm;
        for (int s : maximal)
            if (f.is_face_of(m, s)) mm.push_back(s);
        above[m] = mm;
        long dim = static_cast<long>(f.cone(m).dim());
        if (static_cast<long>(mm.size()) != rep.d - dim + 1) counts_ok = false;
    }
    for (int m : maximal)
        if (static_cast<long>(f.cone(m).dim()) != rep.d) counts_ok = false;
    if (!counts_ok) return rep;

    // orientation of maximal cones relative to the span basis
    std::map<int, int> sign;
    for (int m : maximal) {
        IntMatrix mat(sup.d, sup.d);
        const Cone& c = f.cone(m);
        for (std::size_t j = 0; j < c.rays.size(); ++j) {
            std::vector<Int> y = detail::span_coordinates(sup.span_basis, c.rays[j]);
            for (std::size_t i = 0; i < sup.d; ++i) mat(i, j) = y[i];
        }
        // exact determinant sign by fraction-free elimination
        std::vector<std::vector<Rat>> w(sup.d, std::vector<Rat>(sup.d));
        for (std::size_t i = 0; i < sup.d; ++i)
            for (std::size_t j = 0; j < sup.d; ++j) w[i][j] = Rat(mat(i, j));
        int sgn_det = 1;
        for (std::size_t col = 0; col < sup.d; ++col) {
            std::size_t p = col;
            while (p < sup.d && w[p][col] == 0) ++p;
            if (p == sup.d) {
                sgn_det = 0;
                break;
            }
            if (p != col) {
                std::swap(w[p], w[col]);
                sgn_det = -sgn_det;
            }
            if (w[col][col] < 0) sgn_det = -sgn_det;
            for (std::size_t i = col + 1; i < sup.d; ++i) {
                if (w[i][col] == 0) continue;
                Rat fct = w[i][col] / w[col][col];
                for (std::size_t j = col; j < sup.d; ++j) w[i][j] -= fct * w[col][j];
            }
        }
        if (sgn_det == 0) return rep;  // degenerate; leave uncertified
        sign[m] = sgn_det;
    }

    // propagate signs downward through chosen cofacets
    std::vector<int> by_dim = t.members;
    std::sort(by_dim.begin(), by_dim.end(), [&](int a, int b) {
        return f.cone(a).dim() > f.cone(b).dim();
    });
    for (int m : by_dim) {
        if (sign.count(m)) continue;
        std::optional<int> cof;
        for (int s : t.members)
            if (f.cone(s).dim() == f.cone(m).dim() + 1 && f.is_face_of(m, s)) {
                cof = s;
                break;
            }
        if (!cof || !sign.count(*cof)) return rep;
        const auto& mm = above[m];
        const auto& mm2 = above[*cof];
        std::vector<int> missing;
        std::set_difference(mm.begin(), mm.end(), mm2.begin(), mm2.end(),
                            std::back_inserter(missing));
        if (missing.size() != 1) return rep;
        int pos = static_cast<int>(std::lower_bound(mm.begin(), mm.end(), missing[0]) -
                                   mm.begin());
        int s = sign[*cof] * detail::facet_sign(f, m, *cof, nullptr);
        if (rep.d % 2 != 0) s = -s;
        if (pos % 2 != 0) s = -s;
        sign[m] = s;
    }

    // assemble the candidate map: each member generator goes to the tuple of
    // all maximal cones above it, with the propagated orientation sign
    ChainMap phi;
    phi.source = cc.cx;
    phi.target = shifted;
    std::map<long, std::map<std::vector<int>, std::size_t>> tuple_pos;
    for (const auto& [q, list] : nerve.tuples)
        for (std::size_t i = 0; i < list.size(); ++i) tuple_pos[q + rep.d][list[i]] = i;
    for (const auto& [q, list] : cc.basis) {
        IntMatrix part(static_cast<std::size_t>(shifted.rank_at(q)), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            int eta = list[j];
            const auto& tp = above.at(eta);
            auto lvl = tuple_pos.find(q);
            if (lvl == tuple_pos.end()) return rep;
            auto it = lvl->second.find(tp);
            if (it == lvl->second.end()) return rep;
            part(it->second, j) = sign.at(eta);
        }
        phi.set_part(q, std::move(part));
    }
    rep.comparison = phi;
    rep.chain_map_certified = phi.commutes() && is_quasi_iso(phi);
    return rep;
}

/* double complex over the star covering and its diagonal */

struct StarDoubleComplex {
    ChainComplex total;
    ChainMap diagonal;
    bool columns_acyclic = false;
};

namespace detail {

struct Block {
    std::vector<int> tuple;    // strictly increasing member indices
    std::vector<int> members;  // subset members inside closure of the tuple meet
};

// all strictly increasing tuples of members whose closure meets the subset
inline std::vector<Block> star_blocks(const ConeSubset& t) {
    const Fan& f = *t.fan;
    std::vector<Block> blocks;
    std::vector<int> tuple;
    auto members_in_closure = [&](const std::vector<Ray>& meet) {
        std::vector<int> out;
        for (int m : t.members) {
            const auto& rays = f.cone(m).rays;
            if (std::includes(meet.begin(), meet.end(), rays.begin(), rays.end()))
                out.push_back(m);
        }
        return out;
    };
    std::vector<std::vector<Ray>> meets;
    auto dfs = [&](auto&& self, std::size_t start) -> void {
        if (!tuple.empty()) {
            std::vector<int> inside = members_in_closure(meets.back());
            if (!inside.empty()) blocks.push_back({tuple, std::move(inside)});
            else return;  // smaller meets only shrink further
        }
        for (std::size_t i = start; i < t.members.size(); ++i) {
            int c = t.members[i];
            std::vector<Ray> nxt;
            if (meets.empty())
                nxt = f.cone(c).rays;
            else
                std::set_intersection(meets.back().begin(), meets.back().end(),
                                      f.cone(c).rays.begin(), f.cone(c).rays.end(),
                                      std::back_inserter(nxt), ray_less);
            tuple.push_back(c);
            meets.push_back(std::move(nxt));
            self(self, i + 1);
            tuple.pop_back();
            meets.pop_back();
        }
    };
    dfs(dfs, 0);
    return blocks;
}

}  // namespace detail

// Total complex of the double complex whose column v is the sum of the
// orientation complexes of the star closures over all (v+1)-fold tuples, with
// the usual alternating restriction maps across tuples. The diagonal embeds
// each generator into every singleton block whose cone lies above it.
inline StarDoubleComplex star_double_complex(const ConeSubset& t) {
    if (!check_alpha(t)) fail("ALPHA_VIOLATED", "double complex needs upward closed subset");
    const Fan& f = *t.fan;
    std::vector<detail::Block> blocks = detail::star_blocks(t);
    std::map<std::vector<int>, std::size_t> block_index;
    for (std::size_t i = 0; i < blocks.size(); ++i) block_index[blocks[i].tuple] = i;

    // basis: per total degree, list of (block id, member cone)
    std::map<long, std::vector<std::pair<std::size_t, int>>> basis;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        long v = static_cast<long>(blocks[b].tuple.size()) - 1;
        for (int m : blocks[b].members)
            basis[static_cast<long>(f.cone(m).dim()) + v].push_back({b, m});
    }
    StarDoubleComplex out;
    std::map<long, std::map<std::pair<std::size_t, int>, std::size_t>> pos;
    for (auto& [n, list] : basis) {
        std::sort(list.begin(), list.end());
        out.total.set_rank(n, static_cast<long>(list.size()));
        for (std::size_t i = 0; i < list.size(); ++i) pos[n][list[i]] = i;
        std::vector<std::string> lab;
        for (const auto& [b, m] : list) {
            std::string s;
            for (std::size_t i = 0; i < blocks[b].tuple.size(); ++i)
                s += (i ? "|" : "") + f.cone(blocks[b].tuple[i]).id;
            lab.push_back(s + ":" + f.cone(m).id);
        }
        out.total.labels[n] = std::move(lab);
    }

    for (const auto& [n, list] : basis) {
        auto up = basis.find(n + 1);
        if (up == basis.end()) continue;
        IntMatrix d(up->second.size(), list.size());
        const auto& target_pos = pos[n + 1];
        for (std::size_t j = 0; j < list.size(); ++j) {
            auto [b, m] = list[j];
            const detail::Block& blk = blocks[b];
            // vertical: cofacets inside the block
            for (int cof : blk.members) {
                if (f.cone(cof).dim() != f.cone(m).dim() + 1 || !f.is_face_of(m, cof)) continue;
                auto it = target_pos.find({b, cof});
                if (it == target_pos.end()) fail("SHAPE_MISMATCH", "vertical target missing");
                d(it->second, j) += detail::facet_sign(f, m, cof, nullptr);
            }
            // horizontal: insert one more member into the tuple
            long udim = static_cast<long>(f.cone(m).dim());
            int twist = (udim % 2 == 0) ? 1 : -1;
            for (int extra : t.members) {
                if (std::binary_search(blk.tuple.begin(), blk.tuple.end(), extra)) continue;
                std::vector<int> bigger = blk.tuple;
                auto ins = std::lower_bound(bigger.begin(), bigger.end(), extra);
                int insert_pos = static_cast<int>(ins - bigger.begin());
                bigger.insert(ins, extra);
                auto bit = block_index.find(bigger);
                if (bit == block_index.end()) continue;
                const detail::Block& tgt = blocks[bit->second];
                if (!std::binary_search(tgt.members.begin(), tgt.members.end(), m)) continue;
                auto it = target_pos.find({bit->second, m});
                if (it == target_pos.end()) fail("SHAPE_MISMATCH", "horizontal target missing");
                d(it->second, j) += twist * ((insert_pos % 2 == 0) ? 1 : -1);
            }
        }
        out.total.set_diff(n, std::move(d));
    }

    CoCellular cc = cocellular(t);
    ChainMap diag;
    diag.source = cc.cx;
    diag.target = out.total;
    for (const auto& [q, list] : cc.basis) {
        auto target = pos.find(q);
        if (target == pos.end()) {
            if (!list.empty()) fail("SHAPE_MISMATCH", "diagonal target degree missing");
            continue;
        }
        IntMatrix part(out.total.rank_at(q), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            int eta = list[j];
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                if (blocks[b].tuple.size() != 1) continue;
                if (!std::binary_search(blocks[b].members.begin(), blocks[b].members.end(), eta))
                    continue;
                auto it = target->second.find({b, eta});
                if (it == target->second.end()) fail("SHAPE_MISMATCH", "diagonal target missing");
                part(it->second, j) = 1;
            }
        }
        diag.set_part(q, std::move(part));
    }
    out.diagonal = diag;

    // column exactness: for each inner degree u the augmented horizontal
    // complex  C^u -> C^{u,0} -> C^{u,1} -> ...  must be acyclic
    out.columns_acyclic = true;
    std::set<long> inner_degrees;
    for (const auto& [q, list] : cc.basis) inner_degrees.insert(q);
    for (const detail::Block& b : blocks)
        for (int m : b.members) inner_degrees.insert(static_cast<long>(f.cone(m).dim()));
    for (long u : inner_degrees) {
        ChainComplex col;
        std::map<long, std::vector<std::pair<std::size_t, int>>> cb;
        auto cit = cc.basis.find(u);
        std::vector<int> aug = (cit == cc.basis.end()) ? std::vector<int>{} : cit->second;
        col.set_rank(-1, static_cast<long>(aug.size()));
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            long v = static_cast<long>(blocks[b].tuple.size()) - 1;
            for (int m : blocks[b].members)
                if (static_cast<long>(f.cone(m).dim()) == u) cb[v].push_back({b, m});
        }
        for (auto& [v, list] : cb) {
            std::sort(list.begin(), list.end());
            col.set_rank(v, static_cast<long>(list.size()));
        }
        // augmentation
        if (!aug.empty() && cb.count(0)) {
            IntMatrix d0(cb[0].size(), aug.size());
            for (std::size_t j = 0; j < aug.size(); ++j)
                for (std::size_t i = 0; i < cb[0].size(); ++i)
                    if (cb[0][i].second == aug[j]) d0(i, j) = 1;
            col.set_diff(-1, std::move(d0));
        }
        for (const auto& [v, list] : cb) {
            auto up = cb.find(v + 1);
            if (up == cb.end()) continue;
            std::map<std::pair<std::size_t, int>, std::size_t> tp;
            for (std::size_t i = 0; i < up->second.size(); ++i) tp[up->second[i]] = i;
            IntMatrix d(up->second.size(), list.size());
            for (std::size_t j = 0; j < list.size(); ++j) {
                auto [b, m] = list[j];
                for (int extra : t.members) {
                    if (std::binary_search(blocks[b].tuple.begin(), blocks[b].tuple.end(), extra))
                        continue;
                    std::vector<int> bigger = blocks[b].tuple;
                    auto ins = std::lower_bound(bigger.begin(), bigger.end(), extra);
                    int insert_pos = static_cast<int>(ins - bigger.begin());
                    bigger.insert(ins, extra);
                    auto bit = block_index.find(bigger);
                    if (bit == block_index.end()) continue;
                    const detail::Block& tgt = blocks[bit->second];
                    if (!std::binary_search(tgt.members.begin(), tgt.members.end(), m)) continue;
                    auto it = tp.find({bit->second, m});
                    if (it == tp.end()) continue;
                    d(it->second, j) += (insert_pos % 2 == 0) ? 1 : -1;
                }
            }
            col.set_diff(v, std::move(d));
        }
        if (!homology(col).parts.empty()) {
            out.columns_acyclic = false;
            break;
        }
    }
    return out;
}

/* resolution of one star closure by its facet covering */

struct FacetResolution {
    ChainComplex cprime;
    ChainMap i_map;
};

// For tau in the subset, resolves the orientation complex of the members
// below tau by the covering through tau's facets. Blocks are indexed by
// nonempty facet subsets; the bottom degree is a single copy of Z(tau)
// receiving, from the top generator of each block, the iso that appends the
// missing rays in the fixed order, with a per-level sign that makes the
// total differential square to zero.
inline FacetResolution facet_resolution(const ConeSubset& t, int tau,
                                        const CellOrder* ord = nullptr) {
    const Fan& f = *t.fan;
    if (!t.contains(tau)) fail("TAU_NOT_IN_SUBSET", f.cone(tau).id);
    const std::size_t r = f.cone(tau).dim();
    std::vector<Ray> tau_rays = detail::ray_order(f, tau, ord);

    // members below tau; this set must be upward closed inside closure(tau)
    std::vector<int> below;
    for (int m : t.members)
        if (f.is_face_of(m, tau)) below.push_back(m);
    for (int m : below)
        for (int h : closure_of(f, tau))
            if (f.is_face_of(m, h) && !std::binary_search(below.begin(), below.end(), h))
                fail("ALPHA_VIOLATED", "subset not upward closed below " + f.cone(tau).id);

    // face of tau omitting the rays indexed by mask (mask over tau_rays)
    auto face_of_mask = [&](std::size_t mask) -> int {
        std::vector<Ray> sub;
        for (std::size_t i = 0; i < r; ++i)
            if (!(mask & (std::size_t(1) << i))) sub.push_back(tau_rays[i]);
        if (sub.empty()) return -1;
        return f.index_of_rays(sorted_rays(sub));
    };

    struct PBlock {
        std::size_t mask;        // nonempty subset of facet indices
        int eta;                 // the intersection face (may be outside the subset)
        std::vector<int> members;
    };
    std::vector<PBlock> blocks;
    std::map<std::size_t, std::size_t> block_of_mask;
    for (std::size_t mask = 1; mask < (std::size_t(1) << r); ++mask) {
        int eta = face_of_mask(mask);
        std::vector<int> inside;
        if (eta >= 0) {
            for (int m : below)
                if (f.is_face_of(m, eta)) inside.push_back(m);
        }
        if (inside.empty()) continue;
        block_of_mask[mask] = blocks.size();
        blocks.push_back({mask, eta, inside});
    }

    auto level = [](std::size_t mask) {
        int c = 0;
        for (std::size_t m = mask; m; m >>= 1) c += static_cast<int>(m & 1);
        return c;  // |S|
    };
    auto beta = [&](int k) {
        // bottom-map sign per level, from beta_{k+1} = beta_k * (-1)^{r-k}
        int s = 1;
        for (int j = 1; j < k; ++j)
            if ((static_cast<int>(r) - j) % 2 != 0) s = -s;
        return s;
    };

    std::map<long, std::vector<std::pair<std::size_t, int>>> basis;  // degree -> (block, member)
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        long v = level(blocks[b].mask) - 1;
        for (int m : blocks[b].members)
            basis[static_cast<long>(f.cone(m).dim()) + v].push_back({b, m});
    }
    FacetResolution out;
    std::map<long, std::map<std::pair<std::size_t, int>, std::size_t>> pos;
    for (auto& [n, list] : basis) {
        std::sort(list.begin(), list.end());
        out.cprime.set_rank(n, static_cast<long>(list.size()));
        for (std::size_t i = 0; i < list.size(); ++i) pos[n][list[i]] = i;
    }
    const long bottom_deg = static_cast<long>(r);
    long existing = out.cprime.rank_at(bottom_deg);
    out.cprime.ranks[bottom_deg] = existing + 1;  // the Z(tau) summand sits last

    for (const auto& [n, list] : basis) {
        std::size_t up_rank = static_cast<std::size_t>(out.cprime.rank_at(n + 1));
        if (up_rank == 0) continue;
        IntMatrix d(up_rank, list.size());
        const auto upit = pos.find(n + 1);
        for (std::size_t j = 0; j < list.size(); ++j) {
            auto [b, m] = list[j];
            const PBlock& blk = blocks[b];
            // vertical
            for (int cof : blk.members) {
                if (f.cone(cof).dim() != f.cone(m).dim() + 1 || !f.is_face_of(m, cof)) continue;
                auto it = upit->second.find({b, cof});
                if (it == upit->second.end()) fail("SHAPE_MISMATCH", "vertical target missing");
                d(it->second, j) += detail::facet_sign(f, m, cof, ord);
            }
            // horizontal: add one facet to the subset
            long udim = static_cast<long>(f.cone(m).dim());
            int twist = (udim % 2 == 0) ? 1 : -1;
            for (std::size_t i = 0; i < r; ++i) {
                if (blk.mask & (std::size_t(1) << i)) continue;
                std::size_t bigger = blk.mask | (std::size_t(1) << i);
                auto bit = block_of_mask.find(bigger);
                if (bit == block_of_mask.end()) continue;
                const PBlock& tgt = blocks[bit->second];
                if (!std::binary_search(tgt.members.begin(), tgt.members.end(), m)) continue;
                int insert_pos = 0;  // count of set bits below i
                for (std::size_t k2 = 0; k2 < i; ++k2)
                    if (blk.mask & (std::size_t(1) << k2)) ++insert_pos;
                auto it = upit->second.find({bit->second, m});
                if (it == upit->second.end()) fail("SHAPE_MISMATCH", "horizontal target missing");
                d(it->second, j) += twist * ((insert_pos % 2 == 0) ? 1 : -1);
            }
            // bottom: the top generator of each block maps onto Z(tau)
            if (n + 1 == bottom_deg && m == blk.eta) {
                int k = level(blk.mask);
                int s = beta(k) * detail::append_all_sign(f, blk.eta, tau, ord);
                d(up_rank - 1, j) += s;
            }
        }
        out.cprime.set_diff(n, std::move(d));
    }

    // the diagonal comparison map
    CoCellular cc = cocellular_lc(f, below, ord);
    out.i_map.source = cc.cx;
    out.i_map.target = out.cprime;
    for (const auto& [q, list] : cc.basis) {
        IntMatrix part(static_cast<std::size_t>(out.cprime.rank_at(q)), list.size());
        for (std::size_t j = 0; j < list.size(); ++j) {
            int sigma = list[j];
            if (sigma == tau) {
                part(static_cast<std::size_t>(out.cprime.rank_at(q)) - 1, j) = 1;
                continue;
            }
            for (std::size_t i = 0; i < r; ++i) {
                std::size_t mask = std::size_t(1) << i;
                auto bit = block_of_mask.find(mask);
                if (bit == block_of_mask.end()) continue;
                const PBlock& blk = blocks[bit->second];
                if (!std::binary_search(blk.members.begin(), blk.members.end(), sigma)) continue;
                auto it = pos[q].find({bit->second, sigma});
                if (it == pos[q].end()) fail("SHAPE_MISMATCH", "diagonal target missing");
                part(it->second, j) = 1;
            }
        }
        out.i_map.set_part(q, std::move(part));
    }
    return out;
}

// The coefficient complex of a single locally closed stratum: one copy of Z
// in cohomological degree dim(sigma).
inline ChainComplex single_cone_complex(const Fan& f, int sigma) {
    if (sigma < 0 || sigma >= static_cast<int>(f.cones().size()))
        fail("CONE_NOT_IN_FAN", "index out of range");
    if (f.cone(sigma).is_zero()) fail("ZERO_CONE", "zero cone has no stratum complex");
    ChainComplex c;
    c.set_rank(static_cast<long>(f.cone(sigma).dim()), 1);
    c.labels[static_cast<long>(f.cone(sigma).dim())] = {f.cone(sigma).id};
    return c;
}

}  // namespace conecell
