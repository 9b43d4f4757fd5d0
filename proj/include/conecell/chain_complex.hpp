#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "conecell/snf.hpp"

namespace conecell {

// Bounded complex of finitely generated free Z-modules. Storage is
// cohomological: the differential keyed by q maps degree q to degree q+1.
// Homological data is embedded by placing homological degree p at -p.
struct ChainComplex {
    std::map<long, long> ranks;                           // degree -> rank, entries > 0 only
    std::map<long, IntMatrix> diffs;                      // source degree -> matrix (rank_{q+1} x rank_q)
    std::map<long, std::vector<std::string>> labels;      // optional basis labels per degree

    long rank_at(long q) const {
        auto it = ranks.find(q);
        return it == ranks.end() ? 0 : it->second;
    }
    IntMatrix diff_at(long q) const {
        auto it = diffs.find(q);
        if (it != diffs.end()) return it->second;
        return IntMatrix(static_cast<std::size_t>(rank_at(q + 1)),
                         static_cast<std::size_t>(rank_at(q)));
    }
    void set_rank(long q, long r) {
        if (r > 0) ranks[q] = r;
    }
    void set_diff(long q, IntMatrix m) {
        if (m.rows() != static_cast<std::size_t>(rank_at(q + 1)) ||
            m.cols() != static_cast<std::size_t>(rank_at(q)))
            fail("SHAPE_MISMATCH", "differential shape at degree " + std::to_string(q));
        if (!m.is_zero()) diffs[q] = std::move(m);
    }

    bool operator==(const ChainComplex& o) const {
        return ranks == o.ranks && diffs == o.diffs;
    }

    // first failing degree, or nullopt when d^2 = 0 and shapes are coherent
    std::optional<long> first_invalid_degree() const {
        for (const auto& [q, m] : diffs) {
            if (m.rows() != static_cast<std::size_t>(rank_at(q + 1)) ||
                m.cols() != static_cast<std::size_t>(rank_at(q)))
                return q;
        }
        for (const auto& [q, m] : diffs) {
            auto next = diffs.find(q + 1);
            if (next == diffs.end()) continue;
            if (!(next->second * m).is_zero()) return q;
        }
        return std::nullopt;
    }
    bool validate() const { return !first_invalid_degree().has_value(); }
};

inline GradedGroup homology(const ChainComplex& c) {
    if (!c.validate()) fail("COMPOSITION_NONZERO", "complex fails validation");
    GradedGroup h;
    for (const auto& [q, r] : c.ranks) {
        IntMatrix d_in = c.diff_at(q - 1);
        IntMatrix d_out = c.diff_at(q);
        h.set(q, homology_step(d_in, d_out));
    }
    return h;
}

// Degreewise map of complexes commuting with the differentials.
struct ChainMap {
    ChainComplex source, target;
    std::map<long, IntMatrix> parts;  // degree -> rank_target(q) x rank_source(q)

    IntMatrix part_at(long q) const {
        auto it = parts.find(q);
        if (it != parts.end()) return it->second;
        return IntMatrix(static_cast<std::size_t>(target.rank_at(q)),
                         static_cast<std::size_t>(source.rank_at(q)));
    }
    void set_part(long q, IntMatrix m) {
        if (m.rows() != static_cast<std::size_t>(target.rank_at(q)) ||
            m.cols() != static_cast<std::size_t>(source.rank_at(q)))
            fail("SHAPE_MISMATCH", "chain map component at degree " + std::to_string(q));
        if (!m.is_zero()) parts[q] = std::move(m);
    }

    bool commutes() const {
        std::set<long> degs;
        for (const auto& [q, _] : source.ranks) degs.insert(q);
        for (const auto& [q, _] : target.ranks) degs.insert(q);
        for (long q : degs) {
            IntMatrix lhs = target.diff_at(q) * part_at(q);
            IntMatrix rhs = part_at(q + 1) * source.diff_at(q);
            if (!(lhs == rhs)) return false;
        }
        return true;
    }
};

inline ChainMap identity_map(const ChainComplex& c) {
    ChainMap f;
    f.source = c;
    f.target = c;
    for (const auto& [q, r] : c.ranks)
        f.set_part(q, IntMatrix::identity(static_cast<std::size_t>(r)));
    return f;
}

// cone(f)^q = source^{q+1} (+) target^q with differential
// [[-d_source, 0], [f, d_target]].
inline ChainComplex mapping_cone(const ChainMap& f) {
    if (!f.source.validate() || !f.target.validate() || !f.commutes())
        fail("INVALID_CHAIN_MAP", "mapping cone needs a valid chain map");
    ChainComplex cone;
    std::set<long> degs;
    for (const auto& [q, _] : f.source.ranks) degs.insert(q - 1);
    for (const auto& [q, _] : f.target.ranks) degs.insert(q);
    for (long q : degs) cone.set_rank(q, f.source.rank_at(q + 1) + f.target.rank_at(q));
    for (long q : degs) {
        std::size_t sr = static_cast<std::size_t>(f.source.rank_at(q + 1));
        std::size_t tr = static_cast<std::size_t>(f.target.rank_at(q));
        std::size_t sr2 = static_cast<std::size_t>(f.source.rank_at(q + 2));
        std::size_t tr2 = static_cast<std::size_t>(f.target.rank_at(q + 1));
        IntMatrix d(sr2 + tr2, sr + tr);
        IntMatrix ds = f.source.diff_at(q + 1);
        IntMatrix dt = f.target.diff_at(q);
        IntMatrix fq = f.part_at(q + 1);
        for (std::size_t i = 0; i < sr2; ++i)
            for (std::size_t j = 0; j < sr; ++j) d(i, j) = -ds(i, j);
        for (std::size_t i = 0; i < tr2; ++i)
            for (std::size_t j = 0; j < sr; ++j) d(sr2 + i, j) = fq(i, j);
        for (std::size_t i = 0; i < tr2; ++i)
            for (std::size_t j = 0; j < tr; ++j) d(sr2 + i, sr + j) = dt(i, j);
        cone.set_diff(q, std::move(d));
    }
    return cone;
}

inline bool is_quasi_iso(const ChainMap& f) {
    GradedGroup h = homology(mapping_cone(f));
    return h.parts.empty();
}

// Modules move from degree q to q-k; differentials pick up the sign (-1)^k.
inline ChainComplex shift(const ChainComplex& c, long k) {
    ChainComplex r;
    for (const auto& [q, rank] : c.ranks) r.set_rank(q - k, rank);
    for (const auto& [q, m] : c.diffs) r.set_diff(q - k, (k % 2 == 0) ? m : -m);
    for (const auto& [q, l] : c.labels) r.labels[q - k] = l;
    return r;
}

// Finite-rank abelian coefficient group; torsion is rejected by dual_hom in
// this version.
struct AbGroupCoeff {
    long rank = 1;
    std::vector<Int> torsion;
};

// Hom(c, a) for free a: degree q holds Hom(c^{-q}, a); the differential is the
// transpose tensor identity with sign (-1)^{q+1}.
inline ChainComplex dual_hom(const ChainComplex& c, const AbGroupCoeff& a) {
    if (!a.torsion.empty())
        fail("TORSION_COEFF_UNSUPPORTED", "torsion coefficients are not supported");
    ChainComplex r;
    for (const auto& [q, rank] : c.ranks) r.set_rank(-q, rank * a.rank);
    for (const auto& [q, m] : c.diffs) {
        // d_c : q -> q+1 induces result^{-(q+1)} -> result^{-q}
        long src = -(q + 1);
        IntMatrix t = m.transpose();
        std::size_t ar = static_cast<std::size_t>(a.rank);
        IntMatrix big(t.rows() * ar, t.cols() * ar);
        for (std::size_t i = 0; i < t.rows(); ++i)
            for (std::size_t j = 0; j < t.cols(); ++j)
                for (std::size_t k = 0; k < ar; ++k) big(i * ar + k, j * ar + k) = t(i, j);
        if ((src + 1) % 2 != 0) big = -big;
        r.set_diff(src, std::move(big));
    }
    return r;
}

}  // namespace conecell
