#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "conecell/chain_complex.hpp"

namespace conecell {

// Group elements are identified by their lattice representation: a word over
// the generators stands for the product of the generator matrices, and two
// words are equal exactly when the products agree. Faithfulness of the action
// is the caller's obligation.
using Word = std::vector<int>;  // 1-based generator indices, negative = inverse

// exact inverse of a unimodular integer matrix
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    std::size_t n = m.rows();
    if (m.cols() != n) fail("SHAPE_MISMATCH", "inverse of non-square matrix");
    IntMatrix inv(n, n);
    IntMatrix id = IntMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto x = solve_rational(m, id.col(j));
        if (!x) fail("ACTION_ESCAPES_RANK", "matrix not invertible");
        for (std::size_t i = 0; i < n; ++i) {
            if (denominator((*x)[i]) != 1) fail("ACTION_ESCAPES_RANK", "matrix not unimodular");
            inv(i, j) = numerator((*x)[i]);
        }
    }
    return inv;
}

struct GroupRingComplex;

struct GroupData {
    std::size_t rank = 0;               // lattice rank being acted on
    std::vector<IntMatrix> generators;  // unimodular rank x rank matrices
    std::vector<Word> relations;        // words required to equal the identity
    std::shared_ptr<GroupRingComplex> resolution;  // optional

    bool trivial() const { return generators.empty(); }

    void validate_generators() const {
        for (const IntMatrix& g : generators) {
            if (g.rows() != rank || g.cols() != rank)
                fail("SCHEMA_ERROR", "generator matrix has wrong shape");
            unimodular_inverse(g);  // throws ACTION_ESCAPES_RANK otherwise
        }
        for (const Word& w : relations)
            if (!(evaluate(w) == IntMatrix::identity(rank)))
                fail("SCHEMA_ERROR", "relation word does not evaluate to the identity");
    }

    IntMatrix evaluate(const Word& w) const {
        IntMatrix m = IntMatrix::identity(rank);
        for (int g : w) {
            if (g == 0 || static_cast<std::size_t>(std::abs(g)) > generators.size())
                fail("SCHEMA_ERROR", "generator index out of range in word");
            const IntMatrix& gen = generators[static_cast<std::size_t>(std::abs(g) - 1)];
            m = m * (g > 0 ? gen : unimodular_inverse(gen));
        }
        return m;
    }
};

inline Word word_inverse(const Word& a) {
    Word w;
    for (auto it = a.rbegin(); it != a.rend(); ++it) w.push_back(-*it);
    return w;
}

// Formal finite sum of group elements with integer coefficients, keyed by the
// evaluated lattice matrix; a representative word is kept per element. Zero
// coefficients are pruned.
struct GroupRingElement {
    // matrix -> (representative word, coefficient)
    std::map<IntMatrix, std::pair<Word, Int>> terms;

    bool zero() const { return terms.empty(); }

    void add_term(IntMatrix key, Word w, Int c) {
        if (c == 0) return;
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(std::move(key), std::make_pair(std::move(w), std::move(c)));
        } else {
            it->second.second += c;
            if (it->second.second == 0) terms.erase(it);
        }
    }

    GroupRingElement& operator+=(const GroupRingElement& o) {
        for (const auto& [k, t] : o.terms) add_term(k, t.first, t.second);
        return *this;
    }

    bool operator==(const GroupRingElement& o) const {
        if (terms.size() != o.terms.size()) return false;
        auto a = terms.begin();
        auto b = o.terms.begin();
        for (; a != terms.end(); ++a, ++b)
            if (a->first != b->first || a->second.second != b->second.second) return false;
        return true;
    }
};

inline GroupRingElement ring_one(const GroupData& g) {
    GroupRingElement e;
    e.add_term(IntMatrix::identity(g.rank), {}, 1);
    return e;
}

inline GroupRingElement ring_product(const GroupRingElement& a, const GroupRingElement& b) {
    GroupRingElement r;
    for (const auto& [ka, ta] : a.terms)
        for (const auto& [kb, tb] : b.terms) {
            Word w = ta.first;
            w.insert(w.end(), tb.first.begin(), tb.first.end());
            r.add_term(ka * kb, std::move(w), ta.second * tb.second);
        }
    return r;
}

struct GroupRingMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<GroupRingElement> entries;  // row-major

    GroupRingMatrix() = default;
    GroupRingMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    GroupRingElement& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const GroupRingElement& at(std::size_t i, std::size_t j) const {
        return entries[i * cols + j];
    }
    bool zero() const {
        for (const auto& e : entries)
            if (!e.zero()) return false;
        return true;
    }
};

inline GroupRingMatrix ring_mat_product(const GroupRingMatrix& a, const GroupRingMatrix& b) {
    if (a.cols != b.rows) fail("SHAPE_MISMATCH", "group ring matrix product");
    GroupRingMatrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a.at(i, k).zero()) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                if (b.at(k, j).zero()) continue;
                r.at(i, j) += ring_product(a.at(i, k), b.at(k, j));
            }
        }
    return r;
}

// Bounded complex of free ZH-modules, cohomological storage like ChainComplex.
// Homological resolutions F_q sit at degree -q.
struct GroupRingComplex {
    std::map<long, long> ranks;                 // degree -> free rank over ZH
    std::map<long, GroupRingMatrix> diffs;      // source degree -> matrix
    std::map<long, std::vector<std::string>> labels;
    std::vector<GroupRingElement> augmentation;  // optional, on the degree-0 module

    long rank_at(long q) const {
        auto it = ranks.find(q);
        return it == ranks.end() ? 0 : it->second;
    }
    GroupRingMatrix diff_at(long q) const {
        auto it = diffs.find(q);
        if (it != diffs.end()) return it->second;
        return GroupRingMatrix(static_cast<std::size_t>(rank_at(q + 1)),
                               static_cast<std::size_t>(rank_at(q)));
    }
    void set_rank(long q, long r) {
        if (r > 0) ranks[q] = r;
    }
    void set_diff(long q, GroupRingMatrix m) {
        if (m.rows != static_cast<std::size_t>(rank_at(q + 1)) ||
            m.cols != static_cast<std::size_t>(rank_at(q)))
            fail("SHAPE_MISMATCH", "group ring differential shape");
        if (!m.zero()) diffs[q] = std::move(m);
    }

    // formal d^2 = 0 over the group ring
    bool validate() const {
        for (const auto& [q, m] : diffs) {
            auto next = diffs.find(q + 1);
            if (next == diffs.end()) continue;
            if (!ring_mat_product(next->second, m).zero()) return false;
        }
        return true;
    }
};

// Finite-rank integer representation: one invertible matrix per generator.
struct Representation {
    std::size_t rank = 1;
    std::vector<IntMatrix> matrices;

    void prepare() const {
        for (const IntMatrix& m : matrices) {
            if (m.rows() != rank || m.cols() != rank)
                fail("SCHEMA_ERROR", "representation matrix has wrong shape");
            unimodular_inverse(m);
        }
    }

    IntMatrix apply_word(const Word& w) const {
        IntMatrix m = IntMatrix::identity(rank);
        for (int g : w) {
            if (g == 0 || static_cast<std::size_t>(std::abs(g)) > matrices.size())
                fail("RELATION_VIOLATION", "word uses an unknown generator");
            const IntMatrix& gen = matrices[static_cast<std::size_t>(std::abs(g) - 1)];
            m = m * (g > 0 ? gen : unimodular_inverse(gen));
        }
        return m;
    }

    IntMatrix apply(const GroupRingElement& e) const {
        IntMatrix m(rank, rank);
        for (const auto& [k, t] : e.terms) {
            IntMatrix w = apply_word(t.first);
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < rank; ++j) m(i, j) += t.second * w(i, j);
        }
        return m;
    }
};

inline Representation trivial_representation(std::size_t gens, std::size_t rank = 1) {
    Representation r;
    r.rank = rank;
    for (std::size_t i = 0; i < gens; ++i) r.matrices.push_back(IntMatrix::identity(rank));
    r.prepare();
    return r;
}

inline void check_relations(const GroupData& g, const Representation& rep) {
    if (rep.matrices.size() != g.generators.size())
        fail("RELATION_VIOLATION", "representation has wrong number of generators");
    for (const Word& w : g.relations)
        if (!(rep.apply_word(w) == IntMatrix::identity(rep.rank)))
            fail("RELATION_VIOLATION", "action matrices violate a supplied relation");
}

// Specialize a free ZH-complex through a representation: ranks multiply by
// rep.rank, each ring entry becomes its action block.
inline ChainComplex specialize(const GroupRingComplex& c, const Representation& rep) {
    ChainComplex out;
    for (const auto& [q, r] : c.ranks) out.set_rank(q, r * static_cast<long>(rep.rank));
    for (const auto& [q, m] : c.diffs) {
        std::size_t R = rep.rank;
        IntMatrix big(m.rows * R, m.cols * R);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) {
                if (m.at(i, j).zero()) continue;
                IntMatrix blk = rep.apply(m.at(i, j));
                for (std::size_t a = 0; a < R; ++a)
                    for (std::size_t b = 0; b < R; ++b) big(i * R + a, j * R + b) = blk(a, b);
            }
        out.set_diff(q, std::move(big));
    }
    return out;
}

// Hom over the group ring into the representation, i.e. the complex of
// H-invariants of Hom(c, A). A ZH-linear map out of a free module is
// determined by its basis values, and precomposition with the differential
// applies the ring entries through the representation; the block structure
// transposes and the degree negates. The sign convention matches dual_hom,
// so the trivial group degenerates to it verbatim.
inline ChainComplex invariants_complex(const GroupRingComplex& c, const GroupData& g,
                                       const Representation& rep) {
    check_relations(g, rep);
    if (!c.validate()) fail("COMPOSITION_NONZERO", "group ring complex fails d^2 = 0");
    ChainComplex out;
    for (const auto& [q, r] : c.ranks) out.set_rank(-q, r * static_cast<long>(rep.rank));
    for (const auto& [q, m] : c.diffs) {
        long src = -(q + 1);
        std::size_t R = rep.rank;
        IntMatrix big(m.cols * R, m.rows * R);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) {
                if (m.at(i, j).zero()) continue;
                IntMatrix blk = rep.apply(m.at(i, j));
                for (std::size_t a = 0; a < R; ++a)
                    for (std::size_t b = 0; b < R; ++b) big(j * R + a, i * R + b) = blk(a, b);
            }
        if ((src + 1) % 2 != 0) big = -big;
        out.set_diff(src, std::move(big));
    }
    return out;
}

// Tensor over the group ring with the representation. Viewing the free
// module as a right module through the standard anti-involution (word
// reversed, generators inverted) moves ring coefficients across the tensor
// sign, so entries act through the involuted words; degrees are unchanged.
inline ChainComplex coinvariants_complex(const GroupRingComplex& c, const GroupData& g,
                                         const Representation& rep) {
    check_relations(g, rep);
    if (!c.validate()) fail("COMPOSITION_NONZERO", "group ring complex fails d^2 = 0");
    ChainComplex out;
    for (const auto& [q, r] : c.ranks) out.set_rank(q, r * static_cast<long>(rep.rank));
    for (const auto& [q, m] : c.diffs) {
        std::size_t R = rep.rank;
        IntMatrix big(m.rows * R, m.cols * R);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) {
                if (m.at(i, j).zero()) continue;
                IntMatrix blk(R, R);
                for (const auto& [k, t] : m.at(i, j).terms) {
                    IntMatrix w = rep.apply_word(word_inverse(t.first));
                    for (std::size_t a = 0; a < R; ++a)
                        for (std::size_t b = 0; b < R; ++b) blk(a, b) += t.second * w(a, b);
                }
                for (std::size_t a = 0; a < R; ++a)
                    for (std::size_t b = 0; b < R; ++b) big(i * R + a, j * R + b) = blk(a, b);
            }
        out.set_diff(q, std::move(big));
    }
    return out;
}

// H^*(H, M) from the user-supplied bounded free resolution, reported in
// cohomological degrees >= 0.
inline GradedGroup group_cohomology(const GroupData& g, const Representation& rep) {
    if (!g.resolution) fail("NO_RESOLUTION", "group carries no resolution");
    return homology(invariants_complex(*g.resolution, g, rep));
}

// H_*(H, M); keys of the result are homological degrees >= 0.
inline GradedGroup coinvariants_homology(const GroupData& g, const Representation& rep) {
    if (!g.resolution) fail("NO_RESOLUTION", "group carries no resolution");
    GradedGroup h = homology(coinvariants_complex(*g.resolution, g, rep));
    GradedGroup out;
    for (const auto& [q, part] : h.parts) out.set(-q, part);
    return out;
}

// Validate the resolution data: shape, formal d^2 = 0, and surjectivity of
// the augmentation after applying the trivial character. Exactness over ZH
// is asserted input and cannot be decided here.
inline void validate_resolution(const GroupData& g) {
    if (!g.resolution) fail("NO_RESOLUTION", "group carries no resolution");
    const GroupRingComplex& res = *g.resolution;
    for (const auto& [q, r] : res.ranks)
        if (q > 0) fail("SCHEMA_ERROR", "resolution must live in degrees <= 0");
    if (!res.validate()) fail("SCHEMA_ERROR", "resolution fails formal d^2 = 0");
    long r0 = res.rank_at(0);
    if (r0 == 0) fail("SCHEMA_ERROR", "resolution has no degree-0 module");
    std::vector<GroupRingElement> aug = res.augmentation;
    if (aug.empty()) aug.assign(static_cast<std::size_t>(r0), ring_one(g));
    if (aug.size() != static_cast<std::size_t>(r0))
        fail("SCHEMA_ERROR", "augmentation width disagrees with degree-0 rank");
    Int gcd_all = 0;
    for (const GroupRingElement& e : aug) {
        Int s = 0;
        for (const auto& [k, t] : e.terms) s += t.second;
        gcd_all = gcd(gcd_all, s);
    }
    if (gcd_all != 1) fail("SCHEMA_ERROR", "augmentation is not surjective onto Z");
    // augmentation composed with the last differential must vanish over Z
    auto d = res.diffs.find(-1);
    if (d != res.diffs.end()) {
        for (std::size_t j = 0; j < d->second.cols; ++j) {
            Int acc = 0;
            for (std::size_t i = 0; i < d->second.rows; ++i) {
                Int s = 0;
                for (const auto& [k, t] : d->second.at(i, j).terms) s += t.second;
                Int a = 0;
                for (const auto& [k2, t2] : aug[i].terms) a += t2.second;
                acc += a * s;
            }
            if (acc != 0) fail("SCHEMA_ERROR", "augmentation does not annihilate d_1");
        }
    }
}

}  // namespace conecell
