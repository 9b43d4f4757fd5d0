#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"

using namespace conecell;
using conecell_test::induces_homology_iso;

namespace {

ChainComplex two_term(long lo, long k) {
    // Z --k--> Z in degrees lo, lo+1
    ChainComplex c;
    c.set_rank(lo, 1);
    c.set_rank(lo + 1, 1);
    IntMatrix d(1, 1);
    d(0, 0) = k;
    c.set_diff(lo, std::move(d));
    return c;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (std::size_t step = 0; step < 2 * n + 2; ++step) {
        std::size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        u.add_row(i, j, Int(coeff(rng)));
    }
    if (rng() % 2) u.negate_row(rng() % n);
    return u;
}

// elementary blocks conjugated by random basis changes
ChainComplex random_complex(std::mt19937_64& rng, long lo = -1, long hi = 2) {
    ChainComplex c;
    std::uniform_int_distribution<int> scal(0, 3);
    std::map<long, long> rank;
    for (long q = lo; q < hi; ++q) {
        int blocks = static_cast<int>(rng() % 3);
        for (int b = 0; b < blocks; ++b) {
            rank[q] += 1;
            rank[q + 1] += 1;
        }
        if (rng() % 2) rank[q] += 1;  // a free summand without differential
    }
    for (auto& [q, r] : rank) c.set_rank(q, r);
    // rebuild the block differentials
    std::map<long, long> used_src, used_tgt;
    for (long q = lo; q < hi; ++q) {
        long rows = c.rank_at(q + 1), cols = c.rank_at(q);
        if (rows == 0 || cols == 0) continue;
        IntMatrix d(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
        long nblocks = std::min(rows - used_tgt[q + 1], cols - used_src[q]);
        // pair fresh source coordinates with fresh target coordinates
        for (long b = 0; b < nblocks; ++b) {
            if (rng() % 2) continue;
            d(static_cast<std::size_t>(used_tgt[q + 1] + b),
              static_cast<std::size_t>(used_src[q] + b)) = scal(rng);
        }
        used_src[q + 1] += nblocks;  // target coordinates now carry incoming arrows
        c.set_diff(q, std::move(d));
    }
    REQUIRE(c.validate());
    return c;
}

ChainComplex conjugate(const ChainComplex& c, std::mt19937_64& rng,
                       std::map<long, IntMatrix>& out_u) {
    ChainComplex r;
    for (const auto& [q, rk] : c.ranks) {
        r.set_rank(q, rk);
        out_u[q] = random_unimodular(rng, static_cast<std::size_t>(rk));
    }
    std::set<long> degs;
    for (const auto& [q, rk] : c.ranks) degs.insert(q);
    for (long q : degs) {
        IntMatrix d = c.diff_at(q);
        if (d.rows() == 0 || d.cols() == 0) continue;
        IntMatrix uq = out_u.count(q) ? out_u[q] : IntMatrix::identity(0);
        IntMatrix uq1 = out_u.count(q + 1) ? out_u[q + 1] : IntMatrix::identity(d.rows());
        IntMatrix uq_inv = unimodular_inverse(uq);
        r.set_diff(q, uq1 * d * uq_inv);
    }
    REQUIRE(r.validate());
    return r;
}

}  // namespace

TEST_CASE("complex validation") {
    SECTION("zero complex") { CHECK(ChainComplex{}.validate()); }
    SECTION("two-term identity complex") { CHECK(two_term(0, 1).validate()); }
    SECTION("nonzero square fails") {
        ChainComplex c;
        c.set_rank(0, 1);
        c.set_rank(1, 1);
        c.set_rank(2, 1);
        IntMatrix one(1, 1);
        one(0, 0) = 1;
        c.set_diff(0, one);
        c.set_diff(1, one);
        CHECK_FALSE(c.validate());
        CHECK(c.first_invalid_degree() == 0);
    }
}

TEST_CASE("homology of small complexes") {
    SECTION("single Z in degree 0") {
        ChainComplex c;
        c.set_rank(0, 1);
        GradedGroup h = homology(c);
        CHECK(h.at(0).rank == 1);
    }
    SECTION("orientation complex of the punctured quadrant") {
        ChainComplex c;
        c.set_rank(1, 2);
        c.set_rank(2, 1);
        c.set_diff(1, IntMatrix{{1, -1}});
        GradedGroup h = homology(c);
        CHECK(h.at(1).rank == 1);
        CHECK(h.at(2).trivial());
    }
    SECTION("multiplication by two") {
        GradedGroup h = homology(two_term(0, 2));
        CHECK(h.at(0).trivial());
        CHECK(h.at(1).rank == 0);
        CHECK(h.at(1).torsion == std::vector<Int>{2});
    }
}

TEST_CASE("mapping cone and quasi-isomorphisms") {
    SECTION("identity is a quasi-isomorphism") {
        ChainComplex c = two_term(0, 2);
        CHECK(is_quasi_iso(identity_map(c)));
    }
    SECTION("zero map between acyclic complexes") {
        ChainMap f;
        f.source = two_term(0, 1);
        f.target = two_term(5, 1);
        CHECK(f.commutes());
        CHECK(is_quasi_iso(f));
    }
    SECTION("multiplication by two on a point is not") {
        ChainComplex pt;
        pt.set_rank(0, 1);
        ChainMap f;
        f.source = pt;
        f.target = pt;
        IntMatrix two(1, 1);
        two(0, 0) = 2;
        f.set_part(0, two);
        GradedGroup h = homology(mapping_cone(f));
        CHECK(h.at(0).torsion == std::vector<Int>{2});
        CHECK_FALSE(is_quasi_iso(f));
    }
    SECTION("invalid maps are rejected") {
        ChainMap f;
        f.source = two_term(0, 1);
        f.target = two_term(0, 2);
        IntMatrix one(1, 1);
        one(0, 0) = 1;
        f.set_part(0, one);  // does not commute with the differentials
        CHECK_THROWS_AS(mapping_cone(f), Error);
    }
}

TEST_CASE("cone certifier agrees with the induced-map oracle on random maps") {
    std::mt19937_64 rng(2024);
    int agree = 0;
    auto pad_acyclic = [](const ChainComplex& base, long q) {
        // adjoin a two-term block Z -> Z at degrees q, q+1 and widen the
        // neighbouring differentials with zero rows / columns
        ChainComplex p = base;
        p.ranks[q] = p.rank_at(q) + 1;
        p.ranks[q + 1] = p.rank_at(q + 1) + 1;
        auto widen = [&](long src) {
            IntMatrix old = base.diff_at(src);
            IntMatrix d(static_cast<std::size_t>(p.rank_at(src + 1)),
                        static_cast<std::size_t>(p.rank_at(src)));
            for (std::size_t i = 0; i < old.rows(); ++i)
                for (std::size_t j = 0; j < old.cols(); ++j) d(i, j) = old(i, j);
            if (src == q) d(d.rows() - 1, d.cols() - 1) = 1;
            p.diffs.erase(src);
            p.set_diff(src, std::move(d));
        };
        widen(q - 1);
        widen(q);
        widen(q + 1);
        return p;
    };
    for (int iter = 0; iter < 50; ++iter) {
        ChainComplex base = random_complex(rng);
        long q = static_cast<long>(rng() % 3) - 1;
        ChainComplex padded = pad_acyclic(base, q);
        REQUIRE(padded.validate());

        ChainMap f;
        f.source = base;
        f.target = padded;
        for (const auto& [deg, rk] : base.ranks) {
            IntMatrix part(static_cast<std::size_t>(padded.rank_at(deg)),
                           static_cast<std::size_t>(rk));
            for (long i = 0; i < rk; ++i) part(static_cast<std::size_t>(i),
                                               static_cast<std::size_t>(i)) = 1;
            f.set_part(deg, std::move(part));
        }
        REQUIRE(f.commutes());
        // conjugate both sides
        std::map<long, IntMatrix> us, ut;
        ChainMap g;
        g.source = conjugate(base, rng, us);
        g.target = conjugate(padded, rng, ut);
        for (const auto& [deg, rk] : base.ranks) {
            IntMatrix u = us.at(deg);
            IntMatrix v = ut.count(deg)
                              ? ut.at(deg)
                              : IntMatrix::identity(static_cast<std::size_t>(padded.rank_at(deg)));
            g.set_part(deg, v * f.part_at(deg) * unimodular_inverse(u));
        }
        REQUIRE(g.commutes());
        int scale_pick = static_cast<int>(rng() % 3);
        int scale = scale_pick == 0 ? 1 : (scale_pick == 1 ? 0 : 2);
        ChainMap h = g;
        h.parts.clear();
        for (const auto& [deg, part] : g.parts) h.set_part(deg, part.scaled(scale));
        REQUIRE(h.commutes());
        bool via_cone = is_quasi_iso(h);
        bool via_oracle = induces_homology_iso(h);
        CHECK(via_cone == via_oracle);
        if (via_cone == via_oracle) ++agree;
    }
    CHECK(agree == 50);
}

TEST_CASE("shift behaviour") {
    std::mt19937_64 rng(31);
    ChainComplex c = random_complex(rng);
    SECTION("shift by zero is the identity") { CHECK(shift(c, 0) == c); }
    SECTION("single module moves against the shift") {
        ChainComplex pt;
        pt.set_rank(0, 1);
        CHECK(shift(pt, 2).rank_at(-2) == 1);
    }
    SECTION("shifts compose additively, signs included") {
        CHECK(shift(shift(c, 1), 2) == shift(c, 3));
        CHECK(shift(shift(c, -2), 1) == shift(c, -1));
    }
    SECTION("homology reindexes") {
        GradedGroup h = homology(c);
        GradedGroup hs = homology(shift(c, 2));
        for (const auto& [q, part] : h.parts) CHECK(hs.at(q - 2) == part);
    }
}

TEST_CASE("hom duality") {
    SECTION("point complex is self dual") {
        ChainComplex pt;
        pt.set_rank(0, 1);
        ChainComplex d = dual_hom(pt, {1, {}});
        CHECK(d.rank_at(0) == 1);
        CHECK(homology(d).at(0).rank == 1);
    }
    SECTION("transpose of the punctured quadrant complex") {
        ChainComplex c;
        c.set_rank(1, 2);
        c.set_rank(2, 1);
        c.set_diff(1, IntMatrix{{1, -1}});
        ChainComplex d = dual_hom(c, {1, {}});
        CHECK(d.rank_at(-2) == 1);
        CHECK(d.rank_at(-1) == 2);
        GradedGroup h = homology(d);
        CHECK(h.at(-1).rank == 1);
        CHECK(h.at(-2).trivial());
    }
    SECTION("rank-two coefficients double everything") {
        ChainComplex c;
        c.set_rank(1, 2);
        c.set_rank(2, 1);
        c.set_diff(1, IntMatrix{{1, -1}});
        ChainComplex d1 = dual_hom(c, {1, {}});
        ChainComplex d2 = dual_hom(c, {2, {}});
        for (const auto& [q, r] : d1.ranks) CHECK(d2.rank_at(q) == 2 * r);
        GradedGroup h1 = homology(d1), h2 = homology(d2);
        for (const auto& [q, part] : h1.parts) CHECK(h2.at(q).rank == 2 * part.rank);
    }
    SECTION("torsion coefficients are rejected") {
        ChainComplex pt;
        pt.set_rank(0, 1);
        CHECK_THROWS_AS(dual_hom(pt, {1, {Int(2)}}), Error);
    }
    SECTION("double dual preserves graded homology ranks") {
        std::mt19937_64 rng(55);
        for (int iter = 0; iter < 20; ++iter) {
            ChainComplex c = random_complex(rng);
            ChainComplex dd = dual_hom(dual_hom(c, {1, {}}), {1, {}});
            GradedGroup h = homology(c), hh = homology(dd);
            for (const auto& [q, part] : h.parts) CHECK(hh.at(q).rank == part.rank);
            for (const auto& [q, part] : hh.parts) CHECK(h.at(q).rank == part.rank);
        }
    }
}
