#pragma once

#include <string>
#include <vector>

#include "conecell/equivariant.hpp"

namespace conecell {

// Built-in fixtures: the complete rank-1 and rank-2 projective fans, the
// full orthant in rank 3, the two-cone closing example, and the periodic
// upper-half-plane fan with its unipotent Z-action.

struct FixtureInfo {
    std::string name;
    std::string kind;  // "fan" or "periodic"
    std::string description;
};

inline std::vector<FixtureInfo> fixture_list() {
    return {
        {"p1", "fan", "complete fan of the projective line; subset = both rays"},
        {"p2", "fan", "complete fan of the projective plane; subset = all nonzero cones"},
        {"orthant", "fan", "faces of the positive orthant in rank 3; subset = all nonzero"},
        {"facet-pair", "fan",
         "one 2-cone with a single facet; support contractible but not open"},
        {"tate", "periodic",
         "upper half plane fan, Z acting by the unipotent matrix [[1,1],[0,1]]"},
    };
}

namespace detail {

inline Cone make_cone(std::string id, std::vector<std::vector<long long>> rays) {
    Cone c;
    c.id = std::move(id);
    for (const auto& r : rays) {
        Ray ray;
        for (long long v : r) ray.emplace_back(v);
        c.rays.push_back(std::move(ray));
    }
    return c;
}

}  // namespace detail

struct FanFixture {
    Fan fan;
    std::vector<std::string> subset_ids;
};

inline FanFixture fixture_fan(const std::string& name) {
    FanFixture fx;
    if (name == "p1") {
        fx.fan = Fan(1);
        fx.fan.add_cone(detail::make_cone("rp", {{1}}));
        fx.fan.add_cone(detail::make_cone("rm", {{-1}}));
        fx.subset_ids = {"rp", "rm"};
    } else if (name == "p2") {
        fx.fan = Fan(2);
        fx.fan.add_cone(detail::make_cone("r0", {{1, 0}}));
        fx.fan.add_cone(detail::make_cone("r1", {{0, 1}}));
        fx.fan.add_cone(detail::make_cone("r2", {{-1, -1}}));
        fx.fan.add_cone(detail::make_cone("s01", {{1, 0}, {0, 1}}));
        fx.fan.add_cone(detail::make_cone("s12", {{0, 1}, {-1, -1}}));
        fx.fan.add_cone(detail::make_cone("s02", {{1, 0}, {-1, -1}}));
        fx.subset_ids = {"r0", "r1", "r2", "s01", "s12", "s02"};
    } else if (name == "orthant") {
        fx.fan = Fan(3);
        fx.fan.add_cone(detail::make_cone("r1", {{1, 0, 0}}));
        fx.fan.add_cone(detail::make_cone("r2", {{0, 1, 0}}));
        fx.fan.add_cone(detail::make_cone("r3", {{0, 0, 1}}));
        fx.fan.add_cone(detail::make_cone("s12", {{1, 0, 0}, {0, 1, 0}}));
        fx.fan.add_cone(detail::make_cone("s13", {{1, 0, 0}, {0, 0, 1}}));
        fx.fan.add_cone(detail::make_cone("s23", {{0, 1, 0}, {0, 0, 1}}));
        fx.fan.add_cone(detail::make_cone("s123", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
        fx.subset_ids = {"r1", "r2", "r3", "s12", "s13", "s23", "s123"};
    } else if (name == "facet-pair") {
        fx.fan = Fan(2);
        fx.fan.add_cone(detail::make_cone("rho1", {{1, 0}}));
        fx.fan.add_cone(detail::make_cone("rho2", {{0, 1}}));
        fx.fan.add_cone(detail::make_cone("sigma", {{1, 0}, {0, 1}}));
        fx.subset_ids = {"sigma", "rho1"};
    } else {
        fail("UNKNOWN_CONE_ID", "no fan fixture named " + name);
    }
    fx.fan.name = name;
    return fx;
}

inline PeriodicFan fixture_tate() {
    PeriodicFan pf;
    pf.name = "tate";
    pf.group.rank = 2;
    pf.group.generators.push_back(IntMatrix{{1, 1}, {0, 1}});
    pf.group.validate_generators();
    auto res = std::make_shared<GroupRingComplex>();
    res->set_rank(-1, 1);
    res->set_rank(0, 1);
    GroupRingMatrix d(1, 1);
    d.at(0, 0).add_term(pf.group.generators[0], Word{1}, Int(1));
    d.at(0, 0).add_term(IntMatrix::identity(2), Word{}, Int(-1));
    res->set_diff(-1, std::move(d));
    pf.group.resolution = std::move(res);
    pf.reps.push_back(detail::make_cone("rho0", {{0, 1}}));
    pf.reps.push_back(detail::make_cone("sigma0", {{0, 1}, {1, 1}}));
    pf.default_radius = 3;
    return pf;
}

}  // namespace conecell
