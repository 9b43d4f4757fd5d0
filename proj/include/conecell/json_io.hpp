#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conecell/cellular.hpp"
#include "conecell/equivariant.hpp"

namespace conecell {

using Json = nlohmann::ordered_json;

/* integers: numbers up to 53 bits, decimal strings beyond */

inline Json int_to_json(const Int& v) {
    static const Int kLimit = Int(1) << 53;
    if (v < kLimit && v > -kLimit) return Json(static_cast<long long>(v));
    return Json(v.str());
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail("SCHEMA_ERROR", "expected an integer or decimal string");
}

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const Json& j, std::optional<std::size_t> want_cols = {}) {
    if (!j.is_array()) fail("SCHEMA_ERROR", "matrix must be an array of rows");
    std::size_t rows = j.size();
    std::size_t cols = want_cols.value_or(rows ? j[0].size() : 0);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            fail("SCHEMA_ERROR", "ragged matrix row " + std::to_string(i));
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = int_from_json(j[i][k]);
    }
    return m;
}

/* fans */

struct ParsedFan {
    Fan fan;
    std::optional<std::vector<std::string>> subset_ids;
    std::vector<std::string> warnings;
};

inline ParsedFan fan_from_json(const Json& j) {
    ParsedFan out;
    if (!j.contains("rank")) fail("SCHEMA_ERROR", "fan is missing field: rank");
    out.fan = Fan(j.at("rank").get<std::size_t>());
    if (j.contains("name")) out.fan.name = j.at("name").get<std::string>();
    if (!j.contains("cones")) fail("SCHEMA_ERROR", "fan is missing field: cones");
    for (const Json& cj : j.at("cones")) {
        Cone c;
        if (!cj.contains("id")) fail("SCHEMA_ERROR", "cone is missing field: id");
        c.id = cj.at("id").get<std::string>();
        if (c.id == "0") fail("SCHEMA_ERROR", "the zero cone is implicit and must not be listed");
        if (!cj.contains("rays") || cj.at("rays").empty())
            fail("SCHEMA_ERROR", "cone " + c.id + " must list at least one ray");
        for (const Json& rj : cj.at("rays")) {
            Ray r;
            for (const Json& v : rj) r.push_back(int_from_json(v));
            if (!make_primitive(r))
                out.warnings.push_back("normalized non-primitive ray in cone " + c.id);
            c.rays.push_back(std::move(r));
        }
        out.fan.add_cone(std::move(c));
    }
    if (j.contains("subset")) {
        std::vector<std::string> ids;
        for (const Json& s : j.at("subset")) ids.push_back(s.get<std::string>());
        out.subset_ids = std::move(ids);
    }
    return out;
}

inline Json fan_to_json(const Fan& f, const std::optional<ConeSubset>& subset = {}) {
    Json j;
    j["rank"] = f.rank();
    Json cones = Json::array();
    for (const Cone& c : f.cones()) {
        Json cj;
        cj["id"] = c.id;
        Json rays = Json::array();
        for (const Ray& r : c.rays) {
            Json rj = Json::array();
            for (const Int& v : r) rj.push_back(int_to_json(v));
            rays.push_back(std::move(rj));
        }
        cj["rays"] = std::move(rays);
        cones.push_back(std::move(cj));
    }
    j["cones"] = std::move(cones);
    if (subset) {
        Json ids = Json::array();
        for (int m : subset->members) ids.push_back(f.cone(m).id);
        j["subset"] = std::move(ids);
    }
    if (!f.name.empty()) j["name"] = f.name;
    return j;
}

/* chain complexes and graded groups */

inline Json complex_to_json(const ChainComplex& c) {
    Json j;
    Json degrees;
    for (const auto& [q, r] : c.ranks) degrees[std::to_string(q)] = r;
    j["degrees"] = std::move(degrees);
    Json diffs;
    for (const auto& [q, m] : c.diffs) diffs[std::to_string(q)] = matrix_to_json(m);
    j["differentials"] = std::move(diffs);
    return j;
}

inline ChainComplex complex_from_json(const Json& j) {
    ChainComplex c;
    if (!j.contains("degrees")) fail("SCHEMA_ERROR", "complex is missing field: degrees");
    for (const auto& [k, v] : j.at("degrees").items())
        c.set_rank(std::stol(k), v.get<long>());
    if (j.contains("differentials"))
        for (const auto& [k, v] : j.at("differentials").items()) {
            long q = std::stol(k);
            c.set_diff(q, matrix_from_json(v, static_cast<std::size_t>(c.rank_at(q))));
        }
    return c;
}

inline Json graded_to_json(const GradedGroup& g) {
    Json j = Json::object();
    for (const auto& [q, part] : g.parts) {
        Json p;
        p["rank"] = part.rank;
        Json tor = Json::array();
        for (const Int& t : part.torsion) tor.push_back(int_to_json(t));
        p["torsion"] = std::move(tor);
        j[std::to_string(q)] = std::move(p);
    }
    return j;
}

inline std::string group_at_degree_str(const GroupAtDegree& g) {
    if (g.trivial()) return "0";
    std::string s;
    if (g.rank == 1)
        s = "Z";
    else if (g.rank > 1)
        s = "Z^" + std::to_string(g.rank);
    for (const Int& t : g.torsion) {
        if (!s.empty()) s += " + ";
        s += "Z/" + t.str();
    }
    return s;
}

/* groups, representations, periodic fans */

inline Json word_to_json(const Word& w) {
    Json j = Json::array();
    for (int g : w) j.push_back(g);
    return j;
}

inline Word word_from_json(const Json& j) {
    Word w;
    for (const Json& v : j) w.push_back(v.get<int>());
    return w;
}

inline Json ring_element_to_json(const GroupRingElement& e) {
    Json j = Json::array();
    for (const auto& [k, t] : e.terms) {
        Json term;
        term["word"] = word_to_json(t.first);
        term["coeff"] = int_to_json(t.second);
        j.push_back(std::move(term));
    }
    return j;
}

inline GroupRingElement ring_element_from_json(const Json& j, const GroupData& g) {
    GroupRingElement e;
    for (const Json& term : j) {
        Word w = word_from_json(term.at("word"));
        e.add_term(g.evaluate(w), w, int_from_json(term.at("coeff")));
    }
    return e;
}

inline Json ring_complex_to_json(const GroupRingComplex& c) {
    Json j;
    Json degrees;
    for (const auto& [q, r] : c.ranks) degrees[std::to_string(q)] = r;
    j["degrees"] = std::move(degrees);
    Json diffs;
    for (const auto& [q, m] : c.diffs) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < m.rows; ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < m.cols; ++k)
                row.push_back(ring_element_to_json(m.at(i, k)));
            rows.push_back(std::move(row));
        }
        diffs[std::to_string(q)] = std::move(rows);
    }
    j["differentials"] = std::move(diffs);
    if (!c.augmentation.empty()) {
        Json aug = Json::array();
        for (const GroupRingElement& e : c.augmentation) aug.push_back(ring_element_to_json(e));
        j["augmentation"] = std::move(aug);
    }
    return j;
}

inline GroupRingComplex ring_complex_from_json(const Json& j, const GroupData& g) {
    GroupRingComplex c;
    if (!j.contains("degrees")) fail("SCHEMA_ERROR", "resolution is missing field: degrees");
    for (const auto& [k, v] : j.at("degrees").items())
        c.set_rank(std::stol(k), v.get<long>());
    if (j.contains("differentials"))
        for (const auto& [k, v] : j.at("differentials").items()) {
            long q = std::stol(k);
            GroupRingMatrix m(static_cast<std::size_t>(c.rank_at(q + 1)),
                              static_cast<std::size_t>(c.rank_at(q)));
            if (v.size() != m.rows) fail("SCHEMA_ERROR", "resolution differential row count");
            for (std::size_t i = 0; i < m.rows; ++i) {
                if (v[i].size() != m.cols)
                    fail("SCHEMA_ERROR", "resolution differential column count");
                for (std::size_t k2 = 0; k2 < m.cols; ++k2)
                    m.at(i, k2) = ring_element_from_json(v[i][k2], g);
            }
            c.set_diff(q, std::move(m));
        }
    if (j.contains("augmentation"))
        for (const Json& e : j.at("augmentation"))
            c.augmentation.push_back(ring_element_from_json(e, g));
    return c;
}

inline Json group_to_json(const GroupData& g) {
    Json j;
    j["rank"] = g.rank;
    Json gens = Json::array();
    for (const IntMatrix& m : g.generators) gens.push_back(matrix_to_json(m));
    j["generators"] = std::move(gens);
    if (!g.relations.empty()) {
        Json rels = Json::array();
        for (const Word& w : g.relations) rels.push_back(word_to_json(w));
        j["relations"] = std::move(rels);
    }
    if (g.resolution) j["resolution"] = ring_complex_to_json(*g.resolution);
    return j;
}

inline GroupData group_from_json(const Json& j) {
    GroupData g;
    if (!j.contains("rank")) fail("SCHEMA_ERROR", "group is missing field: rank");
    g.rank = j.at("rank").get<std::size_t>();
    if (j.contains("generators"))
        for (const Json& m : j.at("generators"))
            g.generators.push_back(matrix_from_json(m, g.rank));
    if (j.contains("relations"))
        for (const Json& w : j.at("relations")) g.relations.push_back(word_from_json(w));
    g.validate_generators();
    if (j.contains("resolution"))
        g.resolution =
            std::make_shared<GroupRingComplex>(ring_complex_from_json(j.at("resolution"), g));
    return g;
}

inline Json representation_to_json(const Representation& r) {
    Json j;
    j["rank"] = r.rank;
    Json mats = Json::array();
    for (const IntMatrix& m : r.matrices) mats.push_back(matrix_to_json(m));
    j["matrices"] = std::move(mats);
    return j;
}

inline Representation representation_from_json(const Json& j) {
    Representation r;
    if (!j.contains("rank")) fail("SCHEMA_ERROR", "representation is missing field: rank");
    r.rank = j.at("rank").get<std::size_t>();
    if (j.contains("matrices"))
        for (const Json& m : j.at("matrices")) r.matrices.push_back(matrix_from_json(m, r.rank));
    r.prepare();
    return r;
}

inline Json periodic_to_json(const PeriodicFan& pf) {
    Json j;
    j["group"] = group_to_json(pf.group);
    Json reps = Json::array();
    for (const Cone& c : pf.reps) {
        Json cj;
        cj["id"] = c.id;
        Json rays = Json::array();
        for (const Ray& r : c.rays) {
            Json rj = Json::array();
            for (const Int& v : r) rj.push_back(int_to_json(v));
            rays.push_back(std::move(rj));
        }
        cj["rays"] = std::move(rays);
        reps.push_back(std::move(cj));
    }
    j["reps"] = std::move(reps);
    j["default_radius"] = pf.default_radius;
    if (!pf.name.empty()) j["name"] = pf.name;
    return j;
}

inline PeriodicFan periodic_from_json(const Json& j) {
    PeriodicFan pf;
    if (!j.contains("group")) fail("SCHEMA_ERROR", "periodic fan is missing field: group");
    pf.group = group_from_json(j.at("group"));
    if (!j.contains("reps")) fail("SCHEMA_ERROR", "periodic fan is missing field: reps");
    for (const Json& cj : j.at("reps")) {
        Cone c;
        c.id = cj.at("id").get<std::string>();
        for (const Json& rj : cj.at("rays")) {
            Ray r;
            for (const Json& v : rj) r.push_back(int_from_json(v));
            make_primitive(r);
            c.rays.push_back(std::move(r));
        }
        c.rays = sorted_rays(std::move(c.rays));
        pf.reps.push_back(std::move(c));
    }
    if (j.contains("default_radius")) pf.default_radius = j.at("default_radius").get<std::size_t>();
    if (j.contains("name")) pf.name = j.at("name").get<std::string>();
    return pf;
}

/* files */

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IO_ERROR", "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail("PARSE_ERROR", std::string(e.what()) + " in " + path);
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail("IO_ERROR", "cannot open " + path + " for writing");
    out << text;
    if (!out) fail("IO_ERROR", "write failed for " + path);
}

// DOT digraph of the face poset restricted to the subset: nodes labeled
// id:dim, edges are facet relations, deterministic order.
inline std::string face_poset_dot(const ConeSubset& t) {
    const Fan& f = *t.fan;
    std::ostringstream os;
    os << "digraph face_poset {\n";
    for (int m : t.members)
        os << "  \"" << f.cone(m).id << "\" [label=\"" << f.cone(m).id << ":"
           << f.cone(m).dim() << "\"];\n";
    for (int m : t.members)
        for (int h : t.members)
            if (f.cone(h).dim() == f.cone(m).dim() + 1 && f.is_face_of(m, h))
                os << "  \"" << f.cone(m).id << "\" -> \"" << f.cone(h).id << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace conecell
