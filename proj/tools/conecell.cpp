// conecell - batch interface for the fan / cellular-complex toolkit.
//
// Exit codes: 0 success or certified match, 2 certified mismatch or failed
// verification, 1 input or usage error.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conecell/fixtures.hpp"
#include "conecell/json_io.hpp"

using namespace conecell;

namespace {

struct FanInput {
    Fan fan;
    std::optional<std::vector<std::string>> subset_ids;
    std::vector<std::string> warnings;
};

FanInput load_fan(const std::string& spec) {
    if (!std::filesystem::exists(spec)) {
        for (const FixtureInfo& fi : fixture_list())
            if (fi.name == spec && fi.kind == "fan") {
                FanFixture fx = fixture_fan(spec);
                return {std::move(fx.fan), fx.subset_ids, {}};
            }
        fail("IO_ERROR", "no such file or fan fixture: " + spec);
    }
    ParsedFan p = fan_from_json(load_json_file(spec));
    return {std::move(p.fan), p.subset_ids, p.warnings};
}

PeriodicFan load_periodic(const std::string& spec) {
    if (!std::filesystem::exists(spec)) {
        if (spec == "tate") return fixture_tate();
        fail("IO_ERROR", "no such file or periodic fixture: " + spec);
    }
    return periodic_from_json(load_json_file(spec));
}

Representation load_rep(const std::string& spec, std::size_t gens) {
    if (spec.empty()) return trivial_representation(gens, 1);
    return representation_from_json(load_json_file(spec));
}

ConeSubset pick_subset(const FanInput& in, const std::vector<std::string>& override_ids) {
    if (!override_ids.empty()) return subset_from_ids(in.fan, override_ids);
    if (in.subset_ids) return subset_from_ids(in.fan, *in.subset_ids);
    return subset_all_nonzero(in.fan);
}

void emit(const Json& j, bool as_json, const std::string& human, const std::string& out_path) {
    std::string text = as_json ? j.dump(2) + "\n" : human;
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

std::string graded_human(const GradedGroup& g) {
    if (g.parts.empty()) return "  (trivial)\n";
    std::string s;
    for (const auto& [q, part] : g.parts)
        s += "  degree " + std::to_string(q) + ": " + group_at_degree_str(part) + "\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cellular complexes of smooth polyhedral fans"};
    app.require_subcommand(1);

    std::string fan_spec, periodic_spec, group_spec, rep_spec, out_path, tau_id, emit_dir;
    std::vector<std::string> subset_ids;
    bool as_json = false;
    std::size_t radius = 0, word_bound = kDefaultFreenessBound, samples = 0;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", as_json, "machine readable JSON output");
        cmd->add_option("--out", out_path, "write the report to a file");
    };

    auto* c_fixtures = app.add_subcommand("fixtures", "list built-in fixtures");
    c_fixtures->add_option("--emit", emit_dir, "write fixture JSON files into a directory");
    add_common(c_fixtures);

    auto* c_validate = app.add_subcommand("validate", "validate a fan and its subset");
    c_validate->add_option("--fan", fan_spec, "fan JSON file or fixture name")->required();
    c_validate->add_option("--subset", subset_ids, "override subset cone ids");
    c_validate->add_option("--samples", samples, "openness direction samples");
    c_validate->add_option("--seed", seed, "sampling seed");
    add_common(c_validate);

    auto* c_cellular = app.add_subcommand("cellular", "homology of the orientation complex");
    c_cellular->add_option("--fan", fan_spec)->required();
    c_cellular->add_option("--subset", subset_ids);
    add_common(c_cellular);

    auto* c_cech = app.add_subcommand("cech", "homology of the covering nerve");
    c_cech->add_option("--fan", fan_spec)->required();
    c_cech->add_option("--subset", subset_ids);
    add_common(c_cech);

    auto* c_compare = app.add_subcommand("compare-2pb",
                                         "compare the orientation complex with the shifted nerve");
    c_compare->add_option("--fan", fan_spec)->required();
    c_compare->add_option("--subset", subset_ids);
    add_common(c_compare);

    auto* c_2pc = app.add_subcommand("check-2pc", "star double complex certification");
    c_2pc->add_option("--fan", fan_spec)->required();
    c_2pc->add_option("--subset", subset_ids);
    add_common(c_2pc);

    auto* c_2na = app.add_subcommand("cprime-2na", "facet resolution certification");
    c_2na->add_option("--fan", fan_spec)->required();
    c_2na->add_option("--subset", subset_ids);
    c_2na->add_option("--tau", tau_id, "certify one cone only");
    add_common(c_2na);

    auto* c_eq = app.add_subcommand("equivariant", "equivariant orientation complex");
    c_eq->add_option("--periodic", periodic_spec)->required();
    c_eq->add_option("--rep", rep_spec, "specialize through a representation file");
    c_eq->add_option("--word-bound", word_bound, "freeness certificate word length");
    add_common(c_eq);

    auto* c_gc = app.add_subcommand("group-cohomology", "cohomology from a free resolution");
    c_gc->add_option("--group", group_spec)->required();
    c_gc->add_option("--rep", rep_spec);
    bool coinv = false;
    c_gc->add_flag("--coinvariants", coinv, "report co-invariants homology instead");
    add_common(c_gc);

    auto* c_2main = app.add_subcommand("check-2main-c", "equivariant consistency check");
    c_2main->add_option("--periodic", periodic_spec)->required();
    c_2main->add_option("--rep", rep_spec);
    add_common(c_2main);

    auto* c_dot = app.add_subcommand("dot", "face poset of the subset as a DOT digraph");
    c_dot->add_option("--fan", fan_spec)->required();
    c_dot->add_option("--subset", subset_ids);
    c_dot->add_option("--radius", radius, "window radius for periodic input");
    c_dot->add_option("--periodic", periodic_spec, "periodic fan instead of a finite one");
    c_dot->add_option("--out", out_path, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_fixtures)) {
            Json j = Json::array();
            std::string human;
            for (const FixtureInfo& fi : fixture_list()) {
                Json e;
                e["name"] = fi.name;
                e["kind"] = fi.kind;
                e["description"] = fi.description;
                j.push_back(std::move(e));
                human += fi.name + "  (" + fi.kind + ")  " + fi.description + "\n";
            }
            if (!emit_dir.empty()) {
                std::filesystem::create_directories(emit_dir);
                for (const FixtureInfo& fi : fixture_list()) {
                    std::string path = emit_dir + "/" + fi.name + ".json";
                    if (fi.kind == "fan") {
                        FanFixture fx = fixture_fan(fi.name);
                        ConeSubset t = subset_from_ids(fx.fan, fx.subset_ids);
                        write_text_file(path, fan_to_json(fx.fan, t).dump(2) + "\n");
                    } else {
                        write_text_file(path, periodic_to_json(fixture_tate()).dump(2) + "\n");
                    }
                }
            }
            emit(j, as_json, human, out_path);
            return 0;
        }

        if (app.got_subcommand(c_validate)) {
            FanInput in = load_fan(fan_spec);
            ValidationReport rep = validate_fan(in.fan);
            for (const std::string& w : in.warnings) rep.warnings.push_back({"NON_PRIMITIVE_RAY", w});
            Json j;
            j["valid"] = rep.valid();
            Json errs = Json::array();
            for (const auto& e : rep.errors) errs.push_back({{"code", e.code}, {"detail", e.detail}});
            j["errors"] = errs;
            Json warns = Json::array();
            for (const auto& w : rep.warnings)
                warns.push_back({{"code", w.code}, {"detail", w.detail}});
            j["warnings"] = warns;
            std::string human = std::string("fan: ") + (rep.valid() ? "valid" : "INVALID") + "\n";
            for (const auto& e : rep.errors) human += "  error " + e.code + ": " + e.detail + "\n";
            for (const auto& w : rep.warnings)
                human += "  warning " + w.code + ": " + w.detail + "\n";
            bool fail_exit = !rep.valid();
            if (rep.valid() && (in.subset_ids || !subset_ids.empty())) {
                ConeSubset t = pick_subset(in, subset_ids);
                bool alpha = check_alpha(t);
                j["alpha"] = alpha;
                j["gamma"] = check_gamma(t);
                human += std::string("subset alpha: ") + (alpha ? "true" : "false") + "\n";
                if (alpha) {
                    SupportInfo sup = support(t);
                    j["support"] = {{"d", sup.d},
                                    {"open_in_span", sup.open_in_span},
                                    {"homology_point", sup.homology_point}};
                    human += "support: d=" + std::to_string(sup.d) +
                             " open_in_span=" + (sup.open_in_span ? "true" : "false") +
                             " homology_point=" + (sup.homology_point ? "true" : "false") + "\n";
                    if (samples > 0) {
                        OpennessSample os = sample_openness(t, sup, samples, seed);
                        j["openness_samples"] = {{"samples", os.samples},
                                                 {"failures", os.failures}};
                        human += "openness samples: " + std::to_string(os.samples) +
                                 ", failures: " + std::to_string(os.failures) + "\n";
                        if (sup.open_in_span && os.failures > 0) fail_exit = true;
                    }
                } else {
                    fail_exit = true;
                }
            }
            emit(j, as_json, human, out_path);
            return fail_exit ? 2 : 0;
        }

        if (app.got_subcommand(c_cellular)) {
            FanInput in = load_fan(fan_spec);
            ConeSubset t = pick_subset(in, subset_ids);
            GradedGroup h = homology(cocellular(t).cx);
            emit(graded_to_json(h), as_json, "orientation complex homology:\n" + graded_human(h),
                 out_path);
            return 0;
        }

        if (app.got_subcommand(c_cech)) {
            FanInput in = load_fan(fan_spec);
            ConeSubset t = pick_subset(in, subset_ids);
            GradedGroup h = cech_homology(t);
            emit(graded_to_json(h), as_json, "nerve homology:\n" + graded_human(h), out_path);
            return 0;
        }

        if (app.got_subcommand(c_compare)) {
            FanInput in = load_fan(fan_spec);
            ConeSubset t = pick_subset(in, subset_ids);
            ComparisonReport rep = compare_with_nerve(t);
            Json j;
            j["open_in_span"] = rep.open_in_span;
            j["d"] = rep.d;
            j["homology_match"] = rep.homology_match;
            j["chain_map_certified"] = rep.chain_map_certified;
            std::string human =
                "open_in_span=" + std::string(rep.open_in_span ? "true" : "false") +
                " d=" + std::to_string(rep.d) +
                " homology_match=" + (rep.homology_match ? "true" : "false") +
                " chain_map_certified=" + (rep.chain_map_certified ? "true" : "false") + "\n" +
                "orientation complex homology:\n" + graded_human(rep.cocellular_homology) +
                "shifted nerve homology:\n" + graded_human(rep.nerve_homology_shifted);
            emit(j, as_json, human, out_path);
            return rep.homology_match ? 0 : 2;
        }

        if (app.got_subcommand(c_2pc)) {
            FanInput in = load_fan(fan_spec);
            ConeSubset t = pick_subset(in, subset_ids);
            StarDoubleComplex sdc = star_double_complex(t);
            bool qiso = sdc.diagonal.commutes() && is_quasi_iso(sdc.diagonal);
            Json j;
            j["columns_acyclic"] = sdc.columns_acyclic;
            j["diagonal_quasi_iso"] = qiso;
            std::string human =
                "columns_acyclic=" + std::string(sdc.columns_acyclic ? "true" : "false") +
                " diagonal_quasi_iso=" + (qiso ? "true" : "false") + "\n";
            emit(j, as_json, human, out_path);
            return (sdc.columns_acyclic && qiso) ? 0 : 2;
        }

        if (app.got_subcommand(c_2na)) {
            FanInput in = load_fan(fan_spec);
            ConeSubset t = pick_subset(in, subset_ids);
            Json j = Json::array();
            std::string human;
            bool all_ok = true;
            for (int m : t.members) {
                const std::string& id = in.fan.cone(m).id;
                if (!tau_id.empty() && id != tau_id) continue;
                FacetResolution fr = facet_resolution(t, m);
                bool ok = fr.cprime.validate() && fr.i_map.commutes() && is_quasi_iso(fr.i_map);
                all_ok = all_ok && ok;
                j.push_back({{"tau", id}, {"quasi_iso", ok}});
                human += "tau " + id + ": " + (ok ? "quasi-iso certified" : "FAILED") + "\n";
            }
            emit(j, as_json, human, out_path);
            return all_ok ? 0 : 2;
        }

        if (app.got_subcommand(c_eq)) {
            PeriodicFan pf = load_periodic(periodic_spec);
            GroupRingComplex eq = equivariant_cocellular(pf, word_bound);
            if (rep_spec.empty()) {
                Json j = ring_complex_to_json(eq);
                emit(j, as_json, j.dump(2) + "\n", out_path);
            } else {
                Representation rep = load_rep(rep_spec, pf.group.generators.size());
                ChainComplex c = specialize(eq, rep);
                Json j;
                j["complex"] = complex_to_json(c);
                j["homology"] = graded_to_json(homology(c));
                emit(j, as_json, "specialized homology:\n" + graded_human(homology(c)), out_path);
            }
            return 0;
        }

        if (app.got_subcommand(c_gc)) {
            GroupData g = group_from_json(load_json_file(group_spec));
            validate_resolution(g);
            Representation rep = load_rep(rep_spec, g.generators.size());
            GradedGroup h = coinv ? coinvariants_homology(g, rep) : group_cohomology(g, rep);
            emit(graded_to_json(h), as_json,
                 std::string(coinv ? "co-invariants homology" : "group cohomology") + ":\n" +
                     graded_human(h),
                 out_path);
            return 0;
        }

        if (app.got_subcommand(c_2main)) {
            PeriodicFan pf = load_periodic(periodic_spec);
            Representation rep = load_rep(rep_spec, pf.group.generators.size());
            ConsistencyReport cr = quotient_consistency_check(pf, rep);
            Json j;
            j["match"] = cr.match;
            Json degs = Json::object();
            for (const auto& [q, part] : cr.invariants_side.parts)
                degs[std::to_string(q)] = group_at_degree_str(part);
            j["degrees"] = std::move(degs);
            std::string human = std::string("match=") + (cr.match ? "true" : "false") + "\n" +
                                "invariants side:\n" + graded_human(cr.invariants_side) +
                                "cohomology side (shifted):\n" + graded_human(cr.cohomology_side);
            emit(j, as_json, human, out_path);
            return cr.match ? 0 : 2;
        }

        if (app.got_subcommand(c_dot)) {
            if (!periodic_spec.empty()) {
                PeriodicFan pf = load_periodic(periodic_spec);
                Window w = materialize_window(pf, radius ? radius : pf.default_radius);
                ConeSubset t = w.subset();
                write_text_file(out_path, face_poset_dot(t));
            } else {
                FanInput in = load_fan(fan_spec);
                ConeSubset t = pick_subset(in, subset_ids);
                if (!check_alpha(t)) fail("ALPHA_VIOLATED", "subset is not upward closed");
                write_text_file(out_path, face_poset_dot(t));
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
