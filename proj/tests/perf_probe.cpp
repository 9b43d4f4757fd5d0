#include "test_support.hpp"
#include <chrono>
#include <iostream>

using namespace conecell;
using namespace conecell_test;

int main() {
    std::mt19937_64 rng(20260809);
    std::vector<Fan> fans;
    std::vector<ConeSubset> subsets;
    auto t0 = std::chrono::steady_clock::now();
    fans.reserve(200);
    for (int i = 0; i < 200; ++i) fans.push_back(random_smooth_fan(rng));
    for (int i = 0; i < 200; ++i) subsets.push_back(random_upward_closed(fans[i], rng));
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "gen: " << std::chrono::duration<double>(t1 - t0).count() << "s\n";
    size_t total_cones = 0, max_cones = 0, total_members = 0;
    for (int i = 0; i < 200; ++i) {
        total_cones += fans[i].cones().size();
        max_cones = std::max(max_cones, fans[i].cones().size());
        total_members += subsets[i].members.size();
    }
    std::cout << "avg cones " << total_cones / 200.0 << " max " << max_cones
              << " avg members " << total_members / 200.0 << "\n";

    int ok = 0;
    for (int i = 0; i < 200; ++i) {
        CoCellular cc = cocellular(subsets[i]);
        if (cc.cx.validate()) ++ok;
    }
    auto t2 = std::chrono::steady_clock::now();
    std::cout << "cocellular d2: " << ok << "/200 in "
              << std::chrono::duration<double>(t2 - t1).count() << "s\n";

    int ok2 = 0;
    size_t max_total_rank = 0;
    for (int i = 0; i < 200; ++i) {
        StarDoubleComplex sdc = star_double_complex(subsets[i]);
        size_t tr = 0;
        for (auto& [q, r] : sdc.total.ranks) tr += r;
        max_total_rank = std::max(max_total_rank, tr);
        if (sdc.columns_acyclic && sdc.diagonal.commutes() && is_quasi_iso(sdc.diagonal)) ++ok2;
    }
    auto t3 = std::chrono::steady_clock::now();
    std::cout << "double complex: " << ok2 << "/200 in "
              << std::chrono::duration<double>(t3 - t2).count()
              << "s, max total rank " << max_total_rank << "\n";

    int ok3 = 0, cnt3 = 0;
    for (int i = 0; i < 50; ++i) {
        for (int m : subsets[i].members) {
            FacetResolution fr = facet_resolution(subsets[i], m);
            ++cnt3;
            if (fr.cprime.validate() && fr.i_map.commutes() && is_quasi_iso(fr.i_map)) ++ok3;
        }
    }
    auto t4 = std::chrono::steady_clock::now();
    std::cout << "facet resolutions: " << ok3 << "/" << cnt3 << " in "
              << std::chrono::duration<double>(t4 - t3).count() << "s\n";
    return 0;
}
