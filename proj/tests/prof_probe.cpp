#include "test_support.hpp"
#include <chrono>
#include <iostream>

using namespace conecell;
using namespace conecell_test;

int main() {
    std::mt19937_64 rng(20260809);
    double t_fm = 0, t_ext = 0, t_form = 0;
    int n_fm = 0;
    // replicate generation loop with timers
    for (int f = 0; f < 200; ++f) {
        std::uniform_int_distribution<std::size_t> rank_dist(1, 4);
        std::size_t n = rank_dist(rng);
        Fan fan(n);
        int next_id = 0;
        std::uniform_int_distribution<int> attempts_dist(3, 12);
        int attempts = attempts_dist(rng);
        for (int a = 0; a < attempts && fan.cones().size() < 40; ++a) {
            std::vector<Ray> base;
            if (!fan.cones().empty() && rng() % 2 == 0) {
                const Cone& b = fan.cone(static_cast<int>(rng() % fan.cones().size()));
                if (b.dim() < n) base = b.rays;
            }
            Ray r = random_primitive_ray(rng, n);
            if (std::find(base.begin(), base.end(), r) != base.end()) continue;
            std::vector<Ray> rays = base;
            rays.push_back(r);
            auto c0 = std::chrono::steady_clock::now();
            bool ext = is_basis_extendable(rays);
            auto c1 = std::chrono::steady_clock::now();
            t_ext += std::chrono::duration<double>(c1 - c0).count();
            if (!ext) continue;
            std::vector<Ray> sorted = sorted_rays(rays);
            if (fan.index_of_rays(sorted) >= 0) continue;
            std::size_t load = 0;
            for (const Cone& c : fan.cones())
                if (std::find(c.rays.begin(), c.rays.end(), r) != c.rays.end()) ++load;
            if (load >= 5) continue;
            bool compatible = true;
            for (const Cone& e : fan.cones()) {
                bool is_max = true;
                for (const Cone& e2 : fan.cones())
                    if (e2.rays.size() > e.rays.size() &&
                        std::includes(e2.rays.begin(), e2.rays.end(), e.rays.begin(), e.rays.end())) { is_max = false; break; }
                if (!is_max) continue;
                std::vector<Ray> common;
                std::set_intersection(sorted.begin(), sorted.end(), e.rays.begin(), e.rays.end(),
                                      std::back_inserter(common), ray_less);
                if (common.size() == sorted.size() || common.size() == e.rays.size()) continue;
                auto c2 = std::chrono::steady_clock::now();
                bool ok = cone_overlap_is_face(n, sorted, e.rays, common);
                auto c3 = std::chrono::steady_clock::now();
                t_fm += std::chrono::duration<double>(c3 - c2).count();
                ++n_fm;
                if (!ok) { compatible = false; break; }
            }
            if (!compatible) continue;
            std::size_t k = sorted.size();
            for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
                std::vector<Ray> sub;
                for (std::size_t b = 0; b < k; ++b)
                    if (mask & (std::size_t(1) << b)) sub.push_back(sorted[b]);
                if (fan.index_of_rays(sub) < 0) {
                    Cone c;
                    c.id = "c" + std::to_string(next_id++);
                    c.rays = sub;
                    fan.add_cone(std::move(c));
                }
            }
        }
    }
    std::cout << "basis_ext total " << t_ext << "s, overlap total " << t_fm << "s over "
              << n_fm << " calls\n";
    return 0;
}
