#include "conecell/fixtures.hpp"
#include "conecell/json_io.hpp"
#include <iostream>

using namespace conecell;

int main() {
    auto fx = fixture_fan("p2");
    ConeSubset t = subset_from_ids(fx.fan, fx.subset_ids);
    SupportInfo sup = support(t);
    std::cout << "span basis:\n";
    for (auto& b : sup.span_basis) {
        for (auto& v : b) std::cout << v << " ";
        std::cout << "\n";
    }
    for (size_t i = 0; i < fx.fan.cones().size(); ++i)
        std::cout << i << " = " << fx.fan.cone(i).id << " dim " << fx.fan.cone(i).dim() << "\n";
    ComparisonReport rep = compare_with_nerve(t);
    if (rep.comparison) {
        const ChainMap& phi = *rep.comparison;
        std::cout << "commutes=" << phi.commutes() << "\n";
        // print parts and check squares
        for (auto& [q, m] : phi.parts) {
            std::cout << "part " << q << ":\n" << matrix_to_json(m).dump() << "\n";
        }
        for (long q = -3; q <= 3; ++q) {
            IntMatrix lhs = phi.target.diff_at(q) * phi.part_at(q);
            IntMatrix rhs = phi.part_at(q + 1) * phi.source.diff_at(q);
            if (!(lhs == rhs)) {
                std::cout << "square fails at q=" << q << "\nlhs=" << matrix_to_json(lhs).dump()
                          << "\nrhs=" << matrix_to_json(rhs).dump() << "\n";
                std::cout << "target diff " << matrix_to_json(phi.target.diff_at(q)).dump() << "\n";
                std::cout << "source diff " << matrix_to_json(phi.source.diff_at(q)).dump() << "\n";
            }
        }
        std::cout << "source labels:\n";
        for (auto& [q, l] : phi.source.labels) {
            std::cout << q << ": ";
            for (auto& s : l) std::cout << s << " , ";
            std::cout << "\n";
        }
        std::cout << "target labels:\n";
        for (auto& [q, l] : phi.target.labels) {
            std::cout << q << ": ";
            for (auto& s : l) std::cout << s << " , ";
            std::cout << "\n";
        }
    } else {
        std::cout << "no comparison built (counts failed)\n";
    }
    return 0;
}
