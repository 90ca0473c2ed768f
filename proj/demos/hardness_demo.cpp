// Print trace-distance bounds for the structured hard instance over a small grid.

#include "loctest/loctest.hpp"

#include <cstdio>

using namespace loctest;

int main() {
    std::printf("%-3s %-6s %-12s %-12s %-12s %-12s\n", "N", "theta", "distance", "pair_bound", "tau_lhs", "tau_bound");
    for (std::size_t n : {1, 2, 3})
        for (double theta : {0.05, 0.1, 0.2}) {
            auto inst = hard_instance_theta(2, 4, theta);
            auto rep = verify_distance_bounds(twirled_pair(inst, n), inst);
            std::printf("%-3zu %-6.2f %-12.6f %-12.6f %-12.6f %-12.6f\n", n, theta, rep.full_distance, rep.lemma.rhs, rep.tau.lhs, rep.tau.rhs);
        }
    for (double eps : {0.05, 0.3}) {
        auto rows = purity_lower_bound_curve(eps, 10);
        std::printf("eps=%.2f S=10: F^2=%.6f, best success %.6f\n", eps, rows.back().fidelity_sq, rows.back().success_bound);
    }
    return 0;
}
