// Localize a random two-copy qubit tester and compare it with the twirled tester on a few pure states.

#include "loctest/loctest.hpp"

#include <cstdio>

using namespace loctest;

int main() {
    Rng rng = stream_rng(42);
    Tester t(random_povm_element(16, rng), 2, 2);
    LocalTester local = localize(t);
    Tester twirled = twirl_tester(t);
    std::printf("%-6s %-14s %-14s %-10s\n", "state", "local", "twirled", "gap");
    for (int i = 0; i < 5; ++i) {
        Vector psi = haar_state(4, rng);
        Matrix rho = psi * psi.adjoint();
        const double a = acceptance(local, rho).value, b = acceptance(twirled, rho).value;
        std::printf("%-6d %-14.10f %-14.10f %-10.2e\n", i, a, b, std::abs(a - b));
    }
    Tester hat = locc_tester(t);
    Matrix mixed = random_density(4, rng);
    auto sim = simulate_one_way_locc(t, mixed, 20000, 7);
    std::printf("one-way LOCC on a mixed state: exact %.6f, simulated %.6f\n", acceptance(hat, mixed).value, sim.acceptance);
    return 0;
}
