// Acceptance gate: runs every numbered criterion and prints one line each.

#include "pineq/selftest.hpp"

#include <cstdio>

int main() {
    const auto outcome = pineq::run_selftest(24601);
    for (const auto& c : outcome.criteria)
        std::printf("criterion %2d: %s — %s (%s) [%.2f s]\n", c.index,
                    c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str(), c.seconds);
    std::printf("%s\n", outcome.all_passed ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return outcome.all_passed ? 0 : 1;
}
