// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "ewens/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
    const auto results = ewens::run_acceptance(std::cout, ewens::kAcceptanceSeed, only);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << results.size() - failed << '/' << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
