#ifndef EWENS_ACCEPTANCE_HPP
#define EWENS_ACCEPTANCE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ewens {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr std::uint64_t kAcceptanceSeed = 2718281828ULL;

/// Runs criteria C1..C12 in order, printing one line per criterion to `out`
/// as it finishes. `only` restricts the run to the listed ids (empty = all).
std::vector<CriterionResult> run_acceptance(std::ostream& out, std::uint64_t seed = kAcceptanceSeed,
                                            const std::vector<int>& only = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace ewens

#endif  // EWENS_ACCEPTANCE_HPP
