#ifndef EWENS_INVGEN_HPP
#define EWENS_INVGEN_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ewens/esf.hpp"
#include "ewens/rng.hpp"
#include "ewens/stats.hpp"

namespace ewens {

/// ceil(1 / (1 - alpha log 2)) below alpha = 1 / log 2, infinite from there on.
struct HValue {
    unsigned value = 0;
    bool infinite = false;

    [[nodiscard]] std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
    friend bool operator==(const HValue&, const HValue&) = default;
};

HValue h_of_alpha(double alpha);

/// Jump points (1 - 1/m) / log 2 for m = 2..max_m, followed by 1 / log 2.
std::vector<double> discontinuities_of_h(unsigned max_m);

/// Distance from alpha to the nearest jump point of h.
double distance_to_discontinuity(double alpha);

/// Fraction of trials in which m independent ESF(alpha, n) cycle types share a
/// fixed-set size in [lo, hi]. Permutation i of trial t draws from
/// rng.split(t).split(i), so raising m extends rather than resamples a trial.
Estimate estimate_common_fixed_prob(double alpha, std::size_t n, unsigned m, std::size_t lo, std::size_t hi,
                                    std::uint64_t trials, const Rng& rng);

/// Same experiment for m = 1..max_m from one coupled sample; entry m - 1 is
/// exactly nonincreasing in m.
std::vector<Estimate> common_fixed_curve(double alpha, std::size_t n, unsigned max_m, std::size_t lo, std::size_t hi,
                                         std::uint64_t trials, const Rng& rng);

/// Fraction of trials with the m-fold intersection of L(X^(i)[1..K]) meeting
/// [1, K] trivially.
Estimate estimate_sumset_trivial_prob(double alpha, unsigned m, std::size_t K, std::uint64_t trials, const Rng& rng);

/// Coupled version for m = 1..max_m; entry m - 1 is exactly nondecreasing in m.
std::vector<Estimate> sumset_trivial_curve(double alpha, unsigned max_m, std::size_t K, std::uint64_t trials,
                                           const Rng& rng);

enum class ScanMode { sumset, permutation };

struct ThresholdRow {
    double alpha = 0.0;
    unsigned m = 0;
    ScanMode mode = ScanMode::sumset;
    std::size_t window = 0;  // K in sumset mode, n in permutation mode
    Estimate estimate;       // P[trivial intersection] / P[no common fixed-set size in [1, n/2]]
    HValue h_alpha;
    bool near_discontinuity = false;
};

inline constexpr double kDefaultDiscontinuityMargin = 0.02;

/// One row per (alpha, m). The stream for each alpha is derived from its bit
/// pattern, so a row does not depend on the rest of the grid.
std::vector<ThresholdRow> scan_alpha(std::span<const double> alphas, std::span<const unsigned> ms, ScanMode mode,
                                     std::size_t window, std::uint64_t trials, const Rng& rng,
                                     double margin = kDefaultDiscontinuityMargin);

inline constexpr const char* kScanCsvHeader = "alpha,m,window,p_hat,ci_low,ci_high,trials,seed,h_alpha,flag";

/// Header plus one line per row; fixed column order, '.' decimal point.
void write_scan_csv(std::ostream& os, std::span<const ThresholdRow> rows);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// Exact invariable generation for small symmetric groups

inline constexpr std::size_t kMaxExactDegree = 6;

/// Subgroup lattice data of S_n, n <= kMaxExactDegree, computed once per n.
struct SubgroupCensus {
    std::size_t n = 0;
    std::size_t subgroup_count = 0;  // including trivial group and S_n
    std::size_t conjugacy_classes = 0;
    /// For every conjugacy class of proper subgroups: bit c set iff the
    /// subgroup contains an element of cycle type partitions[c].
    std::vector<std::uint64_t> proper_class_masks;
    std::vector<CycleType> partitions;
};

const SubgroupCensus& subgroup_census(std::size_t n);

/// True iff no proper subgroup of S_n meets every given conjugacy class.
/// Throws std::invalid_argument for n > 6, an empty list, or mixed degrees.
bool exact_invgen(std::span<const CycleType> classes);

}  // namespace ewens

#endif  // EWENS_INVGEN_HPP
