#ifndef EWENS_STATS_HPP
#define EWENS_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace ewens {

/// Monte Carlo proportion with a Wilson 95% score interval.
struct Estimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t successes = 0;

    [[nodiscard]] double standard_error() const;
    [[nodiscard]] double ci_width() const { return ci_high - ci_low; }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Throws std::invalid_argument when trials == 0 or successes > trials.
Estimate wilson_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed, double z = kZ95);

/// Sample mean with its standard error.
struct MeanEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

/// Streaming first and second moments; merge-able across chunks.
struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    [[nodiscard]] MeanEstimate estimate() const;
};

/// Pearson chi-square goodness of fit of integer samples against Poisson(mean).
/// Cells are 0, 1, ..., with the upper tail pooled so that every expected count
/// is at least `min_expected`.
struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

ChiSquareResult poisson_chi_square(std::span<const std::uint64_t> histogram, double mean, double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int dof);

/// Least-squares slope of log(y) on log(x). Points with y <= 0 are rejected.
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Harmonic number H_k.
double harmonic(std::uint64_t k);

}  // namespace ewens

#endif  // EWENS_STATS_HPP
