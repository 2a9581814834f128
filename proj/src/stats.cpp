#include "ewens/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <stdexcept>

namespace ewens {

double Estimate::standard_error() const {
    if (trials == 0) return 0.0;
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

Estimate wilson_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed, double z) {
    if (trials == 0) throw std::invalid_argument("wilson_estimate: trials must be positive");
    if (successes > trials) throw std::invalid_argument("wilson_estimate: successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Estimate e;
    e.p_hat = p;
    e.ci_low = std::max(0.0, std::min(p, centre - half));
    e.ci_high = std::min(1.0, std::max(p, centre + half));
    e.trials = trials;
    e.seed = seed;
    e.successes = successes;
    return e;
}

MeanEstimate Moments::estimate() const {
    MeanEstimate m;
    m.samples = count;
    if (count == 0) return m;
    const double n = static_cast<double>(count);
    m.mean = sum / n;
    if (count > 1) {
        const double var = std::max(0.0, (sum_sq - n * m.mean * m.mean) / (n - 1.0));
        m.standard_error = std::sqrt(var / n);
    }
    return m;
}

double chi_square_sf(double statistic, int dof) {
    if (dof <= 0) return 1.0;
    if (statistic <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult poisson_chi_square(std::span<const std::uint64_t> histogram, double mean, double min_expected) {
    std::uint64_t total = 0;
    for (auto c : histogram) total += c;
    ChiSquareResult r;
    if (total == 0) return r;
    const double n = static_cast<double>(total);

    // Cells 0..last-1 kept individually, cell `last` pools the upper tail.
    std::vector<double> expected;
    std::vector<double> observed;
    double pmf = std::exp(-mean);
    double cdf = 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        const double tail_after = 1.0 - (cdf + pmf);
        if (n * pmf < min_expected || n * tail_after < min_expected) break;
        expected.push_back(n * pmf);
        observed.push_back(k < histogram.size() ? static_cast<double>(histogram[k]) : 0.0);
        cdf += pmf;
        pmf *= mean / static_cast<double>(k + 1);
    }
    double tail_obs = 0.0;
    for (std::size_t j = k; j < histogram.size(); ++j) tail_obs += static_cast<double>(histogram[j]);
    expected.push_back(n * std::max(0.0, 1.0 - cdf));
    observed.push_back(tail_obs);

    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] <= 0.0) continue;
        const double d = observed[i] - expected[i];
        r.statistic += d * d / expected[i];
    }
    r.dof = static_cast<int>(expected.size()) - 1;
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("log_log_slope: nonpositive value");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double harmonic(std::uint64_t k) {
    double h = 0.0;
    for (std::uint64_t j = k; j >= 1; --j) h += 1.0 / static_cast<double>(j);
    return h;
}

}  // namespace ewens
