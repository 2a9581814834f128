#ifndef EWENS_FOURIER_HPP
#define EWENS_FOURIER_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ewens/poisson.hpp"
#include "ewens/rng.hpp"

namespace ewens {

/// Half-open integer interval (lo, hi].
struct Interval {
    std::size_t lo = 0;
    std::size_t hi = 0;
    [[nodiscard]] bool contains(std::size_t j) const { return j > lo && j <= hi; }
};

/// Point of the zero-sum torus, stored by its first m - 1 coordinates.
class TorusPoint {
   public:
    /// Coordinates are reduced into [0, 1).
    explicit TorusPoint(std::vector<double> theta);
    [[nodiscard]] std::size_t m() const { return theta_.size() + 1; }
    [[nodiscard]] const std::vector<double>& free_coordinates() const { return theta_; }
    /// All m coordinates; the last is -(theta_1 + ... + theta_{m-1}) mod 1.
    [[nodiscard]] std::vector<double> coordinates() const;

   private:
    std::vector<double> theta_;
};

/// Distance from x to the nearest integer.
double torus_norm(double x);

/// prod_{j in I} prod_i ((1 + e(j theta_i)) / 2)^{X_j^(i)}.
/// Throws if the number of vectors differs from point.m() or a vector is
/// shorter than I.hi.
std::complex<double> F_theta(const TorusPoint& point, std::span<const PoissonCycleVector> vectors, Interval I);

struct QuadratureResult {
    double value = 0.0;
    std::size_t grid = 0;  // points per axis
    double spacing = 0.0;  // 1 / grid
};

/// Integral of |F|^2 over the zero-sum torus by the G-point periodic
/// trapezoidal rule per axis. Exact once G exceeds the largest frequency of
/// |F|^2 (see exact_grid). Throws if G < 2 * I.hi.
QuadratureResult integral_F_sq(std::span<const PoissonCycleVector> vectors, Interval I, std::size_t grid);

/// Smallest grid making integral_F_sq exact for these vectors.
std::size_t exact_grid(std::span<const PoissonCycleVector> vectors, Interval I);

/// L(I, X): subset sums using only parts with index in I, over [0, sum_{j in I} j X_j].
SumBitmap restricted_sumset(const PoissonCycleVector& v, Interval I);

/// sum_{j <= k} cos(2 pi j theta) / j - log min(k, 1 / ||theta||).
double cos_series_residual(std::uint64_t k, double theta);

/// One Cauchy-Schwarz check |S(I; X)| >= 1 / integral |F|^2.
struct CauchySchwarzInstance {
    std::size_t m = 0;
    std::size_t diff_set_size = 0;
    double integral = 0.0;
    double lower_bound = 0.0;  // 1 / integral
    std::size_t grid = 0;
    [[nodiscard]] bool holds(double slack) const {
        return static_cast<double>(diff_set_size) >= (1.0 - slack) * lower_bound;
    }
};

/// grid = 0 picks max(2 * I.hi, exact_grid).
CauchySchwarzInstance cauchy_schwarz_instance(std::span<const PoissonCycleVector> vectors, Interval I,
                                              std::size_t grid = 0);

inline constexpr double kDefaultDelta2 = 0.02;

/// beta with beta * alpha * log 2 = 1 - 1/m + delta2.
double growth_beta(double alpha, unsigned m, double delta2 = kDefaultDelta2);

/// (floor(k^{1 - beta}), k].
Interval growth_interval(std::size_t k, double beta);

struct DiffGrowthConfig {
    double alpha = 1.0;
    unsigned m = 2;
    std::size_t k = 128;
    double delta2 = kDefaultDelta2;
    double c_prime = 0.05;  // size threshold |S| >= c' k^{m-1}
    double c_cube = 0.0;    // containment cube [-c k, c k]^{m-1}; 0 picks 3m / alpha
    std::uint64_t trials = 1000;
    std::uint64_t guard = 100'000'000ULL;
    // tail event: min_i sum_{l<j<=k} X_j^(i) >= (1 - tail_delta) alpha log(k/l) - tail_slack for all l
    double tail_delta = 0.1;
    double tail_slack = 3.0;
};

struct DiffGrowthReport {
    double beta = 0.0;
    Interval interval;
    double c_cube = 0.0;
    Estimate large;      // |S| >= c' k^{m-1}
    Estimate contained;  // S inside the cube
    Estimate both;
    Estimate tail_event;  // diagnostic only
    double median_size = 0.0;
    std::vector<std::size_t> sizes;
};

/// Samples `trials` m-tuples of X(alpha)[1..k] and reports the size and
/// containment frequencies of S(I; X^(1), ..., X^(m)), plus the frequency of
/// the tail event on the full vectors X[1..k].
/// Throws SizeLimitError if an instance exceeds the enumeration guard.
DiffGrowthReport verify_diff_growth(const DiffGrowthConfig& config, const Rng& rng);

}  // namespace ewens

#endif  // EWENS_FOURIER_HPP
