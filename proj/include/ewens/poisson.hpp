#ifndef EWENS_POISSON_HPP
#define EWENS_POISSON_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ewens/rng.hpp"
#include "ewens/stats.hpp"
#include "ewens/sumset.hpp"

namespace ewens {

/// Independent X_j ~ Poisson(alpha / j), j = 1..K.
class PoissonCycleVector {
   public:
    /// x[j - 1] holds X_j. Throws unless alpha > 0 and x is non-empty.
    PoissonCycleVector(double alpha, std::vector<std::uint32_t> x);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] std::size_t K() const { return x_.size(); }
    /// X_j for 1 <= j <= K.
    [[nodiscard]] std::uint32_t operator[](std::size_t j) const { return x_[j - 1]; }
    [[nodiscard]] const std::vector<std::uint32_t>& values() const { return x_; }

    /// Nonzero entries as sumset parts, restricted to lo < j <= hi.
    [[nodiscard]] std::vector<Part> parts(std::size_t lo = 0, std::size_t hi = SIZE_MAX) const;
    /// L(X[1..K]) within [0, bound].
    [[nodiscard]] SumBitmap sumset(std::size_t bound) const;

   private:
    double alpha_;
    std::vector<std::uint32_t> x_;
};

/// Poisson(mean) by sequential-search inversion from one uniform. Means above
/// kPoissonInversionCutoff switch to std::poisson_distribution.
inline constexpr double kPoissonInversionCutoff = 30.0;
std::uint32_t sample_poisson(double mean, Rng& rng);

/// Reusable sampler: caches e^{-alpha/j} per coordinate.
class PoissonVectorSampler {
   public:
    PoissonVectorSampler(double alpha, std::size_t K);
    [[nodiscard]] PoissonCycleVector sample(Rng& rng) const;
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] std::size_t K() const { return p0_.size(); }

   private:
    double alpha_;
    std::vector<double> p0_;
};

PoissonCycleVector sample_poisson_vector(double alpha, std::size_t K, Rng& rng);

/// lambda_n = floor(n / (alpha log n)) for n >= 2; lambda_1 = 1 by convention.
std::size_t lambda_of(double alpha, std::size_t n);

inline constexpr double kDefaultEpsilon = 0.05;

/// f_k = sum_{j<=k} X_j, g_k = sum_{j<=k} j X_j (index 0 holds f_0 = g_0 = 0),
/// together with the quenching times.
struct QuenchedStats {
    std::vector<std::uint64_t> f;
    std::vector<std::uint64_t> g;
    std::size_t tau_eps = 0;
    std::size_t tau = 0;
    std::size_t T = 0;
    double epsilon = kDefaultEpsilon;
};

/// tau_eps = max{2 <= k <= K : f_k >= (alpha + eps) log k}, tau = max{2 <= n <= K :
/// g_{min(lambda_n, K)} >= n}; 0 when the set is empty.
QuenchedStats fg_stats(const PoissonCycleVector& v, double epsilon = kDefaultEpsilon);

/// P[k in L(X)] (quenched = false) or P[T < lambda_k and k in L(X)]
/// (quenched = true) with X truncated at K >= k.
Estimate estimate_pk(double alpha, std::size_t k, std::size_t K, std::uint64_t trials, const Rng& rng,
                     bool quenched = false, double epsilon = kDefaultEpsilon);

/// P[T >= lambda_k] at truncation K.
Estimate estimate_quench_failure(double alpha, std::size_t k, std::size_t K, std::uint64_t trials, const Rng& rng,
                                 double epsilon = kDefaultEpsilon);

}  // namespace ewens

#endif  // EWENS_POISSON_HPP
