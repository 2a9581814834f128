#include "ewens/poisson.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ewens/parallel.hpp"

namespace ewens {

PoissonCycleVector::PoissonCycleVector(double alpha, std::vector<std::uint32_t> x) : alpha_(alpha), x_(std::move(x)) {
    if (!(alpha > 0.0)) throw std::invalid_argument("PoissonCycleVector: alpha must be positive");
    if (x_.empty()) throw std::invalid_argument("PoissonCycleVector: K must be at least 1");
}

std::vector<Part> PoissonCycleVector::parts(std::size_t lo, std::size_t hi) const {
    std::vector<Part> out;
    const std::size_t top = std::min(hi, x_.size());
    for (std::size_t j = lo + 1; j <= top; ++j) {
        if (x_[j - 1] != 0) out.push_back({j, x_[j - 1]});
    }
    return out;
}

SumBitmap PoissonCycleVector::sumset(std::size_t bound) const { return attainable_sums(parts(), bound); }

namespace {

std::uint32_t poisson_by_inversion(double mean, double p0, double u) {
    std::uint32_t k = 0;
    double pmf = p0;
    double cdf = p0;
    while (u >= cdf) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        const double next = cdf + pmf;
        if (next == cdf) break;  // remaining mass below double resolution
        cdf = next;
    }
    return k;
}

}  // namespace

std::uint32_t sample_poisson(double mean, Rng& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("sample_poisson: mean must be nonnegative");
    if (mean > kPoissonInversionCutoff) {
        std::poisson_distribution<std::uint32_t> dist(mean);
        return dist(rng);
    }
    return poisson_by_inversion(mean, std::exp(-mean), rng.uniform());
}

PoissonVectorSampler::PoissonVectorSampler(double alpha, std::size_t K) : alpha_(alpha), p0_(K) {
    if (!(alpha > 0.0)) throw std::invalid_argument("PoissonVectorSampler: alpha must be positive");
    if (K < 1) throw std::invalid_argument("PoissonVectorSampler: K must be at least 1");
    for (std::size_t j = 1; j <= K; ++j) p0_[j - 1] = std::exp(-alpha / static_cast<double>(j));
}

PoissonCycleVector PoissonVectorSampler::sample(Rng& rng) const {
    std::vector<std::uint32_t> x(p0_.size(), 0);
    for (std::size_t j = 1; j <= p0_.size(); ++j) {
        const double mean = alpha_ / static_cast<double>(j);
        if (mean > kPoissonInversionCutoff) {
            std::poisson_distribution<std::uint32_t> dist(mean);
            x[j - 1] = dist(rng);
            continue;
        }
        const double u = rng.uniform();
        if (u < p0_[j - 1]) continue;
        x[j - 1] = poisson_by_inversion(mean, p0_[j - 1], u);
    }
    return PoissonCycleVector(alpha_, std::move(x));
}

PoissonCycleVector sample_poisson_vector(double alpha, std::size_t K, Rng& rng) {
    return PoissonVectorSampler(alpha, K).sample(rng);
}

std::size_t lambda_of(double alpha, std::size_t n) {
    if (n < 2) return 1;
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) / (alpha * std::log(static_cast<double>(n)))));
}

QuenchedStats fg_stats(const PoissonCycleVector& v, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("fg_stats: epsilon must be positive");
    const std::size_t K = v.K();
    const double alpha = v.alpha();
    QuenchedStats s;
    s.epsilon = epsilon;
    s.f.assign(K + 1, 0);
    s.g.assign(K + 1, 0);
    for (std::size_t j = 1; j <= K; ++j) {
        s.f[j] = s.f[j - 1] + v[j];
        s.g[j] = s.g[j - 1] + static_cast<std::uint64_t>(j) * v[j];
    }
    for (std::size_t k = 2; k <= K; ++k) {
        if (static_cast<double>(s.f[k]) >= (alpha + epsilon) * std::log(static_cast<double>(k))) s.tau_eps = k;
        const std::size_t lam = std::min(lambda_of(alpha, k), K);
        if (s.g[lam] >= k) s.tau = k;
    }
    s.T = std::max(s.tau_eps, s.tau);
    return s;
}

Estimate estimate_pk(double alpha, std::size_t k, std::size_t K, std::uint64_t trials, const Rng& rng, bool quenched,
                     double epsilon) {
    if (K < k) throw std::invalid_argument("estimate_pk: truncation K must be at least k");
    if (trials < 1) throw std::invalid_argument("estimate_pk: trials must be positive");
    if (k == 0) return wilson_estimate(trials, trials, rng.seed());
    const PoissonVectorSampler sampler(alpha, K);
    const std::size_t lam = lambda_of(alpha, k);
    const auto hits = parallel::count_trials(trials, [&](std::uint64_t t) {
        Rng r = rng.split(t);
        const auto x = sampler.sample(r);
        if (quenched && fg_stats(x, epsilon).T >= lam) return false;
        return attainable_sums(x.parts(0, k), k).contains(k);
    });
    return wilson_estimate(hits, trials, rng.seed());
}

Estimate estimate_quench_failure(double alpha, std::size_t k, std::size_t K, std::uint64_t trials, const Rng& rng,
                                 double epsilon) {
    if (trials < 1) throw std::invalid_argument("estimate_quench_failure: trials must be positive");
    const PoissonVectorSampler sampler(alpha, K);
    const std::size_t lam = lambda_of(alpha, k);
    const auto hits = parallel::count_trials(trials, [&](std::uint64_t t) {
        Rng r = rng.split(t);
        return fg_stats(sampler.sample(r), epsilon).T >= lam;
    });
    return wilson_estimate(hits, trials, rng.seed());
}

}  // namespace ewens
