#include "ewens/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ewens/parallel.hpp"

namespace ewens {

namespace {

double reduce_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

std::complex<double> unit_root(double x) {
    const double a = 2.0 * std::numbers::pi * reduce_unit(x);
    return {std::cos(a), std::sin(a)};
}

}  // namespace

TorusPoint::TorusPoint(std::vector<double> theta) : theta_(std::move(theta)) {
    for (auto& t : theta_) {
        if (!std::isfinite(t)) throw std::invalid_argument("TorusPoint: coordinates must be finite");
        t = reduce_unit(t);
    }
}

std::vector<double> TorusPoint::coordinates() const {
    std::vector<double> all = theta_;
    double s = 0.0;
    for (auto t : theta_) s += t;
    all.push_back(reduce_unit(-s));
    return all;
}

double torus_norm(double x) {
    const double f = reduce_unit(x);
    return std::min(f, 1.0 - f);
}

std::complex<double> F_theta(const TorusPoint& point, std::span<const PoissonCycleVector> vectors, Interval I) {
    if (vectors.size() != point.m()) throw std::invalid_argument("F_theta: need one vector per torus coordinate");
    const auto theta = point.coordinates();
    std::complex<double> f = 1.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto& v = vectors[i];
        if (v.K() < I.hi) throw std::invalid_argument("F_theta: vector does not cover the interval");
        for (std::size_t j = I.lo + 1; j <= I.hi; ++j) {
            const auto x = v[j];
            if (x == 0) continue;
            const std::complex<double> factor = (1.0 + unit_root(static_cast<double>(j) * theta[i])) * 0.5;
            for (std::uint32_t r = 0; r < x; ++r) f *= factor;
        }
    }
    return f;
}

SumBitmap restricted_sumset(const PoissonCycleVector& v, Interval I) {
    const auto parts = v.parts(I.lo, I.hi);
    std::size_t total = 0;
    for (const auto& p : parts) total += p.value * p.multiplicity;
    return attainable_sums(parts, total);
}

std::size_t exact_grid(std::span<const PoissonCycleVector> vectors, Interval I) {
    std::size_t top = 0;
    for (const auto& v : vectors) {
        std::size_t total = 0;
        for (const auto& p : v.parts(I.lo, I.hi)) total += p.value * p.multiplicity;
        top = std::max(top, total);
    }
    return 2 * top + 1;
}

QuadratureResult integral_F_sq(std::span<const PoissonCycleVector> vectors, Interval I, std::size_t grid) {
    const std::size_t m = vectors.size();
    if (m < 2) throw std::invalid_argument("integral_F_sq: need at least two vectors");
    if (grid < 2 * I.hi || grid == 0) throw std::invalid_argument("integral_F_sq: grid below 2 * max(I)");
    for (const auto& v : vectors) {
        if (v.K() < I.hi) throw std::invalid_argument("integral_F_sq: vector does not cover the interval");
    }
    const std::size_t G = grid;
    // |F|^2 factorises over coordinates: per-axis tables of |F_i(a / G)|^2.
    std::vector<std::vector<double>> axis(m, std::vector<double>(G, 1.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& p : vectors[i].parts(I.lo, I.hi)) {
            for (std::size_t a = 0; a < G; ++a) {
                const std::size_t phase = (p.value * a) % G;
                const double c = std::cos(std::numbers::pi * static_cast<double>(phase) / static_cast<double>(G));
                axis[i][a] *= std::pow(c * c, static_cast<double>(p.multiplicity));
            }
        }
    }
    // Sum over a_1..a_{m-1} of prod_i A_i[a_i] * A_m[-(a_1 + ... + a_{m-1})]:
    // fold the first m - 1 axes by circular convolution.
    std::vector<double> acc = axis[0];
    std::vector<double> next(G);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < G; ++s) {
            if (acc[s] == 0.0) continue;
            for (std::size_t a = 0; a < G; ++a) next[(s + a) % G] += acc[s] * axis[i][a];
        }
        acc.swap(next);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < G; ++s) total += acc[s] * axis[m - 1][(G - s) % G];
    QuadratureResult r;
    r.grid = G;
    r.spacing = 1.0 / static_cast<double>(G);
    r.value = total / std::pow(static_cast<double>(G), static_cast<double>(m - 1));
    return r;
}

double cos_series_residual(std::uint64_t k, double theta) {
    if (k < 1) throw std::invalid_argument("cos_series_residual: k must be at least 1");
    const double t = reduce_unit(theta);
    double s = 0.0;
    for (std::uint64_t j = k; j >= 1; --j) {
        const double phase = reduce_unit(static_cast<double>(j) * t);
        s += std::cos(2.0 * std::numbers::pi * phase) / static_cast<double>(j);
    }
    const double norm = torus_norm(t);
    const double kk = static_cast<double>(k);
    const double cap = (norm == 0.0) ? kk : std::min(kk, 1.0 / norm);
    return s - std::log(cap);
}

CauchySchwarzInstance cauchy_schwarz_instance(std::span<const PoissonCycleVector> vectors, Interval I,
                                              std::size_t grid) {
    if (grid == 0) grid = std::max<std::size_t>(2 * I.hi, exact_grid(vectors, I));
    std::vector<SumBitmap> sums;
    sums.reserve(vectors.size());
    for (const auto& v : vectors) sums.push_back(restricted_sumset(v, I));
    CauchySchwarzInstance inst;
    inst.m = vectors.size();
    inst.diff_set_size = diff_set(sums).size();
    const auto q = integral_F_sq(vectors, I, grid);
    inst.integral = q.value;
    inst.grid = q.grid;
    inst.lower_bound = 1.0 / q.value;
    return inst;
}

double growth_beta(double alpha, unsigned m, double delta2) {
    if (!(alpha > 0.0) || m < 2) throw std::invalid_argument("growth_beta: need alpha > 0 and m >= 2");
    return (1.0 - 1.0 / static_cast<double>(m) + delta2) / (alpha * std::numbers::ln2);
}

Interval growth_interval(std::size_t k, double beta) {
    const double lo = std::pow(static_cast<double>(k), 1.0 - beta);
    return Interval{static_cast<std::size_t>(std::floor(lo)), k};
}

namespace {

bool tail_event_holds(const PoissonCycleVector& x, const DiffGrowthConfig& cfg) {
    const std::size_t k = cfg.k;
    const double scale = (1.0 - cfg.tail_delta) * cfg.alpha;
    std::uint64_t suffix = 0;  // sum_{l < j <= k} X_j
    for (std::size_t l = k; l >= 1; --l) {
        if (static_cast<double>(suffix) <
            scale * std::log(static_cast<double>(k) / static_cast<double>(l)) - cfg.tail_slack)
            return false;
        suffix += x[l];
    }
    return true;
}

}  // namespace

DiffGrowthReport verify_diff_growth(const DiffGrowthConfig& cfg, const Rng& rng) {
    if (cfg.m < 2) throw std::invalid_argument("verify_diff_growth: m must be at least 2");
    if (cfg.k < 2) throw std::invalid_argument("verify_diff_growth: k must be at least 2");
    if (cfg.trials < 1) throw std::invalid_argument("verify_diff_growth: trials must be positive");
    DiffGrowthReport rep;
    rep.beta = growth_beta(cfg.alpha, cfg.m, cfg.delta2);
    rep.interval = growth_interval(cfg.k, rep.beta);
    rep.c_cube = cfg.c_cube > 0.0 ? cfg.c_cube : 3.0 * cfg.m / cfg.alpha;
    const double size_threshold = cfg.c_prime * std::pow(static_cast<double>(cfg.k), static_cast<double>(cfg.m - 1));
    const double cube = rep.c_cube * static_cast<double>(cfg.k);
    const PoissonVectorSampler sampler(cfg.alpha, cfg.k);

    rep.sizes = parallel::reduce_trials<std::vector<std::size_t>>(
        cfg.trials, {},
        [&](std::vector<std::size_t>& acc, std::uint64_t t) {
            const Rng trial = rng.split(t);
            std::vector<SumBitmap> sums;
            bool tail = true;
            for (unsigned i = 0; i < cfg.m; ++i) {
                Rng r = trial.split(i);
                const auto x = sampler.sample(r);
                tail = tail && tail_event_holds(x, cfg);
                sums.push_back(restricted_sumset(x, rep.interval));
            }
            const DiffSet s = diff_set(sums, cfg.guard);
            // size in the high bits, tail event in bit 1, containment in bit 0
            const bool inside = static_cast<double>(s.max_abs()) <= cube;
            acc.push_back(s.size() * 4 + (tail ? 2 : 0) + (inside ? 1 : 0));
        },
        [](std::vector<std::size_t>& a, const std::vector<std::size_t>& b) { a.insert(a.end(), b.begin(), b.end()); });

    std::uint64_t large = 0, inside = 0, both = 0, tail = 0;
    for (auto& code : rep.sizes) {
        const bool in = (code & 1) != 0;
        tail += (code >> 1) & 1;
        code >>= 2;
        const bool big = static_cast<double>(code) >= size_threshold;
        large += big ? 1 : 0;
        inside += in ? 1 : 0;
        both += (big && in) ? 1 : 0;
    }
    rep.large = wilson_estimate(large, cfg.trials, rng.seed());
    rep.contained = wilson_estimate(inside, cfg.trials, rng.seed());
    rep.both = wilson_estimate(both, cfg.trials, rng.seed());
    rep.tail_event = wilson_estimate(tail, cfg.trials, rng.seed());
    std::vector<std::size_t> sorted = rep.sizes;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    rep.median_size = sorted.size() % 2 == 1 ? static_cast<double>(sorted[mid])
                                             : 0.5 * static_cast<double>(sorted[mid - 1] + sorted[mid]);
    return rep;
}

}  // namespace ewens
