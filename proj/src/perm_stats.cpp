#include "ewens/perm_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ewens/parallel.hpp"

namespace ewens {

PrimeSieve::PrimeSieve(std::size_t limit) : spf_(std::max<std::size_t>(limit, 1) + 1, 0) {
    const std::size_t lim = spf_.size() - 1;
    for (std::size_t i = 2; i <= lim; ++i) {
        if (spf_[i] != 0) continue;
        for (std::size_t j = i; j <= lim; j += i) {
            if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
        }
    }
    spf_[1] = 1;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> PrimeSieve::factor(std::size_t x) const {
    if (x < 1 || x > limit()) throw std::out_of_range("PrimeSieve::factor: argument outside sieve");
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    while (x > 1) {
        const std::size_t p = spf_[x];
        std::uint32_t e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::size_t PrimeSieve::largest_prime_factor(std::size_t x) const {
    std::size_t best = 1;
    while (x > 1) {
        const std::size_t p = spf_.at(x);
        best = std::max(best, p);
        x /= p;
    }
    return best;
}

Factorization::Factorization(std::vector<std::pair<std::uint64_t, std::uint64_t>> powers) {
    std::map<std::uint64_t, std::uint64_t> merged;
    for (auto [p, e] : powers) {
        if (e > 0) merged[p] += e;
    }
    powers_.assign(merged.begin(), merged.end());
}

std::uint64_t Factorization::exponent(std::uint64_t p) const {
    for (auto [q, e] : powers_) {
        if (q == p) return e;
    }
    return 0;
}

std::optional<std::uint64_t> Factorization::largest_prime() const {
    if (powers_.empty()) return std::nullopt;
    return powers_.back().first;
}

std::optional<std::uint64_t> Factorization::value() const {
    unsigned __int128 v = 1;
    for (auto [p, e] : powers_) {
        for (std::uint64_t k = 0; k < e; ++k) {
            v *= p;
            if (v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
        }
    }
    return static_cast<std::uint64_t>(v);
}

std::string Factorization::to_string() const {
    if (powers_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < powers_.size(); ++i) {
        if (i > 0) os << '*';
        os << powers_[i].first;
        if (powers_[i].second > 1) os << '^' << powers_[i].second;
    }
    return os.str();
}

double Factorization::log() const {
    double s = 0.0;
    for (auto [p, e] : powers_) s += static_cast<double>(e) * std::log(static_cast<double>(p));
    return s;
}

namespace {

void require_covers(const CycleType& ct, const PrimeSieve& sieve) {
    if (sieve.limit() < ct.n()) throw std::invalid_argument("prime sieve does not cover n");
}

}  // namespace

Factorization phi(const CycleType& ct, const PrimeSieve& sieve) {
    require_covers(ct, sieve);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> powers;
    for (const auto& e : ct.entries()) {
        for (auto [p, k] : sieve.factor(e.length)) powers.emplace_back(p, static_cast<std::uint64_t>(k) * e.multiplicity);
    }
    return Factorization(std::move(powers));
}

Factorization phi(const CycleType& ct) { return phi(ct, PrimeSieve(ct.n())); }

Factorization order(const CycleType& ct, const PrimeSieve& sieve) {
    require_covers(ct, sieve);
    std::map<std::uint64_t, std::uint64_t> top;
    for (const auto& e : ct.entries()) {
        for (auto [p, k] : sieve.factor(e.length)) top[p] = std::max<std::uint64_t>(top[p], k);
    }
    return Factorization({top.begin(), top.end()});
}

Factorization order(const CycleType& ct) { return order(ct, PrimeSieve(ct.n())); }

std::size_t minimal_degree(const CycleType& ct, const PrimeSieve& sieve) {
    if (ct.is_identity()) throw std::invalid_argument("minimal_degree: identity has no nonidentity power");
    const Factorization ord = order(ct, sieve);
    // pi^{ord/p} fixes exactly the cycles whose length divides ord/p, i.e. those
    // with v_p(l) < v_p(ord); it moves the rest.
    std::size_t best = ct.n();
    for (auto [p, top] : ord.powers()) {
        std::size_t moved = 0;
        for (const auto& e : ct.entries()) {
            std::size_t l = e.length;
            std::uint64_t v = 0;
            while (l % p == 0) {
                l /= p;
                ++v;
            }
            if (v == top) moved += e.length * e.multiplicity;
        }
        best = std::min(best, moved);
    }
    return best;
}

std::size_t minimal_degree(const CycleType& ct) { return minimal_degree(ct, PrimeSieve(ct.n())); }

std::optional<std::size_t> largest_prime_of_phi(const CycleType& ct, const PrimeSieve& sieve) {
    require_covers(ct, sieve);
    std::size_t best = 1;
    for (const auto& e : ct.entries()) best = std::max(best, sieve.largest_prime_factor(e.length));
    if (best == 1) return std::nullopt;
    return best;
}

std::optional<std::size_t> largest_prime_of_phi(const CycleType& ct) {
    return largest_prime_of_phi(ct, PrimeSieve(ct.n()));
}

std::size_t max_common_cycle_divisor(const CycleType& ct) {
    if (ct.num_cycles() < 2) return 0;
    // The best d is a gcd of two cycle lengths, or a repeated length itself.
    std::size_t best = 1;
    const auto& es = ct.entries();
    for (std::size_t a = 0; a < es.size(); ++a) {
        if (es[a].multiplicity >= 2) best = std::max(best, es[a].length);
        for (std::size_t b = a + 1; b < es.size(); ++b) best = std::max(best, std::gcd(es[a].length, es[b].length));
    }
    return best;
}

std::vector<JointCycleRow> estimate_joint_cycle_probs(const EwensParams& params,
                                                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                      std::uint64_t trials, const Rng& rng) {
    if (trials < 1) throw std::invalid_argument("estimate_joint_cycle_probs: trials must be positive");
    for (auto [i, j] : pairs) {
        if (i < 1 || i >= j || j > params.n())
            throw std::invalid_argument("estimate_joint_cycle_probs: need 1 <= i < j <= n");
    }
    const FellerSampler sampler(params, params.n());
    const std::size_t np = pairs.size();
    auto counts = parallel::reduce_trials<std::vector<std::uint64_t>>(
        trials, std::vector<std::uint64_t>(2 * np, 0),
        [&](std::vector<std::uint64_t>& acc, std::uint64_t t) {
            Rng r = rng.split(t);
            const CycleType ct = sampler.sample_cycle_type(r);
            for (std::size_t k = 0; k < np; ++k) {
                const auto ci = ct.count(pairs[k].first);
                if (ci > 0 && ct.count(pairs[k].second) > 0) ++acc[2 * k];
                if (ci >= 2) ++acc[2 * k + 1];
            }
        },
        [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        });
    std::vector<JointCycleRow> rows;
    rows.reserve(np);
    for (std::size_t k = 0; k < np; ++k) {
        rows.push_back({pairs[k].first, pairs[k].second, wilson_estimate(counts[2 * k], trials, rng.seed()),
                        wilson_estimate(counts[2 * k + 1], trials, rng.seed())});
    }
    return rows;
}

OrderStatsFrequencies estimate_order_stats(const EwensParams& params, double beta, std::uint64_t trials,
                                           const Rng& rng) {
    if (trials < 1) throw std::invalid_argument("estimate_order_stats: trials must be positive");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("estimate_order_stats: beta must lie in (0, 1)");
    const double n = static_cast<double>(params.n());
    const double alpha = params.alpha();
    OrderStatsFrequencies out;
    out.minimal_degree_threshold = std::pow(n, beta);
    out.gcd_threshold = std::pow(n, 1.0 - alpha / (4.0 * alpha + 3.0));
    const double log_n = std::log(n);
    out.largest_prime_threshold = params.n() >= 3 ? n * std::exp(-std::log(log_n) * std::sqrt(log_n)) : 0.0;

    const PrimeSieve sieve(params.n());
    const FellerSampler sampler(params, params.n());
    struct Acc {
        std::uint64_t mindeg = 0, gcd = 0, prime = 0;
    };
    const Acc acc = parallel::reduce_trials<Acc>(
        trials, Acc{},
        [&](Acc& a, std::uint64_t t) {
            Rng r = rng.split(t);
            const CycleType ct = sampler.sample_cycle_type(r);
            if (!ct.is_identity() && static_cast<double>(minimal_degree(ct, sieve)) > out.minimal_degree_threshold)
                ++a.mindeg;
            if (static_cast<double>(max_common_cycle_divisor(ct)) > out.gcd_threshold) ++a.gcd;
            const auto lp = largest_prime_of_phi(ct, sieve);
            if (lp && static_cast<double>(*lp) > out.largest_prime_threshold) ++a.prime;
        },
        [](Acc& a, const Acc& b) {
            a.mindeg += b.mindeg;
            a.gcd += b.gcd;
            a.prime += b.prime;
        });
    out.minimal_degree_above = wilson_estimate(acc.mindeg, trials, rng.seed());
    out.gcd_above = wilson_estimate(acc.gcd, trials, rng.seed());
    out.largest_prime_above = wilson_estimate(acc.prime, trials, rng.seed());
    return out;
}

}  // namespace ewens
