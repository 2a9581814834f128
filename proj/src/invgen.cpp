#include "ewens/invgen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <bitset>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "ewens/parallel.hpp"
#include "ewens/poisson.hpp"
#include "ewens/sumset.hpp"

namespace ewens {

HValue h_of_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("h_of_alpha: alpha must be positive");
    const double x = alpha * std::numbers::ln2;
    if (x >= 1.0) return {0, true};
    return {static_cast<unsigned>(std::ceil(1.0 / (1.0 - x))), false};
}

std::vector<double> discontinuities_of_h(unsigned max_m) {
    if (max_m < 2) throw std::invalid_argument("discontinuities_of_h: max_m must be at least 2");
    std::vector<double> out;
    for (unsigned m = 2; m <= max_m; ++m) out.push_back((1.0 - 1.0 / static_cast<double>(m)) / std::numbers::ln2);
    out.push_back(1.0 / std::numbers::ln2);
    return out;
}

double distance_to_discontinuity(double alpha) {
    const double limit = 1.0 / std::numbers::ln2;
    double best = std::abs(alpha - limit);
    if (alpha < limit) {
        // Nearest jump points bracket m = 1 / (1 - alpha log 2).
        const double m_real = 1.0 / (1.0 - alpha * std::numbers::ln2);
        const auto lo = static_cast<long>(std::floor(m_real));
        for (long m = std::max(2L, lo - 1); m <= lo + 2; ++m) {
            const double a = (1.0 - 1.0 / static_cast<double>(m)) / std::numbers::ln2;
            best = std::min(best, std::abs(alpha - a));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Coupled Monte Carlo curves

namespace {

std::vector<Estimate> to_estimates(const std::vector<std::uint64_t>& counts, std::uint64_t trials, std::uint64_t seed) {
    std::vector<Estimate> out;
    out.reserve(counts.size());
    for (auto c : counts) out.push_back(wilson_estimate(c, trials, seed));
    return out;
}

void add_vectors(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

std::vector<std::uint64_t> common_fixed_counts(double alpha, std::size_t n, unsigned max_m, std::size_t lo,
                                               std::size_t hi, std::uint64_t trials, const Rng& rng) {
    const FellerSampler sampler(EwensParams(alpha, n), n);
    return parallel::reduce_trials<std::vector<std::uint64_t>>(
        trials, std::vector<std::uint64_t>(max_m, 0),
        [&](std::vector<std::uint64_t>& acc, std::uint64_t t) {
            const Rng trial = rng.split(t);
            Rng r0 = trial.split(0);
            SumBitmap common = fixed_set_sizes(sampler.sample_cycle_type(r0));
            for (unsigned m = 1; m <= max_m; ++m) {
                if (m > 1) {
                    Rng ri = trial.split(m - 1);
                    common &= fixed_set_sizes(sampler.sample_cycle_type(ri));
                }
                if (!common.first_in(lo, hi)) break;
                ++acc[m - 1];
            }
        },
        add_vectors);
}

void check_fixed_range(std::size_t n, std::size_t lo, std::size_t hi) {
    if (lo < 1 || lo > hi || hi > n / 2)
        throw std::invalid_argument("common fixed-set experiment: need 1 <= lo <= hi <= n/2");
}

}  // namespace

std::vector<Estimate> common_fixed_curve(double alpha, std::size_t n, unsigned max_m, std::size_t lo, std::size_t hi,
                                         std::uint64_t trials, const Rng& rng) {
    if (max_m < 1) throw std::invalid_argument("common_fixed_curve: m must be at least 1");
    if (trials < 1) throw std::invalid_argument("common_fixed_curve: trials must be positive");
    check_fixed_range(n, lo, hi);
    return to_estimates(common_fixed_counts(alpha, n, max_m, lo, hi, trials, rng), trials, rng.seed());
}

Estimate estimate_common_fixed_prob(double alpha, std::size_t n, unsigned m, std::size_t lo, std::size_t hi,
                                    std::uint64_t trials, const Rng& rng) {
    return common_fixed_curve(alpha, n, m, lo, hi, trials, rng).back();
}

namespace {

std::vector<std::uint64_t> sumset_trivial_counts(double alpha, unsigned max_m, std::size_t K, std::uint64_t trials,
                                                 const Rng& rng) {
    const PoissonVectorSampler sampler(alpha, K);
    return parallel::reduce_trials<std::vector<std::uint64_t>>(
        trials, std::vector<std::uint64_t>(max_m, 0),
        [&](std::vector<std::uint64_t>& acc, std::uint64_t t) {
            const Rng trial = rng.split(t);
            std::optional<SumBitmap> common;
            unsigned m = 1;
            for (; m <= max_m; ++m) {
                Rng ri = trial.split(m - 1);
                SumBitmap s = sampler.sample(ri).sumset(K);
                if (common) {
                    *common &= s;
                } else {
                    common = std::move(s);
                }
                if (!common->first_in(1, K)) break;
            }
            // Trivial from m onwards.
            for (; m <= max_m; ++m) ++acc[m - 1];
        },
        add_vectors);
}

}  // namespace

std::vector<Estimate> sumset_trivial_curve(double alpha, unsigned max_m, std::size_t K, std::uint64_t trials,
                                           const Rng& rng) {
    if (max_m < 1) throw std::invalid_argument("sumset_trivial_curve: m must be at least 1");
    if (K < 2) throw std::invalid_argument("sumset_trivial_curve: window K must be at least 2");
    if (trials < 1) throw std::invalid_argument("sumset_trivial_curve: trials must be positive");
    return to_estimates(sumset_trivial_counts(alpha, max_m, K, trials, rng), trials, rng.seed());
}

Estimate estimate_sumset_trivial_prob(double alpha, unsigned m, std::size_t K, std::uint64_t trials, const Rng& rng) {
    return sumset_trivial_curve(alpha, m, K, trials, rng).back();
}

std::vector<ThresholdRow> scan_alpha(std::span<const double> alphas, std::span<const unsigned> ms, ScanMode mode,
                                     std::size_t window, std::uint64_t trials, const Rng& rng, double margin) {
    if (ms.empty() || alphas.empty()) throw std::invalid_argument("scan_alpha: empty grid");
    const unsigned max_m = *std::max_element(ms.begin(), ms.end());
    if (*std::min_element(ms.begin(), ms.end()) < 1) throw std::invalid_argument("scan_alpha: m must be >= 1");
    std::vector<ThresholdRow> rows;
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) throw std::invalid_argument("scan_alpha: alpha must be positive");
        const Rng stream = rng.split(std::bit_cast<std::uint64_t>(alpha));
        std::vector<std::uint64_t> hits;
        if (mode == ScanMode::sumset) {
            if (window < 2) throw std::invalid_argument("scan_alpha: window K must be at least 2");
            hits = sumset_trivial_counts(alpha, max_m, window, trials, stream);
        } else {
            if (window < 2) throw std::invalid_argument("scan_alpha: degree n must be at least 2");
            auto common = common_fixed_counts(alpha, window, max_m, 1, window / 2, trials, stream);
            hits.resize(max_m);
            for (unsigned i = 0; i < max_m; ++i) hits[i] = trials - common[i];
        }
        const HValue h = h_of_alpha(alpha);
        const bool flag = distance_to_discontinuity(alpha) < margin;
        for (unsigned m : ms) {
            ThresholdRow row;
            row.alpha = alpha;
            row.m = m;
            row.mode = mode;
            row.window = window;
            row.estimate = wilson_estimate(hits[m - 1], trials, rng.seed());
            row.h_alpha = h;
            row.near_discontinuity = flag;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

void write_scan_csv(std::ostream& os, std::span<const ThresholdRow> rows) {
    os << kScanCsvHeader << '\n';
    for (const auto& r : rows) {
        os << format_double(r.alpha) << ',' << r.m << ',' << r.window << ',' << format_double(r.estimate.p_hat) << ','
           << format_double(r.estimate.ci_low) << ',' << format_double(r.estimate.ci_high) << ',' << r.estimate.trials
           << ',' << r.estimate.seed << ',' << r.h_alpha.to_string() << ','
           << (r.near_discontinuity ? "near_discontinuity" : "") << '\n';
    }
}

// ---------------------------------------------------------------------------
// Subgroups of S_n

namespace {

constexpr std::size_t kMaxOrder = 720;
using ElementSet = std::bitset<kMaxOrder>;

void enumerate_partitions(std::size_t remaining, std::size_t max_part, std::vector<std::size_t>& cur,
                          std::vector<CycleType>& out) {
    if (remaining == 0) {
        out.push_back(CycleType::from_lengths(cur));
        return;
    }
    for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        enumerate_partitions(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

class SymmetricGroup {
   public:
    explicit SymmetricGroup(std::size_t n) : n_(n) {
        std::vector<std::uint8_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i);
        do {
            index_[key(p)] = elems_.size();
            elems_.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        const std::size_t N = elems_.size();
        mul_.resize(N * N);
        inv_.resize(N);
        std::vector<std::uint8_t> q(n);
        for (std::size_t a = 0; a < N; ++a) {
            for (std::size_t b = 0; b < N; ++b) {
                for (std::size_t i = 0; i < n; ++i) q[i] = elems_[a][elems_[b][i]];  // a after b
                mul_[a * N + b] = static_cast<std::uint16_t>(index_.at(key(q)));
            }
            for (std::size_t i = 0; i < n; ++i) q[elems_[a][i]] = static_cast<std::uint8_t>(i);
            inv_[a] = static_cast<std::uint16_t>(index_.at(key(q)));
        }
        std::vector<std::size_t> cur;
        enumerate_partitions(n, n, cur, partitions_);
        class_of_.resize(N);
        for (std::size_t a = 0; a < N; ++a) {
            const CycleType ct = cycle_type(a);
            class_of_[a] = static_cast<std::uint8_t>(
                std::find(partitions_.begin(), partitions_.end(), ct) - partitions_.begin());
        }
    }

    [[nodiscard]] std::size_t order() const { return elems_.size(); }
    [[nodiscard]] std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * elems_.size() + b]; }
    [[nodiscard]] std::size_t inv(std::size_t a) const { return inv_[a]; }
    [[nodiscard]] std::size_t class_of(std::size_t a) const { return class_of_[a]; }
    [[nodiscard]] const std::vector<CycleType>& partitions() const { return partitions_; }

    [[nodiscard]] CycleType cycle_type(std::size_t a) const {
        const auto& p = elems_[a];
        std::vector<bool> seen(n_, false);
        std::vector<std::size_t> lengths;
        for (std::size_t i = 0; i < n_; ++i) {
            if (seen[i]) continue;
            std::size_t len = 0;
            for (std::size_t j = i; !seen[j]; j = p[j]) {
                seen[j] = true;
                ++len;
            }
            lengths.push_back(len);
        }
        return CycleType::from_lengths(lengths);
    }

    /// Subgroup generated by `base` (a subgroup) and the extra generator `g`.
    [[nodiscard]] ElementSet join(const ElementSet& base, const std::vector<std::size_t>& gens, std::size_t g) const {
        ElementSet set = base;
        std::vector<std::size_t> frontier;
        for (std::size_t a = 0; a < order(); ++a) {
            if (base[a]) frontier.push_back(a);
        }
        std::vector<std::size_t> all_gens = gens;
        all_gens.push_back(g);
        std::vector<std::size_t> members = frontier;
        // Closing the coset-generating frontier under right multiplication by
        // generators yields the generated subgroup (finite group).
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (auto a : frontier) {
                for (auto s : all_gens) {
                    const std::size_t b = mul(a, s);
                    if (!set[b]) {
                        set[b] = true;
                        next.push_back(b);
                    }
                }
            }
            frontier.swap(next);
        }
        return set;
    }

    [[nodiscard]] ElementSet conjugate(const ElementSet& h, std::size_t g) const {
        ElementSet out;
        const std::size_t gi = inv(g);
        for (std::size_t a = 0; a < order(); ++a) {
            if (h[a]) out[mul(mul(g, a), gi)] = true;
        }
        return out;
    }

   private:
    static std::uint64_t key(const std::vector<std::uint8_t>& p) {
        std::uint64_t k = 0;
        for (auto v : p) k = k * 8 + v;
        return k;
    }

    std::size_t n_;
    std::vector<std::vector<std::uint8_t>> elems_;
    std::map<std::uint64_t, std::size_t> index_;
    std::vector<std::uint16_t> mul_;
    std::vector<std::uint16_t> inv_;
    std::vector<CycleType> partitions_;
    std::vector<std::uint8_t> class_of_;
};

SubgroupCensus build_census(std::size_t n) {
    const SymmetricGroup G(n);
    const std::size_t N = G.order();

    // Cyclic subgroups, one generator each.
    std::vector<std::size_t> cyclic_gens;
    std::unordered_set<ElementSet> cyclic_seen;
    for (std::size_t g = 0; g < N; ++g) {
        ElementSet c;
        std::size_t x = 0;  // identity has index 0 (sorted first)
        do {
            c[x] = true;
            x = G.mul(x, g);
        } while (!c[x]);
        if (cyclic_seen.insert(c).second) cyclic_gens.push_back(g);
    }

    struct Rep {
        ElementSet elements;
        std::vector<std::size_t> gens;
    };
    std::vector<Rep> reps;
    std::unordered_set<ElementSet> seen;
    std::size_t total = 0;

    auto add_class = [&](const ElementSet& h, std::vector<std::size_t> gens) {
        if (seen.count(h) != 0) return;
        reps.push_back({h, std::move(gens)});
        for (std::size_t g = 0; g < N; ++g) {
            if (seen.insert(G.conjugate(h, g)).second) ++total;
        }
    };

    ElementSet trivial;
    trivial[0] = true;
    add_class(trivial, {});
    // Every subgroup is a conjugate of <R, c> for a class representative R and
    // some element c, so closing the representatives under joins is complete.
    for (std::size_t r = 0; r < reps.size(); ++r) {
        for (auto c : cyclic_gens) {
            if (reps[r].elements[c]) continue;
            const ElementSet j = G.join(reps[r].elements, reps[r].gens, c);
            if (seen.count(j) != 0) continue;
            auto gens = reps[r].gens;
            gens.push_back(c);
            add_class(j, std::move(gens));
        }
    }

    SubgroupCensus census;
    census.n = n;
    census.subgroup_count = total;
    census.conjugacy_classes = reps.size();
    census.partitions = G.partitions();
    for (const auto& rep : reps) {
        if (rep.elements.count() == N) continue;
        std::uint64_t mask = 0;
        for (std::size_t a = 0; a < N; ++a) {
            if (rep.elements[a]) mask |= 1ULL << G.class_of(a);
        }
        census.proper_class_masks.push_back(mask);
    }
    return census;
}

}  // namespace

const SubgroupCensus& subgroup_census(std::size_t n) {
    if (n < 1 || n > kMaxExactDegree) throw std::invalid_argument("subgroup_census: need 1 <= n <= 6");
    static std::mutex mu;
    static std::map<std::size_t, SubgroupCensus> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_census(n)).first;
    return it->second;
}

bool exact_invgen(std::span<const CycleType> classes) {
    if (classes.empty()) throw std::invalid_argument("exact_invgen: no classes given");
    const std::size_t n = classes.front().n();
    for (const auto& c : classes) {
        if (c.n() != n) throw std::invalid_argument("exact_invgen: classes disagree on n");
    }
    if (n > kMaxExactDegree) throw std::invalid_argument("exact_invgen: n > 6 exceeds the exact oracle guard");
    const SubgroupCensus& census = subgroup_census(n);
    std::uint64_t need = 0;
    for (const auto& c : classes) {
        const auto idx = std::find(census.partitions.begin(), census.partitions.end(), c) - census.partitions.begin();
        need |= 1ULL << idx;
    }
    for (auto mask : census.proper_class_masks) {
        if ((mask & need) == need) return false;
    }
    return true;
}

}  // namespace ewens
