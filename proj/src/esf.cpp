#include "ewens/esf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ewens/parallel.hpp"

namespace ewens {

EwensParams::EwensParams(double alpha, std::size_t n) : alpha_(alpha), n_(n) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("EwensParams: alpha must be positive");
    if (n < 1) throw std::invalid_argument("EwensParams: n must be at least 1");
}

// ---------------------------------------------------------------------------
// CycleType

CycleType::CycleType(std::size_t n, std::vector<Entry> entries) : n_(n) {
    std::map<std::size_t, std::size_t> merged;
    for (const auto& e : entries) {
        if (e.multiplicity == 0) continue;
        if (e.length == 0) throw std::invalid_argument("CycleType: cycle length must be positive");
        merged[e.length] += e.multiplicity;
    }
    std::size_t total = 0;
    entries_.reserve(merged.size());
    for (const auto& [len, mult] : merged) {
        entries_.push_back({len, mult});
        total += len * mult;
    }
    if (total != n || n == 0) {
        throw std::invalid_argument("CycleType: sum of l*C_l is " + std::to_string(total) + ", expected n = " +
                                    std::to_string(n));
    }
}

CycleType CycleType::from_counts(std::span<const std::size_t> counts) {
    std::vector<Entry> entries;
    std::size_t n = 0;
    for (std::size_t l = 1; l < counts.size(); ++l) {
        if (counts[l] == 0) continue;
        entries.push_back({l, counts[l]});
        n += l * counts[l];
    }
    return CycleType(n, std::move(entries));
}

CycleType CycleType::from_lengths(std::span<const std::size_t> lengths) {
    std::vector<Entry> entries;
    std::size_t n = 0;
    for (auto l : lengths) {
        entries.push_back({l, 1});
        n += l;
    }
    return CycleType(n, std::move(entries));
}

CycleType CycleType::identity(std::size_t n) { return CycleType(n, {{1, n}}); }

std::size_t CycleType::count(std::size_t length) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), length,
                               [](const Entry& e, std::size_t l) { return e.length < l; });
    return (it != entries_.end() && it->length == length) ? it->multiplicity : 0;
}

std::size_t CycleType::num_cycles() const {
    std::size_t c = 0;
    for (const auto& e : entries_) c += e.multiplicity;
    return c;
}

std::vector<std::size_t> CycleType::dense() const {
    std::vector<std::size_t> d(n_ + 1, 0);
    for (const auto& e : entries_) d[e.length] = e.multiplicity;
    return d;
}

std::string CycleType::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        for (std::size_t k = 0; k < it->multiplicity; ++k) {
            if (!first) os << '+';
            os << it->length;
            first = false;
        }
    }
    return os.str();
}

CycleType parse_partition(const std::string& text) {
    std::vector<std::size_t> lengths;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, '+')) {
        const auto first = token.find_first_not_of(" \t");
        const auto last = token.find_last_not_of(" \t");
        if (first == std::string::npos) throw std::invalid_argument("parse_partition: empty part in '" + text + "'");
        token = token.substr(first, last - first + 1);
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(token, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_partition: bad part '" + token + "'");
        }
        if (pos != token.size() || v == 0) throw std::invalid_argument("parse_partition: bad part '" + token + "'");
        lengths.push_back(static_cast<std::size_t>(v));
    }
    if (lengths.empty()) throw std::invalid_argument("parse_partition: empty partition");
    return CycleType::from_lengths(lengths);
}

// ---------------------------------------------------------------------------
// Feller coupling

CycleType cycle_counts_from_bits(std::span<const std::uint8_t> bits) {
    if (bits.empty()) throw std::invalid_argument("cycle_counts_from_bits: empty sequence");
    if (bits[0] == 0) throw std::invalid_argument("cycle_counts_from_bits: first bit must be 1");
    const std::size_t n = bits.size();
    std::map<std::size_t, std::size_t> counts;
    std::size_t last = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (bits[i - 1] != 0) {
            ++counts[i - last];
            last = i;
        }
    }
    ++counts[n + 1 - last];  // closed by the appended 1
    std::vector<CycleType::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [l, c] : counts) entries.push_back({l, c});
    return CycleType(n, std::move(entries));
}

FellerTrace FellerTrace::from_ones(std::size_t n, std::size_t horizon, std::span<const std::size_t> ones) {
    if (n == 0) throw std::invalid_argument("FellerTrace: n must be positive");
    if (horizon < n) throw std::invalid_argument("FellerTrace: horizon must be at least n");
    if (ones.empty() || ones.front() != 1) throw std::invalid_argument("FellerTrace: xi_1 must be 1");
    for (std::size_t k = 1; k < ones.size(); ++k) {
        if (ones[k] <= ones[k - 1]) throw std::invalid_argument("FellerTrace: positions must increase");
    }
    if (ones.back() > horizon) throw std::invalid_argument("FellerTrace: position beyond horizon");

    FellerTrace t;
    t.horizon_ = horizon;
    t.bits_.assign(n, 0);
    std::size_t r_n = 1;
    for (auto p : ones) {
        if (p > n) break;
        t.bits_[p - 1] = 1;
        r_n = p;
    }
    t.j_n_ = n + 1 - r_n;

    std::map<std::size_t, std::uint64_t> y;
    for (std::size_t k = 1; k < ones.size(); ++k) ++y[ones[k] - ones[k - 1]];
    t.spacings_.reserve(y.size());
    for (const auto& [l, c] : y) t.spacings_.push_back({l, c});

    // D_n = sum over l <= n of (Y_l + 1{J_n = l} - C_l), each term clipped at 0.
    const CycleType c = cycle_counts_from_bits(t.bits_);
    std::uint64_t d = 0;
    for (const auto& s : t.spacings_) {
        if (s.length > n) break;
        const std::uint64_t upper = s.count + (t.j_n_ == s.length ? 1 : 0);
        const std::uint64_t cl = c.count(s.length);
        if (upper > cl) d += upper - cl;
    }
    t.deletions_ = d;
    return t;
}

FellerTrace FellerTrace::from_sequence(std::size_t n, std::span<const std::uint8_t> sequence) {
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (sequence[i] != 0) ones.push_back(i + 1);
    }
    return from_ones(n, sequence.size(), ones);
}

std::uint64_t FellerTrace::spacing_count(std::size_t length) const {
    auto it = std::lower_bound(spacings_.begin(), spacings_.end(), length,
                               [](const Spacing& s, std::size_t l) { return s.length < l; });
    return (it != spacings_.end() && it->length == length) ? it->count : 0;
}

FellerSampler::FellerSampler(const EwensParams& params, std::size_t horizon) : params_(params) {
    if (horizon == 0) horizon = default_horizon(params.n());
    if (horizon < params.n()) throw std::invalid_argument("FellerSampler: horizon must be at least n");
    prob_.resize(horizon);
    const double a = params.alpha();
    for (std::size_t i = 1; i <= horizon; ++i) prob_[i - 1] = a / (a + static_cast<double>(i - 1));
    prob_[0] = 1.0;
}

FellerTrace FellerSampler::sample_trace(Rng& rng) const {
    std::vector<std::size_t> ones;
    ones.reserve(32);
    const std::size_t h = prob_.size();
    for (std::size_t i = 0; i < h; ++i) {
        if (rng.uniform() < prob_[i]) ones.push_back(i + 1);
    }
    return FellerTrace::from_ones(params_.n(), h, ones);
}

CycleType FellerSampler::sample_cycle_type(Rng& rng) const {
    const std::size_t n = params_.n();
    std::vector<std::size_t> lengths;
    lengths.reserve(32);
    std::size_t last = 1;
    rng.uniform();  // xi_1 = 1 with probability one
    for (std::size_t i = 2; i <= n; ++i) {
        if (rng.uniform() < prob_[i - 1]) {
            lengths.push_back(i - last);
            last = i;
        }
    }
    lengths.push_back(n + 1 - last);
    return CycleType::from_lengths(lengths);
}

std::size_t FellerSampler::sample_j_n(Rng& rng) const {
    const std::size_t n = params_.n();
    std::size_t last = 1;
    rng.uniform();
    for (std::size_t i = 2; i <= n; ++i) {
        if (rng.uniform() < prob_[i - 1]) last = i;
    }
    return n + 1 - last;
}

FellerTrace sample_feller_bits(const EwensParams& params, Rng& rng) {
    return FellerSampler(params).sample_trace(rng);
}

CycleType sample_cycle_type(const EwensParams& params, Rng& rng) {
    return FellerSampler(params, params.n()).sample_cycle_type(rng);
}

Parity parity(const CycleType& ct) { return ((ct.n() - ct.num_cycles()) % 2 == 1) ? Parity::odd : Parity::even; }

// ---------------------------------------------------------------------------
// Experiments

JnHistogram estimate_jn_histogram(const EwensParams& params, std::uint64_t trials, const Rng& rng) {
    if (trials < 1) throw std::invalid_argument("estimate_jn_histogram: trials must be positive");
    const FellerSampler sampler(params, params.n());
    const std::size_t n = params.n();
    auto counts = parallel::reduce_trials<std::vector<std::uint64_t>>(
        trials, std::vector<std::uint64_t>(n + 1, 0),
        [&](std::vector<std::uint64_t>& acc, std::uint64_t t) {
            Rng r = rng.split(t);
            ++acc[sampler.sample_j_n(r)];
        },
        [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        });
    JnHistogram h;
    h.trials = trials;
    h.probability.resize(n + 1);
    for (std::size_t l = 0; l <= n; ++l) h.probability[l] = static_cast<double>(counts[l]) / static_cast<double>(trials);
    h.counts = std::move(counts);
    return h;
}

MeanEstimate estimate_mean_deletions(const EwensParams& params, std::uint64_t trials, const Rng& rng,
                                     std::size_t horizon) {
    if (trials < 1) throw std::invalid_argument("estimate_mean_deletions: trials must be positive");
    const FellerSampler sampler(params, horizon);
    const Moments m = parallel::reduce_trials<Moments>(
        trials, Moments{},
        [&](Moments& acc, std::uint64_t t) {
            Rng r = rng.split(t);
            acc.add(static_cast<double>(sampler.sample_trace(r).deletions()));
        },
        [](Moments& a, const Moments& b) { a.merge(b); });
    return m.estimate();
}

SpacingHistograms estimate_spacing_counts(const EwensParams& params, std::size_t max_length, std::uint64_t trials,
                                          const Rng& rng, std::size_t horizon) {
    if (trials < 1) throw std::invalid_argument("estimate_spacing_counts: trials must be positive");
    if (max_length < 1) throw std::invalid_argument("estimate_spacing_counts: max_length must be positive");
    const FellerSampler sampler(params, horizon);
    struct Acc {
        std::vector<std::vector<std::uint64_t>> hist;
        std::vector<Moments> moments;
    };
    Acc init{std::vector<std::vector<std::uint64_t>>(max_length + 1), std::vector<Moments>(max_length + 1)};
    Acc total = parallel::reduce_trials<Acc>(
        trials, init,
        [&](Acc& acc, std::uint64_t t) {
            Rng r = rng.split(t);
            const FellerTrace trace = sampler.sample_trace(r);
            for (std::size_t l = 1; l <= max_length; ++l) {
                const std::uint64_t y = trace.spacing_count(l);
                auto& h = acc.hist[l];
                if (h.size() <= y) h.resize(y + 1, 0);
                ++h[y];
                acc.moments[l].add(static_cast<double>(y));
            }
        },
        [](Acc& a, const Acc& b) {
            for (std::size_t l = 0; l < a.hist.size(); ++l) {
                if (a.hist[l].size() < b.hist[l].size()) a.hist[l].resize(b.hist[l].size(), 0);
                for (std::size_t v = 0; v < b.hist[l].size(); ++v) a.hist[l][v] += b.hist[l][v];
                a.moments[l].merge(b.moments[l]);
            }
        });
    return SpacingHistograms{std::move(total.hist), std::move(total.moments), trials};
}

Estimate estimate_odd_probability(const EwensParams& params, std::uint64_t trials, const Rng& rng) {
    if (trials < 1) throw std::invalid_argument("estimate_odd_probability: trials must be positive");
    const FellerSampler sampler(params, params.n());
    const auto odd = parallel::count_trials(trials, [&](std::uint64_t t) {
        Rng r = rng.split(t);
        return parity(sampler.sample_cycle_type(r)) == Parity::odd;
    });
    return wilson_estimate(odd, trials, rng.seed());
}

}  // namespace ewens
