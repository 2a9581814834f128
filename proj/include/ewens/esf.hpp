#ifndef EWENS_ESF_HPP
#define EWENS_ESF_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ewens/rng.hpp"
#include "ewens/stats.hpp"

namespace ewens {

/// Ewens parameter alpha > 0 and permutation degree n >= 1.
class EwensParams {
   public:
    EwensParams(double alpha, std::size_t n);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] std::size_t n() const { return n_; }

   private:
    double alpha_;
    std::size_t n_;
};

/// Cycle type of a permutation of degree n, stored sparsely as
/// (length, multiplicity) pairs sorted by length with positive multiplicities.
class CycleType {
   public:
    struct Entry {
        std::size_t length;
        std::size_t multiplicity;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    /// Entries may be unsorted and may repeat a length; zero multiplicities are
    /// dropped. Throws std::invalid_argument unless sum(length * multiplicity) == n.
    CycleType(std::size_t n, std::vector<Entry> entries);

    /// From dense counts where counts[l] is the number of l-cycles (counts[0] ignored).
    static CycleType from_counts(std::span<const std::size_t> counts);
    /// From a list of cycle lengths, e.g. {3, 2} for a 3-cycle times a transposition.
    static CycleType from_lengths(std::span<const std::size_t> lengths);
    static CycleType identity(std::size_t n);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t count(std::size_t length) const;
    [[nodiscard]] std::size_t num_cycles() const;
    [[nodiscard]] bool is_identity() const { return entries_.size() == 1 && entries_.front().length == 1; }
    /// Dense counts of size n + 1.
    [[nodiscard]] std::vector<std::size_t> dense() const;
    /// Partition notation with lengths in decreasing order, e.g. "3+1+1".
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const CycleType&, const CycleType&) = default;

   private:
    std::size_t n_;
    std::vector<Entry> entries_;
};

/// Parses "3+1+1" style partitions.
CycleType parse_partition(const std::string& text);

/// A Feller-coupling realisation: xi_1..xi_n plus the quantities defined by
/// the infinite continuation of the sequence, truncated at `horizon`.
class FellerTrace {
   public:
    struct Spacing {
        std::size_t length;
        std::uint64_t count;
    };

    /// Builds a trace from the positions (1-based, strictly increasing, all
    /// <= horizon) of the ones in xi_1..xi_horizon. Position 1 must be present.
    static FellerTrace from_ones(std::size_t n, std::size_t horizon, std::span<const std::size_t> ones);
    /// Same, from the explicit 0/1 sequence xi_1..xi_horizon.
    static FellerTrace from_sequence(std::size_t n, std::span<const std::uint8_t> sequence);

    [[nodiscard]] std::size_t n() const { return bits_.size(); }
    [[nodiscard]] std::size_t horizon() const { return horizon_; }
    /// xi_1..xi_n (index 0 holds xi_1).
    [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return bits_; }
    /// Number of l-spacings among xi_1..xi_horizon (Y_l truncated at the horizon).
    [[nodiscard]] std::uint64_t spacing_count(std::size_t length) const;
    [[nodiscard]] const std::vector<Spacing>& spacings() const { return spacings_; }
    [[nodiscard]] std::size_t j_n() const { return j_n_; }
    [[nodiscard]] std::uint64_t deletions() const { return deletions_; }

   private:
    FellerTrace() = default;
    std::vector<std::uint8_t> bits_;
    std::size_t horizon_ = 0;
    std::vector<Spacing> spacings_;
    std::size_t j_n_ = 0;
    std::uint64_t deletions_ = 0;
};

/// Default horizon for the infinite xi-sequence: 4n.
inline std::size_t default_horizon(std::size_t n) { return 4 * n; }

/// Samples xi_1..xi_horizon with P[xi_i = 1] = alpha / (alpha + i - 1), one
/// uniform per position. Probability tables are built once per sampler.
class FellerSampler {
   public:
    explicit FellerSampler(const EwensParams& params, std::size_t horizon = 0);

    [[nodiscard]] const EwensParams& params() const { return params_; }
    [[nodiscard]] std::size_t horizon() const { return prob_.size(); }

    [[nodiscard]] FellerTrace sample_trace(Rng& rng) const;
    /// Consumes exactly n uniforms; equals cycle_counts_from_bits of the first
    /// n bits of sample_trace under the same generator state.
    [[nodiscard]] CycleType sample_cycle_type(Rng& rng) const;
    /// J_n from xi_1..xi_n only.
    [[nodiscard]] std::size_t sample_j_n(Rng& rng) const;

   private:
    EwensParams params_;
    std::vector<double> prob_;
};

FellerTrace sample_feller_bits(const EwensParams& params, Rng& rng);

/// Spacing counts of xi_1..xi_n followed by an appended 1.
/// Throws std::invalid_argument if bits is empty or bits[0] == 0.
CycleType cycle_counts_from_bits(std::span<const std::uint8_t> bits);

CycleType sample_cycle_type(const EwensParams& params, Rng& rng);

enum class Parity { even, odd };

/// Sign of the permutation: odd iff n - #cycles is odd.
Parity parity(const CycleType& ct);

/// Empirical law of J_n; probability[l] for l in [1, n] (probability[0] = 0).
struct JnHistogram {
    std::vector<double> probability;
    std::vector<std::uint64_t> counts;
    std::uint64_t trials = 0;
};

JnHistogram estimate_jn_histogram(const EwensParams& params, std::uint64_t trials, const Rng& rng);

/// Mean of D_n over `trials` traces with the given horizon (0 = 4n).
MeanEstimate estimate_mean_deletions(const EwensParams& params, std::uint64_t trials, const Rng& rng,
                                     std::size_t horizon = 0);

/// histograms[l][v] = number of traces with Y_l = v, for l in [1, max_length].
struct SpacingHistograms {
    std::vector<std::vector<std::uint64_t>> histograms;
    std::vector<Moments> moments;
    std::uint64_t trials = 0;
};

SpacingHistograms estimate_spacing_counts(const EwensParams& params, std::size_t max_length, std::uint64_t trials,
                                          const Rng& rng, std::size_t horizon = 0);

/// Fraction of odd permutations.
Estimate estimate_odd_probability(const EwensParams& params, std::uint64_t trials, const Rng& rng);

}  // namespace ewens

#endif  // EWENS_ESF_HPP
