#ifndef EWENS_PERM_STATS_HPP
#define EWENS_PERM_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewens/esf.hpp"
#include "ewens/rng.hpp"
#include "ewens/stats.hpp"

namespace ewens {

/// Smallest-prime-factor table on [0, limit].
class PrimeSieve {
   public:
    explicit PrimeSieve(std::size_t limit);

    [[nodiscard]] std::size_t limit() const { return spf_.size() - 1; }
    [[nodiscard]] bool is_prime(std::size_t x) const { return x >= 2 && spf_.at(x) == x; }
    [[nodiscard]] std::size_t smallest_prime_factor(std::size_t x) const { return spf_.at(x); }
    /// Prime factorisation of 1 <= x <= limit as (prime, exponent) pairs.
    [[nodiscard]] std::vector<std::pair<std::uint64_t, std::uint32_t>> factor(std::size_t x) const;
    [[nodiscard]] std::size_t largest_prime_factor(std::size_t x) const;

   private:
    std::vector<std::uint32_t> spf_;
};

/// Integer in factored form; primes ascending, exponents positive.
class Factorization {
   public:
    Factorization() = default;
    explicit Factorization(std::vector<std::pair<std::uint64_t, std::uint64_t>> powers);

    [[nodiscard]] const std::vector<std::pair<std::uint64_t, std::uint64_t>>& powers() const { return powers_; }
    [[nodiscard]] bool is_one() const { return powers_.empty(); }
    [[nodiscard]] std::uint64_t exponent(std::uint64_t p) const;
    [[nodiscard]] std::optional<std::uint64_t> largest_prime() const;
    /// Value if it fits in 64 bits.
    [[nodiscard]] std::optional<std::uint64_t> value() const;
    /// "2^2*3" style; "1" for the empty product.
    [[nodiscard]] std::string to_string() const;
    /// log of the value.
    [[nodiscard]] double log() const;

    friend bool operator==(const Factorization&, const Factorization&) = default;

   private:
    std::vector<std::pair<std::uint64_t, std::uint64_t>> powers_;
};

/// prod_l l^{C_l}.
Factorization phi(const CycleType& ct, const PrimeSieve& sieve);
Factorization phi(const CycleType& ct);

/// lcm of the cycle lengths.
Factorization order(const CycleType& ct, const PrimeSieve& sieve);
Factorization order(const CycleType& ct);

/// Fewest points moved by a nonidentity power: min over primes p | ord of the
/// total length of cycles whose p-adic valuation equals that of ord.
/// Throws std::invalid_argument for the identity.
std::size_t minimal_degree(const CycleType& ct, const PrimeSieve& sieve);
std::size_t minimal_degree(const CycleType& ct);

/// Largest prime dividing phi; nullopt when phi = 1 (the identity).
std::optional<std::size_t> largest_prime_of_phi(const CycleType& ct, const PrimeSieve& sieve);
std::optional<std::size_t> largest_prime_of_phi(const CycleType& ct);

/// Largest d such that at least two cycles (counted with multiplicity) have
/// length divisible by d; 0 when there is only one cycle.
std::size_t max_common_cycle_divisor(const CycleType& ct);

struct JointCycleRow {
    std::size_t i = 0;
    std::size_t j = 0;
    Estimate both_present;  // P[C_i C_j > 0]
    Estimate i_repeated;    // P[C_i >= 2]
};

/// One row per (i, j) pair, all estimated from the same `trials` samples.
/// Throws std::invalid_argument unless 1 <= i < j <= n for every pair.
std::vector<JointCycleRow> estimate_joint_cycle_probs(const EwensParams& params,
                                                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                      std::uint64_t trials, const Rng& rng);

/// Frequencies of the three order-theoretic events over a common sample.
struct OrderStatsFrequencies {
    Estimate minimal_degree_above;  // minimal degree > n^beta
    Estimate gcd_above;             // max common cycle divisor > n^a, a = 1 - alpha/(4 alpha + 3)
    Estimate largest_prime_above;   // largest prime of phi > n exp(-log log n sqrt(log n))
    double minimal_degree_threshold = 0.0;
    double gcd_threshold = 0.0;
    double largest_prime_threshold = 0.0;
};

OrderStatsFrequencies estimate_order_stats(const EwensParams& params, double beta, std::uint64_t trials,
                                           const Rng& rng);

}  // namespace ewens

#endif  // EWENS_PERM_STATS_HPP
