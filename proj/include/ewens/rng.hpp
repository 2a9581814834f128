#ifndef EWENS_RNG_HPP
#define EWENS_RNG_HPP

#include <cstdint>
#include <limits>

namespace ewens {

namespace detail {

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Odd increment with enough bit transitions, as in java.util.SplittableRandom.
constexpr std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    z = (z ^ (z >> 33)) | 1ULL;
    const auto transitions = __builtin_popcountll(z ^ (z >> 1));
    return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaULL : z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Splittable counter-based generator.
///
/// The i-th output of a stream is `mix64(key + i * gamma)`, a pure function of
/// (key, gamma, i), so any position can be reached in O(1) with `discard`.
/// `split(index)` derives an independent child stream deterministically from
/// the parent's identity (not from its position), so a trial indexed by `t`
/// draws the same numbers no matter which worker runs it.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed),
          key_(detail::mix64(seed + detail::kGolden * (stream + 1))),
          gamma_(detail::mix_gamma(detail::mix64(seed ^ detail::mix64(stream + 0x632be59bd9b4e019ULL)))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return detail::mix64(key_ + (++counter_) * gamma_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    void discard(std::uint64_t count) { counter_ += count; }

    [[nodiscard]] Rng split(std::uint64_t index) const {
        Rng child = *this;
        child.key_ = detail::mix64(key_ ^ detail::mix64(index * detail::kGolden + gamma_));
        child.gamma_ = detail::mix_gamma(child.key_ + detail::mix64(index ^ key_));
        child.counter_ = 0;
        return child;
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t position() const { return counter_; }

    friend bool operator==(const Rng&, const Rng&) = default;

   private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

}  // namespace ewens

#endif  // EWENS_RNG_HPP
