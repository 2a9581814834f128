#ifndef EWENS_SUMSET_HPP
#define EWENS_SUMSET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewens/esf.hpp"

namespace ewens {

/// Dense bit-vector over [0, bound]; bit s is set iff s is attainable.
/// Bit 0 is always set.
class SumBitmap {
   public:
    explicit SumBitmap(std::size_t bound);

    [[nodiscard]] std::size_t bound() const { return bound_; }
    [[nodiscard]] bool contains(std::size_t s) const {
        return s <= bound_ && ((words_[s >> 6] >> (s & 63)) & 1ULL) != 0;
    }
    void set(std::size_t s);
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] std::vector<std::size_t> elements() const;
    /// Smallest set element in [lo, hi], if any.
    [[nodiscard]] std::optional<std::size_t> first_in(std::size_t lo, std::size_t hi) const;
    /// Number of set elements in [lo, hi].
    [[nodiscard]] std::size_t count_in(std::size_t lo, std::size_t hi) const;

    /// this |= this << shift, clipped at bound.
    void or_shifted(std::size_t shift);
    /// Bitwise AND over the common range; the result keeps the smaller bound.
    SumBitmap& operator&=(const SumBitmap& other);

    [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const SumBitmap&, const SumBitmap&) = default;

   private:
    void clear_tail();
    std::size_t bound_;
    std::vector<std::uint64_t> words_;
};

/// A part of value `value` available `multiplicity` times.
struct Part {
    std::size_t value;
    std::size_t multiplicity;
};

/// {sum value_j * y_j : 0 <= y_j <= multiplicity_j} intersected with [0, bound].
/// Bounded knapsack with binary splitting of multiplicities and a word-parallel
/// shifted OR. Throws std::invalid_argument for a zero part value.
SumBitmap attainable_sums(std::span<const Part> parts, std::size_t bound);

/// Sizes of subsets of [n] fixed setwise by a permutation of this cycle type.
SumBitmap fixed_set_sizes(const CycleType& ct);

/// Intersection of all bitmaps; uses the minimum bound. Throws on an empty list.
SumBitmap intersect(std::span<const SumBitmap> bitmaps);

/// Least l in [lo, hi] that is a fixed-set size of every cycle type.
/// Throws std::invalid_argument if the cycle types disagree on n or the range
/// is not within [1, n].
std::optional<std::size_t> common_fixed_set_size(std::span<const CycleType> cts, std::size_t lo, std::size_t hi);

/// Set of difference vectors (n_1 - n_m, ..., n_{m-1} - n_m).
class DiffSet {
   public:
    DiffSet(std::size_t m, std::vector<std::vector<std::int64_t>> tuples);
    [[nodiscard]] std::size_t m() const { return m_; }
    [[nodiscard]] std::size_t size() const { return tuples_.size(); }
    /// Lexicographically sorted, duplicate free.
    [[nodiscard]] const std::vector<std::vector<std::int64_t>>& tuples() const { return tuples_; }
    [[nodiscard]] bool contains(std::span<const std::int64_t> tuple) const;
    /// Largest |coordinate| over all tuples (0 if empty).
    [[nodiscard]] std::int64_t max_abs() const;

   private:
    std::size_t m_;
    std::vector<std::vector<std::int64_t>> tuples_;
};

class SizeLimitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultDiffGuard = 100'000'000ULL;

/// Exact enumeration over the set elements of each bitmap. Requires m >= 2.
/// Throws SizeLimitError if the product of set-bit counts exceeds `guard`.
DiffSet diff_set(std::span<const SumBitmap> bitmaps, std::uint64_t guard = kDefaultDiffGuard);
/// Same over explicit element lists (which need not contain 0).
DiffSet diff_set(std::span<const std::vector<std::size_t>> sets, std::uint64_t guard = kDefaultDiffGuard);

/// Run-length text form "a-b,c,..." of the set elements.
std::string to_text(const SumBitmap& bitmap);
/// Inverse of to_text. A bound of 0 means "largest listed element".
SumBitmap bitmap_from_text(const std::string& text, std::size_t bound = 0);

}  // namespace ewens

#endif  // EWENS_SUMSET_HPP
