#include "ewens/sumset.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_set>

namespace ewens {

SumBitmap::SumBitmap(std::size_t bound) : bound_(bound), words_(bound / 64 + 1, 0) { words_[0] = 1; }

void SumBitmap::set(std::size_t s) {
    if (s > bound_) throw std::out_of_range("SumBitmap::set: index beyond bound");
    words_[s >> 6] |= 1ULL << (s & 63);
}

std::size_t SumBitmap::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

std::vector<std::size_t> SumBitmap::elements() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t x = words_[w];
        while (x != 0) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

std::optional<std::size_t> SumBitmap::first_in(std::size_t lo, std::size_t hi) const {
    hi = std::min(hi, bound_);
    if (lo > hi) return std::nullopt;
    std::size_t w = lo >> 6;
    std::uint64_t x = words_[w] & (~0ULL << (lo & 63));
    const std::size_t last_word = hi >> 6;
    while (true) {
        if (x != 0) {
            const std::size_t s = w * 64 + static_cast<std::size_t>(std::countr_zero(x));
            if (s <= hi) return s;
            return std::nullopt;
        }
        if (++w > last_word) return std::nullopt;
        x = words_[w];
    }
}

std::size_t SumBitmap::count_in(std::size_t lo, std::size_t hi) const {
    hi = std::min(hi, bound_);
    std::size_t c = 0;
    for (std::size_t s = lo; s <= hi;) {
        if ((s & 63) == 0 && s + 63 <= hi) {
            c += static_cast<std::size_t>(std::popcount(words_[s >> 6]));
            s += 64;
        } else {
            c += contains(s) ? 1 : 0;
            ++s;
        }
    }
    return c;
}

void SumBitmap::clear_tail() {
    const std::size_t used = (bound_ & 63) + 1;
    if (used < 64) words_.back() &= (1ULL << used) - 1;
}

void SumBitmap::or_shifted(std::size_t shift) {
    if (shift == 0 || shift > bound_) return;
    const std::size_t ws = shift >> 6;
    const unsigned bs = static_cast<unsigned>(shift & 63);
    const std::size_t nw = words_.size();
    // Descending, so every source word is read before it is updated.
    if (bs == 0) {
        for (std::size_t w = nw; w-- > ws;) words_[w] |= words_[w - ws];
    } else {
        for (std::size_t w = nw; w-- > ws;) {
            std::uint64_t v = words_[w - ws] << bs;
            if (w > ws) v |= words_[w - ws - 1] >> (64 - bs);
            words_[w] |= v;
        }
    }
    clear_tail();
}

SumBitmap& SumBitmap::operator&=(const SumBitmap& other) {
    if (other.bound_ < bound_) {
        bound_ = other.bound_;
        words_.resize(bound_ / 64 + 1);
    }
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    clear_tail();
    return *this;
}

SumBitmap attainable_sums(std::span<const Part> parts, std::size_t bound) {
    SumBitmap bm(bound);
    for (const auto& p : parts) {
        if (p.value == 0) throw std::invalid_argument("attainable_sums: part values must be positive");
        // Chunks 1, 2, 4, ..., remainder reach every multiplicity in [0, m].
        std::size_t remaining = p.multiplicity;
        for (std::size_t chunk = 1; remaining > 0; chunk <<= 1) {
            const std::size_t take = std::min(chunk, remaining);
            remaining -= take;
            if (p.value > bound / take) {
                // take * value > bound: this and all larger chunks shift past the bound.
                break;
            }
            bm.or_shifted(take * p.value);
        }
    }
    return bm;
}

SumBitmap fixed_set_sizes(const CycleType& ct) {
    std::vector<Part> parts;
    parts.reserve(ct.entries().size());
    for (const auto& e : ct.entries()) parts.push_back({e.length, e.multiplicity});
    return attainable_sums(parts, ct.n());
}

SumBitmap intersect(std::span<const SumBitmap> bitmaps) {
    if (bitmaps.empty()) throw std::invalid_argument("intersect: empty list");
    SumBitmap out = bitmaps.front();
    for (std::size_t i = 1; i < bitmaps.size(); ++i) out &= bitmaps[i];
    return out;
}

std::optional<std::size_t> common_fixed_set_size(std::span<const CycleType> cts, std::size_t lo, std::size_t hi) {
    if (cts.empty()) throw std::invalid_argument("common_fixed_set_size: no cycle types");
    const std::size_t n = cts.front().n();
    for (const auto& ct : cts) {
        if (ct.n() != n) throw std::invalid_argument("common_fixed_set_size: cycle types disagree on n");
    }
    if (lo < 1 || lo > hi || hi > n) throw std::invalid_argument("common_fixed_set_size: need 1 <= lo <= hi <= n");
    SumBitmap acc = fixed_set_sizes(cts.front());
    for (std::size_t i = 1; i < cts.size(); ++i) {
        if (!acc.first_in(lo, hi)) return std::nullopt;
        acc &= fixed_set_sizes(cts[i]);
    }
    return acc.first_in(lo, hi);
}

// ---------------------------------------------------------------------------
// Difference sets

DiffSet::DiffSet(std::size_t m, std::vector<std::vector<std::int64_t>> tuples) : m_(m), tuples_(std::move(tuples)) {
    if (m < 2) throw std::invalid_argument("DiffSet: m must be at least 2");
    for (const auto& t : tuples_) {
        if (t.size() != m - 1) throw std::invalid_argument("DiffSet: tuple has wrong dimension");
    }
    std::sort(tuples_.begin(), tuples_.end());
    tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool DiffSet::contains(std::span<const std::int64_t> tuple) const {
    std::vector<std::int64_t> key(tuple.begin(), tuple.end());
    return std::binary_search(tuples_.begin(), tuples_.end(), key);
}

std::int64_t DiffSet::max_abs() const {
    std::int64_t r = 0;
    for (const auto& t : tuples_) {
        for (auto v : t) r = std::max(r, v < 0 ? -v : v);
    }
    return r;
}

namespace {

struct TupleHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto x : v) h = detail::mix64(h ^ static_cast<std::uint64_t>(x));
        return static_cast<std::size_t>(h);
    }
};

// Dense cube storage is used while the cube has at most this many cells.
constexpr std::uint64_t kDenseCubeGuard = 1ULL << 28;

}  // namespace

DiffSet diff_set(std::span<const SumBitmap> bitmaps, std::uint64_t guard) {
    std::vector<std::vector<std::size_t>> elems;
    elems.reserve(bitmaps.size());
    for (const auto& b : bitmaps) elems.push_back(b.elements());
    return diff_set(std::span<const std::vector<std::size_t>>(elems), guard);
}

DiffSet diff_set(std::span<const std::vector<std::size_t>> sets, std::uint64_t guard) {
    const std::size_t m = sets.size();
    if (m < 2) throw std::invalid_argument("diff_set: need at least two sumsets");
    std::vector<std::vector<std::size_t>> elems(m);
    long double product = 1.0L;
    std::size_t max_bound = 0;
    for (std::size_t i = 0; i < m; ++i) {
        elems[i] = sets[i];
        std::sort(elems[i].begin(), elems[i].end());
        elems[i].erase(std::unique(elems[i].begin(), elems[i].end()), elems[i].end());
        product *= static_cast<long double>(elems[i].size());
        if (!elems[i].empty()) max_bound = std::max(max_bound, elems[i].back());
    }
    if (product > static_cast<long double>(guard)) {
        throw SizeLimitError("diff_set: enumeration size exceeds guard of " + std::to_string(guard));
    }
    if (product == 0.0L) return DiffSet(m, {});
    const std::size_t d = m - 1;
    const auto radius = static_cast<std::int64_t>(max_bound);
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(radius) + 1;
    long double cube = 1.0L;
    for (std::size_t i = 0; i < d; ++i) cube *= static_cast<long double>(side);

    std::vector<std::size_t> idx(d, 0);
    auto for_each_tuple = [&](auto&& emit) {
        for (auto last : elems[m - 1]) {
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                emit(last);
                std::size_t k = 0;
                while (k < d && ++idx[k] == elems[k].size()) idx[k++] = 0;
                if (k == d) break;
            }
        }
    };

    std::vector<std::vector<std::int64_t>> tuples;
    if (cube <= static_cast<long double>(kDenseCubeGuard)) {
        std::vector<std::uint64_t> cells(static_cast<std::size_t>((static_cast<std::uint64_t>(cube) + 63) / 64), 0);
        for_each_tuple([&](std::size_t last) {
            std::uint64_t off = 0;
            for (std::size_t k = d; k-- > 0;) {
                const auto diff = static_cast<std::int64_t>(elems[k][idx[k]]) - static_cast<std::int64_t>(last);
                off = off * side + static_cast<std::uint64_t>(diff + radius);
            }
            cells[off >> 6] |= 1ULL << (off & 63);
        });
        std::vector<std::int64_t> t(d);
        for (std::size_t w = 0; w < cells.size(); ++w) {
            std::uint64_t x = cells[w];
            while (x != 0) {
                std::uint64_t off = w * 64 + static_cast<std::uint64_t>(std::countr_zero(x));
                x &= x - 1;
                for (std::size_t k = 0; k < d; ++k) {
                    t[k] = static_cast<std::int64_t>(off % side) - radius;
                    off /= side;
                }
                tuples.push_back(t);
            }
        }
    } else {
        std::unordered_set<std::vector<std::int64_t>, TupleHash> seen;
        std::vector<std::int64_t> t(d);
        for_each_tuple([&](std::size_t last) {
            for (std::size_t k = 0; k < d; ++k)
                t[k] = static_cast<std::int64_t>(elems[k][idx[k]]) - static_cast<std::int64_t>(last);
            seen.insert(t);
        });
        tuples.assign(seen.begin(), seen.end());
    }
    return DiffSet(m, std::move(tuples));
}

// ---------------------------------------------------------------------------
// Text form

std::string to_text(const SumBitmap& bitmap) {
    const auto e = bitmap.elements();
    std::ostringstream os;
    for (std::size_t i = 0; i < e.size();) {
        std::size_t j = i;
        while (j + 1 < e.size() && e[j + 1] == e[j] + 1) ++j;
        if (i > 0) os << ',';
        os << e[i];
        if (j > i) os << '-' << e[j];
        i = j + 1;
    }
    return os.str();
}

SumBitmap bitmap_from_text(const std::string& text, std::size_t bound) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::istringstream is(text);
    std::string item;
    std::size_t max_elem = 0;
    auto parse_num = [&](const std::string& s) -> std::size_t {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bitmap_from_text: bad number '" + s + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("bitmap_from_text: bad number '" + s + "'");
        return static_cast<std::size_t>(v);
    };
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find('-');
        std::size_t a = 0, b = 0;
        if (dash == std::string::npos) {
            a = b = parse_num(item);
        } else {
            a = parse_num(item.substr(0, dash));
            b = parse_num(item.substr(dash + 1));
            if (b < a) throw std::invalid_argument("bitmap_from_text: descending range '" + item + "'");
        }
        ranges.emplace_back(a, b);
        max_elem = std::max(max_elem, b);
    }
    if (bound == 0) bound = max_elem;
    if (max_elem > bound) throw std::invalid_argument("bitmap_from_text: element beyond bound");
    SumBitmap bm(bound);
    for (auto [a, b] : ranges) {
        for (std::size_t s = a; s <= b; ++s) bm.set(s);
    }
    return bm;
}

}  // namespace ewens
