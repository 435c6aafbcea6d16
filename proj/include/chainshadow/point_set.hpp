#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace chainshadow {

using Point = std::uint32_t;

/// Subset of {0, ..., n-1} stored as a packed bitset. Iteration is always in
/// increasing index order.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
    PointSet(std::size_t universe, std::initializer_list<Point> points) : PointSet(universe) {
        for (Point p : points) insert(p);
    }

    static PointSet full(std::size_t universe) {
        PointSet s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.insert(static_cast<Point>(i));
        return s;
    }

    template <class Range>
    static PointSet from(std::size_t universe, const Range& points) {
        PointSet s(universe);
        for (auto p : points) s.insert(static_cast<Point>(p));
        return s;
    }

    std::size_t universe() const { return universe_; }

    void insert(Point p) { words_[p >> 6] |= std::uint64_t{1} << (p & 63); }
    void erase(Point p) { words_[p >> 6] &= ~(std::uint64_t{1} << (p & 63)); }
    bool contains(Point p) const { return p < universe_ && ((words_[p >> 6] >> (p & 63)) & 1U); }

    bool empty() const {
        for (auto w : words_)
            if (w != 0) return false;
        return true;
    }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool intersects(const PointSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const PointSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    PointSet& operator&=(const PointSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    PointSet& operator|=(const PointSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
    friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }

    friend bool operator==(const PointSet& a, const PointSet& b) = default;

    /// Lexicographic comparison of the sorted member lists.
    friend bool operator<(const PointSet& a, const PointSet& b) { return a.members() < b.members(); }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                auto bit = static_cast<std::size_t>(std::countr_zero(bits));
                fn(static_cast<Point>(w * 64 + bit));
                bits &= bits - 1;
            }
        }
    }

    std::vector<Point> members() const {
        std::vector<Point> out;
        out.reserve(size());
        for_each([&](Point p) { out.push_back(p); });
        return out;
    }

    /// Smallest member; undefined on the empty set.
    Point first() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != 0) return static_cast<Point>(w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w])));
        return static_cast<Point>(universe_);
    }

    std::size_t hash() const noexcept {
        std::size_t h = universe_;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace chainshadow

template <>
struct std::hash<chainshadow::PointSet> {
    std::size_t operator()(const chainshadow::PointSet& s) const noexcept { return s.hash(); }
};
