#pragma once
// Shared fixtures and small reference computations for the unit tests. The
// reference helpers use plain loops and matrices, not the library's graph code.
#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chainshadow/system.hpp"

namespace testing_support {

using chainshadow::FiniteMetricSystem;
using chainshadow::Point;
using chainshadow::Rational;

// parallel-cycles point names
inline constexpr Point a = 0, c1 = 1, c2 = 2, e1 = 3, e2 = 4;

inline FiniteMetricSystem gen(const std::string& shorthand) {
    auto spec = chainshadow::parse_generator_shorthand(shorthand);
    return chainshadow::build_corpus_system(spec.name, spec.params);
}

inline FiniteMetricSystem line_system(const std::vector<std::int64_t>& positions, const std::vector<Point>& map,
                                      bool invertible = false, const std::string& id = "line") {
    std::vector<std::vector<Rational>> d(positions.size(), std::vector<Rational>(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = 0; j < positions.size(); ++j) d[i][j] = Rational(std::abs(positions[i] - positions[j]));
    return FiniteMetricSystem(id, d, map, invertible);
}

/// Two 2-cycles {0,1} and {2,3}; points within a cycle at distance 1, across at 4.
inline FiniteMetricSystem two_far_cycles() {
    std::vector<std::vector<Rational>> d(4, std::vector<Rational>(4, Rational(4)));
    for (int i = 0; i < 4; ++i) d[i][i] = 0;
    d[0][1] = d[1][0] = d[2][3] = d[3][2] = 1;
    return FiniteMetricSystem("two-far-cycles", d, {1, 0, 3, 2}, true);
}

/// Random system on distinct points of a small 2D lattice with the L1 metric
/// scaled by 1/2, and a random self-map.
inline FiniteMetricSystem random_system(std::mt19937& rng, std::size_t n, bool bijective = false) {
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) cells.emplace_back(x, y);
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(n);
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i][j] = Rational(std::abs(cells[i].first - cells[j].first) + std::abs(cells[i].second - cells[j].second), 2);
    std::vector<Point> map(n);
    if (bijective) {
        for (std::size_t i = 0; i < n; ++i) map[i] = static_cast<Point>(i);
        std::shuffle(map.begin(), map.end(), rng);
    } else {
        std::uniform_int_distribution<Point> pick(0, static_cast<Point>(n - 1));
        for (auto& m : map) m = pick(rng);
    }
    return FiniteMetricSystem("random", d, map, bijective);
}

/// reach[p][q]: q is reachable from p by a path of length >= 1 in the
/// delta-graph, by Warshall's algorithm.
inline std::vector<std::vector<bool>> closure(const FiniteMetricSystem& s, const Rational& delta) {
    std::size_t n = s.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) r[p][q] = s.distance(s.image(static_cast<Point>(p)), static_cast<Point>(q)) <= delta;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

inline Point iterate(const FiniteMetricSystem& s, Point x, std::size_t k) {
    while (k-- > 0) x = s.image(x);
    return x;
}

/// Direct check: does x eps-track the finite sequence?
inline bool tracks(const FiniteMetricSystem& s, Point x, const std::vector<Point>& seq, const Rational& eps) {
    for (Point y : seq) {
        if (s.distance(x, y) > eps) return false;
        x = s.image(x);
    }
    return true;
}

}  // namespace testing_support
