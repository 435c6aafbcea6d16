// Exhaustive reference check for the shadow automaton. It deliberately shares
// no code with it: edges, orbits, tracking and merging are all recomputed from
// the raw metric table and map.

#include <set>
#include <tuple>

#include "chainshadow/shadow.hpp"

namespace chainshadow {

namespace {

struct Oracle {
    const FiniteMetricSystem& system;
    const Rational& delta;
    const Rational& eps;
    Property property;
    std::size_t n;
    std::vector<std::vector<Point>> orbit;  // orbit[x][i] = f^i(x)
    std::vector<std::vector<Point>> edges;
    std::vector<char> near;  // near[x * n + p] = d(x, p) <= eps

    // Visited (depth, last point, surviving start points) for the current length.
    std::set<std::tuple<std::size_t, Point, std::uint64_t>> seen;
    std::vector<Point> path;

    bool merges_while_tracking(Point y, Point p) const {
        for (std::size_t step = 0; step <= n * n; ++step) {
            if (y == p) return true;
            if (!near[y * n + p]) return false;
            y = system.image(y);
            p = system.image(p);
        }
        return false;
    }

    bool leaf_fails(std::uint64_t alive) const {
        if (property == Property::Shadowing) return alive == 0;
        const std::size_t last = path.size() - 1;
        for (Point x = 0; x < n; ++x)
            if ((alive >> x) & 1U && merges_while_tracking(orbit[x][last], path.back())) return false;
        return true;
    }

    bool search(std::size_t length, std::uint64_t alive) {
        if (path.size() == length) return leaf_fails(alive);
        const std::size_t depth = path.size();
        for (Point q : edges[path.back()]) {
            std::uint64_t next = 0;
            for (Point x = 0; x < n; ++x)
                if ((alive >> x) & 1U && near[orbit[x][depth] * n + q]) next |= std::uint64_t{1} << x;
            if (!seen.insert({depth + 1, q, next}).second) continue;
            path.push_back(q);
            if (search(length, next)) return true;
            path.pop_back();
        }
        return false;
    }
};

}  // namespace

OracleVerdict brute_force_oracle(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                 Property property, std::size_t max_len, const OracleLimits& guard) {
    const std::size_t n = system.size();
    if (n > guard.max_points || n > 64)
        throw TooLarge("oracle limited to " + std::to_string(guard.max_points) + " points, system has " +
                       std::to_string(n));
    if (max_len > guard.max_len || max_len == 0)
        throw TooLarge("oracle chain length must be in 1.." + std::to_string(guard.max_len));

    Oracle o{system, delta, eps, property, n, {}, {}, {}, {}, {}};
    o.orbit.assign(n, std::vector<Point>(max_len));
    o.edges.assign(n, {});
    o.near.assign(n * n, 0);
    for (Point x = 0; x < n; ++x) {
        Point y = x;
        for (std::size_t i = 0; i < max_len; ++i) {
            o.orbit[x][i] = y;
            y = system.image(y);
        }
        for (Point q = 0; q < n; ++q) {
            if (system.distance(system.image(x), q) <= delta) o.edges[x].push_back(q);
            o.near[x * n + q] = system.distance(x, q) <= eps;
        }
    }

    // Iterative deepening keeps the first refutation shortest; within a length
    // the search runs in lexicographic order. A repeated (depth, last, alive)
    // triple has an identical subtree, already searched without failure.
    for (std::size_t length = 1; length <= max_len; ++length) {
        o.seen.clear();
        for (Point p = 0; p < n; ++p) {
            std::uint64_t alive = 0;
            for (Point x = 0; x < n; ++x)
                if (o.near[x * n + p]) alive |= std::uint64_t{1} << x;
            if (!o.seen.insert({1, p, alive}).second) continue;
            o.path.assign(1, p);
            if (o.search(length, alive)) return {false, o.path};
        }
    }
    return {true, std::nullopt};
}

}  // namespace chainshadow
