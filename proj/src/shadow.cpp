#include "chainshadow/shadow.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "chainshadow/chain.hpp"

namespace chainshadow {

const char* to_string(OrbitKind kind) { return kind == OrbitKind::Plain ? "plain" : "eventually_exact"; }

const char* to_string(Property property) { return property == Property::Shadowing ? "shadowing" : "slimit"; }

Property parse_property(const std::string& text) {
    if (text == "shadowing") return Property::Shadowing;
    if (text == "slimit") return Property::SLimit;
    throw BadParams("unknown property '" + text + "' (expected shadowing or slimit)");
}

PseudoOrbit PseudoOrbit::plain(std::vector<Point> points, Rational delta) {
    return {std::move(points), OrbitKind::Plain, std::move(delta), std::nullopt};
}

PseudoOrbit PseudoOrbit::eventually_exact(std::vector<Point> points, Rational delta, std::size_t tail_start) {
    return {std::move(points), OrbitKind::EventuallyExact, std::move(delta), tail_start};
}

std::vector<Rational> PseudoOrbit::errors(const FiniteMetricSystem& system) const {
    std::vector<Rational> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) out.push_back(system.distance(system.image(points[i]), points[i + 1]));
    return out;
}

std::optional<OrbitViolation> first_violation(const FiniteMetricSystem& system, const PseudoOrbit& orbit) {
    if (orbit.points.empty()) return OrbitViolation{0, "empty pseudo-orbit"};
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
        if (orbit.points[i] >= system.size()) return OrbitViolation{i, "point index out of range"};
    if (orbit.delta.is_negative()) return OrbitViolation{0, "negative delta"};

    std::size_t exact_from = orbit.points.size();
    if (orbit.kind == OrbitKind::EventuallyExact) {
        if (!orbit.tail_start) return OrbitViolation{0, "eventually exact orbit without tail start"};
        if (*orbit.tail_start >= orbit.points.size())
            return OrbitViolation{*orbit.tail_start, "tail start beyond the stored sequence"};
        exact_from = *orbit.tail_start;
    } else if (orbit.tail_start) {
        return OrbitViolation{*orbit.tail_start, "plain orbit with a tail start"};
    }

    const auto errors = orbit.errors(system);
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i >= exact_from && !errors[i].is_zero())
            return OrbitViolation{i, "nonzero error " + errors[i].str() + " inside the exact tail"};
        if (errors[i] > orbit.delta)
            return OrbitViolation{i, "error " + errors[i].str() + " exceeds delta " + orbit.delta.str()};
    }
    return std::nullopt;
}

bool validate_pseudo_orbit(const FiniteMetricSystem& system, const PseudoOrbit& orbit) {
    return !first_violation(system, orbit);
}

std::vector<PointSet> shadow_sets(const FiniteMetricSystem& system, const PseudoOrbit& orbit, const Rational& eps) {
    std::vector<PointSet> sets;
    if (orbit.points.empty()) return sets;
    sets.push_back(system.ball(orbit.points.front(), eps));
    for (std::size_t i = 1; i < orbit.points.size(); ++i)
        sets.push_back(system.image(sets.back()) & system.ball(orbit.points[i], eps));
    return sets;
}

namespace {

// Walks back through the shadow sets from `last`, choosing the smallest
// preimage at each step.
Point backtrack(const FiniteMetricSystem& system, const std::vector<PointSet>& sets, std::size_t upto, Point last) {
    Point cur = last;
    for (std::size_t i = upto; i-- > 0;) {
        Point chosen = cur;
        bool found = false;
        sets[i].for_each([&](Point y) {
            if (!found && system.image(y) == cur) {
                chosen = y;
                found = true;
            }
        });
        cur = chosen;
    }
    return cur;
}

}  // namespace

std::optional<Point> is_shadowed(const FiniteMetricSystem& system, const PseudoOrbit& orbit, const Rational& eps) {
    if (orbit.kind != OrbitKind::Plain) throw KindMismatch("is_shadowed expects a plain pseudo-orbit");
    auto sets = shadow_sets(system, orbit, eps);
    if (sets.empty() || sets.back().empty()) return std::nullopt;
    return backtrack(system, sets, sets.size() - 1, sets.back().first());
}

MergeSet merge_sets(const FiniteMetricSystem& system, const Rational& eps) {
    const std::size_t n = system.size();
    enum Status : std::uint8_t { Unknown, Yes, No, Active };
    std::vector<Status> status(n * n, Unknown);
    std::vector<std::size_t> path;

    // The pair orbit (x, p) -> (f(x), f(p)) is deterministic: follow it until it
    // hits the diagonal, leaves the eps-band, reaches a decided pair, or cycles.
    for (std::size_t start = 0; start < n * n; ++start) {
        if (status[start] != Unknown) continue;
        path.clear();
        std::size_t cur = start;
        Status result = No;
        while (true) {
            if (status[cur] == Yes || status[cur] == No) {
                result = status[cur];
                break;
            }
            if (status[cur] == Active) {
                result = No;
                break;
            }
            auto x = static_cast<Point>(cur / n);
            auto p = static_cast<Point>(cur % n);
            if (x == p) {
                result = Yes;
                break;
            }
            if (system.distance(x, p) > eps) {
                result = No;
                break;
            }
            status[cur] = Active;
            path.push_back(cur);
            cur = std::size_t{system.image(x)} * n + system.image(p);
        }
        for (auto s : path) status[s] = result;
        if (status[cur] == Unknown) status[cur] = result;
    }

    std::vector<PointSet> tracks(n, PointSet(n));
    for (Point x = 0; x < n; ++x)
        for (Point p = 0; p < n; ++p)
            if (status[std::size_t{x} * n + p] == Yes) tracks[p].insert(x);
    return MergeSet(eps, std::move(tracks));
}

std::optional<Point> is_limit_shadowed(const FiniteMetricSystem& system, const PseudoOrbit& orbit,
                                       const Rational& eps) {
    if (orbit.kind != OrbitKind::EventuallyExact || !orbit.tail_start)
        throw KindMismatch("is_limit_shadowed expects an eventually exact pseudo-orbit");
    const std::size_t t = *orbit.tail_start;
    PseudoOrbit prefix = orbit;
    prefix.points.resize(t + 1);
    auto sets = shadow_sets(system, prefix, eps);
    auto merging = sets[t] & merge_sets(system, eps).tracks(orbit.points[t]);
    if (merging.empty()) return std::nullopt;
    return backtrack(system, sets, t, merging.first());
}

// --- automaton -----------------------------------------------------------------

namespace {

struct StateKey {
    Point p;
    PointSet y;
    friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateHash {
    std::size_t operator()(const StateKey& k) const noexcept { return k.y.hash() * 31 + k.p; }
};

struct Node {
    Point p;
    PointSet y;
    std::size_t parent;
};

constexpr std::size_t no_parent = static_cast<std::size_t>(-1);

ShadowVerdict explore(Property property, const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                      const std::optional<PointSet>& domain, const SearchOptions& options) {
    const std::size_t n = system.size();
    const PointSet within = domain ? *domain : PointSet::full(n);
    if (within.universe() != n) throw BadParams("domain universe does not match the system");
    if (within.empty()) throw EmptyDomain();
    if (!system.is_forward_invariant(within)) throw DomainNotInvariant("domain must be forward-invariant");
    if (delta.is_negative() || eps.is_negative()) throw BadParams("delta and eps must be nonnegative");

    const DeltaGraph graph = build_delta_graph(system, delta);
    std::vector<PointSet> balls;
    balls.reserve(n);
    for (Point q = 0; q < n; ++q) balls.push_back(system.ball(q, eps) & within);

    std::optional<MergeSet> merge;
    if (property == Property::SLimit) merge = merge_sets(system, eps);
    auto violates = [&](Point p, const PointSet& y) {
        if (property == Property::Shadowing) return y.empty();
        return !y.intersects(merge->tracks(p));
    };

    ShadowVerdict verdict;
    verdict.property = property;
    verdict.delta = delta;
    verdict.epsilon = eps;

    std::vector<Node> nodes;
    std::unordered_map<StateKey, std::size_t, StateHash> index;

    auto fail_at = [&](std::size_t id) {
        std::vector<Point> path;
        for (std::size_t cur = id; cur != no_parent; cur = nodes[cur].parent) path.push_back(nodes[cur].p);
        std::reverse(path.begin(), path.end());
        verdict.pass = false;
        verdict.states_explored = nodes.size();
        if (property == Property::Shadowing) {
            verdict.witness = PseudoOrbit::plain(std::move(path), delta);
        } else {
            std::size_t tail = path.size() - 1;
            verdict.witness = PseudoOrbit::eventually_exact(std::move(path), delta, tail);
        }
    };

    // Returns true when the new state violates the property.
    auto add = [&](Point p, PointSet y, std::size_t parent) -> std::optional<std::size_t> {
        StateKey key{p, y};
        if (index.count(key)) return std::nullopt;
        if (nodes.size() >= options.state_cap) throw Inconclusive(options.state_cap);
        std::size_t id = nodes.size();
        index.emplace(std::move(key), id);
        nodes.push_back({p, std::move(y), parent});
        return id;
    };

    std::vector<std::size_t> frontier;
    for (Point p = 0; p < n; ++p) {
        if (!within.contains(p)) continue;
        auto id = add(p, balls[p], no_parent);
        if (!id) continue;
        if (violates(p, nodes[*id].y)) {
            fail_at(*id);
            return verdict;
        }
        frontier.push_back(*id);
    }

    using Successors = std::vector<std::pair<Point, PointSet>>;
    auto expand = [&](std::size_t id) {
        Successors out;
        const Node& node = nodes[id];
        PointSet moved = system.image(node.y);
        for (Point q : graph.successors(node.p)) {
            if (!within.contains(q)) continue;
            out.emplace_back(q, moved & balls[q]);
        }
        return out;
    };

    const unsigned workers = std::max(1U, options.workers);
    while (!frontier.empty()) {
        std::vector<Successors> produced(frontier.size());
        if (workers == 1 || frontier.size() < 2 * workers) {
            for (std::size_t i = 0; i < frontier.size(); ++i) produced[i] = expand(frontier[i]);
        } else {
            // Expansion only reads `nodes`; merging below is sequential, in frontier order.
            std::vector<std::thread> pool;
            const std::size_t chunk = (frontier.size() + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                std::size_t lo = w * chunk;
                std::size_t hi = std::min(frontier.size(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    for (std::size_t i = lo; i < hi; ++i) produced[i] = expand(frontier[i]);
                });
            }
            for (auto& t : pool) t.join();
        }

        std::vector<std::size_t> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            for (auto& [q, y] : produced[i]) {
                auto id = add(q, std::move(y), frontier[i]);
                if (!id) continue;
                if (violates(q, nodes[*id].y)) {
                    fail_at(*id);
                    return verdict;
                }
                next.push_back(*id);
            }
        }
        frontier = std::move(next);
    }

    verdict.pass = true;
    verdict.states_explored = nodes.size();
    return verdict;
}

}  // namespace

ShadowVerdict check_shadowing_property(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                       const std::optional<PointSet>& domain, const SearchOptions& options) {
    return explore(Property::Shadowing, system, delta, eps, domain, options);
}

ShadowVerdict check_slimit_property(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                    const std::optional<PointSet>& domain, const SearchOptions& options) {
    return explore(Property::SLimit, system, delta, eps, domain, options);
}

ShadowVerdict check_property(Property property, const FiniteMetricSystem& system, const Rational& delta,
                             const Rational& eps, const std::optional<PointSet>& domain,
                             const SearchOptions& options) {
    return explore(property, system, delta, eps, domain, options);
}

PseudoOrbit extract_witness(const ShadowVerdict& verdict) {
    if (verdict.pass || !verdict.witness) throw NotFailing();
    return *verdict.witness;
}

}  // namespace chainshadow
