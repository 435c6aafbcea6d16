#include "chainshadow/chain.hpp"

#include <algorithm>
#include <deque>

namespace chainshadow {

DeltaGraph::DeltaGraph(const FiniteMetricSystem& system, Rational delta)
    : system_(&system), delta_(std::move(delta)) {
    if (delta_.is_negative()) throw BadParams("delta must be nonnegative, got " + delta_.str());
    const std::size_t n = system.size();
    adjacency_.resize(n);
    rows_.reserve(n);
    for (Point p = 0; p < n; ++p) {
        rows_.push_back(system.ball(system.image(p), delta_));
        adjacency_[p] = rows_.back().members();
    }
}

std::size_t DeltaGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& row : adjacency_) total += row.size();
    return total;
}

DeltaGraph build_delta_graph(const FiniteMetricSystem& system, const Rational& delta) { return {system, delta}; }

PointSet reachable_from(const DeltaGraph& graph, Point x) {
    PointSet seen(graph.size());
    std::vector<Point> stack(graph.successors(x).begin(), graph.successors(x).end());
    for (Point q : stack) seen.insert(q);
    while (!stack.empty()) {
        Point p = stack.back();
        stack.pop_back();
        for (Point q : graph.successors(p)) {
            if (seen.contains(q)) continue;
            seen.insert(q);
            stack.push_back(q);
        }
    }
    return seen;
}

bool reaches(const DeltaGraph& graph, Point x, Point y) { return reachable_from(graph, x).contains(y); }

namespace {

// Iterative Tarjan. Returns component index per vertex; components are emitted
// in reverse topological order.
std::vector<std::size_t> strongly_connected(const DeltaGraph& graph, std::size_t& count) {
    const std::size_t n = graph.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<Point> stack;
    std::size_t next_index = 0;
    count = 0;

    struct Frame {
        Point v;
        std::size_t edge;
    };
    for (Point root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& fr = call.back();
            auto succ = graph.successors(fr.v);
            if (fr.edge < succ.size()) {
                Point w = succ[fr.edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], index[w]);
                }
                continue;
            }
            Point v = fr.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                Point w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
        }
    }
    return comp;
}

}  // namespace

PointSet chain_recurrent_set(const DeltaGraph& graph) {
    std::size_t count = 0;
    auto comp = strongly_connected(graph, count);
    std::vector<std::size_t> sizes(count, 0);
    for (auto c : comp) ++sizes[c];
    PointSet cr(graph.size());
    for (Point p = 0; p < graph.size(); ++p)
        if (sizes[comp[p]] > 1 || graph.has_edge(p, p)) cr.insert(p);
    return cr;
}

ChainDecomposition::ChainDecomposition(Rational delta, PointSet cr, std::vector<ChainClass> classes,
                                       std::vector<std::vector<bool>> reach)
    : delta_(std::move(delta)), cr_(std::move(cr)), classes_(std::move(classes)), reach_(std::move(reach)) {
    class_of_.assign(cr_.universe(), std::nullopt);
    for (const auto& c : classes_) c.points.for_each([&](Point p) { class_of_[p] = c.id; });
}

std::optional<std::size_t> ChainDecomposition::class_of(Point p) const {
    return p < class_of_.size() ? class_of_[p] : std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> ChainDecomposition::condensation_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < classes_.size(); ++i)
        for (std::size_t j = 0; j < classes_.size(); ++j)
            if (reach_[i][j]) edges.emplace_back(i, j);
    return edges;
}

ChainDecomposition decompose(const DeltaGraph& graph) {
    const auto& system = graph.system();
    const std::size_t n = graph.size();
    std::size_t count = 0;
    auto comp = strongly_connected(graph, count);
    PointSet cr = chain_recurrent_set(graph);

    // Group recurrent points by component, then number classes by smallest member.
    std::vector<PointSet> by_comp(count, PointSet(n));
    cr.for_each([&](Point p) { by_comp[comp[p]].insert(p); });
    std::vector<PointSet> groups;
    for (auto& g : by_comp)
        if (!g.empty()) groups.push_back(std::move(g));
    std::sort(groups.begin(), groups.end(), [](const PointSet& a, const PointSet& b) { return a.first() < b.first(); });

    std::vector<ChainClass> classes;
    std::vector<std::optional<std::size_t>> owner(n);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        ChainClass c;
        c.id = i;
        c.points = groups[i];
        c.core = invariant_core(system, c.points);
        c.points.for_each([&](Point p) { owner[p] = i; });
        classes.push_back(std::move(c));
    }

    const std::size_t k = classes.size();
    std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i) {
        reachable_from(graph, classes[i].points.first()).for_each([&](Point q) {
            if (owner[q] && *owner[q] != i) reach[i][*owner[q]] = true;
        });
    }
    for (std::size_t i = 0; i < k; ++i) {
        auto& c = classes[i];
        c.terminal = std::none_of(reach[i].begin(), reach[i].end(), [](bool b) { return b; });
        c.initial = true;
        for (std::size_t j = 0; j < k; ++j)
            if (reach[j][i]) c.initial = false;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            classes[j].points.for_each([&](Point q) {
                Rational d = distance_to_set(system, q, c.points);
                if (!c.separation || d < *c.separation) c.separation = d;
            });
        }
    }
    return ChainDecomposition(graph.delta(), std::move(cr), std::move(classes), std::move(reach));
}

bool class_order(const ChainDecomposition& dec, std::size_t a, std::size_t b) {
    return a == b || dec.class_reaches(b, a);
}

std::vector<std::size_t> maximal_classes(const ChainDecomposition& dec) {
    std::vector<std::size_t> all(dec.class_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return maximal_classes(dec, all);
}

std::vector<std::size_t> maximal_classes(const ChainDecomposition& dec, std::span<const std::size_t> among) {
    std::vector<std::size_t> out;
    for (auto a : among) {
        bool dominated = std::any_of(among.begin(), among.end(),
                                     [&](std::size_t b) { return b != a && class_order(dec, a, b); });
        if (!dominated) out.push_back(a);
    }
    return out;
}

std::vector<std::size_t> isolated_classes(const ChainDecomposition& dec, const Rational& r) {
    std::vector<std::size_t> out;
    for (const auto& c : dec.classes())
        if (!c.separation || *c.separation > r) out.push_back(c.id);
    return out;
}

std::vector<InitialCrossCheck> cross_check_initial(const FiniteMetricSystem& system, const ChainDecomposition& dec) {
    auto inverse = system.inverse();
    auto reversed = decompose(build_delta_graph(inverse, dec.delta()));
    std::vector<InitialCrossCheck> out;
    for (const auto& c : dec.classes()) {
        InitialCrossCheck check{c.id, c.initial, std::nullopt};
        auto match = reversed.class_of(c.points.first());
        if (match && reversed.at(*match).points == c.points) check.terminal_for_inverse = reversed.at(*match).terminal;
        out.push_back(check);
    }
    return out;
}

// --- set utilities -----------------------------------------------------------

Rational distance_to_set(const FiniteMetricSystem& system, Point x, const PointSet& s) {
    if (s.empty()) throw EmptySet("distance to an empty set");
    std::optional<Rational> best;
    s.for_each([&](Point q) {
        const auto& d = system.distance(x, q);
        if (!best || d < *best) best = d;
    });
    return *best;
}

PointSet neighborhood(const FiniteMetricSystem& system, const PointSet& s, const Rational& r) {
    if (s.empty()) throw EmptySet("neighborhood of an empty set");
    PointSet out(system.size());
    for (Point x = 0; x < system.size(); ++x)
        if (distance_to_set(system, x, s) <= r) out.insert(x);
    return out;
}

Rational hausdorff_distance(const FiniteMetricSystem& system, const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty()) throw EmptySet("Hausdorff distance needs nonempty sets");
    Rational worst(0);
    a.for_each([&](Point p) { worst = std::max(worst, distance_to_set(system, p, b)); });
    b.for_each([&](Point p) { worst = std::max(worst, distance_to_set(system, p, a)); });
    return worst;
}

PointSet omega_cycle(const FiniteMetricSystem& system, Point x) {
    Point y = x;
    for (std::size_t i = 0; i < system.size(); ++i) y = system.image(y);
    PointSet cycle(system.size());
    Point z = y;
    do {
        cycle.insert(z);
        z = system.image(z);
    } while (z != y);
    return cycle;
}

PointSet invariant_core(const FiniteMetricSystem& system, const PointSet& s) {
    PointSet core = s;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Point p : core.members()) {
            if (!core.contains(system.image(p))) {
                core.erase(p);
                changed = true;
            }
        }
    }
    return core;
}

// --- ladder ------------------------------------------------------------------

std::optional<Rational> stabilization_threshold(const FiniteMetricSystem& system) {
    std::optional<Rational> best;
    for (Point p = 0; p < system.size(); ++p)
        for (Point q = 0; q < system.size(); ++q) {
            if (q == system.image(p)) continue;
            const auto& d = system.distance(system.image(p), q);
            if (!best || d < *best) best = d;
        }
    return best;
}

DeltaLadder refine_ladder(const FiniteMetricSystem& system, const std::vector<Rational>& deltas) {
    for (const auto& d : deltas)
        if (d.is_negative()) throw BadParams("delta must be nonnegative, got " + d.str());
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1])) throw NotDecreasing();

    DeltaLadder ladder;
    ladder.deltas = deltas;
    ladder.threshold = stabilization_threshold(system);
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        ladder.levels.push_back(decompose(build_delta_graph(system, deltas[k])));
        if (!ladder.stable_level && (!ladder.threshold || deltas[k] < *ladder.threshold)) ladder.stable_level = k;
    }

    for (std::size_t k = 0; k + 1 < ladder.levels.size(); ++k) {
        const auto& coarse = ladder.levels[k];
        const auto& fine = ladder.levels[k + 1];
        if (!fine.chain_recurrent().is_subset_of(coarse.chain_recurrent()))
            ladder.violations.push_back("level " + std::to_string(k + 1) + ": recurrent set not contained in level " +
                                        std::to_string(k));
        std::vector<std::size_t> map;
        for (const auto& c : fine.classes()) {
            auto parent = coarse.class_of(c.points.first());
            if (!parent || !c.points.is_subset_of(coarse.at(*parent).points)) {
                ladder.violations.push_back("level " + std::to_string(k + 1) + " class " + std::to_string(c.id) +
                                            " is not inside a single level " + std::to_string(k) + " class");
                map.push_back(parent.value_or(0));
                continue;
            }
            map.push_back(*parent);
        }
        ladder.refinement.push_back(std::move(map));
    }
    return ladder;
}

}  // namespace chainshadow
