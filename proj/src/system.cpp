#include "chainshadow/system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace chainshadow {

// --- errors ----------------------------------------------------------------

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Shape: return "shape";
        case ViolationKind::Missing: return "missing";
        case ViolationKind::Negative: return "negative";
        case ViolationKind::Identity: return "identity";
        case ViolationKind::Symmetry: return "symmetry";
        case ViolationKind::Triangle: return "triangle";
        case ViolationKind::MapNotTotal: return "map_not_total";
        case ViolationKind::NotBijective: return "not_bijective";
    }
    return "unknown";
}

std::string Violation::describe() const {
    std::ostringstream out;
    out << to_string(kind) << " (";
    for (std::size_t i = 0; i < indices.size(); ++i) out << (i ? "," : "") << indices[i];
    out << ")";
    return out.str();
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::string msg = "invalid system:";
    std::size_t shown = 0;
    for (const auto& v : violations) {
        if (shown++ == 8) {
            msg += " ... (" + std::to_string(violations.size()) + " total)";
            break;
        }
        msg += " " + v.describe();
    }
    return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(summarize(violations)), violations_(std::move(violations)) {}

// --- validation --------------------------------------------------------------

std::vector<Violation> find_violations(const std::vector<std::vector<Rational>>& dist,
                                       const std::vector<std::int64_t>& map, bool invertible) {
    std::vector<Violation> out;
    const std::size_t n = dist.size();
    if (n == 0) {
        out.push_back({ViolationKind::Shape, {0}});
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (dist[i].size() != n) out.push_back({ViolationKind::Shape, {i}});
    if (map.size() != n) out.push_back({ViolationKind::Shape, {map.size()}});
    if (!out.empty()) return out;

    for (std::size_t i = 0; i < n; ++i)
        if (map[i] < 0 || static_cast<std::size_t>(map[i]) >= n) out.push_back({ViolationKind::MapNotTotal, {i}});

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (dist[i][j].is_negative()) out.push_back({ViolationKind::Negative, {i, j}});

    for (std::size_t i = 0; i < n; ++i) {
        if (!dist[i][i].is_zero()) out.push_back({ViolationKind::Identity, {i, i}});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist[i][j].is_zero() || dist[j][i].is_zero()) out.push_back({ViolationKind::Identity, {i, j}});
            if (dist[i][j] != dist[j][i]) out.push_back({ViolationKind::Symmetry, {i, j}});
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                if (dist[i][k] > dist[i][j] + dist[j][k]) out.push_back({ViolationKind::Triangle, {i, j, k}});
            }

    if (invertible && std::none_of(out.begin(), out.end(),
                                   [](const Violation& v) { return v.kind == ViolationKind::MapNotTotal; })) {
        std::vector<bool> hit(n, false);
        for (auto m : map) hit[static_cast<std::size_t>(m)] = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!hit[i]) out.push_back({ViolationKind::NotBijective, {i}});
    }
    return out;
}

namespace {

std::vector<std::int64_t> widen(const std::vector<Point>& map) { return {map.begin(), map.end()}; }

std::vector<Rational> flatten(const std::vector<std::vector<Rational>>& dist) {
    std::vector<Rational> flat;
    for (const auto& row : dist) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

}  // namespace

FiniteMetricSystem::FiniteMetricSystem(std::string id, std::vector<std::vector<Rational>> dist,
                                       std::vector<Point> map, bool invertible,
                                       std::optional<Rational> quantization_bound)
    : id_(std::move(id)), map_(std::move(map)), invertible_(invertible), quantization_(std::move(quantization_bound)) {
    if (auto violations = find_violations(dist, widen(map_), invertible_); !violations.empty())
        throw ValidationError(std::move(violations));
    dist_ = flatten(dist);
}

Rational FiniteMetricSystem::diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

std::vector<Rational> FiniteMetricSystem::distance_values() const {
    std::set<Rational> values;
    for (const auto& d : dist_)
        if (!d.is_zero()) values.insert(d);
    return {values.begin(), values.end()};
}

PointSet FiniteMetricSystem::ball(Point p, const Rational& r) const {
    PointSet out(size());
    for (Point q = 0; q < size(); ++q)
        if (distance(p, q) <= r) out.insert(q);
    return out;
}

PointSet FiniteMetricSystem::image(const PointSet& s) const {
    PointSet out(size());
    s.for_each([&](Point p) { out.insert(map_[p]); });
    return out;
}

bool FiniteMetricSystem::is_bijective() const {
    std::vector<bool> hit(size(), false);
    for (Point m : map_) hit[m] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::vector<Point> FiniteMetricSystem::inverse_map() const {
    if (!is_bijective()) throw NotInvertible();
    std::vector<Point> inv(size());
    for (Point p = 0; p < size(); ++p) inv[map_[p]] = p;
    return inv;
}

FiniteMetricSystem FiniteMetricSystem::inverse() const {
    auto inv = inverse_map();
    FiniteMetricSystem out = *this;
    out.id_ = id_ + "^-1";
    out.map_ = std::move(inv);
    out.invertible_ = true;
    return out;
}

bool FiniteMetricSystem::is_forward_invariant(const PointSet& s) const { return image(s).is_subset_of(s); }

FiniteMetricSystem FiniteMetricSystem::restrict_to(const PointSet& s) const {
    if (s.empty()) throw EmptyDomain();
    if (!is_forward_invariant(s)) throw DomainNotInvariant("restriction requires a forward-invariant subset");
    const auto members = s.members();
    std::vector<Point> local(size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<Point>(i);
    std::vector<std::vector<Rational>> dist(members.size(), std::vector<Rational>(members.size()));
    std::vector<Point> map(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = 0; j < members.size(); ++j) dist[i][j] = distance(members[i], members[j]);
        map[i] = local[map_[members[i]]];
    }
    std::vector<bool> hit(members.size(), false);
    for (Point m : map) hit[m] = true;
    bool bijective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    return FiniteMetricSystem(id_ + "|restricted", std::move(dist), std::move(map), invertible_ && bijective);
}

// --- specs -------------------------------------------------------------------

std::vector<std::vector<Rational>> complete_metric(const std::vector<std::vector<std::optional<Rational>>>& partial) {
    const std::size_t n = partial.size();
    for (const auto& row : partial)
        if (row.size() != n) throw ValidationError({{ViolationKind::Shape, {row.size()}}});

    std::vector<std::vector<std::optional<Rational>>> best(n, std::vector<std::optional<Rational>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        best[i][i] = Rational(0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& declared = partial[i][j] ? partial[i][j] : partial[j][i];
            if (declared) best[i][j] = *declared;
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!best[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!best[k][j]) continue;
                Rational via = *best[i][k] + *best[k][j];
                if (!best[i][j] || via < *best[i][j]) best[i][j] = via;
            }
        }

    std::vector<Violation> missing;
    std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (partial[i][j]) {
                out[i][j] = *partial[i][j];
            } else if (i == j) {
                out[i][j] = Rational(0);
            } else if (partial[j][i]) {
                out[i][j] = *partial[j][i];
            } else if (best[i][j]) {
                out[i][j] = *best[i][j];
            } else if (i < j) {
                missing.push_back({ViolationKind::Missing, {i, j}});
            }
        }
    if (!missing.empty()) throw ValidationError(std::move(missing));
    return out;
}

FiniteMetricSystem validate_system(const SystemSpec& spec) {
    if (const auto* gen = std::get_if<GeneratorSpec>(&spec)) return build_corpus_system(gen->name, gen->params);

    const auto& ex = std::get<ExplicitSpec>(spec);
    auto dist = complete_metric(ex.dist);
    if (auto violations = find_violations(dist, ex.map, ex.invertible); !violations.empty())
        throw ValidationError(std::move(violations));
    std::vector<Point> map(ex.map.begin(), ex.map.end());
    return FiniteMetricSystem(ex.id, std::move(dist), std::move(map), ex.invertible);
}

// --- generators --------------------------------------------------------------

namespace {

struct GeneratorInfo {
    const char* name;
    std::vector<const char*> params;
};

const std::vector<GeneratorInfo>& generator_table() {
    static const std::vector<GeneratorInfo> table = {
        {"cantor-identity", {"depth"}},
        {"rotation", {"n", "k"}},
        {"north-south", {"n"}},
        {"parallel-cycles", {}},
        {"doubling", {"n"}},
        {"tent", {"n"}},
    };
    return table;
}

const GeneratorInfo& lookup(const std::string& name) {
    for (const auto& g : generator_table())
        if (name == g.name) return g;
    throw UnknownGenerator(name);
}

std::int64_t require(const std::map<std::string, std::int64_t>& params, const char* key, std::int64_t lo,
                     std::int64_t hi) {
    auto it = params.find(key);
    if (it == params.end()) throw BadParams(std::string("missing parameter '") + key + "'");
    if (it->second < lo || it->second > hi)
        throw BadParams(std::string("parameter '") + key + "' = " + std::to_string(it->second) + " outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return it->second;
}

Rational circle_distance(const Rational& x, const Rational& y) {
    Rational t = abs(x - y);
    Rational wrap = Rational(1) - t;
    return std::min(t, wrap);
}

// Reduces x into [0, 1).
Rational mod_one(const Rational& x) { return x - x.floor(); }

std::int64_t floor_of(const Rational& x) {
    return boost::multiprecision::numerator(x.floor().value()).convert_to<std::int64_t>();
}

std::vector<std::vector<Rational>> circle_table(const std::vector<Rational>& pos) {
    std::vector<std::vector<Rational>> d(pos.size(), std::vector<Rational>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = 0; j < pos.size(); ++j) d[i][j] = circle_distance(pos[i], pos[j]);
    return d;
}

std::vector<std::vector<Rational>> line_table(const std::vector<Rational>& pos) {
    std::vector<std::vector<Rational>> d(pos.size(), std::vector<Rational>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = 0; j < pos.size(); ++j) d[i][j] = abs(pos[i] - pos[j]);
    return d;
}

FiniteMetricSystem cantor_identity(std::int64_t depth, std::string id) {
    // Left endpoints of the level-k ternary intervals: sums of b_i * 2/3^i.
    std::vector<Rational> pts{Rational(0)};
    std::int64_t scale = 1;
    for (std::int64_t level = 1; level <= depth; ++level) {
        scale *= 3;
        std::vector<Rational> next;
        for (const auto& p : pts) next.push_back(p);
        for (const auto& p : pts) next.push_back(p + Rational(2, scale));
        pts = std::move(next);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<Point> map(pts.size());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<Point>(i);
    return FiniteMetricSystem(std::move(id), line_table(pts), std::move(map), true);
}

FiniteMetricSystem rotation(std::int64_t n, std::int64_t k, std::string id) {
    std::vector<Rational> pos;
    std::vector<Point> map;
    for (std::int64_t i = 0; i < n; ++i) {
        pos.emplace_back(i, n);
        map.push_back(static_cast<Point>(((i + k) % n + n) % n));
    }
    return FiniteMetricSystem(std::move(id), circle_table(pos), std::move(map), true);
}

// Source N* at 0, sink S at 1/2. The two neighbours of N* sit at +-1/(2n); the
// rest of each half circle is the grid +-j/n for 2 <= j < n/2. Every point other
// than the fixed points moves one grid step toward S; the neighbours of N* jump
// straight to +-2/n (or to S when n = 4). For 1/(2n) <= delta < 1/n the only
// delta-jumps leave N*, so the recurrent classes are exactly {N*} and {S}.
FiniteMetricSystem north_south(std::int64_t n, std::string id) {
    const std::int64_t half = n / 2;
    std::vector<Rational> pos{Rational(0), Rational(1, 2 * n), Rational(2 * n - 1, 2 * n)};
    for (std::int64_t j = 2; j < half; ++j) pos.emplace_back(j, n);
    for (std::int64_t j = 2; j < half; ++j) pos.emplace_back(n - j, n);
    pos.emplace_back(1, 2);

    auto index_of = [&](const Rational& x) {
        auto it = std::find(pos.begin(), pos.end(), x);
        return static_cast<Point>(it - pos.begin());
    };
    const Rational sink(1, 2);
    std::vector<Point> map;
    for (const auto& x : pos) {
        Rational target;
        if (x.is_zero() || x == sink) {
            target = x;
        } else if (x == Rational(1, 2 * n)) {
            target = half > 2 ? Rational(2, n) : sink;
        } else if (x == Rational(2 * n - 1, 2 * n)) {
            target = half > 2 ? Rational(n - 2, n) : sink;
        } else if (x < sink) {
            target = x + Rational(1, n);
        } else {
            target = x - Rational(1, n);
        }
        map.push_back(index_of(target));
    }
    return FiniteMetricSystem(std::move(id), circle_table(pos), std::move(map), false);
}

FiniteMetricSystem parallel_cycles(std::string id) {
    enum : std::size_t { a = 0, c1 = 1, c2 = 2, e1 = 3, e2 = 4 };
    std::vector<std::vector<Rational>> d(5, std::vector<Rational>(5));
    auto set = [&](std::size_t i, std::size_t j, std::int64_t v) { d[i][j] = d[j][i] = Rational(v); };
    set(a, c1, 1);
    set(a, e1, 2);
    set(a, c2, 4);
    set(a, e2, 4);
    set(c1, c2, 4);
    set(e1, e2, 4);
    set(c1, e1, 1);
    set(c2, e2, 1);
    set(c1, e2, 4);
    set(c2, e1, 4);
    return FiniteMetricSystem(std::move(id), std::move(d), {c2, c2, c1, e2, e1}, false);
}

}  // namespace

std::vector<std::string> generator_names() {
    std::vector<std::string> names;
    for (const auto& g : generator_table()) names.emplace_back(g.name);
    return names;
}

FiniteMetricSystem build_corpus_system(const std::string& name, const std::map<std::string, std::int64_t>& params) {
    const auto& info = lookup(name);
    for (const auto& [key, value] : params)
        if (std::find_if(info.params.begin(), info.params.end(), [&](const char* p) { return key == p; }) ==
            info.params.end())
            throw BadParams("generator '" + name + "' has no parameter '" + key + "'");

    const std::string id = to_shorthand({name, params});
    if (name == "cantor-identity") return cantor_identity(require(params, "depth", 0, 12), id);
    if (name == "rotation") return rotation(require(params, "n", 1, 4096), params.count("k") ? params.at("k") : 1, id);
    if (name == "north-south") {
        auto n = require(params, "n", 4, 4096);
        if (n % 2 != 0) throw BadParams("north-south needs an even point count");
        return north_south(n, id);
    }
    if (name == "parallel-cycles") return parallel_cycles(id);
    if (name == "doubling")
        return discretize({static_cast<std::size_t>(require(params, "n", 1, 4096)), Geometry::Circle, SourceMap::Doubling},
                          id);
    if (name == "tent")
        return discretize({static_cast<std::size_t>(require(params, "n", 1, 4096)), Geometry::Interval, SourceMap::Tent},
                          id);
    throw UnknownGenerator(name);
}

GeneratorSpec parse_generator_shorthand(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);

    const auto& info = lookup(parts.front());
    if (parts.size() - 1 > info.params.size())
        throw BadParams("too many arguments for generator '" + parts.front() + "'");
    GeneratorSpec spec{parts.front(), {}};
    for (std::size_t i = 1; i < parts.size(); ++i) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(parts[i], &used);
            if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
            spec.params[info.params[i - 1]] = v;
        } catch (const std::logic_error&) {
            throw BadParams("generator argument '" + parts[i] + "' is not an integer");
        }
    }
    return spec;
}

std::string to_shorthand(const GeneratorSpec& spec) {
    std::string out = spec.name;
    for (const auto& g : generator_table()) {
        if (spec.name != g.name) continue;
        for (const char* p : g.params) {
            auto it = spec.params.find(p);
            if (it == spec.params.end()) break;
            out += ":" + std::to_string(it->second);
        }
    }
    return out;
}

std::vector<GeneratorSpec> default_corpus() {
    return {
        {"cantor-identity", {{"depth", 1}}},
        {"cantor-identity", {{"depth", 2}}},
        {"cantor-identity", {{"depth", 3}}},
        {"rotation", {{"n", 4}, {"k", 1}}},
        {"rotation", {{"n", 5}, {"k", 2}}},
        {"north-south", {{"n", 8}}},
        {"parallel-cycles", {}},
        {"doubling", {{"n", 8}}},
        {"tent", {{"n", 8}}},
    };
}

// --- grids -------------------------------------------------------------------

std::vector<Rational> grid_centers(const GridSystem1D& grid) {
    const auto n = static_cast<std::int64_t>(grid.cells);
    std::vector<Rational> centers;
    for (std::int64_t i = 0; i < n; ++i) centers.emplace_back(2 * i + 1, 2 * n);
    return centers;
}

Rational apply_source_map(SourceMap source, const Rational& x) {
    switch (source) {
        case SourceMap::Identity: return x;
        case SourceMap::Doubling: return Rational(2) * x;
        case SourceMap::Tent: return x <= Rational(1, 2) ? Rational(2) * x : Rational(2) - Rational(2) * x;
    }
    return x;
}

FiniteMetricSystem discretize(const GridSystem1D& grid, std::string id) {
    if (grid.cells == 0) throw BadParams("grid needs at least one cell");
    const auto n = static_cast<std::int64_t>(grid.cells);
    const auto centers = grid_centers(grid);
    const bool circle = grid.geometry == Geometry::Circle;

    auto metric = [&](const Rational& x, const Rational& y) { return circle ? circle_distance(x, y) : abs(x - y); };

    std::vector<Point> map;
    for (const auto& c : centers) {
        Rational y = apply_source_map(grid.source, c);
        if (circle) y = mod_one(y);
        // Nearest centers bracket y * n - 1/2.
        std::int64_t lo = floor_of(y * Rational(n) - Rational(1, 2));
        std::vector<std::int64_t> candidates;
        for (std::int64_t k : {lo, lo + 1}) {
            if (circle) {
                candidates.push_back(((k % n) + n) % n);
            } else {
                candidates.push_back(std::clamp<std::int64_t>(k, 0, n - 1));
            }
        }
        std::sort(candidates.begin(), candidates.end());
        std::int64_t best = candidates.front();
        for (auto k : candidates)
            if (metric(centers[static_cast<std::size_t>(k)], y) < metric(centers[static_cast<std::size_t>(best)], y))
                best = k;
        map.push_back(static_cast<Point>(best));
    }

    if (id.empty()) id = std::string("grid:") + (circle ? "circle:" : "interval:") + std::to_string(n);
    std::vector<bool> hit(map.size(), false);
    for (Point m : map) hit[m] = true;
    const bool bijective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    auto table = circle ? circle_table(centers) : line_table(centers);
    return FiniteMetricSystem(std::move(id), std::move(table), std::move(map), bijective, Rational(1, 2 * n));
}

}  // namespace chainshadow
