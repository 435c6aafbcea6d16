#include <doctest.h>

#include <algorithm>
#include <random>

#include "chainshadow/system.hpp"
#include "support.hpp"

using namespace chainshadow;
using testing_support::gen;

namespace {

ExplicitSpec explicit_spec(std::vector<std::vector<std::optional<Rational>>> dist, std::vector<std::int64_t> map,
                           bool invertible = false) {
    ExplicitSpec s;
    s.dist = std::move(dist);
    s.map = std::move(map);
    s.invertible = invertible;
    return s;
}

std::vector<Violation> violations_of(const SystemSpec& spec) {
    try {
        validate_system(spec);
    } catch (const ValidationError& e) {
        return e.violations();
    }
    return {};
}

}  // namespace

TEST_CASE("validate accepts a singleton and a swap") {
    auto one = validate_system(explicit_spec({{Rational(0)}}, {0}));
    CHECK(one.size() == 1);
    CHECK(one.image(0) == 0);

    auto swap = validate_system(explicit_spec({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}, {1, 0}, true));
    CHECK(swap.size() == 2);
    CHECK(swap.invertible());
    CHECK(swap.image(0) == 1);
    CHECK(swap.image(1) == 0);
}

TEST_CASE("validate reports the triangle violation with its indices") {
    auto v = violations_of(explicit_spec({{Rational(0), Rational(1), Rational(5)},
                                          {Rational(1), Rational(0), Rational(1)},
                                          {Rational(5), Rational(1), Rational(0)}},
                                         {0, 1, 2}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::Triangle);
    CHECK(v[0].indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(v[0].describe() == "triangle (0,1,2)");
}

TEST_CASE("validate lists every violated axiom") {
    auto v = violations_of(explicit_spec({{Rational(0), Rational(1)}, {Rational(2), Rational(0)}}, {0, 7}));
    auto has = [&](ViolationKind k) {
        return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
    };
    CHECK(has(ViolationKind::MapNotTotal));
    CHECK(has(ViolationKind::Symmetry));

    auto zero = violations_of(explicit_spec({{Rational(0), Rational(0)}, {Rational(0), Rational(0)}}, {0, 1}));
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].kind == ViolationKind::Identity);

    auto neg = violations_of(explicit_spec({{Rational(0), Rational(-1)}, {Rational(-1), Rational(0)}}, {0, 1}));
    CHECK(std::any_of(neg.begin(), neg.end(), [](const Violation& x) { return x.kind == ViolationKind::Negative; }));

    auto not_bij = violations_of(explicit_spec({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}, {0, 0}, true));
    REQUIRE(not_bij.size() == 1);
    CHECK(not_bij[0].kind == ViolationKind::NotBijective);
    CHECK(not_bij[0].indices == std::vector<std::size_t>{1});

    auto shape = violations_of(explicit_spec({{Rational(0), Rational(1)}}, {0}));
    CHECK(!shape.empty());
    CHECK(shape[0].kind == ViolationKind::Shape);
}

TEST_CASE("missing distances are completed by shortest paths") {
    auto spec = explicit_spec({{Rational(0), Rational(1), std::nullopt},
                               {Rational(1), Rational(0), Rational(2)},
                               {std::nullopt, std::nullopt, Rational(0)}},
                              {1, 2, 0}, true);
    auto s = validate_system(spec);
    CHECK(s.distance(0, 2) == Rational(3));
    CHECK(s.distance(2, 0) == Rational(3));
    CHECK(s.distance(2, 1) == Rational(2));

    auto unreachable = violations_of(explicit_spec({{Rational(0), std::nullopt}, {std::nullopt, Rational(0)}}, {0, 1}));
    REQUIRE(!unreachable.empty());
    CHECK(unreachable[0].kind == ViolationKind::Missing);
}

TEST_CASE("cantor-identity has 2^k points with minimum gap 2/3^k") {
    for (std::int64_t k = 0; k <= 4; ++k) {
        auto s = gen("cantor-identity:" + std::to_string(k));
        CHECK(s.size() == (std::size_t{1} << k));
        CHECK(s.invertible());
        for (Point p = 0; p < s.size(); ++p) CHECK(s.image(p) == p);
        if (k == 0) continue;
        std::int64_t pow3 = 1;
        for (int i = 0; i < k; ++i) pow3 *= 3;
        CHECK(s.distance_values().front() == Rational(2, pow3));
    }
    auto one = gen("cantor-identity:1");
    CHECK(one.distance(0, 1) == Rational(2, 3));
    auto two = gen("cantor-identity:2");
    CHECK(two.distance(0, 1) == Rational(2, 9));
    CHECK(two.distance(1, 2) == Rational(4, 9));
    CHECK(two.distance(2, 3) == Rational(2, 9));
}

TEST_CASE("rotation is a cyclic permutation on the circle") {
    auto s = gen("rotation:4:1");
    CHECK(s.size() == 4);
    CHECK(s.is_bijective());
    CHECK(s.image(3) == 0);
    CHECK(s.distance(0, 3) == Rational(1, 4));
    CHECK(s.distance(0, 2) == Rational(1, 2));
    auto r = gen("rotation:5:2");
    CHECK(r.image(4) == 1);
}

TEST_CASE("north-south layout") {
    auto s = gen("north-south:8");
    REQUIRE(s.size() == 8);
    CHECK(!s.invertible());
    CHECK(std::vector<Point>(s.map().begin(), s.map().end()) == std::vector<Point>{0, 3, 5, 4, 7, 6, 7, 7});
    CHECK(s.distance(0, 1) == Rational(1, 16));
    CHECK(s.distance(0, 2) == Rational(1, 16));
    CHECK(s.distance(0, 7) == Rational(1, 2));
    auto small = gen("north-south:4");
    CHECK(small.size() == 4);
    CHECK(small.image(1) == 3);
    CHECK(small.image(2) == 3);
}

TEST_CASE("parallel-cycles metric") {
    using namespace testing_support;
    auto s = gen("parallel-cycles");
    REQUIRE(s.size() == 5);
    CHECK(std::vector<Point>(s.map().begin(), s.map().end()) == std::vector<Point>{c2, c2, c1, e2, e1});
    CHECK(s.distance(a, c1) == Rational(1));
    CHECK(s.distance(c2, e2) == Rational(1));
    CHECK(s.distance(c2, e1) == Rational(4));
    CHECK(s.diameter() == Rational(4));
}

TEST_CASE("generator errors") {
    CHECK_THROWS_AS(gen("nope:3"), UnknownGenerator);
    CHECK_THROWS_AS(gen("north-south:7"), BadParams);
    CHECK_THROWS_AS(gen("north-south:2"), BadParams);
    CHECK_THROWS_AS(gen("cantor-identity:13"), BadParams);
    CHECK_THROWS_AS(gen("cantor-identity"), BadParams);
    CHECK_THROWS_AS(gen("rotation:4:1:9"), BadParams);
    CHECK_THROWS_AS(gen("rotation:x"), BadParams);
    CHECK_THROWS_AS(build_corpus_system("rotation", {{"n", 4}, {"m", 1}}), BadParams);
}

TEST_CASE("shorthand round trip and corpus ids") {
    auto spec = parse_generator_shorthand("rotation:4:1");
    CHECK(spec.name == "rotation");
    CHECK(spec.params.at("n") == 4);
    CHECK(spec.params.at("k") == 1);
    CHECK(to_shorthand(spec) == "rotation:4:1");
    for (const auto& g : default_corpus()) {
        auto s = build_corpus_system(g.name, g.params);
        CHECK(s.id() == to_shorthand(g));
        CHECK(to_shorthand(parse_generator_shorthand(s.id())) == s.id());
        CHECK(s.size() <= 12);
    }
}

TEST_CASE("generators are deterministic") {
    for (const auto& g : default_corpus()) CHECK(build_corpus_system(g.name, g.params) == build_corpus_system(g.name, g.params));
}

TEST_CASE("discretize: worked roundings") {
    auto doubling = discretize({4, Geometry::Circle, SourceMap::Doubling});
    CHECK(std::vector<Point>(doubling.map().begin(), doubling.map().end()) == std::vector<Point>{0, 2, 0, 2});
    CHECK(doubling.quantization_bound() == Rational(1, 8));
    CHECK(!doubling.invertible());

    auto tent = discretize({2, Geometry::Interval, SourceMap::Tent});
    CHECK(std::vector<Point>(tent.map().begin(), tent.map().end()) == std::vector<Point>{0, 0});

    auto tent8 = discretize({8, Geometry::Interval, SourceMap::Tent});
    CHECK(std::vector<Point>(tent8.map().begin(), tent8.map().end()) == std::vector<Point>{0, 2, 4, 6, 6, 4, 2, 0});

    for (std::size_t n : {1u, 3u, 7u}) {
        auto id = discretize({n, Geometry::Interval, SourceMap::Identity});
        CHECK(id.invertible());
        for (Point p = 0; p < n; ++p) CHECK(id.image(p) == p);
    }
    CHECK_THROWS_AS(discretize({0, Geometry::Interval, SourceMap::Identity}), BadParams);
}

TEST_CASE("property: discretize picks the first nearest center") {
    for (std::size_t n = 1; n <= 24; ++n)
        for (auto geometry : {Geometry::Interval, Geometry::Circle})
            for (auto source : {SourceMap::Identity, SourceMap::Doubling, SourceMap::Tent}) {
                GridSystem1D grid{n, geometry, source};
                auto s = discretize(grid);
                auto centers = grid_centers(grid);
                for (std::size_t i = 0; i < n; ++i) {
                    Rational y = apply_source_map(source, centers[i]);
                    auto dist = [&](const Rational& c) {
                        Rational t = abs(c - y);
                        if (geometry == Geometry::Circle) {
                            while (t > Rational(1)) t -= Rational(1);
                            t = std::min(t, Rational(1) - t);
                        }
                        return t;
                    };
                    std::size_t best = 0;
                    for (std::size_t j = 1; j < n; ++j)
                        if (dist(centers[j]) < dist(centers[best])) best = j;
                    CHECK(s.image(static_cast<Point>(i)) == best);
                    bool image_in_unit = geometry == Geometry::Circle || source != SourceMap::Doubling;
                    if (image_in_unit) CHECK(dist(centers[s.image(static_cast<Point>(i))]) <= *s.quantization_bound());
                }
            }
}

TEST_CASE("inverse, restriction, and set images") {
    auto s = gen("rotation:4:1");
    auto inv = s.inverse();
    for (Point p = 0; p < 4; ++p) CHECK(inv.image(s.image(p)) == p);
    CHECK_THROWS_AS(gen("parallel-cycles").inverse_map(), NotInvertible);

    auto pc = gen("parallel-cycles");
    using namespace testing_support;
    auto cyc = PointSet(5, {c1, c2});
    CHECK(pc.is_forward_invariant(cyc));
    CHECK(!pc.is_forward_invariant(PointSet(5, {a})));
    auto sub = pc.restrict_to(PointSet(5, {c1, c2, e1, e2}));
    REQUIRE(sub.size() == 4);
    CHECK(sub.image(0) == 1);
    CHECK(sub.image(2) == 3);
    CHECK(sub.distance(0, 2) == Rational(1));
    CHECK_THROWS_AS(pc.restrict_to(PointSet(5, {a})), DomainNotInvariant);
    CHECK(pc.image(PointSet(5, {a, c1, e1})) == PointSet(5, {c2, e2}));
    CHECK(pc.ball(a, Rational(1)) == PointSet(5, {a, c1}));
}

TEST_CASE("property: random systems satisfy the metric axioms they were validated against") {
    std::mt19937 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto s = testing_support::random_system(rng, 1 + t % 12);
        std::vector<std::vector<Rational>> d(s.size(), std::vector<Rational>(s.size()));
        std::vector<std::int64_t> map;
        for (Point i = 0; i < s.size(); ++i) {
            map.push_back(s.image(i));
            for (Point j = 0; j < s.size(); ++j) d[i][j] = s.distance(i, j);
        }
        CHECK(find_violations(d, map, false).empty());
    }
}
