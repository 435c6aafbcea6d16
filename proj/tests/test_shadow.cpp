#include <doctest.h>

#include <functional>
#include <random>

#include "chainshadow/shadow.hpp"
#include "support.hpp"

using namespace chainshadow;
using namespace testing_support;

namespace {

/// Calls fn on every delta-chain of exactly `len` points.
void for_each_chain(const FiniteMetricSystem& s, const Rational& delta, std::size_t len,
                    const std::function<void(const std::vector<Point>&)>& fn) {
    std::vector<Point> cur;
    std::function<void()> rec = [&] {
        if (cur.size() == len) {
            fn(cur);
            return;
        }
        for (Point q = 0; q < s.size(); ++q) {
            if (!cur.empty() && s.distance(s.image(cur.back()), q) > delta) continue;
            cur.push_back(q);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

/// x merges with p under eps-tracking, by simulating both orbits.
bool merges(const FiniteMetricSystem& s, Point x, Point p, const Rational& eps) {
    for (std::size_t step = 0; step <= s.size() * s.size(); ++step) {
        if (x == p) return true;
        if (s.distance(x, p) > eps) return false;
        x = s.image(x);
        p = s.image(p);
    }
    return false;
}

Rational pick(std::mt19937& rng, const std::vector<Rational>& values) {
    return values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];
}

std::vector<Rational> scale_values(const FiniteMetricSystem& s) {
    auto v = s.distance_values();
    v.insert(v.begin(), Rational(0));
    return v;
}

}  // namespace

TEST_CASE("pseudo-orbit validation") {
    auto pc = gen("parallel-cycles");
    CHECK(validate_pseudo_orbit(pc, PseudoOrbit::plain({a, c2, c1}, Rational(0))));
    CHECK(validate_pseudo_orbit(pc, PseudoOrbit::plain({a, e2}, Rational(1))));
    auto bad = PseudoOrbit::plain({a, e1}, Rational(1));
    CHECK(!validate_pseudo_orbit(pc, bad));
    REQUIRE(first_violation(pc, bad).has_value());
    CHECK(first_violation(pc, bad)->position == 0);
    CHECK(bad.errors(pc) == std::vector<Rational>{Rational(4)});

    CHECK(validate_pseudo_orbit(pc, PseudoOrbit::eventually_exact({a, e2, e1}, Rational(1), 1)));
    // a jump after the tail starts is not allowed
    CHECK(!validate_pseudo_orbit(pc, PseudoOrbit::eventually_exact({a, e2, c1}, Rational(1), 1)));
    CHECK(!validate_pseudo_orbit(pc, PseudoOrbit::eventually_exact({a, e2}, Rational(1), 2)));
    CHECK(!validate_pseudo_orbit(pc, PseudoOrbit::plain({a, 9}, Rational(1))));
    CHECK(!validate_pseudo_orbit(pc, PseudoOrbit::plain({}, Rational(1))));
}

TEST_CASE("shadow sets") {
    auto id = gen("cantor-identity:2");
    auto single = shadow_sets(id, PseudoOrbit::plain({1}, Rational(0)), Rational(1, 4));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == id.ball(1, Rational(1, 4)));

    auto pc = gen("parallel-cycles");
    auto ys = shadow_sets(pc, PseudoOrbit::plain({a, e2, e1}, Rational(1)), Rational(1));
    REQUIRE(ys.size() == 3);
    CHECK(ys[0] == PointSet(5, {a, c1}));
    CHECK(ys[1] == PointSet(5, {c2}));
    CHECK(ys[2] == PointSet(5, {c1}));

    for (const auto& y : shadow_sets(pc, PseudoOrbit::plain({a, e2, e1, c2}, Rational(4)), Rational(4)))
        CHECK(!y.empty());
}

TEST_CASE("per-orbit shadowing") {
    auto pc = gen("parallel-cycles");
    CHECK(is_shadowed(pc, PseudoOrbit::plain({e1, e2, e1}, Rational(0)), Rational(0)) == e1);
    auto shadow = is_shadowed(pc, PseudoOrbit::plain({a, e2, e1}, Rational(1)), Rational(1));
    REQUIRE(shadow.has_value());
    CHECK(*shadow == a);
    CHECK(tracks(pc, *shadow, {a, e2, e1}, Rational(1)));

    auto gap = line_system({0, 1}, {0, 1});
    CHECK(!is_shadowed(gap, PseudoOrbit::plain({0, 1}, Rational(1)), Rational(1, 2)).has_value());
    CHECK_THROWS_AS(is_shadowed(pc, PseudoOrbit::eventually_exact({a, e2}, Rational(1), 1), Rational(1)), KindMismatch);
}

TEST_CASE("merge sets") {
    auto id = gen("cantor-identity:2");
    auto m = merge_sets(id, Rational(1, 10));
    for (Point p = 0; p < 4; ++p) CHECK(m.tracks(p) == PointSet(4, {p}));

    auto pc = gen("parallel-cycles");
    auto pm = merge_sets(pc, Rational(1));
    CHECK(pm.tracks(e2) == PointSet(5, {e2}));
    CHECK(pm.tracks(c2) == PointSet(5, {c2}));
    CHECK(pm.tracks(c1) == PointSet(5, {a, c1}));
    CHECK(pm.tracks(a) == PointSet(5, {a, c1}));

    // fixed sink with eps at the diameter: everything merges into it
    auto chain = line_system({0, 1, 2}, {1, 2, 2});
    CHECK(merge_sets(chain, Rational(2)).tracks(2) == PointSet::full(3));
    CHECK(merge_sets(chain, Rational(0)).tracks(2) == PointSet(3, {2}));
}

TEST_CASE("per-orbit limit shadowing") {
    auto pc = gen("parallel-cycles");
    CHECK(is_limit_shadowed(pc, PseudoOrbit::eventually_exact({c1, c2}, Rational(0), 0), Rational(0)) == c1);
    auto po = PseudoOrbit::eventually_exact({a, e2}, Rational(1), 1);
    CHECK(!is_limit_shadowed(pc, po, Rational(1)).has_value());
    auto wide = is_limit_shadowed(pc, po, Rational(4));
    REQUIRE(wide.has_value());
    CHECK(*wide == e1);
    CHECK_THROWS_AS(is_limit_shadowed(pc, PseudoOrbit::plain({a, e2}, Rational(1)), Rational(1)), KindMismatch);
}

TEST_CASE("system-level verdicts on worked examples") {
    for (Rational eps : {Rational(0), Rational(1, 8), Rational(1)}) {
        auto rot = gen("rotation:5:2");
        CHECK(check_shadowing_property(rot, Rational(0), eps).pass);
        CHECK(check_slimit_property(rot, Rational(0), eps).pass);
    }
    for (int k = 1; k <= 3; ++k) {
        auto s = gen("cantor-identity:" + std::to_string(k));
        Rational below = s.distance_values().front() - Rational(1, 1000);
        CHECK(check_shadowing_property(s, below, below).pass);
        CHECK(check_slimit_property(s, below, below).pass);
    }

    auto pc = gen("parallel-cycles");
    auto sh = check_shadowing_property(pc, Rational(1), Rational(1));
    CHECK(sh.pass);
    CHECK(sh.states_explored == 11);
    auto sl = check_slimit_property(pc, Rational(1), Rational(1));
    CHECK(!sl.pass);
    REQUIRE(sl.witness.has_value());
    CHECK(sl.witness->points == std::vector<Point>{a, e2});
    CHECK(sl.witness->kind == OrbitKind::EventuallyExact);
    CHECK(sl.witness->tail_start == 1u);

    auto chain = line_system({0, 1, 2}, {1, 2, 2});
    for (Rational delta : {Rational(0), Rational(1), Rational(2)}) {
        CHECK(check_shadowing_property(chain, delta, chain.diameter()).pass);
        CHECK(check_slimit_property(chain, delta, chain.diameter()).pass);
    }
}

TEST_CASE("shadowing failure witness ends where the shadow sets empty") {
    auto gap = line_system({0, 1}, {0, 1});
    auto v = check_shadowing_property(gap, Rational(1), Rational(1, 2));
    CHECK(!v.pass);
    auto w = extract_witness(v);
    CHECK(w.points == std::vector<Point>{0, 1});
    CHECK(w.kind == OrbitKind::Plain);
    auto ys = shadow_sets(gap, w, Rational(1, 2));
    CHECK(ys.back().empty());
    CHECK_THROWS_AS(extract_witness(check_shadowing_property(gap, Rational(0), Rational(0))), NotFailing);
}

TEST_CASE("domains, state cap and workers") {
    auto pc = gen("parallel-cycles");
    CHECK_THROWS_AS(check_shadowing_property(pc, Rational(1), Rational(1), PointSet(5, {a})), DomainNotInvariant);
    CHECK_THROWS_AS(check_shadowing_property(pc, Rational(1), Rational(1), PointSet(5)), EmptyDomain);
    auto restricted = check_slimit_property(pc, Rational(1), Rational(1), PointSet(5, {e1, e2}));
    CHECK(restricted.pass);

    SearchOptions tiny;
    tiny.state_cap = 2;
    CHECK_THROWS_AS(check_shadowing_property(pc, Rational(1), Rational(1), std::nullopt, tiny), Inconclusive);

    SearchOptions many;
    many.workers = 4;
    for (const auto& g : default_corpus()) {
        auto s = build_corpus_system(g.name, g.params);
        for (const auto& d : scale_values(s))
            for (auto prop : {Property::Shadowing, Property::SLimit}) {
                auto one = check_property(prop, s, d, d / Rational(2));
                auto four = check_property(prop, s, d, d / Rational(2), std::nullopt, many);
                CHECK(one.pass == four.pass);
                CHECK(one.witness == four.witness);
                CHECK(one.states_explored == four.states_explored);
            }
    }
}

TEST_CASE("property names") {
    CHECK(parse_property("shadowing") == Property::Shadowing);
    CHECK(parse_property("slimit") == Property::SLimit);
    CHECK(std::string(to_string(Property::SLimit)) == "slimit");
    CHECK_THROWS_AS(parse_property("limit"), BadParams);
}

TEST_CASE("property: shadow sets are exactly the positions of tracking points") {
    std::mt19937 rng(17);
    for (int t = 0; t < 60; ++t) {
        auto s = random_system(rng, 2 + t % 6);
        auto values = scale_values(s);
        Rational delta = pick(rng, values), eps = pick(rng, values);
        for (std::size_t len = 1; len <= 4; ++len)
            for_each_chain(s, delta, len, [&](const std::vector<Point>& chain) {
                auto ys = shadow_sets(s, PseudoOrbit::plain(chain, delta), eps);
                for (std::size_t i = 0; i < len; ++i) {
                    PointSet expect(s.size());
                    std::vector<Point> prefix(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(i + 1));
                    for (Point x = 0; x < s.size(); ++x)
                        if (tracks(s, x, prefix, eps)) expect.insert(iterate(s, x, i));
                    CHECK(ys[i] == expect);
                }
                auto shadow = is_shadowed(s, PseudoOrbit::plain(chain, delta), eps);
                CHECK(shadow.has_value() == !ys.back().empty());
                if (shadow) CHECK(tracks(s, *shadow, chain, eps));
            });
    }
}

TEST_CASE("property: merge sets agree with orbit simulation") {
    std::mt19937 rng(23);
    for (int t = 0; t < 100; ++t) {
        auto s = random_system(rng, 1 + t % 12);
        Rational eps = pick(rng, scale_values(s));
        auto m = merge_sets(s, eps);
        for (Point p = 0; p < s.size(); ++p)
            for (Point x = 0; x < s.size(); ++x) CHECK(m.tracks(p).contains(x) == merges(s, x, p, eps));
    }
}

TEST_CASE("property: per-orbit limit shadowing agrees with direct search") {
    std::mt19937 rng(29);
    for (int t = 0; t < 60; ++t) {
        auto s = random_system(rng, 2 + t % 6);
        auto values = scale_values(s);
        Rational delta = pick(rng, values), eps = pick(rng, values);
        for (std::size_t len = 1; len <= 3; ++len)
            for_each_chain(s, delta, len, [&](const std::vector<Point>& chain) {
                auto po = PseudoOrbit::eventually_exact(chain, delta, len - 1);
                bool direct = false;
                for (Point x = 0; x < s.size() && !direct; ++x)
                    direct = tracks(s, x, chain, eps) && merges(s, iterate(s, x, len - 1), chain.back(), eps);
                auto found = is_limit_shadowed(s, po, eps);
                CHECK(found.has_value() == direct);
                if (found) CHECK(tracks(s, *found, chain, eps));
            });
    }
}

TEST_CASE("property: verdicts are monotone and s-limit implies shadowing") {
    std::mt19937 rng(31);
    for (int t = 0; t < 60; ++t) {
        auto s = random_system(rng, 2 + t % 9);
        auto values = scale_values(s);
        std::vector<std::vector<bool>> sh(values.size(), std::vector<bool>(values.size()));
        auto sl = sh;
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = 0; j < values.size(); ++j) {
                sh[i][j] = check_shadowing_property(s, values[i], values[j]).pass;
                sl[i][j] = check_slimit_property(s, values[i], values[j]).pass;
                if (sl[i][j]) CHECK(sh[i][j]);
            }
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (i > 0 && sh[i][j]) CHECK(sh[i - 1][j]);
                if (j > 0 && sh[i][j - 1]) CHECK(sh[i][j]);
                if (i > 0 && sl[i][j]) CHECK(sl[i - 1][j]);
                if (j > 0 && sl[i][j - 1]) CHECK(sl[i][j]);
            }
    }
}

TEST_CASE("property: failing verdicts yield genuine, unshadowable witnesses") {
    std::mt19937 rng(37);
    std::size_t failures = 0;
    for (int t = 0; t < 80; ++t) {
        auto s = random_system(rng, 2 + t % 9);
        auto values = scale_values(s);
        Rational delta = pick(rng, values), eps = pick(rng, values);
        auto sh = check_shadowing_property(s, delta, eps);
        if (!sh.pass) {
            ++failures;
            auto w = extract_witness(sh);
            CHECK(validate_pseudo_orbit(s, w));
            CHECK(!is_shadowed(s, w, eps).has_value());
            // every proper prefix is still shadowed, so the witness is shortest
            auto shorter = w;
            shorter.points.pop_back();
            if (!shorter.points.empty()) CHECK(is_shadowed(s, shorter, eps).has_value());
        }
        auto sl = check_slimit_property(s, delta, eps);
        if (!sl.pass) {
            ++failures;
            auto w = extract_witness(sl);
            CHECK(validate_pseudo_orbit(s, w));
            CHECK(!is_limit_shadowed(s, w, eps).has_value());
        }
    }
    CHECK(failures > 10);
}
