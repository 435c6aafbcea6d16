#include "chainshadow/verify.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace chainshadow {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Holds: return "holds";
        case Outcome::Fails: return "fails";
        case Outcome::Vacuous: return "vacuous";
    }
    return "unknown";
}

namespace {

std::string describe(const PointSet& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](Point p) {
        out += (first ? "" : ",") + std::to_string(p);
        first = false;
    });
    return out + "}";
}

// Memoizes decompositions and automaton runs shared between checks.
class Session {
public:
    Session(const FiniteMetricSystem& system, const HarnessOptions& options) : system_(system), options_(options) {}

    const ChainDecomposition& decomposition(const Rational& delta) {
        auto it = decompositions_.find(delta);
        if (it == decompositions_.end())
            it = decompositions_.emplace(delta, decompose(build_delta_graph(system_, delta))).first;
        return it->second;
    }

    const ShadowVerdict& full(Property property, const Rational& delta, const Rational& eps) {
        auto key = std::make_tuple(property == Property::SLimit, delta, eps);
        auto it = full_.find(key);
        if (it == full_.end())
            it = full_.emplace(key, check_property(property, system_, delta, eps, std::nullopt, options_.search)).first;
        return it->second;
    }

    const ShadowVerdict& restricted(const PointSet& core, const Rational& delta, const Rational& eps) {
        auto key = std::make_tuple(core.members(), delta, eps);
        auto it = restricted_.find(key);
        if (it == restricted_.end()) {
            ShadowVerdict v = options_.restricted
                                  ? options_.restricted(system_, delta, eps, core)
                                  : check_shadowing_property(system_, delta, eps, core, options_.search);
            it = restricted_.emplace(std::move(key), std::move(v)).first;
        }
        return it->second;
    }

    const FiniteMetricSystem& system() const { return system_; }
    const SearchOptions& search() const { return options_.search; }

private:
    const FiniteMetricSystem& system_;
    const HarnessOptions& options_;
    std::map<Rational, ChainDecomposition> decompositions_;
    std::map<std::tuple<bool, Rational, Rational>, ShadowVerdict> full_;
    std::map<std::tuple<std::vector<Point>, Rational, Rational>, ShadowVerdict> restricted_;
};

CheckResult implication(Session& s, const Rational& delta, const Rational& eps) {
    CheckResult r;
    r.check = checks::slimit_implies_shadowing;
    r.parameters = {{"delta", delta}, {"eps", eps}};
    const auto& slim = s.full(Property::SLimit, delta, eps);
    const auto& shad = s.full(Property::Shadowing, delta, eps);
    if (!slim.pass) {
        r.outcome = Outcome::Vacuous;
        r.details = std::string("s-limit fails; shadowing ") + (shad.pass ? "passes" : "fails");
        r.orbit_witnesses.push_back(*slim.witness);
        return r;
    }
    if (shad.pass) {
        r.outcome = Outcome::Holds;
        r.details = "s-limit and shadowing both pass";
        return r;
    }
    r.outcome = Outcome::Fails;
    r.details = "s-limit passes but shadowing fails";
    r.orbit_witnesses.push_back(*shad.witness);
    return r;
}

CheckResult density(Session& s, const Rational& delta_coarse, const Rational& delta_fine, const Rational& eps) {
    CheckResult r;
    r.check = checks::dense_shadowing_components;
    r.parameters = {{"delta_coarse", delta_coarse}, {"delta_fine", delta_fine}, {"eps", eps}};
    if (delta_coarse < delta_fine) throw BadParams("delta_fine must not exceed delta_coarse");

    const auto& slim = s.full(Property::SLimit, delta_fine, eps);
    if (!slim.pass) {
        r.outcome = Outcome::Vacuous;
        r.details = "s-limit fails at the fine resolution";
        r.orbit_witnesses.push_back(*slim.witness);
        return r;
    }

    const auto& coarse = s.decomposition(delta_coarse);
    const auto& fine = s.decomposition(delta_fine);
    std::vector<std::size_t> uncertified;
    for (const auto& a : coarse.classes()) {
        if (a.degenerate()) {
            r.notes.push_back("coarse class " + std::to_string(a.id) + " " + describe(a.points) +
                              " has an empty invariant core; excluded");
            continue;
        }
        std::vector<std::size_t> inside;
        for (const auto& c : fine.classes())
            if (c.points.is_subset_of(a.points)) inside.push_back(c.id);

        auto top = maximal_classes(fine, inside);
        std::vector<std::size_t> order = top;
        for (auto c : inside)
            if (std::find(top.begin(), top.end(), c) == top.end()) order.push_back(c);

        std::optional<Certificate> cert;
        std::vector<PseudoOrbit> refutations;
        for (auto c : order) {
            const auto& cls = fine.at(c);
            if (cls.degenerate()) {
                r.notes.push_back("fine class " + std::to_string(c) + " " + describe(cls.points) +
                                  " has an empty invariant core; excluded");
                continue;
            }
            const auto& v = s.restricted(cls.core, delta_fine, eps);
            if (v.pass) {
                bool is_max = std::find(top.begin(), top.end(), c) != top.end();
                cert = Certificate{a.id, c, cls.core, is_max};
                break;
            }
            if (v.witness) refutations.push_back(*v.witness);
        }
        if (cert) {
            r.certificates.push_back(*cert);
        } else {
            uncertified.push_back(a.id);
            r.class_witnesses.push_back(a.points);
            for (auto& w : refutations) r.orbit_witnesses.push_back(std::move(w));
        }
    }

    if (uncertified.empty()) {
        r.outcome = Outcome::Holds;
        r.details = std::to_string(r.certificates.size()) + " coarse classes certified";
    } else {
        r.outcome = Outcome::Fails;
        r.details = std::to_string(uncertified.size()) + " coarse classes contain no shadowing fine class";
    }
    return r;
}

CheckResult initial_components(Session& s, const Rational& delta, const Rational& eps) {
    const auto& system = s.system();
    if (!system.invertible() || !system.is_bijective()) throw NotInvertible();

    CheckResult r;
    r.check = checks::initial_components_shadow;
    r.parameters = {{"delta", delta}, {"eps", eps}};
    const auto& slim = s.full(Property::SLimit, delta, eps);
    if (!slim.pass) {
        r.outcome = Outcome::Vacuous;
        r.details = "s-limit fails";
        r.orbit_witnesses.push_back(*slim.witness);
        return r;
    }

    const auto& dec = s.decomposition(delta);
    for (const auto& cc : cross_check_initial(system, dec)) {
        std::string inverse = !cc.terminal_for_inverse ? "not a class for the inverse map"
                              : *cc.terminal_for_inverse ? "terminal for the inverse map"
                                                         : "not terminal for the inverse map";
        if (cc.initial || cc.terminal_for_inverse.value_or(false))
            r.notes.push_back("class " + std::to_string(cc.class_id) + (cc.initial ? " initial; " : " not initial; ") +
                              inverse);
    }

    std::size_t checked = 0;
    bool failed = false;
    for (const auto& c : dec.classes()) {
        if (!c.initial) continue;
        if (c.degenerate()) {
            r.notes.push_back("initial class " + std::to_string(c.id) + " has an empty invariant core; excluded");
            continue;
        }
        ++checked;
        const auto& v = s.restricted(c.core, delta, eps);
        r.certificates.push_back(Certificate{c.id, c.id, c.core, true});
        if (!v.pass) {
            failed = true;
            r.certificates.pop_back();
            r.class_witnesses.push_back(c.points);
            if (v.witness) r.orbit_witnesses.push_back(*v.witness);
        }
    }
    r.outcome = failed ? Outcome::Fails : Outcome::Holds;
    r.details = std::to_string(checked) + " initial classes checked";
    return r;
}

CheckResult isolated_components(Session& s, const Rational& delta, const Rational& eps) {
    CheckResult r;
    r.check = checks::isolated_components_shadow;
    r.parameters = {{"delta", delta}, {"eps", eps}};
    const auto& shad = s.full(Property::Shadowing, delta, eps);
    if (!shad.pass) {
        r.outcome = Outcome::Vacuous;
        r.details = "full-system shadowing fails";
        r.orbit_witnesses.push_back(*shad.witness);
        return r;
    }

    const Rational margin = Rational(2) * eps + delta;
    const auto& dec = s.decomposition(delta);
    std::size_t checked = 0;
    bool failed = false;
    for (auto id : isolated_classes(dec, margin)) {
        const auto& c = dec.at(id);
        if (c.degenerate()) {
            r.notes.push_back("isolated class " + std::to_string(id) + " has an empty invariant core; excluded");
            continue;
        }
        ++checked;
        const auto& v = s.restricted(c.core, delta, eps);
        if (v.pass) {
            r.certificates.push_back(Certificate{id, id, c.core, false});
        } else {
            failed = true;
            r.class_witnesses.push_back(c.points);
            if (v.witness) r.orbit_witnesses.push_back(*v.witness);
        }
    }
    r.outcome = failed ? Outcome::Fails : Outcome::Holds;
    r.details = std::to_string(checked) + " classes separated by more than " + margin.str();
    return r;
}

}  // namespace

CheckResult verify_slimit_implies_shadowing(const FiniteMetricSystem& system, const Rational& delta,
                                            const Rational& eps, const HarnessOptions& options) {
    Session s(system, options);
    return implication(s, delta, eps);
}

CheckResult verify_dense_shadowing_components(const FiniteMetricSystem& system, const Rational& delta_coarse,
                                              const Rational& delta_fine, const Rational& eps,
                                              const HarnessOptions& options) {
    Session s(system, options);
    return density(s, delta_coarse, delta_fine, eps);
}

CheckResult verify_initial_components_shadow(const FiniteMetricSystem& system, const Rational& delta,
                                             const Rational& eps, const HarnessOptions& options) {
    Session s(system, options);
    return initial_components(s, delta, eps);
}

CheckResult verify_isolated_components_shadow(const FiniteMetricSystem& system, const Rational& delta,
                                              const Rational& eps, const HarnessOptions& options) {
    Session s(system, options);
    return isolated_components(s, delta, eps);
}

std::optional<SLimitViolation> find_slimit_violation(const FiniteMetricSystem& system, const Rational& delta,
                                                     const Rational& eps, const SearchOptions& options) {
    auto verdict = check_slimit_property(system, delta, eps, std::nullopt, options);
    if (verdict.pass) return std::nullopt;
    SLimitViolation v{extract_witness(verdict)};
    auto dec = decompose(build_delta_graph(system, delta));
    v.starts_outside_recurrence = !dec.chain_recurrent().contains(v.witness.points.front());
    auto cycle = omega_cycle(system, v.witness.points.back());
    v.tail_class = *dec.class_of(cycle.first());
    v.tail_class_initial = dec.at(v.tail_class).initial;
    return v;
}

std::vector<Rational> distance_grid_values(const FiniteMetricSystem& system) {
    std::set<Rational> values;
    for (const auto& d : system.distance_values()) {
        values.insert(d);
        values.insert(d / Rational(2));
        values.insert(d * Rational(2));
    }
    return {values.begin(), values.end()};
}

ParameterGrid default_grid(const FiniteMetricSystem& system) {
    auto values = distance_grid_values(system);
    return {values, values};
}

std::size_t HarnessReport::count(Outcome outcome) const {
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [&](const CheckResult& r) { return r.outcome == outcome; }));
}

HarnessReport run_harness(const FiniteMetricSystem& system, const ParameterGrid& grid, const HarnessOptions& options) {
    Session s(system, options);
    HarnessReport report;
    report.system_id = system.id();
    report.grid = grid;
    const bool invertible = system.invertible() && system.is_bijective();
    if (!invertible) report.notes.push_back("system is not invertible; initial-component checks skipped");

    for (const auto& delta : grid.deltas) {
        for (const auto& eps : grid.eps) {
            report.results.push_back(implication(s, delta, eps));
            report.results.push_back(isolated_components(s, delta, eps));
            if (invertible) report.results.push_back(initial_components(s, delta, eps));
            for (const auto& coarse : grid.deltas)
                if (!(coarse < delta)) report.results.push_back(density(s, coarse, delta, eps));
        }
    }

    std::set<Rational> deltas(grid.deltas.begin(), grid.deltas.end());
    for (const auto& delta : deltas)
        for (const auto& c : s.decomposition(delta).classes())
            if (c.degenerate())
                report.notes.push_back("delta " + delta.str() + ": class " + std::to_string(c.id) + " " +
                                       describe(c.points) + " has an empty invariant core");
    return report;
}

int exit_status(const HarnessReport& report) { return report.count(Outcome::Fails) > 0 ? 1 : 0; }

}  // namespace chainshadow
