#include "chainshadow/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace chainshadow {

namespace {

Json points_json(const PointSet& s) { return s.members(); }

Json optional_rational(const std::optional<Rational>& r) { return r ? Json(r->str()) : Json(nullptr); }

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ParseError("expected a rational string or integer, got " + j.dump());
}

SystemSpec system_spec_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("system spec must be a JSON object");
    if (j.contains("generator")) {
        GeneratorSpec spec{j.at("generator").get<std::string>(), {}};
        if (j.contains("params")) {
            if (!j.at("params").is_object()) throw ParseError("generator params must be an object");
            for (const auto& [key, value] : j.at("params").items()) {
                if (!value.is_number_integer()) throw ParseError("generator parameter '" + key + "' must be an integer");
                spec.params[key] = value.get<std::int64_t>();
            }
        }
        return spec;
    }

    for (const char* key : {"n", "dist", "map"})
        if (!j.contains(key)) throw ParseError(std::string("system spec is missing '") + key + "'");
    ExplicitSpec spec;
    const auto n = j.at("n").get<std::int64_t>();
    if (n <= 0) throw ParseError("n must be positive");
    const auto& rows = j.at("dist");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
        throw ParseError("dist must be an n x n array");
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            throw ParseError("dist must be an n x n array");
        std::vector<std::optional<Rational>> out;
        for (const auto& cell : row) out.push_back(cell.is_null() ? std::nullopt : std::optional(rational_from_json(cell)));
        spec.dist.push_back(std::move(out));
    }
    const auto& map = j.at("map");
    if (!map.is_array()) throw ParseError("map must be an array");
    for (const auto& m : map) {
        if (!m.is_number_integer()) throw ParseError("map entries must be integers");
        spec.map.push_back(m.get<std::int64_t>());
    }
    spec.invertible = j.value("invertible", false);
    spec.id = j.value("id", std::string("explicit"));
    return spec;
}

Json to_json(const SystemSpec& spec) {
    if (const auto* gen = std::get_if<GeneratorSpec>(&spec)) {
        Json params = Json::object();
        for (const auto& [k, v] : gen->params) params[k] = v;
        return {{"generator", gen->name}, {"params", params}};
    }
    const auto& ex = std::get<ExplicitSpec>(spec);
    Json dist = Json::array();
    for (const auto& row : ex.dist) {
        Json r = Json::array();
        for (const auto& cell : row) r.push_back(optional_rational(cell));
        dist.push_back(r);
    }
    return {{"n", ex.map.size()}, {"dist", dist}, {"map", ex.map}, {"invertible", ex.invertible}};
}

Json to_json(const FiniteMetricSystem& system) {
    Json dist = Json::array();
    for (Point i = 0; i < system.size(); ++i) {
        Json row = Json::array();
        for (Point j = 0; j < system.size(); ++j) row.push_back(system.distance(i, j).str());
        dist.push_back(row);
    }
    Json out = {{"id", system.id()},
                {"n", system.size()},
                {"dist", dist},
                {"map", std::vector<Point>(system.map().begin(), system.map().end())},
                {"invertible", system.invertible()}};
    if (system.quantization_bound()) out["quantization_bound"] = system.quantization_bound()->str();
    return out;
}

FiniteMetricSystem load_system_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    try {
        return validate_system(system_spec_from_json(j));
    } catch (const Json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

PseudoOrbit pseudo_orbit_from_json(const Json& j) {
    try {
        PseudoOrbit orbit;
        for (const auto& p : j.at("points")) {
            if (!p.is_number_integer() || p.get<std::int64_t>() < 0) throw ParseError("points must be indices");
            orbit.points.push_back(p.get<Point>());
        }
        auto kind = j.value("kind", std::string("plain"));
        if (kind == "plain") {
            orbit.kind = OrbitKind::Plain;
        } else if (kind == "eventually_exact") {
            orbit.kind = OrbitKind::EventuallyExact;
        } else {
            throw ParseError("unknown pseudo-orbit kind '" + kind + "'");
        }
        orbit.delta = rational_from_json(j.at("delta"));
        if (j.contains("tail_start") && !j.at("tail_start").is_null()) orbit.tail_start = j.at("tail_start").get<std::size_t>();
        return orbit;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("pseudo-orbit: ") + e.what());
    }
}

Json to_json(const PseudoOrbit& orbit) {
    Json out = {{"points", orbit.points}, {"kind", to_string(orbit.kind)}, {"delta", orbit.delta.str()}};
    if (orbit.tail_start) out["tail_start"] = *orbit.tail_start;
    return out;
}

Json to_json(const ChainDecomposition& dec) {
    Json classes = Json::array();
    for (const auto& c : dec.classes()) {
        classes.push_back({{"id", c.id},
                           {"points", points_json(c.points)},
                           {"terminal", c.terminal},
                           {"initial", c.initial},
                           {"separation", optional_rational(c.separation)}});
    }
    Json order = Json::array();
    for (auto [i, j] : dec.condensation_edges()) order.push_back({i, j});
    return {{"delta", dec.delta().str()},
            {"cr_size", dec.chain_recurrent().size()},
            {"classes", classes},
            {"order", order}};
}

std::string to_dot(const ChainDecomposition& dec, const Rational& isolation_radius) {
    auto isolated = isolated_classes(dec, isolation_radius);
    auto maximal = maximal_classes(dec);
    auto contains = [](const std::vector<std::size_t>& v, std::size_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::ostringstream out;
    out << "digraph condensation {\n";
    out << "  label=\"delta=" << dec.delta() << "\";\n";
    for (const auto& c : dec.classes()) {
        std::string flags;
        auto add = [&](bool on, const char* name) {
            if (!on) return;
            flags += flags.empty() ? "" : ",";
            flags += name;
        };
        add(c.terminal, "terminal");
        add(c.initial, "initial");
        add(contains(maximal, c.id), "maximal");
        add(contains(isolated, c.id), "isolated");
        out << "  c" << c.id << " [label=\"C" << c.id << " size=" << c.points.size();
        if (!flags.empty()) out << "\\n" << flags;
        out << "\"];\n";
    }
    for (auto [i, j] : dec.condensation_edges()) out << "  c" << i << " -> c" << j << ";\n";
    out << "}\n";
    return out.str();
}

Json to_json(const DeltaLadder& ladder) {
    Json levels = Json::array();
    for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
        Json level = {{"delta", ladder.deltas[k].str()},
                      {"cr_size", ladder.levels[k].chain_recurrent().size()},
                      {"class_count", ladder.levels[k].class_count()}};
        Json classes = Json::array();
        for (const auto& c : ladder.levels[k].classes()) classes.push_back(points_json(c.points));
        level["classes"] = classes;
        if (k > 0) level["parent"] = ladder.refinement[k - 1];
        levels.push_back(level);
    }
    return {{"levels", levels},
            {"stabilization_delta", optional_rational(ladder.threshold)},
            {"stable_level", ladder.stable_level ? Json(*ladder.stable_level) : Json(nullptr)},
            {"violations", ladder.violations}};
}

Json to_json(const ShadowVerdict& verdict) {
    return {{"property", to_string(verdict.property)},
            {"delta", verdict.delta.str()},
            {"eps", verdict.epsilon.str()},
            {"pass", verdict.pass},
            {"witness", verdict.witness ? to_json(*verdict.witness) : Json(nullptr)},
            {"states_explored", verdict.states_explored}};
}

Json to_json(const CheckResult& result) {
    Json params = Json::object();
    for (const auto& [k, v] : result.parameters) params[k] = v.str();
    Json orbits = Json::array();
    for (const auto& w : result.orbit_witnesses) orbits.push_back(to_json(w));
    Json classes = Json::array();
    for (const auto& c : result.class_witnesses) classes.push_back(points_json(c));
    Json certs = Json::array();
    for (const auto& c : result.certificates) {
        certs.push_back({{"coarse_class", c.coarse_class},
                         {"fine_class", c.fine_class ? Json(*c.fine_class) : Json(nullptr)},
                         {"core", points_json(c.core)},
                         {"maximal", c.maximal}});
    }
    return {{"check", result.check},       {"parameters", params},          {"outcome", to_string(result.outcome)},
            {"details", result.details},   {"orbit_witnesses", orbits},     {"class_witnesses", classes},
            {"certificates", certs},       {"notes", result.notes}};
}

Json to_json(const HarnessReport& report) {
    Json results = Json::array();
    for (const auto& r : report.results) results.push_back(to_json(r));
    Json deltas = Json::array();
    for (const auto& d : report.grid.deltas) deltas.push_back(d.str());
    Json eps = Json::array();
    for (const auto& e : report.grid.eps) eps.push_back(e.str());
    return {{"system", report.system_id},
            {"grid", {{"deltas", deltas}, {"eps", eps}}},
            {"results", results},
            {"notes", report.notes},
            {"summary",
             {{"holds", report.count(Outcome::Holds)},
              {"fails", report.count(Outcome::Fails)},
              {"vacuous", report.count(Outcome::Vacuous)}}}};
}

}  // namespace chainshadow
