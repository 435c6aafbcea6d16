#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "chainshadow/report.hpp"

namespace chainshadow::cli {

namespace {

struct RunConfig {
    std::string file;
    std::string gen;
    std::string orbit_file;
    std::string delta;
    std::string eps;
    std::string deltas;
    std::string eps_list;
    std::string radius;
    std::string property = "shadowing";
    std::string format = "json";
    std::string out;
    std::size_t state_cap = 2'000'000;
    unsigned workers = 1;
    bool corpus = false;
};

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        values.push_back(Rational::parse(item));
    }
    return values;
}

Rational nonnegative(const std::string& text, const char* what) {
    if (text.empty()) throw BadParams(std::string("--") + what + " is required");
    auto r = Rational::parse(text);
    if (r.is_negative()) throw BadParams(std::string("--") + what + " must be nonnegative");
    return r;
}

FiniteMetricSystem load(const RunConfig& cfg) {
    if (!cfg.file.empty() && !cfg.gen.empty()) throw BadParams("give either --file or --gen, not both");
    if (!cfg.file.empty()) return load_system_file(cfg.file);
    if (!cfg.gen.empty()) return validate_system(parse_generator_shorthand(cfg.gen));
    throw BadParams("a system is required (--file or --gen)");
}

void warn_quantization(const FiniteMetricSystem& system, const Rational& delta, std::ostream& err) {
    if (system.quantization_bound() && delta < *system.quantization_bound())
        err << "warning: delta " << delta << " is below the quantization bound " << *system.quantization_bound()
            << " of " << system.id() << "\n";
}

std::string flags_of(const ChainClass& c) {
    std::string s;
    if (c.terminal) s += " terminal";
    if (c.initial) s += " initial";
    if (c.degenerate()) s += " degenerate";
    return s;
}

std::string set_text(const PointSet& s) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](Point p) {
        out += (first ? "" : ",") + std::to_string(p);
        first = false;
    });
    return out + "}";
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto system = load(cfg);
    auto delta = nonnegative(cfg.delta, "delta");
    warn_quantization(system, delta, err);
    auto dec = decompose(build_delta_graph(system, delta));
    if (cfg.format == "dot") {
        out << to_dot(dec, cfg.radius.empty() ? delta : Rational::parse(cfg.radius));
    } else if (cfg.format == "table") {
        out << "system " << system.id() << "  delta " << delta << "  |CR| " << dec.chain_recurrent().size()
            << "  classes " << dec.class_count() << "\n";
        for (const auto& c : dec.classes()) {
            out << "  C" << c.id << " " << set_text(c.points) << " separation "
                << (c.separation ? c.separation->str() : "inf") << flags_of(c) << "\n";
        }
        for (auto [i, j] : dec.condensation_edges()) out << "  C" << i << " -> C" << j << "\n";
    } else {
        out << to_json(dec).dump(2) << "\n";
    }
    return Ok;
}

int cmd_shadow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto system = load(cfg);
    auto delta = nonnegative(cfg.delta, "delta");
    auto eps = nonnegative(cfg.eps, "eps");
    warn_quantization(system, delta, err);
    auto verdict = check_property(parse_property(cfg.property), system, delta, eps, std::nullopt,
                                  SearchOptions{cfg.state_cap, cfg.workers});
    if (cfg.format == "table") {
        out << to_string(verdict.property) << " delta=" << delta << " eps=" << eps << ": "
            << (verdict.pass ? "pass" : "FAIL") << " (" << verdict.states_explored << " states)\n";
        if (verdict.witness) {
            out << "  witness:";
            for (auto p : verdict.witness->points) out << " " << p;
            if (verdict.witness->kind == OrbitKind::EventuallyExact) out << " + exact tail";
            out << "\n";
        }
    } else {
        out << to_json(verdict).dump(2) << "\n";
    }
    return verdict.pass ? Ok : PropertyFails;
}

int cmd_ladder(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto system = load(cfg);
    auto deltas = parse_list(cfg.deltas);
    if (deltas.empty()) throw BadParams("--deltas needs at least one value");
    warn_quantization(system, deltas.back(), err);
    auto ladder = refine_ladder(system, deltas);
    if (cfg.format == "table") {
        for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
            out << "delta " << ladder.deltas[k] << "  |CR| " << ladder.levels[k].chain_recurrent().size()
                << "  classes " << ladder.levels[k].class_count() << "\n";
        }
        out << "stabilization delta " << (ladder.threshold ? ladder.threshold->str() : "none") << "\n";
    } else {
        out << to_json(ladder).dump(2) << "\n";
    }
    return ladder.violations.empty() ? Ok : PropertyFails;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    std::vector<FiniteMetricSystem> systems;
    if (cfg.corpus) {
        if (!cfg.file.empty() || !cfg.gen.empty()) throw BadParams("--corpus cannot be combined with --file or --gen");
        for (const auto& spec : default_corpus()) systems.push_back(validate_system(spec));
    } else {
        systems.push_back(load(cfg));
    }

    HarnessOptions options;
    options.search = SearchOptions{cfg.state_cap, cfg.workers};
    Json reports = Json::array();
    int status = Ok;
    std::ostringstream table;
    for (const auto& system : systems) {
        ParameterGrid grid = default_grid(system);
        if (!cfg.deltas.empty()) grid.deltas = parse_list(cfg.deltas);
        if (!cfg.eps_list.empty()) grid.eps = parse_list(cfg.eps_list);
        auto report = run_harness(system, grid, options);
        if (exit_status(report) != 0) status = PropertyFails;
        table << std::left << std::setw(22) << system.id() << " holds " << std::setw(6) << report.count(Outcome::Holds)
              << " vacuous " << std::setw(6) << report.count(Outcome::Vacuous) << " fails "
              << report.count(Outcome::Fails) << "\n";
        reports.push_back(to_json(report));
    }
    if (cfg.format == "table") {
        out << table.str();
    } else {
        out << (cfg.corpus ? reports : reports.front()).dump(2) << "\n";
    }
    return status;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    auto system = load(cfg);
    auto eps = nonnegative(cfg.eps, "eps");
    std::ifstream in(cfg.orbit_file);
    if (!in) throw ParseError("cannot open " + cfg.orbit_file);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(cfg.orbit_file + ": " + e.what());
    }
    auto orbit = pseudo_orbit_from_json(j);
    Json result = {{"orbit", to_json(orbit)}, {"eps", eps.str()}};
    if (auto bad = first_violation(system, orbit)) {
        result["valid"] = false;
        result["violation"] = {{"position", bad->position}, {"reason", bad->reason}};
        out << result.dump(2) << "\n";
        return InputError;
    }
    result["valid"] = true;
    auto shadow = orbit.kind == OrbitKind::Plain ? is_shadowed(system, orbit, eps) : is_limit_shadowed(system, orbit, eps);
    result["shadowed"] = shadow.has_value();
    result["shadow_point"] = shadow ? Json(*shadow) : Json(nullptr);
    out << result.dump(2) << "\n";
    return shadow ? Ok : PropertyFails;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chain recurrence and shadowing analysis for finite metric dynamical systems", "chainshadow"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--file", cfg.file, "System file (JSON)");
        sub->add_option("--gen", cfg.gen, "Built-in generator, e.g. rotation:4:1");
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "dot", "table"}));
        sub->add_option("--out", cfg.out, "Write output to this file");
        sub->add_option("--state-cap", cfg.state_cap, "Automaton state cap");
        sub->add_option("--workers", cfg.workers, "Worker threads for automaton exploration")->check(CLI::PositiveNumber);
    };

    auto* analyze = app.add_subcommand("analyze", "Chain decomposition at one resolution");
    common(analyze);
    analyze->add_option("--delta", cfg.delta, "Resolution delta (p/q)")->required();
    analyze->add_option("--radius", cfg.radius, "Isolation radius for DOT flags (defaults to delta)");

    auto* shadow = app.add_subcommand("shadow", "Decide (delta, eps)-shadowing or s-limit shadowing");
    common(shadow);
    shadow->add_option("--property", cfg.property, "Property to decide")->check(CLI::IsMember({"shadowing", "slimit"}));
    shadow->add_option("--delta", cfg.delta, "Pseudo-orbit error bound (p/q)")->required();
    shadow->add_option("--eps", cfg.eps, "Shadowing tolerance (p/q)")->required();

    auto* ladder = app.add_subcommand("ladder", "Refinement of chain classes across decreasing resolutions");
    common(ladder);
    ladder->add_option("--deltas", cfg.deltas, "Comma-separated, strictly decreasing")->required();

    auto* verify = app.add_subcommand("verify", "Run the structural harness over a parameter grid");
    common(verify);
    verify->add_flag("--corpus", cfg.corpus, "Sweep every built-in corpus system");
    verify->add_option("--deltas", cfg.deltas, "Override the resolution grid");
    verify->add_option("--eps", cfg.eps_list, "Override the eps grid");

    auto* orbit = app.add_subcommand("orbit", "Check one pseudo-orbit file for (limit) shadowing");
    common(orbit);
    orbit->add_option("--orbit", cfg.orbit_file, "Pseudo-orbit file (JSON)")->required();
    orbit->add_option("--eps", cfg.eps, "Shadowing tolerance (p/q)")->required();

    std::vector<const char*> argv{"chainshadow"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }

    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            err << "error: cannot write " << cfg.out << "\n";
            return InputError;
        }
    }
    std::ostream& sink = cfg.out.empty() ? out : file;

    try {
        if (analyze->parsed()) return cmd_analyze(cfg, sink, err);
        if (shadow->parsed()) return cmd_shadow(cfg, sink, err);
        if (ladder->parsed()) return cmd_ladder(cfg, sink, err);
        if (verify->parsed()) return cmd_verify(cfg, sink, err);
        if (orbit->parsed()) return cmd_orbit(cfg, sink, err);
    } catch (const chainshadow::Inconclusive& e) {
        err << "inconclusive: " << e.what() << "\n";
        return Inconclusive;
    } catch (const chainshadow::Error& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return InputError;
    }
    return InputError;
}

}  // namespace chainshadow::cli
