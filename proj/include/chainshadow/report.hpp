#pragma once

// JSON and DOT encodings. Rationals always travel as "p/q" strings; keys are
// emitted in sorted order so output is byte-stable for a fixed input.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "chainshadow/chain.hpp"
#include "chainshadow/shadow.hpp"
#include "chainshadow/system.hpp"
#include "chainshadow/verify.hpp"

namespace chainshadow {

using Json = nlohmann::json;

/// {"n", "dist", "map", "invertible"} or {"generator", "params"}. Distances may
/// be "p/q" strings, decimal strings, integers, or null (filled by shortest paths).
SystemSpec system_spec_from_json(const Json& j);
Json to_json(const SystemSpec& spec);
Json to_json(const FiniteMetricSystem& system);

/// Reads and validates a system file. Throws ParseError on malformed JSON and
/// ValidationError on a bad metric or map.
FiniteMetricSystem load_system_file(const std::filesystem::path& path);

PseudoOrbit pseudo_orbit_from_json(const Json& j);
Json to_json(const PseudoOrbit& orbit);

/// {delta, cr_size, classes: [{id, points, terminal, initial, separation}], order: [[i, j]]}
/// where [i, j] means class i reaches class j.
Json to_json(const ChainDecomposition& dec);

/// One node per class labeled with its size and flags; an edge per pair in the
/// condensation order. A class counts as isolated when its separation exceeds
/// `isolation_radius`.
std::string to_dot(const ChainDecomposition& dec, const Rational& isolation_radius);

Json to_json(const DeltaLadder& ladder);
Json to_json(const ShadowVerdict& verdict);
Json to_json(const CheckResult& result);
Json to_json(const HarnessReport& report);

Rational rational_from_json(const Json& j);

}  // namespace chainshadow
