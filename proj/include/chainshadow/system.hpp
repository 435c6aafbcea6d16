#pragma once

// Finite metric dynamical systems: a point set {0..n-1} with an exact metric
// table and a total self-map. Everything downstream treats a system as an
// immutable value.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chainshadow/errors.hpp"
#include "chainshadow/point_set.hpp"
#include "chainshadow/rational.hpp"

namespace chainshadow {

class FiniteMetricSystem {
public:
    /// Validates the metric axioms and the map; throws ValidationError listing
    /// every violation found.
    FiniteMetricSystem(std::string id, std::vector<std::vector<Rational>> dist, std::vector<Point> map,
                       bool invertible, std::optional<Rational> quantization_bound = std::nullopt);

    const std::string& id() const { return id_; }
    std::size_t size() const { return map_.size(); }
    bool invertible() const { return invertible_; }

    const Rational& distance(Point a, Point b) const { return dist_[a * map_.size() + b]; }
    Point image(Point p) const { return map_[p]; }
    std::span<const Point> map() const { return map_; }

    /// Half cell width for grid discretizations; absent for other systems.
    const std::optional<Rational>& quantization_bound() const { return quantization_; }

    Rational diameter() const;

    /// Sorted distinct positive distance values.
    std::vector<Rational> distance_values() const;

    /// Closed ball {q : d(p, q) <= r}.
    PointSet ball(Point p, const Rational& r) const;

    PointSet image(const PointSet& s) const;

    /// True when the map is a permutation of the points.
    bool is_bijective() const;

    /// Inverse permutation; throws NotInvertible when the map is not bijective.
    std::vector<Point> inverse_map() const;

    /// Same points and metric under the inverse permutation.
    FiniteMetricSystem inverse() const;

    bool is_forward_invariant(const PointSet& s) const;

    /// Subsystem on a forward-invariant subset. Point i of the result is the
    /// i-th smallest member of `s`.
    FiniteMetricSystem restrict_to(const PointSet& s) const;

    friend bool operator==(const FiniteMetricSystem&, const FiniteMetricSystem&) = default;

private:
    std::string id_;
    std::vector<Rational> dist_;
    std::vector<Point> map_;
    bool invertible_;
    std::optional<Rational> quantization_;
};

/// Lists every violated axiom of a candidate system, in a fixed order.
std::vector<Violation> find_violations(const std::vector<std::vector<Rational>>& dist,
                                       const std::vector<std::int64_t>& map, bool invertible);

// --- specs ---------------------------------------------------------------

struct ExplicitSpec {
    std::vector<std::vector<std::optional<Rational>>> dist;  // nullopt entries are completed by shortest paths
    std::vector<std::int64_t> map;
    bool invertible = false;
    std::string id = "explicit";
};

struct GeneratorSpec {
    std::string name;
    std::map<std::string, std::int64_t> params;
};

using SystemSpec = std::variant<ExplicitSpec, GeneratorSpec>;

/// Fills undeclared entries with shortest-path distances over the declared
/// ones. Declared entries are left untouched; one declared direction of a pair
/// is mirrored to the other.
std::vector<std::vector<Rational>> complete_metric(const std::vector<std::vector<std::optional<Rational>>>& partial);

FiniteMetricSystem validate_system(const SystemSpec& spec);

/// Names accepted by build_corpus_system.
std::vector<std::string> generator_names();

FiniteMetricSystem build_corpus_system(const std::string& name, const std::map<std::string, std::int64_t>& params);

/// "rotation:4:1" -> {rotation, {n: 4, k: 1}}. Arguments are positional in the
/// generator's documented parameter order.
GeneratorSpec parse_generator_shorthand(const std::string& text);

std::string to_shorthand(const GeneratorSpec& spec);

/// Fixed list of built-in systems used by sweeps and the acceptance suite.
std::vector<GeneratorSpec> default_corpus();

// --- grid discretization -------------------------------------------------

enum class Geometry { Interval, Circle };

enum class SourceMap { Identity, Doubling, Tent };

struct GridSystem1D {
    std::size_t cells = 1;
    Geometry geometry = Geometry::Interval;
    SourceMap source = SourceMap::Identity;
};

/// Cell centers (2i+1)/(2N).
std::vector<Rational> grid_centers(const GridSystem1D& grid);

/// Exact value of the source map at x in [0, 1].
Rational apply_source_map(SourceMap source, const Rational& x);

/// Nearest-center rounding of the source map; ties go to the smaller index.
/// The result records 1/(2N) as its quantization bound and is flagged
/// invertible exactly when the rounded map is a permutation.
FiniteMetricSystem discretize(const GridSystem1D& grid, std::string id = {});

}  // namespace chainshadow
