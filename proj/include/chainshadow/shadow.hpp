#pragma once

// Pseudo-orbits and the decision procedures for (delta, eps)-shadowing and
// (delta, eps)-s-limit shadowing on a finite metric system.
//
// On a finite space an error sequence tending to zero is eventually exactly
// zero, so a limit-pseudo-orbit is a finite delta-chain followed by the exact
// orbit of its last point, and "tracking error tends to zero" means the shadow
// orbit eventually coincides with the pseudo-orbit.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainshadow/point_set.hpp"
#include "chainshadow/rational.hpp"
#include "chainshadow/system.hpp"

namespace chainshadow {

enum class OrbitKind { Plain, EventuallyExact };

const char* to_string(OrbitKind kind);

struct PseudoOrbit {
    std::vector<Point> points;
    OrbitKind kind = OrbitKind::Plain;
    Rational delta;
    std::optional<std::size_t> tail_start;  // EventuallyExact only

    static PseudoOrbit plain(std::vector<Point> points, Rational delta);
    static PseudoOrbit eventually_exact(std::vector<Point> points, Rational delta, std::size_t tail_start);

    /// d(f(x_i), x_{i+1}) for every stored step.
    std::vector<Rational> errors(const FiniteMetricSystem& system) const;

    friend bool operator==(const PseudoOrbit&, const PseudoOrbit&) = default;
};

struct OrbitViolation {
    std::size_t position;  // step index i of the offending error d(f(x_i), x_{i+1}), or of a bad point
    std::string reason;
};

std::optional<OrbitViolation> first_violation(const FiniteMetricSystem& system, const PseudoOrbit& orbit);

bool validate_pseudo_orbit(const FiniteMetricSystem& system, const PseudoOrbit& orbit);

/// Y_0 = B_eps(x_0), Y_{i+1} = f(Y_i) & B_eps(x_{i+1}). Y_i is exactly the set
/// of time-i positions of points that eps-track x_0..x_i.
std::vector<PointSet> shadow_sets(const FiniteMetricSystem& system, const PseudoOrbit& orbit, const Rational& eps);

/// A point eps-shadowing the stored sequence, reconstructed backwards through
/// the shadow sets with smallest-index choices. Plain orbits only.
std::optional<Point> is_shadowed(const FiniteMetricSystem& system, const PseudoOrbit& orbit, const Rational& eps);

/// tracks(p) = {x : some n >= 0 has f^n(x) = f^n(p) and d(f^j(x), f^j(p)) <= eps for j < n}.
class MergeSet {
public:
    MergeSet(Rational eps, std::vector<PointSet> tracks) : eps_(std::move(eps)), tracks_(std::move(tracks)) {}
    const Rational& epsilon() const { return eps_; }
    const PointSet& tracks(Point p) const { return tracks_[p]; }
    std::size_t size() const { return tracks_.size(); }

private:
    Rational eps_;
    std::vector<PointSet> tracks_;
};

MergeSet merge_sets(const FiniteMetricSystem& system, const Rational& eps);

/// EventuallyExact orbits only (KindMismatch otherwise). Returns a point that
/// eps-tracks the prefix and whose orbit merges with the exact tail.
std::optional<Point> is_limit_shadowed(const FiniteMetricSystem& system, const PseudoOrbit& orbit,
                                       const Rational& eps);

// --- system-level checks -----------------------------------------------------

enum class Property { Shadowing, SLimit };

const char* to_string(Property property);
Property parse_property(const std::string& text);

struct SearchOptions {
    std::size_t state_cap = 2'000'000;
    unsigned workers = 1;
};

struct ShadowVerdict {
    Property property = Property::Shadowing;
    Rational delta;
    Rational epsilon;
    bool pass = true;
    std::optional<PseudoOrbit> witness;
    std::size_t states_explored = 0;
};

/// Breadth-first exploration of the determinized shadow automaton with states
/// (p, Y). Fails on the first reachable state with Y empty. The witness is the
/// shortest, then lexicographically smallest, failing delta-chain. `domain`
/// must be forward-invariant; pseudo-orbits and shadows are confined to it.
/// Throws Inconclusive when more than options.state_cap states are reached.
ShadowVerdict check_shadowing_property(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                       const std::optional<PointSet>& domain = std::nullopt,
                                       const SearchOptions& options = {});

/// Same exploration; a state (p, Y) fails when no member of Y merges with the
/// exact orbit of p. The witness is the failing chain with its exact tail.
ShadowVerdict check_slimit_property(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                    const std::optional<PointSet>& domain = std::nullopt,
                                    const SearchOptions& options = {});

ShadowVerdict check_property(Property property, const FiniteMetricSystem& system, const Rational& delta,
                             const Rational& eps, const std::optional<PointSet>& domain = std::nullopt,
                             const SearchOptions& options = {});

/// Throws NotFailing on a passing verdict.
PseudoOrbit extract_witness(const ShadowVerdict& verdict);

// --- independent oracle ------------------------------------------------------

struct OracleLimits {
    std::size_t max_points = 12;
    std::size_t max_len = 8;
};

struct OracleVerdict {
    bool pass = true;
    std::optional<std::vector<Point>> witness;  // shortest, then lexicographically smallest, failing chain
};

/// Enumerates every delta-chain of up to max_len points and tries every point
/// of the system as a shadow by direct orbit comparison. Only refutations are
/// conclusive: a pass means no failure of length <= max_len exists.
/// Throws TooLarge when the system or max_len exceed the default guard.
OracleVerdict brute_force_oracle(const FiniteMetricSystem& system, const Rational& delta, const Rational& eps,
                                 Property property, std::size_t max_len = 8, const OracleLimits& guard = {});

}  // namespace chainshadow
