#pragma once

// Finite-resolution harness for the structural consequences of s-limit
// shadowing. Each check is a conditional; when its hypothesis fails at the
// given resolution the result is Vacuous, never Holds.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainshadow/chain.hpp"
#include "chainshadow/shadow.hpp"

namespace chainshadow {

enum class Outcome { Holds, Fails, Vacuous };

const char* to_string(Outcome outcome);

/// Identifiers used in reports.
namespace checks {
inline constexpr const char* slimit_implies_shadowing = "slimit_implies_shadowing";
inline constexpr const char* dense_shadowing_components = "dense_shadowing_components";
inline constexpr const char* initial_components_shadow = "initial_components_shadow";
inline constexpr const char* isolated_components_shadow = "isolated_components_shadow";
}  // namespace checks

/// Which fine class vouched for a coarse class (or why none was needed).
struct Certificate {
    std::size_t coarse_class = 0;
    std::optional<std::size_t> fine_class;
    PointSet core;
    bool maximal = false;
};

struct CheckResult {
    std::string check;
    std::map<std::string, Rational> parameters;
    Outcome outcome = Outcome::Vacuous;
    std::string details;
    std::vector<PseudoOrbit> orbit_witnesses;
    std::vector<PointSet> class_witnesses;
    std::vector<Certificate> certificates;
    std::vector<std::string> notes;
};

/// Restricted shadowing check on a forward-invariant domain. Replaceable so a
/// deliberately broken checker can exercise the regression gate.
using RestrictedCheck =
    std::function<ShadowVerdict(const FiniteMetricSystem&, const Rational& delta, const Rational& eps, const PointSet& domain)>;

struct HarnessOptions {
    SearchOptions search;
    RestrictedCheck restricted;  // defaults to check_shadowing_property on the domain
};

CheckResult verify_slimit_implies_shadowing(const FiniteMetricSystem& system, const Rational& delta,
                                            const Rational& eps, const HarnessOptions& options = {});

/// Every coarse class containing fine-resolution recurrence must contain a
/// fine class whose invariant core has the shadowing property, provided the
/// system has the s-limit property at (delta_fine, eps). Maximal fine classes
/// are tried first. Coarse classes with an empty invariant core are excluded
/// and noted.
CheckResult verify_dense_shadowing_components(const FiniteMetricSystem& system, const Rational& delta_coarse,
                                              const Rational& delta_fine, const Rational& eps,
                                              const HarnessOptions& options = {});

/// Initial classes of an invertible system shadow, given the s-limit property.
/// Throws NotInvertible otherwise.
CheckResult verify_initial_components_shadow(const FiniteMetricSystem& system, const Rational& delta,
                                             const Rational& eps, const HarnessOptions& options = {});

/// Classes separated from all others by more than 2*eps + delta shadow on
/// their own, given full-system shadowing.
CheckResult verify_isolated_components_shadow(const FiniteMetricSystem& system, const Rational& delta,
                                              const Rational& eps, const HarnessOptions& options = {});

struct SLimitViolation {
    PseudoOrbit witness;
    bool starts_outside_recurrence = false;  // first point not chain recurrent at delta
    std::size_t tail_class = 0;              // class holding the tail's periodic cycle
    bool tail_class_initial = false;
};

std::optional<SLimitViolation> find_slimit_violation(const FiniteMetricSystem& system, const Rational& delta,
                                                     const Rational& eps, const SearchOptions& options = {});

// --- sweeps ------------------------------------------------------------------

struct ParameterGrid {
    std::vector<Rational> deltas;  // used for both coarse and fine resolutions
    std::vector<Rational> eps;
};

/// Distinct distances of the system together with their halves and doubles.
std::vector<Rational> distance_grid_values(const FiniteMetricSystem& system);

ParameterGrid default_grid(const FiniteMetricSystem& system);

struct HarnessReport {
    std::string system_id;
    ParameterGrid grid;
    std::vector<CheckResult> results;
    std::vector<std::string> notes;

    std::size_t count(Outcome outcome) const;
};

/// Runs every check over the grid: pairwise checks for each (delta, eps), the
/// density check for each delta_fine <= delta_coarse. Initial-component checks
/// run only on invertible systems.
HarnessReport run_harness(const FiniteMetricSystem& system, const ParameterGrid& grid,
                          const HarnessOptions& options = {});

/// 1 if any non-vacuous check fails, else 0.
int exit_status(const HarnessReport& report);

}  // namespace chainshadow
