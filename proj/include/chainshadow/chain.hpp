#pragma once

// Resolution-delta transition graphs and the chain recurrence structure they
// induce: recurrent set, mutual-reachability classes, the order between
// classes, and the refinement ladder across decreasing resolutions.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainshadow/point_set.hpp"
#include "chainshadow/rational.hpp"
#include "chainshadow/system.hpp"

namespace chainshadow {

/// Directed graph with p -> q iff d(f(p), q) <= delta. Holds a reference to
/// the system, which must outlive it.
class DeltaGraph {
public:
    DeltaGraph(const FiniteMetricSystem& system, Rational delta);

    const FiniteMetricSystem& system() const { return *system_; }
    const Rational& delta() const { return delta_; }
    std::size_t size() const { return adjacency_.size(); }

    /// Successors of p in increasing index order.
    std::span<const Point> successors(Point p) const { return adjacency_[p]; }
    bool has_edge(Point p, Point q) const { return rows_[p].contains(q); }
    const PointSet& successor_set(Point p) const { return rows_[p]; }
    std::size_t edge_count() const;

private:
    const FiniteMetricSystem* system_;
    Rational delta_;
    std::vector<std::vector<Point>> adjacency_;
    std::vector<PointSet> rows_;
};

/// Throws BadParams for negative delta.
DeltaGraph build_delta_graph(const FiniteMetricSystem& system, const Rational& delta);

/// Points reachable from x by a path with at least one edge.
PointSet reachable_from(const DeltaGraph& graph, Point x);

bool reaches(const DeltaGraph& graph, Point x, Point y);

/// Points lying on a directed cycle (self-loops included).
PointSet chain_recurrent_set(const DeltaGraph& graph);

struct ChainClass {
    std::size_t id = 0;
    PointSet points;
    bool terminal = false;  // reaches no other class
    bool initial = false;   // reached by no other class
    std::optional<Rational> separation;  // min distance to any other class; absent when alone
    PointSet core;                       // greatest forward-invariant subset of points
    bool degenerate() const { return core.empty(); }
};

class ChainDecomposition {
public:
    ChainDecomposition() = default;
    ChainDecomposition(Rational delta, PointSet cr, std::vector<ChainClass> classes,
                       std::vector<std::vector<bool>> reach);

    const Rational& delta() const { return delta_; }
    const PointSet& chain_recurrent() const { return cr_; }
    const std::vector<ChainClass>& classes() const { return classes_; }
    std::size_t class_count() const { return classes_.size(); }
    const ChainClass& at(std::size_t id) const { return classes_.at(id); }

    /// Class containing p, if p is chain recurrent.
    std::optional<std::size_t> class_of(Point p) const;

    /// Some point of class `from` delta-reaches some point of class `to` (from != to).
    bool class_reaches(std::size_t from, std::size_t to) const { return reach_[from][to]; }

    /// Condensation edges (from, to) in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> condensation_edges() const;

private:
    Rational delta_;
    PointSet cr_;
    std::vector<ChainClass> classes_;
    std::vector<std::vector<bool>> reach_;
    std::vector<std::optional<std::size_t>> class_of_;
};

/// Classes are numbered by their smallest member.
ChainDecomposition decompose(const DeltaGraph& graph);

/// A <= B: some point of B reaches some point of A. Reflexive.
bool class_order(const ChainDecomposition& dec, std::size_t a, std::size_t b);

std::vector<std::size_t> maximal_classes(const ChainDecomposition& dec);

/// Maximal elements of the order restricted to `among`.
std::vector<std::size_t> maximal_classes(const ChainDecomposition& dec, std::span<const std::size_t> among);

/// Classes whose separation radius exceeds r; a lone class is always isolated.
std::vector<std::size_t> isolated_classes(const ChainDecomposition& dec, const Rational& r);

/// For an invertible system, whether each class of `dec` is also terminal for
/// the inverse map at the same delta. Absent when the inverse map's classes do
/// not contain it as a class.
struct InitialCrossCheck {
    std::size_t class_id;
    bool initial;
    std::optional<bool> terminal_for_inverse;
};
std::vector<InitialCrossCheck> cross_check_initial(const FiniteMetricSystem& system, const ChainDecomposition& dec);

// --- set utilities -----------------------------------------------------------

Rational distance_to_set(const FiniteMetricSystem& system, Point x, const PointSet& s);

/// {x : d(x, S) <= r}. Throws EmptySet for empty S.
PointSet neighborhood(const FiniteMetricSystem& system, const PointSet& s, const Rational& r);

Rational hausdorff_distance(const FiniteMetricSystem& system, const PointSet& a, const PointSet& b);

/// The periodic cycle the forward orbit of x eventually enters.
PointSet omega_cycle(const FiniteMetricSystem& system, Point x);

/// Greatest S' within S with f(S') inside S'.
PointSet invariant_core(const FiniteMetricSystem& system, const PointSet& s);

// --- ladder ------------------------------------------------------------------

/// Smallest positive d(f(p), q) over q != f(p). Below it every delta-graph is
/// the functional graph of f. Absent for one-point systems.
std::optional<Rational> stabilization_threshold(const FiniteMetricSystem& system);

struct DeltaLadder {
    std::vector<Rational> deltas;
    std::vector<ChainDecomposition> levels;
    // refinement[k][c] = class of level k containing class c of level k + 1
    std::vector<std::vector<std::size_t>> refinement;
    std::optional<Rational> threshold;
    std::optional<std::size_t> stable_level;  // first level whose graph is purely functional
    std::vector<std::string> violations;      // containment failures; empty on every valid input
};

/// Throws NotDecreasing unless deltas are strictly decreasing and BadParams on
/// negative entries.
DeltaLadder refine_ladder(const FiniteMetricSystem& system, const std::vector<Rational>& deltas);

}  // namespace chainshadow
