#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/errors.hpp"
#include "eopt/rational.hpp"
#include "eopt/shift_space.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eopt {

struct SearchOptions {
  int n_max = 24;
  int p_max = 12;
  double gap_tol = 1e-3;
  /// Cap on word-tree nodes per depth and on enumerated cycles.
  std::uint64_t word_cap = 10'000'000;
  int threads = 1;
};

/// One point of a convergence series ("upper" is the raw U_n, "lower" is
/// the best cycle exponent over periods <= p).
struct SeriesPoint {
  std::string kind;
  int n_or_p;
  double value;
};

/// Certified enclosure lower <= beta(A) <= upper.
struct BetaBracket {
  double lower;
  double upper;
  int n_used;
  int p_used;
  /// Cycle attaining `lower`; empty only if no cycle has period <= p_used.
  std::optional<Cycle> witness;
  std::string norm_tag;
  /// "word-max" when upper is min_n U_n, "coboundary" when it comes from the
  /// cohomologous potential of an exactly solved Birkhoff problem.
  std::string upper_source;
  /// Set when the cocycle is conformal and the value is known exactly.
  std::optional<Rational> exact_beta;
  std::vector<SeriesPoint> series;
};

/// Thrown when a search exceeds SearchOptions::word_cap. Carries whatever
/// bracket was complete before the budget ran out.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::optional<BetaBracket> partial = std::nullopt)
      : Error(ErrorCode::BudgetExceeded, what), partial_(std::move(partial)) {}
  const std::optional<BetaBracket>& partial() const noexcept { return partial_; }

 private:
  std::optional<BetaBracket> partial_;
};

struct CycleBound {
  double value;
  std::optional<Cycle> witness;
};

struct CycleExponent {
  Cycle cycle;
  double exponent;
};

/// Support of the maximizing measures of a locally constant potential: the
/// edges of the memory graph lying on maximum-mean cycles.
struct CriticalGraph {
  Rational beta;
  std::shared_ptr<const TransitionGraph> graph;
  /// Sorted edge indices into graph->edges().
  std::vector<int> edges;
  /// Strongly connected pieces, as sorted node index lists.
  std::vector<std::vector<int>> components;

  bool contains_edge(int e) const;
  /// True iff every window of c is a critical edge.
  bool contains_cycle(const Cycle& c) const;
  /// Exactly one simple cycle: the maximizing measure is unique.
  bool is_single_cycle() const;
};

struct OptReport {
  BetaBracket bracket;
  std::vector<CycleExponent> candidates;
  bool unique_at_resolution;
  double slack;
};

/// Exponent (1/p) log rho(A(p, x)) of the periodic orbit of c.
double cycle_exponent(const MatrixCocycle& a, const Cycle& c);

/// U_n = max over admissible words of (1/n) log ||A(n, .)||.
double upper_bound(const MatrixCocycle& a, int n, const SearchOptions& opts = {});

/// L_p = best periodic exponent over primitive cycles of period <= p_max;
/// ties go to the shorter, then lexicographically smaller cycle.
CycleBound lower_bound_cycles(const MatrixCocycle& a, int p_max, const SearchOptions& opts = {});

/// Interleaves L_k and U_k for k = 1, 2, ... and stops once the gap is at
/// most gap_tol or both budgets are spent.
BetaBracket beta_bracket(const MatrixCocycle& a, const SearchOptions& opts = {});

/// Maximum cycle mean of f on its memory graph, exactly.
Rational karp_beta(const ScalarPotential& f);

/// Critical graph of f, built on the memory graph of length max(memory, m(f), 2).
CriticalGraph critical_graph(const ScalarPotential& f, int memory = 0);

struct MaximizingCycles {
  std::vector<Cycle> cycles;
  bool unique;
};

MaximizingCycles maximizing_cycles(const ScalarPotential& f, int p_max);

/// beta(gamma | f): the largest integral of gamma over maximizing measures of f.
Rational relative_beta(const ScalarPotential& f, const ScalarPotential& gamma);

/// Smallest and largest integral of gamma over maximizing measures of f.
std::pair<Rational, Rational> relative_range(const ScalarPotential& f, const ScalarPotential& gamma);

OptReport matrix_candidates(const MatrixCocycle& a, const SearchOptions& opts, double slack);

/// Exact maximum mean of `weights` over cycles using only edges with
/// mask[e] set. Returns nullopt when the masked graph has no cycle.
std::optional<Rational> max_cycle_mean(const TransitionGraph& g, const std::vector<char>& mask,
                                       const std::vector<Rational>& weights);

}  // namespace eopt
