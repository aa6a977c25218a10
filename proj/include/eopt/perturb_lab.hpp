#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/measures.hpp"
#include "eopt/rational.hpp"
#include "eopt/subadd_opt.hpp"

#include <cstdint>
#include <vector>

namespace eopt {

struct SweepPoint {
  Rational epsilon;
  /// Extreme values of the integral of gamma over maximizing measures of
  /// f + epsilon * gamma, ascending and deduplicated.
  std::vector<Rational> values;
  Rational diameter;
  Rational hausdorff_to_limit;
};

struct SweepResult {
  /// beta(gamma | f).
  Rational limit;
  std::vector<SweepPoint> points;
};

/// Exact sweep over a strictly decreasing positive grid. Throws
/// InvalidArgument for a bad grid.
SweepResult lemma4_sweep(const ScalarPotential& f, const ScalarPotential& gamma,
                         const std::vector<Rational>& epsilons);

/// 2^-1, ..., 2^-count.
std::vector<Rational> dyadic_grid(int count);

/// Window potential of a primitive cycle: 0 on its cyclic windows of length
/// max(period, 2), -1 on every other admissible word of that length.
ScalarPotential jenkinson_potential(const ShiftSpace& s, const Cycle& c);

/// Deterministic per-sample generator: sample i of a run with seed s uses
/// its own stream, so results do not depend on evaluation order.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

struct ProbeResult {
  std::size_t samples;
  std::size_t unique;
  double frequency;
  /// Coefficient bound used for the scalar perturbation.
  double eta_bound;
};

/// Draws B = e^eta A with eta uniform in [-eta_bound, eta_bound] per word,
/// where eta_bound keeps rho(B, A) <= delta, and counts unique maximizers.
/// Conformal cocycles are decided exactly on the critical graph; others use
/// matrix_candidates at the given slack.
ProbeResult uniqueness_probe(const MatrixCocycle& a, std::size_t n_samples, double delta, std::uint64_t seed,
                             const SearchOptions& opts = {}, double slack = 1e-6);

struct StabilityResult {
  std::size_t argmax;
  double gap;
  /// Certified radius: every scalar perturbation within it keeps argmax.
  double delta;
  std::size_t trials;
  std::size_t kept;
  double max_distance;
};

/// Scalar perturbations B = e^eta A move every periodic exponent by at most
/// ||eta||, and rho(B, A) >= 4 sinh(||eta|| / 2) >= 2 ||eta||, so the
/// radius equals the gap. Trials draw B at distance in [delta/2, delta).
/// Throws NoGap, InvalidArgument when lambda has a non-periodic measure.
StabilityResult lambda_stability(const std::vector<MeasureSpec>& lambda, const MatrixCocycle& a,
                                 std::size_t trials, std::uint64_t seed);

/// Finite stand-in for the identity map on [0, 1]: its ergodic measures
/// are the point masses on the grid.
struct IdentitySystem {
  std::vector<Rational> values;
};

struct FlattenResult {
  Rational level;
  std::vector<Rational> g;
  Rational distance;
  Rational bound;
  std::size_t argmax_count;
  /// f reaches [level, ||f||] at two or more grid points.
  bool band_holds;
};

FlattenResult flatten_top(const IdentitySystem& sys, int n);

}  // namespace eopt
