#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/errors.hpp"
#include "eopt/rational.hpp"
#include "eopt/shift_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace eopt {

/// Uniform measure on the orbit of a periodic point.
struct PeriodicEmpirical {
  Cycle cycle;
};

/// Stationary Markov measure. Probabilities are exact so integrals are too.
struct MarkovMeasure {
  std::vector<std::vector<Rational>> stochastic;
  std::vector<Rational> stationary;
};

/// (1/n) sum_{i<n} delta_{T^i x} for an eventually periodic x. Not invariant
/// in general; it is the object whose limit points are studied.
struct AtomicAverage {
  EventuallyPeriodic point;
  std::size_t n;
};

struct MeasureSpec {
  ShiftSpace space;
  std::variant<PeriodicEmpirical, MarkovMeasure, AtomicAverage> kind;

  bool is_invariant() const { return !std::holds_alternative<AtomicAverage>(kind); }
};

MeasureSpec periodic_measure(const ShiftSpace& s, const Cycle& c);

/// Validates rows (sum to 1, support inside the transition relation) and
/// solves for the stationary vector when none is given. A given stationary
/// vector must be fixed within 1e-10. Throws ValidationError.
MeasureSpec markov_measure(const ShiftSpace& s, std::vector<std::vector<Rational>> stochastic,
                           std::optional<std::vector<Rational>> stationary = std::nullopt);

/// Atomic Cesaro average of the first n orbit points of x.
MeasureSpec cesaro_push(const ShiftSpace& s, const EventuallyPeriodic& x, std::size_t n);

/// mu([w]).
Rational cylinder_mass(const MeasureSpec& mu, const Word& w);

/// Integral of a locally constant function, exactly.
Rational integrate(const MeasureSpec& mu, const ScalarPotential& g);

struct Interval {
  double lower;
  double upper;
  /// Set when both ends coincide with a known rational.
  std::optional<Rational> exact;
};

/// Enclosure of the top exponent of A with respect to an invariant mu.
/// Periodic measures give the exact orbit exponent. Conformal cocycles give
/// the integral of their potential. Otherwise the lower end is the mean
/// log|det| / d and the upper end the best Kingman term (1/n) sum mu(w)
/// log||A(w)|| over n <= n_max. Throws BudgetExceeded past word_cap
/// positive-mass words, InvalidArgument for a non-invariant mu.
Interval exponent_of_measure(const MatrixCocycle& a, const MeasureSpec& mu, int n_max,
                             std::uint64_t word_cap = 10'000'000);

/// a_n = (1/n) sum mu(w) log||A(w)|| over words with n steps, n = 1..n_max.
std::vector<double> kingman_terms(const MatrixCocycle& a, const MeasureSpec& mu, int n_max,
                                  std::uint64_t word_cap = 10'000'000);

struct RestrictedBeta {
  Interval value;
  std::vector<Interval> enclosures;
  /// Indices whose enclosure reaches the best lower end.
  std::vector<std::size_t> argmax;
  /// One enclosure lies strictly above all others.
  bool certified_singleton;
  /// Best lower end minus the largest other upper end; meaningful when
  /// certified_singleton holds.
  double gap;
};

/// Ties within this distance are not separated.
inline constexpr double kTieTolerance = 1e-12;

RestrictedBeta restricted_beta(const std::vector<MeasureSpec>& lambda, const MatrixCocycle& a, int n_max,
                               std::uint64_t word_cap = 10'000'000);

/// The first `count` cylinders of the shift, ordered by (length, word).
std::vector<Word> test_basis(const ShiftSpace& s, std::size_t count);

struct TruncatedDistance {
  double value;
  double error_bound;
  Rational exact_value;
};

/// sum_{i <= i_max} 2^-i |mu1(C_i) - mu2(C_i)| over the test basis.
TruncatedDistance weakstar_distance(const MeasureSpec& mu1, const MeasureSpec& mu2, std::size_t i_max);

/// max_{a in C} min_{b in D} |a - b| + max_{c in D} min_{d in C} |c - d|.
/// Throws EmptySet.
template <class T>
T hausdorff_distance(const std::vector<T>& c, const std::vector<T>& d) {
  if (c.empty() || d.empty()) {
    throw Error(ErrorCode::EmptySet, "Hausdorff distance needs two nonempty sets");
  }
  auto deviation = [](const std::vector<T>& from, const std::vector<T>& to) {
    using std::abs;
    T worst = T(0);
    for (const T& a : from) {
      T nearest = abs(T(a - to.front()));
      for (const T& b : to) nearest = std::min<T>(nearest, abs(T(a - b)));
      worst = std::max<T>(worst, nearest);
    }
    return worst;
  };
  return deviation(c, d) + deviation(d, c);
}

}  // namespace eopt
