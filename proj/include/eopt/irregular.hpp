#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/shift_space.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace eopt {

/// Finite prefix of a point that alternates ever longer c1- and c2-blocks.
/// Block j is c^ceil(L_j / p) with L_0 = base_reps * p1 and
/// L_j = ceil(r * (letters written so far)); consecutive blocks are spliced
/// through the inner letters of a connecting word.
struct BlockSchedule {
  Cycle c1;
  Cycle c2;
  double ratio;
  int depth;
  std::vector<Word> connectors;
  std::vector<std::size_t> lengths;
  /// Letter index one past the end of each block.
  std::vector<std::size_t> block_ends;
  Word word;

  /// Step counts n whose window ends exactly at a block end.
  std::vector<std::size_t> block_end_steps(int memory) const;
};

inline constexpr int kDefaultBaseReps = 4;

/// Throws EqualExponents when the orbit exponents of c1 and c2 agree,
/// Unreachable when blocks cannot be spliced, InvalidArgument for r <= 0 or
/// depth < 2.
BlockSchedule build_irregular_point(const MatrixCocycle& a, const Cycle& c1, const Cycle& c2, double ratio = 3.0,
                                    int depth = 8, int base_reps = kDefaultBaseReps);

using PointSource = std::variant<EventuallyPeriodic, BlockSchedule>;

inline constexpr std::size_t kMaxSeriesLength = 1'000'000;

/// e_n = (1/n) log||A(n, x)|| for n = 1..count, one multiply per step.
/// Throws InvalidArgument when count is 0, above 10^6, or longer than a
/// finite schedule.
std::vector<double> finite_time_exponents(const MatrixCocycle& a, const PointSource& x, std::size_t count);

struct Oscillation {
  double inf_tail;
  double sup_tail;
  double gap;
};

/// Range of the final half of the series. Throws TooShort below 100 points.
Oscillation oscillation(const std::vector<double>& series);

/// Range of the series at the last `blocks` block ends that it covers.
/// Throws TooShort when fewer than two such indices exist.
Oscillation boundary_oscillation(const std::vector<double>& series, const BlockSchedule& schedule, int memory,
                                 int blocks = 4);

}  // namespace eopt
