#include "eopt/irregular.hpp"

#include "eopt/errors.hpp"
#include "eopt/subadd_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace eopt {

std::vector<std::size_t> BlockSchedule::block_end_steps(int memory) const {
  std::vector<std::size_t> out;
  const auto m = static_cast<std::size_t>(memory);
  for (std::size_t end : block_ends) {
    if (end >= m) out.push_back(end - m + 1);
  }
  return out;
}

BlockSchedule build_irregular_point(const MatrixCocycle& a, const Cycle& c1, const Cycle& c2, double ratio, int depth,
                                    int base_reps) {
  const ShiftSpace& s = a.space();
  if (!(ratio > 0.0) || depth < 2 || base_reps < 1) {
    throw Error(ErrorCode::InvalidArgument, "schedule needs ratio > 0, depth >= 2 and base_reps >= 1");
  }
  for (const Cycle* c : {&c1, &c2}) {
    if (!s.is_cyclically_admissible(c->word())) {
      throw Error(ErrorCode::Inadmissible, "cycle '" + to_string(*c) + "' is not a cycle of this shift");
    }
  }
  bool equal;
  if (const auto& f = a.conformal_potential()) {
    equal = f->birkhoff_sum(c1.unroll(c1.period() + f->memory() - 1)) * static_cast<long>(c2.period()) ==
            f->birkhoff_sum(c2.unroll(c2.period() + f->memory() - 1)) * static_cast<long>(c1.period());
  } else {
    equal = std::abs(cycle_exponent(a, c1) - cycle_exponent(a, c2)) <= 1e-12;
  }
  if (equal) {
    throw Error(ErrorCode::EqualExponents, "cycles '" + to_string(c1) + "' and '" + to_string(c2) +
                                               "' have the same exponent");
  }

  BlockSchedule out{c1, c2, ratio, depth, {}, {}, {}, Word()};
  for (int j = 0; j < depth; ++j) {
    const Cycle& c = j % 2 == 0 ? c1 : c2;
    const std::size_t p = c.period();
    std::size_t target = static_cast<std::size_t>(base_reps) * c1.period();
    if (j > 0) {
      target = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(out.word.size())));
      Word link = connect(s, out.word.back(), c.letter(0));
      out.word.letters.insert(out.word.letters.end(), link.letters.begin() + 1, link.letters.end() - 1);
      out.connectors.push_back(std::move(link));
    }
    const std::size_t reps = std::max<std::size_t>(1, (target + p - 1) / p);
    const Word block = c.unroll(reps * p);
    out.word.letters.insert(out.word.letters.end(), block.letters.begin(), block.letters.end());
    out.lengths.push_back(block.size());
    out.block_ends.push_back(out.word.size());
  }
  return out;
}

std::vector<double> finite_time_exponents(const MatrixCocycle& a, const PointSource& x, std::size_t count) {
  if (count == 0 || count > kMaxSeriesLength) {
    throw Error(ErrorCode::InvalidArgument, "series length must lie in [1, 10^6]");
  }
  const auto m = static_cast<std::size_t>(a.memory());
  const std::size_t needed = count + m - 1;
  std::function<int(std::size_t)> letter;
  if (const auto* p = std::get_if<EventuallyPeriodic>(&x)) {
    p->validate(a.space());
    letter = [p](std::size_t i) { return p->letter(i); };
  } else {
    const auto& schedule = std::get<BlockSchedule>(x);
    if (schedule.word.size() < needed) {
      throw Error(ErrorCode::InvalidArgument, "schedule has " + std::to_string(schedule.word.size()) +
                                                  " letters, " + std::to_string(needed) + " needed");
    }
    if (!a.space().is_admissible(schedule.word)) {
      throw Error(ErrorCode::Inadmissible, "schedule word is not admissible");
    }
    letter = [&schedule](std::size_t i) { return schedule.word[i]; };
  }

  std::vector<int> first(m);
  for (std::size_t i = 0; i < m; ++i) first[i] = letter(i);
  int window = a.index().find(first);
  if (window < 0) throw Error(ErrorCode::Inadmissible, "point does not start with an admissible window");

  std::vector<double> out;
  out.reserve(count);
  const auto d = a.dimension();
  Matrix product = Matrix::Identity(d, d);
  double log_acc = 0.0;
  for (std::size_t n = 1; n <= count; ++n) {
    if (n > 1) window = a.index().successor(static_cast<std::size_t>(window), letter(n + m - 2));
    if (window < 0) throw Error(ErrorCode::Inadmissible, "point leaves the shift");
    const auto w = static_cast<std::size_t>(window);
    product = a.base(w) * product;
    const double norm = op_norm(product);
    product /= norm;
    log_acc += a.log_scale_double(w) + std::log(norm);
    out.push_back(log_acc / static_cast<double>(n));
  }
  return out;
}

namespace {

Oscillation range_of(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi, *hi - *lo};
}

}  // namespace

Oscillation oscillation(const std::vector<double>& series) {
  if (series.size() < 100) {
    throw Error(ErrorCode::TooShort, "oscillation needs at least 100 points, got " + std::to_string(series.size()));
  }
  return range_of(std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(series.size() / 2), series.end()));
}

Oscillation boundary_oscillation(const std::vector<double>& series, const BlockSchedule& schedule, int memory,
                                 int blocks) {
  std::vector<double> picked;
  for (std::size_t n : schedule.block_end_steps(memory)) {
    if (n >= 1 && n <= series.size()) picked.push_back(series[n - 1]);
  }
  if (blocks > 0 && picked.size() > static_cast<std::size_t>(blocks)) {
    picked.erase(picked.begin(), picked.end() - blocks);
  }
  if (picked.size() < 2) {
    throw Error(ErrorCode::TooShort, "series covers fewer than two block ends");
  }
  return range_of(picked);
}

}  // namespace eopt
