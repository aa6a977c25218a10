#include "eopt/irregular.hpp"
#include "eopt/subadd_opt.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace eopt;
using th::code_of;

namespace {

MatrixCocycle scalar01(const ShiftSpace& s) {
  return from_potential(th::potential(s, 1, {{"0", "0"}, {"1", "1"}}));
}

}  // namespace

TEST_SUITE("irregular") {
  TEST_CASE("series examples") {
    const ShiftSpace s = th::full2();
    const auto id = finite_time_exponents(MatrixCocycle::constant(s, Matrix::Identity(3, 3)),
                                          EventuallyPeriodic{Word::parse("01"), Word::parse("1")}, 50);
    for (double e : id) CHECK(std::abs(e) <= 1e-12);
    const auto ones = finite_time_exponents(scalar01(s), EventuallyPeriodic{Word(), Word::parse("1")}, 50);
    for (double e : ones) CHECK(e == doctest::Approx(1.0).epsilon(1e-14));
    const auto pair = finite_time_exponents(th::jsr_pair(), EventuallyPeriodic{Word(), Word::parse("01")}, 500);
    CHECK(std::abs(pair.back() - 0.4812118250596034) <= 0.01);
  }

  TEST_CASE("renormalized series matches direct products") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 10; ++trial) {
      const ShiftSpace s = trial % 2 == 0 ? th::full2() : th::golden_mean();
      const int d = 1 + trial % 3;
      std::vector<Matrix> mats{th::random_invertible(rng, d), th::random_invertible(rng, d)};
      const auto a = th::letter_cocycle(s, mats);
      const EventuallyPeriodic x{Word::parse(trial % 2 == 0 ? "1101" : "0010"), Word::parse("001")};
      const auto series = finite_time_exponents(a, x, 200);
      const oracle::LetterCocycle ref{s.transitions(), mats};
      const Word prefix = x.prefix(200);
      for (std::size_t n = 1; n <= 200; ++n) {
        const std::vector<int> letters(prefix.letters.begin(), prefix.letters.begin() + static_cast<long>(n));
        const double direct = std::log(oracle::spectral_norm(oracle::product(ref, letters))) / static_cast<double>(n);
        CHECK(std::abs(series[n - 1] - direct) <= 1e-8);
      }
    }
  }

  TEST_CASE("memory two cocycles read windows") {
    const ShiftSpace s = th::full2();
    const auto f = th::potential(s, 2, {{"00", "0"}, {"01", "1"}, {"10", "2"}, {"11", "3"}});
    const EventuallyPeriodic x{Word::parse("0"), Word::parse("1")};
    const auto e = finite_time_exponents(from_potential(f), x, 4);
    CHECK(e[0] == doctest::Approx(1.0));
    CHECK(e[1] == doctest::Approx(2.0));
    CHECK(e[3] == doctest::Approx(10.0 / 4.0));
  }

  TEST_CASE("series argument errors") {
    const auto a = scalar01(th::full2());
    const EventuallyPeriodic x{Word(), Word::parse("1")};
    CHECK(code_of([&] { finite_time_exponents(a, x, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { finite_time_exponents(a, x, kMaxSeriesLength + 1); }) == ErrorCode::InvalidArgument);
    const auto sched = build_irregular_point(a, Cycle::parse(th::full2(), "0"), Cycle::parse(th::full2(), "1"), 3.0, 3);
    CHECK(code_of([&] { finite_time_exponents(a, sched, sched.word.size() + 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { finite_time_exponents(scalar01(th::golden_mean()), x, 5); }) == ErrorCode::Inadmissible);
  }

  TEST_CASE("schedule structure") {
    const ShiftSpace s = th::full2();
    const auto sched = build_irregular_point(scalar01(s), Cycle::parse(s, "0"), Cycle::parse(s, "1"), 3.0, 8);
    CHECK(sched.depth == 8);
    REQUIRE(sched.lengths.size() == 8);
    REQUIRE(sched.block_ends.size() == 8);
    CHECK(sched.block_ends.back() == sched.word.size());
    CHECK(sched.lengths.front() == static_cast<std::size_t>(kDefaultBaseReps));
    std::size_t written = 0;
    for (std::size_t j = 0; j < sched.lengths.size(); ++j) {
      if (j > 0) {
        CHECK(sched.lengths[j] >= static_cast<std::size_t>(std::ceil(3.0 * static_cast<double>(written))));
        CHECK(sched.block_ends[j] > sched.block_ends[j - 1]);
      }
      written = sched.block_ends[j];
      const int letter = j % 2 == 0 ? 0 : 1;
      CHECK(sched.word[sched.block_ends[j] - 1] == letter);
    }
    CHECK(s.is_admissible(sched.word));
    CHECK(sched.block_end_steps(1) == sched.block_ends);
    const auto steps2 = sched.block_end_steps(2);
    for (std::size_t j = 0; j < steps2.size(); ++j) CHECK(steps2[j] + 1 == sched.block_ends[j]);
  }

  TEST_CASE("scalar two-cycle schedule oscillates") {
    const ShiftSpace s = th::full2();
    const auto a = scalar01(s);
    const auto sched = build_irregular_point(a, Cycle::parse(s, "0"), Cycle::parse(s, "1"), 3.0, 8);
    const auto series = finite_time_exponents(a, sched, sched.word.size());
    const auto osc = boundary_oscillation(series, sched, a.memory());
    CHECK(osc.inf_tail <= 0.3);
    CHECK(osc.sup_tail >= 0.7);
    CHECK(osc.gap == doctest::Approx(osc.sup_tail - osc.inf_tail));
    CHECK(osc.gap >= 0.45);
    CHECK(std::abs(osc.inf_tail - 0.2) <= 0.01);
    CHECK(std::abs(osc.sup_tail - 0.8) <= 0.01);
  }

  TEST_CASE("golden mean schedule is admissible") {
    const ShiftSpace s = th::golden_mean();
    const auto a = scalar01(s);
    const auto sched = build_irregular_point(a, Cycle::parse(s, "0"), Cycle::parse(s, "01"), 3.0, 6);
    CHECK(s.is_admissible(sched.word));
    for (const Word& c : sched.connectors) CHECK(s.is_admissible(c));
    const auto series = finite_time_exponents(a, sched, sched.word.size());
    const auto osc = boundary_oscillation(series, sched, a.memory());
    CHECK(osc.gap > 0.2);
  }

  TEST_CASE("schedule errors") {
    const ShiftSpace s = th::full2();
    const auto a = scalar01(s);
    const Cycle zero = Cycle::parse(s, "0");
    const Cycle one = Cycle::parse(s, "1");
    CHECK(code_of([&] { build_irregular_point(a, zero, zero); }) == ErrorCode::EqualExponents);
    const auto flat = MatrixCocycle::constant(s, th::mat2(2, 0, 0, 1));
    CHECK(code_of([&] { build_irregular_point(flat, zero, one); }) == ErrorCode::EqualExponents);
    CHECK(code_of([&] { build_irregular_point(a, zero, one, 0.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { build_irregular_point(a, zero, one, 3.0, 1); }) == ErrorCode::InvalidArgument);
    const ShiftSpace split(2, {{true, false}, {false, true}});
    CHECK(code_of([&] {
            build_irregular_point(scalar01(split), Cycle::parse(split, "0"), Cycle::parse(split, "1"));
          }) == ErrorCode::Unreachable);
  }

  TEST_CASE("oscillation") {
    CHECK(oscillation(std::vector<double>(200, 0.3)).gap == 0.0);
    CHECK(code_of([] { oscillation(std::vector<double>(50, 0.0)); }) == ErrorCode::TooShort);
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    const auto o = oscillation(ramp);
    CHECK(o.inf_tail == 50.0);
    CHECK(o.sup_tail == 99.0);
    CHECK(o.gap == 49.0);
  }

  TEST_CASE("eventually periodic points converge") {
    const EventuallyPeriodic x{Word::parse("11"), Word::parse("01")};
    const auto series = finite_time_exponents(th::jsr_pair(), x, 10000);
    const double gap_large = oscillation(series).gap;
    CHECK(gap_large <= 0.02);
    const std::vector<double> head(series.begin(), series.begin() + 1000);
    const double gap_small = oscillation(head).gap;
    CHECK(gap_large * 10000 <= 2 * gap_small * 1000 + 1e-9);
    const auto scalar = finite_time_exponents(scalar01(th::full2()), x, 10000);
    CHECK(oscillation(scalar).gap <= 0.02);
  }
}
