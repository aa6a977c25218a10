#include "eopt/perturb_lab.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace eopt;
using th::code_of;
using th::q;

namespace {

std::vector<Rational> rationals(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

ScalarPotential two_loop() {
  return th::potential(th::full2(), 2, {{"00", "1"}, {"11", "1"}, {"01", "0"}, {"10", "0"}});
}

}  // namespace

TEST_SUITE("perturb_lab") {
  TEST_CASE("dyadic grid") {
    const auto g = dyadic_grid(4);
    CHECK(g == rationals({"1/2", "1/4", "1/8", "1/16"}));
    CHECK(dyadic_grid(12).back() == q("1/4096"));
    CHECK(code_of([] { dyadic_grid(0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("sweep examples") {
    const ShiftSpace s = th::full2();
    const auto gamma01 = th::potential(s, 1, {{"0", "0"}, {"1", "1"}});
    const auto flat = lemma4_sweep(ScalarPotential::constant(s, 0), gamma01, dyadic_grid(12));
    CHECK(flat.limit == 1);
    REQUIRE(flat.points.size() == 12);
    for (const auto& p : flat.points) {
      CHECK(p.values == rationals({"1"}));
      CHECK(p.hausdorff_to_limit == 0);
      CHECK(p.diameter == 0);
    }
    const auto gamma11 = th::potential(s, 2, {{"00", "0"}, {"01", "0"}, {"10", "0"}, {"11", "1"}});
    const auto tie = lemma4_sweep(two_loop(), gamma11, dyadic_grid(12));
    CHECK(tie.limit == 1);
    for (const auto& p : tie.points) {
      CHECK(p.values == rationals({"1"}));
      CHECK(p.hausdorff_to_limit == 0);
      CHECK(p.diameter == 0);
    }
    const auto zero = lemma4_sweep(two_loop(), ScalarPotential::constant(s, 0), dyadic_grid(5));
    CHECK(zero.limit == 0);
    for (const auto& p : zero.points) CHECK(p.values == rationals({"0"}));
  }

  TEST_CASE("sweep converges for random instances") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> small(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
      const ShiftSpace s = trial % 2 == 0 ? th::full2() : th::golden_mean();
      const WordIndex idx(s, 2);
      std::vector<Rational> v;
      for (std::size_t i = 0; i < idx.size(); ++i) v.emplace_back(small(rng));
      const ScalarPotential f(s, 2, v);
      const auto gamma = th::random_potential(rng, s, 2);
      const auto sweep = lemma4_sweep(f, gamma, dyadic_grid(40));
      CHECK(sweep.limit == relative_beta(f, gamma));
      for (const auto& p : sweep.points) {
        CHECK(p.diameter == p.values.back() - p.values.front());
        CHECK(p.hausdorff_to_limit == hausdorff_distance(p.values, std::vector<Rational>{sweep.limit}));
      }
      CHECK(sweep.points.back().hausdorff_to_limit == 0);
      CHECK(sweep.points.back().diameter == 0);
      const auto crit = critical_graph(f);
      for (const auto& p : sweep.points) {
        if (p.epsilon > Rational(1, 1LL << 30)) continue;
        for (const Cycle& c : maximizing_cycles(f + p.epsilon * gamma, 4).cycles) CHECK(crit.contains_cycle(c));
      }
    }
  }

  TEST_CASE("sweep grid validation") {
    const auto f = two_loop();
    CHECK(code_of([&] { lemma4_sweep(f, f, {}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { lemma4_sweep(f, f, rationals({"1/4", "1/2"})); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { lemma4_sweep(f, f, rationals({"1/2", "0"})); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { lemma4_sweep(f, f, rationals({"1/2", "1/2"})); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { lemma4_sweep(f, ScalarPotential::constant(th::golden_mean(), 0), dyadic_grid(2)); }) ==
          ErrorCode::ShapeMismatch);
  }

  TEST_CASE("jenkinson examples") {
    const ShiftSpace s = th::full2();
    const auto one = jenkinson_potential(s, Cycle::parse(s, "1"));
    CHECK(one.memory() == 2);
    CHECK(one.at(Word::parse("11")) == 0);
    CHECK(one.at(Word::parse("00")) == -1);
    CHECK(one.at(Word::parse("01")) == -1);
    CHECK(one.at(Word::parse("10")) == -1);
    const auto alt = jenkinson_potential(s, Cycle::parse(s, "01"));
    CHECK(alt.at(Word::parse("01")) == 0);
    CHECK(alt.at(Word::parse("10")) == 0);
    CHECK(alt.at(Word::parse("00")) == -1);
    const ShiftSpace g = th::golden_mean();
    const auto zero = jenkinson_potential(g, Cycle::parse(g, "0"));
    CHECK(zero.at(Word::parse("00")) == 0);
    CHECK(zero.at(Word::parse("01")) == -1);
    CHECK(zero.at(Word::parse("10")) == -1);
  }

  TEST_CASE("jenkinson potential isolates every short cycle") {
    for (const ShiftSpace& s : {th::full2(), th::golden_mean()}) {
      for (const Cycle& c : enumerate_cycles(s, 5)) {
        const auto h = jenkinson_potential(s, c);
        const auto best = maximizing_cycles(h, 10);
        REQUIRE(best.cycles.size() == 1);
        CHECK(best.cycles.front() == c);
        CHECK(best.unique);
        CHECK(karp_beta(h) == 0);
      }
    }
  }

  TEST_CASE("sample seeds") {
    CHECK(sample_seed(42, 0) == sample_seed(42, 0));
    CHECK(sample_seed(42, 0) != sample_seed(42, 1));
    CHECK(sample_seed(42, 0) != sample_seed(43, 0));
  }

  TEST_CASE("uniqueness probe") {
    const ShiftSpace s = th::full2();
    const auto flat = from_potential(ScalarPotential::constant(s, 0));
    const auto r = uniqueness_probe(flat, 200, 0.1, 42);
    CHECK(r.samples == 200);
    CHECK(r.unique == 200);
    CHECK(r.frequency == 1.0);
    CHECK(r.eta_bound > 0.0);
    CHECK(2 * std::sinh(r.eta_bound / 2) * 2 <= 0.1 + 1e-12);
    const auto again = uniqueness_probe(flat, 200, 0.1, 42);
    CHECK(again.unique == r.unique);
    CHECK(again.frequency == r.frequency);

    const auto strict = from_potential(th::potential(s, 1, {{"0", "0"}, {"1", "1"}}));
    CHECK(uniqueness_probe(strict, 50, 0.1, 7).frequency == 1.0);

    SearchOptions opts;
    opts.n_max = 6;
    opts.p_max = 6;
    const auto m1 = uniqueness_probe(th::jsr_pair(), 8, 0.05, 3, opts);
    const auto m2 = uniqueness_probe(th::jsr_pair(), 8, 0.05, 3, opts);
    CHECK(m1.unique == m2.unique);
    opts.threads = 3;
    CHECK(uniqueness_probe(th::jsr_pair(), 8, 0.05, 3, opts).unique == m1.unique);

    CHECK(code_of([&] { uniqueness_probe(flat, 0, 0.1, 42); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { uniqueness_probe(flat, 10, 0.0, 42); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("lambda stability examples") {
    const ShiftSpace s = th::full2();
    const auto f = from_potential(th::potential(s, 1, {{"0", "0"}, {"1", "1"}}));
    const std::vector<MeasureSpec> lambda{periodic_measure(s, Cycle::parse(s, "0")),
                                          periodic_measure(s, Cycle::parse(s, "1"))};
    const auto r = lambda_stability(lambda, f, 100, 5);
    CHECK(r.argmax == 1);
    CHECK(r.gap == doctest::Approx(1.0));
    CHECK(r.delta > 0.0);
    CHECK(r.kept == 100);
    CHECK(r.max_distance < r.delta);
    const auto tie = MatrixCocycle::constant(s, th::mat2(2, 0, 0, 1));
    CHECK(code_of([&] { lambda_stability(lambda, tie, 10, 5); }) == ErrorCode::NoGap);
    const auto bernoulli = markov_measure(s, {{q("1/2"), q("1/2")}, {q("1/2"), q("1/2")}});
    CHECK(code_of([&] { lambda_stability({lambda[0], bernoulli}, f, 10, 5); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("lambda stability holds on random scalar and matrix instances") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 10; ++trial) {
      const ShiftSpace s = trial % 2 == 0 ? th::full2() : th::golden_mean();
      const auto cycles = enumerate_cycles(s, 4);
      std::vector<MeasureSpec> lambda;
      for (std::size_t i = 0; i < 3; ++i) lambda.push_back(periodic_measure(s, cycles[(rng() % cycles.size())]));
      const MatrixCocycle a = trial < 5 ? from_potential(th::random_potential(rng, s, 2))
                                        : th::letter_cocycle(s, {th::random_invertible(rng, 2), th::random_invertible(rng, 2)});
      try {
        const auto r = lambda_stability(lambda, a, 100, static_cast<std::uint64_t>(trial));
        CHECK(r.kept == 100);
        CHECK(r.delta == doctest::Approx(r.gap));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoGap);
      }
    }
  }

  TEST_CASE("flatten examples") {
    const auto r = flatten_top({rationals({"1", "0.99", "-1"})}, 1);
    CHECK(r.level == q("1/2"));
    CHECK(r.g == rationals({"1/2", "1/2", "-1/2"}));
    CHECK(r.distance == q("1/2"));
    CHECK(r.distance <= r.bound);
    CHECK(r.argmax_count == 2);
    CHECK(r.band_holds);
    const auto c = flatten_top({rationals({"3", "3", "3"})}, 2);
    CHECK(c.g == rationals({"9/4", "9/4", "9/4"}));
    CHECK(c.argmax_count == 3);
    CHECK(code_of([] { flatten_top({{}}, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { flatten_top({rationals({"1", "2"})}, 63); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { flatten_top({rationals({"1", "2"})}, 0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("flatten bound on random systems") {
    std::mt19937_64 rng(63);
    std::uniform_int_distribution<int> num(-100, 100);
    for (int trial = 0; trial < 100; ++trial) {
      IdentitySystem sys;
      const auto size = 2 + rng() % 8;
      for (std::size_t i = 0; i < size; ++i) sys.values.emplace_back(num(rng), 37);
      Rational norm = 0;
      for (const auto& v : sys.values) norm = std::max(norm, Rational(abs(v)));
      for (int n = 1; n <= 10; ++n) {
        const auto r = flatten_top(sys, n);
        CHECK(r.distance <= norm / Rational(1LL << n));
        if (r.band_holds) CHECK(r.argmax_count >= 2);
      }
    }
  }
}
