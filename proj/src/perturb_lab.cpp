#include "eopt/perturb_lab.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace eopt {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double symmetric_uniform(std::mt19937_64& rng) { return 2.0 * unit_uniform(rng) - 1.0; }

ScalarPotential potential_from_doubles(const ShiftSpace& s, int memory, const std::vector<double>& v) {
  std::vector<Rational> exact;
  exact.reserve(v.size());
  for (double x : v) exact.push_back(exact_from_double(x));
  return ScalarPotential(s, memory, std::move(exact));
}

struct NormPair {
  double forward;
  double inverse;
};

std::vector<NormPair> word_norms(const MatrixCocycle& a) {
  std::vector<NormPair> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back({op_norm(a.matrix(i)), op_norm(a.inverse(i))});
  return out;
}

// rho(e^eta A, A) without building the perturbed cocycle.
double scalar_distance(const std::vector<NormPair>& norms, const std::vector<double>& eta) {
  double worst = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double up = std::abs(std::expm1(eta[i])) * norms[i].forward;
    const double down = std::abs(std::expm1(-eta[i])) * norms[i].inverse;
    worst = std::max(worst, up + down);
  }
  return worst;
}

}  // namespace

std::vector<Rational> dyadic_grid(int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<Rational> out;
  Rational e(1, 2);
  for (int i = 0; i < count; ++i) {
    out.push_back(e);
    e /= 2;
  }
  return out;
}

SweepResult lemma4_sweep(const ScalarPotential& f, const ScalarPotential& gamma, const std::vector<Rational>& epsilons) {
  if (epsilons.empty()) throw Error(ErrorCode::InvalidArgument, "sweep grid is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (epsilons[i] <= 0 || (i > 0 && epsilons[i] >= epsilons[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sweep grid must be positive and strictly decreasing");
    }
  }
  SweepResult out{relative_beta(f, gamma), {}};
  const std::vector<Rational> limit{out.limit};
  for (const Rational& eps : epsilons) {
    const ScalarPotential h = f + eps * gamma;
    auto [lo, hi] = relative_range(h, gamma);
    SweepPoint p{eps, {lo}, hi - lo, 0};
    if (hi != lo) p.values.push_back(hi);
    p.hausdorff_to_limit = hausdorff_distance(p.values, limit);
    out.points.push_back(std::move(p));
  }
  return out;
}

ScalarPotential jenkinson_potential(const ShiftSpace& s, const Cycle& c) {
  if (!s.is_cyclically_admissible(c.word())) {
    throw Error(ErrorCode::Inadmissible, "cycle '" + to_string(c) + "' is not a cycle of this shift");
  }
  const int memory = std::max<int>(static_cast<int>(c.period()), 2);
  const WordIndex index(s, memory);
  std::vector<Rational> values(index.size(), Rational(-1));
  std::vector<int> window(static_cast<std::size_t>(memory));
  for (std::size_t i = 0; i < c.period(); ++i) {
    for (std::size_t j = 0; j < window.size(); ++j) window[j] = c.letter(i + j);
    values[static_cast<std::size_t>(index.find(window))] = 0;
  }
  return ScalarPotential(s, memory, std::move(values));
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl step.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ProbeResult uniqueness_probe(const MatrixCocycle& a, std::size_t n_samples, double delta, std::uint64_t seed,
                             const SearchOptions& opts, double slack) {
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "probe needs at least one sample");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::InvalidArgument, "probe radius must be positive");

  double scale = 0.0;
  for (const auto& n : word_norms(a)) scale = std::max(scale, n.forward + n.inverse);
  const double bound = std::log1p(delta / scale);

  SearchOptions inner = opts;
  const int threads = std::max(1, opts.threads);
  if (threads > 1) inner.threads = 1;

  std::vector<char> verdicts(n_samples, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_samples) break;
        std::mt19937_64 rng(sample_seed(seed, i));
        std::vector<double> eta(a.size());
        for (double& e : eta) e = bound * symmetric_uniform(rng);
        const ScalarPotential perturbation = potential_from_doubles(a.space(), a.memory(), eta);
        const MatrixCocycle b = gamma_apply(perturbation, a);
        if (const auto& f = b.conformal_potential()) {
          verdicts[i] = critical_graph(*f).is_single_cycle();
        } else {
          verdicts[i] = matrix_candidates(b, inner, slack).unique_at_resolution;
        }
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t unique = 0;
  for (char v : verdicts) unique += v ? 1 : 0;
  return {n_samples, unique, static_cast<double>(unique) / static_cast<double>(n_samples), bound};
}

StabilityResult lambda_stability(const std::vector<MeasureSpec>& lambda, const MatrixCocycle& a, std::size_t trials,
                                 std::uint64_t seed) {
  for (const auto& mu : lambda) {
    if (!std::holds_alternative<PeriodicEmpirical>(mu.kind)) {
      throw Error(ErrorCode::InvalidArgument, "stability check supports periodic measures only");
    }
  }
  const RestrictedBeta base = restricted_beta(lambda, a, 1);
  if (!base.certified_singleton || !(base.gap > 0.0)) {
    throw Error(ErrorCode::NoGap, "the restricted maximizer is not a certified singleton");
  }
  StabilityResult out{base.argmax.front(), base.gap, base.gap, trials, 0, 0.0};
  const double radius = std::isfinite(out.delta) ? out.delta : 1.0;
  const auto norms = word_norms(a);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(sample_seed(seed, trial));
    std::vector<double> direction(a.size());
    for (double& e : direction) e = symmetric_uniform(rng);
    const double target = radius * (0.5 + 0.5 * unit_uniform(rng));

    auto scaled = [&](double t) {
      std::vector<double> eta(direction);
      for (double& e : eta) e *= t;
      return eta;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (scalar_distance(norms, scaled(hi)) < target && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (scalar_distance(norms, scaled(mid)) < target ? lo : hi) = mid;
    }
    const MatrixCocycle b = gamma_apply(potential_from_doubles(a.space(), a.memory(), scaled(lo)), a);
    const double dist = cocycle_distance(b, a);
    out.max_distance = std::max(out.max_distance, dist);
    if (!(dist < out.delta)) continue;
    const RestrictedBeta moved = restricted_beta(lambda, b, 1);
    if (moved.certified_singleton && moved.argmax.front() == out.argmax) ++out.kept;
  }
  return out;
}

FlattenResult flatten_top(const IdentitySystem& sys, int n) {
  if (sys.values.size() < 2) throw Error(ErrorCode::InvalidArgument, "identity system needs at least two points");
  if (n < 1 || n > 62) throw Error(ErrorCode::InvalidArgument, "flattening depth must lie in [1, 62]");
  Rational norm = 0;
  for (const auto& v : sys.values) norm = std::max<Rational>(norm, abs(v));
  const Rational two_n = Rational(std::int64_t{1} << n);
  FlattenResult out{norm * (two_n - 1) / two_n, {}, 0, norm / two_n, 0, false};

  std::size_t in_band = 0;
  for (const auto& v : sys.values) {
    Rational g = std::clamp<Rational>(v, -out.level, out.level);
    out.distance = std::max<Rational>(out.distance, abs(Rational(g - v)));
    if (v >= out.level && v <= norm) ++in_band;
    out.g.push_back(std::move(g));
  }
  const Rational top = *std::max_element(out.g.begin(), out.g.end());
  out.argmax_count = static_cast<std::size_t>(std::count(out.g.begin(), out.g.end(), top));
  out.band_holds = in_band >= 2;
  return out;
}

}  // namespace eopt
