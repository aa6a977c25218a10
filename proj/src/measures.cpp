#include "eopt/measures.hpp"

#include "eopt/subadd_opt.hpp"

#include <cmath>
#include <limits>

namespace eopt {

namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

// Solves pi (P - I) = 0, sum pi = 1 by exact elimination.
std::vector<Rational> solve_stationary(const std::vector<std::vector<Rational>>& p) {
  const std::size_t k = p.size();
  // Rows are equations: column j of (P - I)^T, last one replaced by sum = 1.
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t eq = 0; eq < k; ++eq) {
    for (std::size_t i = 0; i < k; ++i) {
      m[eq][i] = p[i][eq] - (i == eq ? 1 : 0);
    }
  }
  for (std::size_t i = 0; i < k; ++i) m[k - 1][i] = 1;
  m[k - 1][k] = 1;

  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && m[pivot][col] == 0) ++pivot;
    if (pivot == k) {
      throw Error(ErrorCode::ValidationError, "Markov chain has no unique stationary vector; supply one");
    }
    std::swap(m[pivot], m[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= k; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  std::vector<Rational> pi(k);
  for (std::size_t i = 0; i < k; ++i) pi[i] = m[i][k] / m[i][i];
  return pi;
}

std::size_t window_index(const WordIndex& index, const std::vector<int>& letters) {
  const int i = index.find(letters);
  if (i < 0) throw Error(ErrorCode::Inadmissible, "window is not admissible");
  return static_cast<std::size_t>(i);
}

void require_same_space(const MeasureSpec& mu, const ShiftSpace& s) {
  if (!(mu.space == s)) {
    throw Error(ErrorCode::ShapeMismatch, "measure and function live on different shifts");
  }
}

}  // namespace

MeasureSpec periodic_measure(const ShiftSpace& s, const Cycle& c) {
  if (!s.is_cyclically_admissible(c.word())) {
    throw Error(ErrorCode::Inadmissible, "cycle '" + to_string(c) + "' is not a cycle of this shift");
  }
  return MeasureSpec{s, PeriodicEmpirical{c}};
}

MeasureSpec markov_measure(const ShiftSpace& s, std::vector<std::vector<Rational>> stochastic,
                           std::optional<std::vector<Rational>> stationary) {
  const auto k = static_cast<std::size_t>(s.alphabet_size());
  if (stochastic.size() != k) {
    throw Error(ErrorCode::ValidationError, "stochastic matrix must be k x k");
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (stochastic[a].size() != k) {
      throw Error(ErrorCode::ValidationError, "stochastic matrix must be k x k");
    }
    Rational sum = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const Rational& q = stochastic[a][b];
      if (q < 0) throw Error(ErrorCode::ValidationError, "negative transition probability");
      if (q > 0 && !s.allowed(static_cast<int>(a), static_cast<int>(b))) {
        throw Error(ErrorCode::ValidationError, "transition " + std::to_string(a) + std::to_string(b) +
                                                    " has positive probability but is not allowed");
      }
      sum += q;
    }
    if (std::abs(to_double(sum) - 1.0) > 1e-12) {
      throw Error(ErrorCode::ValidationError, "row " + std::to_string(a) + " does not sum to 1");
    }
  }
  std::vector<Rational> pi;
  if (stationary) {
    pi = std::move(*stationary);
    if (pi.size() != k) throw Error(ErrorCode::ValidationError, "stationary vector must have k entries");
    Rational total = 0;
    for (const auto& v : pi) {
      if (v < 0) throw Error(ErrorCode::ValidationError, "negative stationary mass");
      total += v;
    }
    if (std::abs(to_double(total) - 1.0) > 1e-10) {
      throw Error(ErrorCode::ValidationError, "stationary vector does not sum to 1");
    }
    for (std::size_t b = 0; b < k; ++b) {
      Rational image = 0;
      for (std::size_t a = 0; a < k; ++a) image += pi[a] * stochastic[a][b];
      if (std::abs(to_double(image - pi[b])) > 1e-10) {
        throw Error(ErrorCode::ValidationError, "stationary vector is not fixed by the chain");
      }
    }
  } else {
    pi = solve_stationary(stochastic);
  }
  return MeasureSpec{s, MarkovMeasure{std::move(stochastic), std::move(pi)}};
}

MeasureSpec cesaro_push(const ShiftSpace& s, const EventuallyPeriodic& x, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Cesaro average needs n >= 1");
  x.validate(s);
  return MeasureSpec{s, AtomicAverage{x, n}};
}

Rational cylinder_mass(const MeasureSpec& mu, const Word& w) {
  if (w.empty()) return 1;
  const std::size_t len = w.size();
  auto count_hits = [&](auto letter_at, std::size_t starts) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < starts; ++i) {
      bool match = true;
      for (std::size_t j = 0; j < len && match; ++j) match = letter_at(i + j) == w[j];
      hits += match ? 1 : 0;
    }
    return hits;
  };
  return std::visit(
      Overloaded{
          [&](const PeriodicEmpirical& p) -> Rational {
            const std::size_t period = p.cycle.period();
            const auto hits = count_hits([&](std::size_t i) { return p.cycle.letter(i); }, period);
            return Rational(static_cast<long>(hits)) / static_cast<long>(period);
          },
          [&](const MarkovMeasure& m) -> Rational {
            if (!mu.space.is_admissible(w)) return 0;
            Rational mass = m.stationary[static_cast<std::size_t>(w[0])];
            for (std::size_t i = 1; i < len && mass != 0; ++i) {
              mass *= m.stochastic[static_cast<std::size_t>(w[i - 1])][static_cast<std::size_t>(w[i])];
            }
            return mass;
          },
          [&](const AtomicAverage& a) -> Rational {
            const auto hits = count_hits([&](std::size_t i) { return a.point.letter(i); }, a.n);
            return Rational(static_cast<long>(hits)) / static_cast<long>(a.n);
          },
      },
      mu.kind);
}

Rational integrate(const MeasureSpec& mu, const ScalarPotential& g) {
  require_same_space(mu, g.space());
  const WordIndex& index = g.index();
  const auto m = static_cast<std::size_t>(g.memory());
  return std::visit(
      Overloaded{
          [&](const PeriodicEmpirical& p) -> Rational {
            Rational sum = 0;
            std::vector<int> window(m);
            for (std::size_t i = 0; i < p.cycle.period(); ++i) {
              for (std::size_t j = 0; j < m; ++j) window[j] = p.cycle.letter(i + j);
              sum += g.value(window_index(index, window));
            }
            return sum / static_cast<long>(p.cycle.period());
          },
          [&](const MarkovMeasure&) -> Rational {
            Rational sum = 0;
            for (std::size_t i = 0; i < index.size(); ++i) {
              if (g.value(i) == 0) continue;
              sum += cylinder_mass(mu, index.word(i)) * g.value(i);
            }
            return sum;
          },
          [&](const AtomicAverage& a) -> Rational {
            Rational sum = 0;
            std::vector<int> window(m);
            for (std::size_t i = 0; i < a.n; ++i) {
              for (std::size_t j = 0; j < m; ++j) window[j] = a.point.letter(i + j);
              sum += g.value(window_index(index, window));
            }
            return sum / static_cast<long>(a.n);
          },
      },
      mu.kind);
}

std::vector<double> kingman_terms(const MatrixCocycle& a, const MeasureSpec& mu, int n_max,
                                  std::uint64_t word_cap) {
  require_same_space(mu, a.space());
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  const WordIndex& index = a.index();
  std::vector<double> sums(static_cast<std::size_t>(n_max), 0.0);
  std::uint64_t visited = 0;

  // Masses of the first window, then extend one letter per step using the
  // conditional mass mu([w c]) / mu([w]).
  std::vector<double> start_mass(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) start_mass[i] = to_double(cylinder_mass(mu, index.word(i)));
  const int k = a.space().alphabet_size();

  struct Frame {
    int window;
    Word word;
    double mass;
    double log_norm;
    Matrix product;
  };
  auto descend = [&](auto&& self, const Frame& f, int steps) -> void {
    sums[static_cast<std::size_t>(steps - 1)] += f.mass * f.log_norm;
    if (steps == n_max) return;
    for (int c = 0; c < k; ++c) {
      const int j = index.successor(static_cast<std::size_t>(f.window), c);
      if (j < 0) continue;
      Word longer = f.word;
      longer.letters.push_back(c);
      const double mass = to_double(cylinder_mass(mu, longer));
      if (mass <= 0.0) continue;
      if (++visited > word_cap) {
        throw BudgetExceeded("Kingman sum exceeds the cap of " + std::to_string(word_cap) + " words");
      }
      const auto ju = static_cast<std::size_t>(j);
      Matrix product = a.base(ju) * f.product;
      const double norm = op_norm(product);
      product /= norm;
      self(self, Frame{j, std::move(longer), mass, f.log_norm + a.log_scale_double(ju) + std::log(norm), product},
           steps + 1);
    }
  };
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (start_mass[i] <= 0.0) continue;
    if (++visited > word_cap) {
      throw BudgetExceeded("Kingman sum exceeds the cap of " + std::to_string(word_cap) + " words");
    }
    const Matrix& base = a.base(i);
    const double norm = op_norm(base);
    Frame f{static_cast<int>(i), index.word(i), start_mass[i], a.log_scale_double(i) + std::log(norm),
            Matrix(base / norm)};
    descend(descend, f, 1);
  }
  for (std::size_t n = 0; n < sums.size(); ++n) sums[n] /= static_cast<double>(n + 1);
  return sums;
}

Interval exponent_of_measure(const MatrixCocycle& a, const MeasureSpec& mu, int n_max, std::uint64_t word_cap) {
  require_same_space(mu, a.space());
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  if (!mu.is_invariant()) {
    throw Error(ErrorCode::InvalidArgument, "exponent_of_measure needs an invariant measure");
  }
  if (const auto& f = a.conformal_potential()) {
    Rational value = integrate(mu, *f);
    const double v = to_double(value);
    return {v, v, std::move(value)};
  }
  if (const auto* p = std::get_if<PeriodicEmpirical>(&mu.kind)) {
    const double v = cycle_exponent(a, p->cycle);
    return {v, v, std::nullopt};
  }
  // Sum of all exponents is the mean of log|det|, so the top one is at
  // least a d-th of it.
  const double d = static_cast<double>(a.dimension());
  double det_mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double mass = to_double(cylinder_mass(mu, a.index().word(i)));
    if (mass <= 0.0) continue;
    det_mean += mass * (std::log(std::abs(a.base(i).determinant())) + d * a.log_scale_double(i));
  }
  const auto terms = kingman_terms(a, mu, n_max, word_cap);
  const double upper = *std::min_element(terms.begin(), terms.end());
  return {std::min(det_mean / d, upper), upper, std::nullopt};
}

RestrictedBeta restricted_beta(const std::vector<MeasureSpec>& lambda, const MatrixCocycle& a, int n_max,
                               std::uint64_t word_cap) {
  if (lambda.empty()) throw Error(ErrorCode::EmptySet, "restricted beta needs at least one measure");
  RestrictedBeta out{{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), std::nullopt},
                     {},
                     {},
                     false,
                     std::numeric_limits<double>::infinity()};
  bool all_exact = true;
  for (const auto& mu : lambda) {
    out.enclosures.push_back(exponent_of_measure(a, mu, n_max, word_cap));
    all_exact = all_exact && out.enclosures.back().exact.has_value();
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    const auto& e = out.enclosures[i];
    const auto& b = out.enclosures[best];
    if (all_exact ? *e.exact > *b.exact : e.lower > b.lower) best = i;
  }
  const Interval& top = out.enclosures[best];
  out.value.lower = top.lower;
  for (const auto& e : out.enclosures) out.value.upper = std::max(out.value.upper, e.upper);
  if (all_exact) out.value.exact = top.exact;

  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto& e = out.enclosures[i];
    const bool reaches = all_exact ? *e.exact == *top.exact : e.upper >= top.lower - kTieTolerance;
    if (reaches) out.argmax.push_back(i);
  }
  out.certified_singleton = out.argmax.size() == 1;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i != best) out.gap = std::min(out.gap, top.lower - out.enclosures[i].upper);
  }
  return out;
}

std::vector<Word> test_basis(const ShiftSpace& s, std::size_t count) {
  std::vector<Word> out;
  for (int len = 1; out.size() < count; ++len) {
    for (Word& w : admissible_words(s, len)) {
      if (out.size() == count) break;
      out.push_back(std::move(w));
    }
  }
  return out;
}

TruncatedDistance weakstar_distance(const MeasureSpec& mu1, const MeasureSpec& mu2, std::size_t i_max) {
  if (i_max < 1) throw Error(ErrorCode::InvalidArgument, "i_max must be >= 1");
  if (!(mu1.space == mu2.space)) {
    throw Error(ErrorCode::ShapeMismatch, "measures live on different shifts");
  }
  Rational sum = 0;
  Rational weight = Rational(1, 2);
  for (const Word& w : test_basis(mu1.space, i_max)) {
    Rational diff = cylinder_mass(mu1, w) - cylinder_mass(mu2, w);
    if (diff < 0) diff = -diff;
    sum += weight * diff;
    weight /= 2;
  }
  return {to_double(sum), std::ldexp(2.0, -static_cast<int>(std::min<std::size_t>(i_max, 2000))), sum};
}

}  // namespace eopt
