#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/errors.hpp"
#include "eopt/rational.hpp"
#include "eopt/shift_space.hpp"
#include "oracles.hpp"

#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <utility>

namespace th {

using eopt::Matrix;
using eopt::Rational;
using eopt::ShiftSpace;
using eopt::Word;

inline ShiftSpace full2() { return ShiftSpace::full(2); }

inline ShiftSpace golden_mean() { return ShiftSpace(2, {{true, true}, {true, false}}); }

inline Rational q(const char* text) { return eopt::parse_rational(text); }

inline eopt::ScalarPotential potential(const ShiftSpace& s, int memory,
                                       std::initializer_list<std::pair<const char*, const char*>> values) {
  std::map<Word, Rational> table;
  for (const auto& [w, v] : values) table.emplace(Word::parse(w), q(v));
  return eopt::ScalarPotential::from_map(s, memory, table);
}

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline eopt::MatrixCocycle letter_cocycle(const ShiftSpace& s, const std::vector<Matrix>& mats) {
  std::map<Word, Matrix> table;
  for (std::size_t i = 0; i < mats.size(); ++i) table.emplace(Word({static_cast<int>(i)}), mats[i]);
  return eopt::MatrixCocycle::from_map(s, static_cast<int>(mats.front().rows()), 1, table);
}

/// The standard benchmark pair [[1,1],[0,1]], [[1,0],[1,1]] on the full 2-shift.
inline eopt::MatrixCocycle jsr_pair() { return letter_cocycle(full2(), {mat2(1, 1, 0, 1), mat2(1, 0, 1, 1)}); }

/// Random rational potential with values p/q, |p| <= 20, q in 1..6.
inline eopt::ScalarPotential random_potential(std::mt19937_64& rng, const ShiftSpace& s, int memory,
                                              oracle::Table* table = nullptr) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 6);
  const eopt::WordIndex index(s, memory);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < index.size(); ++i) {
    values.emplace_back(num(rng), den(rng));
    if (table != nullptr) (*table)[index.word(i).letters] = values.back();
  }
  return eopt::ScalarPotential(s, memory, values);
}

inline Matrix random_invertible(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) m(r, c) = u(rng);
    }
    if (std::abs(m.determinant()) > 0.05) return m;
  }
}

}  // namespace th
