#pragma once

#include "eopt/linalg.hpp"
#include "eopt/rational.hpp"
#include "eopt/shift_space.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

// Boost 1.74 hard-errors when probing Eigen matrices as byte containers.
namespace boost::multiprecision::detail {
template <class S, int R, int C, int O, int MR, int MC>
struct is_byte_container<Eigen::Matrix<S, R, C, O, MR, MC>> : std::false_type {};
}  // namespace boost::multiprecision::detail

namespace eopt {

/// Locally constant real function f(x) = table[x_0 .. x_{m-1}].
///
/// Values are exact rationals so that maximum cycle means, critical graphs
/// and perturbation sweeps can be decided without rounding.
class ScalarPotential {
 public:
  /// `values` is indexed like admissible_words(space, memory).
  ScalarPotential(ShiftSpace space, int memory, std::vector<Rational> values);

  /// Throws ValidationError unless `table` covers exactly the admissible
  /// words of length `memory`.
  static ScalarPotential from_map(ShiftSpace space, int memory, const std::map<Word, Rational>& table);
  static ScalarPotential constant(ShiftSpace space, const Rational& c, int memory = 1);

  const ShiftSpace& space() const noexcept { return space_; }
  int memory() const noexcept { return index_->length(); }
  const WordIndex& index() const noexcept { return *index_; }
  std::size_t size() const noexcept { return values_.size(); }

  const Rational& value(std::size_t i) const { return values_[i]; }
  double value_double(std::size_t i) const { return doubles_[i]; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  /// Value on an admissible word of length memory(); throws Inadmissible.
  const Rational& at(const Word& w) const;

  /// Same function, tabulated on longer words.
  ScalarPotential lift(int memory) const;

  /// f_n(x) over the |w| - m + 1 windows of w.
  Rational birkhoff_sum(const Word& w) const;

  Rational sup_norm() const;

  friend ScalarPotential operator+(const ScalarPotential& f, const ScalarPotential& g);
  friend ScalarPotential operator-(const ScalarPotential& f);
  friend ScalarPotential operator*(const Rational& c, const ScalarPotential& f);

  bool operator==(const ScalarPotential& o) const;

 private:
  ShiftSpace space_;
  std::shared_ptr<const WordIndex> index_;
  std::vector<Rational> values_;
  std::vector<double> doubles_;
};

/// Locally constant map from the shift to GL_d(R), stored per m-word as
/// exp(log_scale) * base. Keeping the scalar factor apart makes
/// Gamma(f) = e^f * (.) an exact operation.
class MatrixCocycle {
 public:
  MatrixCocycle(ShiftSpace space, int dimension, int memory, std::vector<Matrix> base,
                std::vector<Rational> log_scale = {});

  static MatrixCocycle from_map(ShiftSpace space, int dimension, int memory,
                                const std::map<Word, Matrix>& table);
  static MatrixCocycle constant(ShiftSpace space, const Matrix& m);

  const ShiftSpace& space() const noexcept { return space_; }
  int dimension() const noexcept { return dimension_; }
  int memory() const noexcept { return index_->length(); }
  const WordIndex& index() const noexcept { return *index_; }
  std::size_t size() const noexcept { return base_.size(); }

  const Matrix& base(std::size_t i) const { return base_[i]; }
  const Rational& log_scale(std::size_t i) const { return log_scale_[i]; }
  double log_scale_double(std::size_t i) const { return log_scale_double_[i]; }
  /// The actual matrix exp(log_scale) * base.
  Matrix matrix(std::size_t i) const;
  Matrix inverse(std::size_t i) const;

  MatrixCocycle lift(int memory) const;

  /// For scalar-times-identity cocycles (including every d = 1 cocycle)
  /// returns f with A = e^f I_d up to signs, which makes the optimization
  /// problem a Birkhoff one. Empty otherwise.
  const std::optional<ScalarPotential>& conformal_potential() const noexcept { return conformal_; }

  /// Same function after lifting both to a common memory, compared exactly.
  bool equivalent(const MatrixCocycle& o) const;

 private:
  ShiftSpace space_;
  int dimension_;
  std::shared_ptr<const WordIndex> index_;
  std::vector<Matrix> base_;
  std::vector<Rational> log_scale_;
  std::vector<double> log_scale_double_;
  std::optional<ScalarPotential> conformal_;

  void detect_conformal();
};

/// A(n, .) on the cylinder [w] with n = |w| - m + 1; the factor for window 0
/// is rightmost. Throws Inadmissible.
Matrix cocycle_product(const MatrixCocycle& a, const Word& w);

/// log ||A(n, .)|| on [w], renormalizing as it multiplies.
double log_norm_of_product(const MatrixCocycle& a, const Word& w);

/// rho(A, B) = max over words of ||A_w - B_w|| + ||A_w^-1 - B_w^-1||.
double cocycle_distance(const MatrixCocycle& a, const MatrixCocycle& b);

/// Gamma(f)A = e^f A.
MatrixCocycle gamma_apply(const ScalarPotential& f, const MatrixCocycle& a);

/// e^f I_d.
MatrixCocycle from_potential(const ScalarPotential& f, int dimension = 1);

/// Threshold on |det| below which a matrix is not treated as invertible.
inline constexpr double kMinAbsDeterminant = 1e-12;

}  // namespace eopt
