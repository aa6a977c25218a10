#include "eopt/cocycle.hpp"

#include "eopt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace eopt {

namespace {

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

void require_same_space(const ShiftSpace& a, const ShiftSpace& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::ShapeMismatch, "functions live on different shift spaces");
  }
}

// Index of the lifted word's first `memory` letters in the shorter index.
std::vector<std::size_t> lift_map(const WordIndex& from, const WordIndex& to) {
  std::vector<std::size_t> out;
  out.reserve(to.size());
  const auto m = static_cast<std::size_t>(from.length());
  for (const Word& w : to.words()) {
    out.push_back(static_cast<std::size_t>(from.find(std::span<const int>(w.letters.data(), m))));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- potential

ScalarPotential::ScalarPotential(ShiftSpace space, int memory, std::vector<Rational> values)
    : space_(std::move(space)),
      index_(std::make_shared<const WordIndex>(space_, memory)),
      values_(std::move(values)) {
  if (values_.size() != index_->size()) {
    throw Error(ErrorCode::ValidationError, "potential table must cover exactly the admissible " +
                                                std::to_string(memory) + "-words");
  }
  doubles_ = to_doubles(values_);
}

ScalarPotential ScalarPotential::from_map(ShiftSpace space, int memory, const std::map<Word, Rational>& table) {
  if (memory < 1) {
    throw Error(ErrorCode::ValidationError, "memory must be >= 1");
  }
  WordIndex index(space, memory);
  if (table.size() != index.size()) {
    throw Error(ErrorCode::ValidationError, "potential table must cover exactly the admissible " +
                                                std::to_string(memory) + "-words");
  }
  std::vector<Rational> values(index.size());
  for (const auto& [w, v] : table) {
    const int i = index.find(w);
    if (i < 0) {
      throw Error(ErrorCode::ValidationError, "word '" + to_string(w) + "' is not an admissible " +
                                                  std::to_string(memory) + "-word");
    }
    values[static_cast<std::size_t>(i)] = v;
  }
  return ScalarPotential(std::move(space), memory, std::move(values));
}

ScalarPotential ScalarPotential::constant(ShiftSpace space, const Rational& c, int memory) {
  WordIndex index(space, memory);
  return ScalarPotential(std::move(space), memory, std::vector<Rational>(index.size(), c));
}

const Rational& ScalarPotential::at(const Word& w) const {
  const int i = index_->find(w);
  if (i < 0) {
    throw Error(ErrorCode::Inadmissible, "'" + to_string(w) + "' is not an admissible " +
                                             std::to_string(memory()) + "-word");
  }
  return values_[static_cast<std::size_t>(i)];
}

ScalarPotential ScalarPotential::lift(int memory) const {
  if (memory < this->memory()) {
    throw Error(ErrorCode::InvalidArgument, "cannot lift to a shorter memory");
  }
  if (memory == this->memory()) return *this;
  WordIndex target(space_, memory);
  const auto map = lift_map(*index_, target);
  std::vector<Rational> values;
  values.reserve(map.size());
  for (std::size_t j : map) values.push_back(values_[j]);
  return ScalarPotential(space_, memory, std::move(values));
}

Rational ScalarPotential::birkhoff_sum(const Word& w) const {
  const auto m = static_cast<std::size_t>(memory());
  if (w.size() < m || !space_.is_admissible(w)) {
    throw Error(ErrorCode::Inadmissible, "word '" + to_string(w) + "' cannot be summed");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i + m <= w.size(); ++i) {
    sum += values_[static_cast<std::size_t>(index_->find(std::span<const int>(w.letters.data() + i, m)))];
  }
  return sum;
}

Rational ScalarPotential::sup_norm() const {
  Rational best = 0;
  for (const auto& v : values_) best = std::max(best, Rational(abs(v)));
  return best;
}

ScalarPotential operator+(const ScalarPotential& f, const ScalarPotential& g) {
  require_same_space(f.space(), g.space());
  const int m = std::max(f.memory(), g.memory());
  const ScalarPotential a = f.lift(m);
  const ScalarPotential b = g.lift(m);
  ScalarPotential out = a;
  for (std::size_t i = 0; i < out.values_.size(); ++i) {
    out.values_[i] += b.values_[i];
  }
  out.doubles_ = to_doubles(out.values_);
  return out;
}

ScalarPotential operator-(const ScalarPotential& f) { return Rational(-1) * f; }

ScalarPotential operator*(const Rational& c, const ScalarPotential& f) {
  ScalarPotential out = f;
  for (auto& v : out.values_) v *= c;
  out.doubles_ = to_doubles(out.values_);
  return out;
}

bool ScalarPotential::operator==(const ScalarPotential& o) const {
  if (!(space_ == o.space_)) return false;
  const int m = std::max(memory(), o.memory());
  return lift(m).values_ == o.lift(m).values_;
}

// ----------------------------------------------------------------- cocycle

MatrixCocycle::MatrixCocycle(ShiftSpace space, int dimension, int memory, std::vector<Matrix> base,
                             std::vector<Rational> log_scale)
    : space_(std::move(space)),
      dimension_(dimension),
      index_(std::make_shared<const WordIndex>(space_, memory)),
      base_(std::move(base)),
      log_scale_(std::move(log_scale)) {
  if (dimension < 1) {
    throw Error(ErrorCode::ValidationError, "dimension must be >= 1");
  }
  if (base_.size() != index_->size()) {
    throw Error(ErrorCode::ValidationError, "cocycle table must cover exactly the admissible " +
                                                std::to_string(memory) + "-words");
  }
  if (log_scale_.empty()) {
    log_scale_.assign(base_.size(), Rational(0));
  }
  if (log_scale_.size() != base_.size()) {
    throw Error(ErrorCode::ValidationError, "scale table size mismatch");
  }
  log_scale_double_ = to_doubles(log_scale_);
  const double log_threshold = std::log(kMinAbsDeterminant);
  for (std::size_t i = 0; i < base_.size(); ++i) {
    const Matrix& m = base_[i];
    if (m.rows() != dimension || m.cols() != dimension) {
      throw Error(ErrorCode::ShapeMismatch, "matrix for '" + to_string(index_->word(i)) + "' is not " +
                                                std::to_string(dimension) + "x" + std::to_string(dimension));
    }
    if (!m.allFinite()) {
      throw Error(ErrorCode::ValidationError, "non-finite matrix entry");
    }
    const double det = m.determinant();
    if (det == 0.0 || std::log(std::abs(det)) + dimension * log_scale_double_[i] <= log_threshold) {
      throw Error(ErrorCode::NotInvertible, "matrix for '" + to_string(index_->word(i)) + "' is not invertible");
    }
  }
  detect_conformal();
}

MatrixCocycle MatrixCocycle::from_map(ShiftSpace space, int dimension, int memory,
                                      const std::map<Word, Matrix>& table) {
  if (memory < 1) {
    throw Error(ErrorCode::ValidationError, "memory must be >= 1");
  }
  WordIndex index(space, memory);
  if (table.size() != index.size()) {
    throw Error(ErrorCode::ValidationError, "cocycle table must cover exactly the admissible " +
                                                std::to_string(memory) + "-words");
  }
  std::vector<Matrix> base(index.size());
  for (const auto& [w, m] : table) {
    const int i = index.find(w);
    if (i < 0) {
      throw Error(ErrorCode::ValidationError, "word '" + to_string(w) + "' is not an admissible " +
                                                  std::to_string(memory) + "-word");
    }
    base[static_cast<std::size_t>(i)] = m;
  }
  return MatrixCocycle(std::move(space), dimension, memory, std::move(base));
}

MatrixCocycle MatrixCocycle::constant(ShiftSpace space, const Matrix& m) {
  WordIndex index(space, 1);
  return MatrixCocycle(std::move(space), static_cast<int>(m.rows()), 1, std::vector<Matrix>(index.size(), m));
}

Matrix MatrixCocycle::matrix(std::size_t i) const { return std::exp(log_scale_double_[i]) * base_[i]; }

Matrix MatrixCocycle::inverse(std::size_t i) const {
  return std::exp(-log_scale_double_[i]) * base_[i].inverse();
}

MatrixCocycle MatrixCocycle::lift(int memory) const {
  if (memory < this->memory()) {
    throw Error(ErrorCode::InvalidArgument, "cannot lift to a shorter memory");
  }
  if (memory == this->memory()) return *this;
  WordIndex target(space_, memory);
  const auto map = lift_map(*index_, target);
  std::vector<Matrix> base;
  std::vector<Rational> scale;
  base.reserve(map.size());
  scale.reserve(map.size());
  for (std::size_t j : map) {
    base.push_back(base_[j]);
    scale.push_back(log_scale_[j]);
  }
  return MatrixCocycle(space_, dimension_, memory, std::move(base), std::move(scale));
}

bool MatrixCocycle::equivalent(const MatrixCocycle& o) const {
  if (!(space_ == o.space_) || dimension_ != o.dimension_) return false;
  const int m = std::max(memory(), o.memory());
  const MatrixCocycle a = lift(m);
  const MatrixCocycle b = o.lift(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.log_scale_[i] != b.log_scale_[i] || a.base_[i] != b.base_[i]) return false;
  }
  return true;
}

void MatrixCocycle::detect_conformal() {
  std::vector<Rational> values;
  values.reserve(base_.size());
  for (std::size_t i = 0; i < base_.size(); ++i) {
    const Matrix& m = base_[i];
    const double c = m(0, 0);
    for (int r = 0; r < dimension_; ++r) {
      for (int s = 0; s < dimension_; ++s) {
        if (m(r, s) != (r == s ? c : 0.0)) return;
      }
    }
    const double magnitude = std::abs(c);
    values.push_back(magnitude == 1.0 ? log_scale_[i] : log_scale_[i] + exact_from_double(std::log(magnitude)));
  }
  conformal_.emplace(space_, memory(), std::move(values));
}

Matrix cocycle_product(const MatrixCocycle& a, const Word& w) {
  const auto m = static_cast<std::size_t>(a.memory());
  if (w.size() < m || !a.space().is_admissible(w)) {
    throw Error(ErrorCode::Inadmissible, "word '" + to_string(w) + "' has no cocycle product");
  }
  Matrix product = Matrix::Identity(a.dimension(), a.dimension());
  for (std::size_t j = 0; j + m <= w.size(); ++j) {
    const int i = a.index().find(std::span<const int>(w.letters.data() + j, m));
    product = a.matrix(static_cast<std::size_t>(i)) * product;
  }
  return product;
}

double log_norm_of_product(const MatrixCocycle& a, const Word& w) {
  const auto m = static_cast<std::size_t>(a.memory());
  if (w.size() < m || !a.space().is_admissible(w)) {
    throw Error(ErrorCode::Inadmissible, "word '" + to_string(w) + "' has no cocycle product");
  }
  Matrix product = Matrix::Identity(a.dimension(), a.dimension());
  double log_scale = 0.0;
  for (std::size_t j = 0; j + m <= w.size(); ++j) {
    const auto i = static_cast<std::size_t>(a.index().find(std::span<const int>(w.letters.data() + j, m)));
    product = a.base(i) * product;
    log_scale += a.log_scale_double(i);
    const double norm = op_norm(product);
    product /= norm;
    log_scale += std::log(norm);
  }
  return log_scale + std::log(op_norm(product));
}

double cocycle_distance(const MatrixCocycle& a, const MatrixCocycle& b) {
  require_same_space(a.space(), b.space());
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::ShapeMismatch, "cocycles have different dimensions");
  }
  const int m = std::max(a.memory(), b.memory());
  const MatrixCocycle la = a.lift(m);
  const MatrixCocycle lb = b.lift(m);
  double best = 0.0;
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double forward = op_norm(la.matrix(i) - lb.matrix(i));
    const double backward = op_norm(la.inverse(i) - lb.inverse(i));
    best = std::max(best, forward + backward);
  }
  return best;
}

MatrixCocycle gamma_apply(const ScalarPotential& f, const MatrixCocycle& a) {
  require_same_space(f.space(), a.space());
  const int m = std::max(f.memory(), a.memory());
  const ScalarPotential lf = f.lift(m);
  const MatrixCocycle la = a.lift(m);
  std::vector<Matrix> base;
  std::vector<Rational> scale;
  base.reserve(la.size());
  scale.reserve(la.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    base.push_back(la.base(i));
    scale.push_back(la.log_scale(i) + lf.value(i));
  }
  return MatrixCocycle(a.space(), a.dimension(), m, std::move(base), std::move(scale));
}

MatrixCocycle from_potential(const ScalarPotential& f, int dimension) {
  if (dimension < 1) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  }
  return MatrixCocycle(f.space(), dimension, f.memory(),
                       std::vector<Matrix>(f.size(), Matrix::Identity(dimension, dimension)), f.values());
}

}  // namespace eopt
