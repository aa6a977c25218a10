#include "eopt/json_io.hpp"

#include "eopt/errors.hpp"

#include <cmath>
#include <map>

namespace eopt::json_io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

const Json& field(const Json& j, const char* key, const char* context) {
  if (!j.is_object()) invalid(std::string(context) + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) invalid(std::string(context) + " is missing \"" + key + "\"");
  return *it;
}

int read_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) invalid(std::string(what) + " must be an integer");
  return j.get<int>();
}

Word read_word(const Json& j, const char* what) {
  if (!j.is_string()) invalid(std::string(what) + " must be a string");
  try {
    return Word::parse(j.get<std::string>());
  } catch (const Error& e) {
    invalid(std::string(what) + ": " + e.detail());
  }
}

Matrix read_matrix(const Json& j, int d, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) invalid(what + " must have " + std::to_string(d) + " rows");
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      invalid(what + " row " + std::to_string(r) + " must have " + std::to_string(d) + " entries");
    }
    for (int c = 0; c < d; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) invalid(what + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

ShiftSpace read_shift(const Json& j) {
  const int k = read_int(field(j, "alphabet", "system"), "system.alphabet");
  if (k < 0) invalid("system.alphabet must be >= 0");
  const Json& t = field(j, "transitions", "system");
  if (t.is_string()) {
    if (t.get<std::string>() != "full") invalid("system.transitions must be \"full\" or a matrix");
    if (k == 0) return ShiftSpace(0, {});
    return ShiftSpace::full(k);
  }
  if (!t.is_array() || static_cast<int>(t.size()) != k) invalid("system.transitions must be k x k");
  std::vector<std::vector<bool>> allowed;
  for (const Json& row : t) {
    if (!row.is_array() || static_cast<int>(row.size()) != k) invalid("system.transitions must be k x k");
    std::vector<bool> r;
    for (const Json& v : row) {
      if (v.is_boolean()) {
        r.push_back(v.get<bool>());
      } else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) {
        r.push_back(v.get<int>() == 1);
      } else {
        invalid("system.transitions entries must be booleans or 0/1");
      }
    }
    allowed.push_back(std::move(r));
  }
  return ShiftSpace(k, allowed);
}

Rational read_rational(const Json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) invalid("numbers must be finite");
    return decimal_from_double(x);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      invalid(e.detail());
    }
  }
  invalid("expected a number or a \"p/q\" string");
}

ScalarPotential read_potential(const ShiftSpace& s, const Json& j) {
  const int memory = read_int(field(j, "memory", "potential"), "potential.memory");
  const Json& values = field(j, "values", "potential");
  if (!values.is_object()) invalid("potential.values must be an object");
  std::map<Word, Rational> table;
  for (const auto& [key, v] : values.items()) {
    const Word w = read_word(Json(key), "potential word");
    if (static_cast<int>(w.size()) != memory) invalid("potential word '" + key + "' does not have length memory");
    table.emplace(w, read_rational(v));
  }
  return ScalarPotential::from_map(s, memory, table);
}

MatrixCocycle read_cocycle(const ShiftSpace& s, const Json& j) {
  const int d = read_int(field(j, "d", "cocycle"), "cocycle.d");
  const int memory = read_int(field(j, "memory", "cocycle"), "cocycle.memory");
  if (d < 1) invalid("cocycle.d must be >= 1");
  if (memory < 1) invalid("cocycle.memory must be >= 1");
  const Json& matrices = field(j, "matrices", "cocycle");
  if (!matrices.is_object()) invalid("cocycle.matrices must be an object");
  std::map<Word, Matrix> table;
  for (const auto& [key, v] : matrices.items()) {
    const Word w = read_word(Json(key), "cocycle word");
    if (static_cast<int>(w.size()) != memory) invalid("cocycle word '" + key + "' does not have length memory");
    table.emplace(w, read_matrix(v, d, "matrix '" + key + "'"));
  }
  const MatrixCocycle plain = MatrixCocycle::from_map(s, d, memory, table);
  const auto scales = j.find("log_scales");
  if (scales == j.end()) return plain;
  if (!scales->is_object()) invalid("cocycle.log_scales must be an object");
  std::vector<Rational> log_scale(plain.size(), Rational(0));
  for (const auto& [key, v] : scales->items()) {
    const int i = plain.index().find(read_word(Json(key), "log-scale word"));
    if (i < 0) invalid("log-scale word '" + key + "' is not an admissible memory-word");
    log_scale[static_cast<std::size_t>(i)] = read_rational(v);
  }
  std::vector<Matrix> base;
  for (std::size_t i = 0; i < plain.size(); ++i) base.push_back(plain.base(i));
  return MatrixCocycle(s, d, memory, std::move(base), std::move(log_scale));
}

MeasureSpec read_measure(const ShiftSpace& s, const Json& j) {
  if (j.is_object() && j.contains("measure")) return read_measure(s, j.at("measure"));
  if (!j.is_object()) invalid("measure must be an object");
  if (j.contains("cycle")) {
    try {
      return periodic_measure(s, Cycle::from_word(s, read_word(j.at("cycle"), "measure.cycle")));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ValidationError) throw;
      invalid(std::string("measure.cycle: ") + e.detail());
    }
  }
  const Json& p = field(j, "stochastic", "measure");
  if (!p.is_array()) invalid("measure.stochastic must be a matrix");
  std::vector<std::vector<Rational>> rows;
  for (const Json& row : p) {
    if (!row.is_array()) invalid("measure.stochastic must be a matrix");
    std::vector<Rational> r;
    for (const Json& v : row) r.push_back(read_rational(v));
    rows.push_back(std::move(r));
  }
  std::optional<std::vector<Rational>> stationary;
  if (const auto it = j.find("stationary"); it != j.end()) {
    if (!it->is_array()) invalid("measure.stationary must be an array");
    stationary.emplace();
    for (const Json& v : *it) stationary->push_back(read_rational(v));
  }
  return markov_measure(s, std::move(rows), std::move(stationary));
}

EventuallyPeriodic read_point(const ShiftSpace& s, const Json& j) {
  EventuallyPeriodic x;
  if (const auto it = j.find("preamble"); it != j.end()) x.preamble = read_word(*it, "point.preamble");
  x.period = read_word(field(j, "period", "point"), "point.period");
  try {
    x.validate(s);
  } catch (const Error& e) {
    invalid(std::string("point: ") + e.detail());
  }
  return x;
}

Json write_rational(const Rational& q) { return to_string(q); }

Json write_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json write_shift(const ShiftSpace& s) {
  Json t;
  if (s.is_full()) {
    t = "full";
  } else {
    t = Json::array();
    for (const auto& row : s.transitions()) {
      Json r = Json::array();
      for (bool b : row) r.push_back(b);
      t.push_back(r);
    }
  }
  return {{"alphabet", s.alphabet_size()}, {"transitions", t}};
}

Json write_potential(const ScalarPotential& f) {
  Json values = Json::object();
  for (std::size_t i = 0; i < f.size(); ++i) values[to_string(f.index().word(i))] = to_string(f.value(i));
  return {{"memory", f.memory()}, {"values", values}};
}

Json write_bracket(const BetaBracket& b) {
  Json j = {{"lower", write_real(b.lower)},
            {"upper", write_real(b.upper)},
            {"width", write_real(b.upper - b.lower)},
            {"n_used", b.n_used},
            {"p_used", b.p_used},
            {"norm_tag", b.norm_tag},
            {"upper_source", b.upper_source},
            {"witness", b.witness ? Json(to_string(*b.witness)) : Json(nullptr)}};
  if (b.exact_beta) j["exact_beta"] = write_rational(*b.exact_beta);
  return j;
}

Json write_interval(const Interval& i) {
  Json j = {{"lower", write_real(i.lower)}, {"upper", write_real(i.upper)}};
  if (i.exact) j["exact"] = write_rational(*i.exact);
  return j;
}

Json write_schedule(const BlockSchedule& s) {
  Json connectors = Json::array();
  for (const Word& w : s.connectors) connectors.push_back(to_string(w));
  Json lengths = Json::array();
  for (std::size_t l : s.lengths) lengths.push_back(l);
  return {{"c1", to_string(s.c1)},   {"c2", to_string(s.c2)},       {"ratio", s.ratio},
          {"depth", s.depth},        {"connectors", connectors},    {"block_lengths", lengths},
          {"total_letters", s.word.size()}};
}

}  // namespace eopt::json_io
