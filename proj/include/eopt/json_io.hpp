#pragma once

#include "eopt/cocycle.hpp"
#include "eopt/irregular.hpp"
#include "eopt/measures.hpp"
#include "eopt/rational.hpp"
#include "eopt/shift_space.hpp"
#include "eopt/subadd_opt.hpp"

#include <json.hpp>

namespace eopt::json_io {

using Json = nlohmann::json;

// Readers throw ValidationError with a path-like context on malformed input.

/// {"alphabet": k, "transitions": "full" | [[bool or 0/1, ...], ...]}
ShiftSpace read_shift(const Json& j);

/// Integer, decimal number (read as the decimal it spells) or "p/q" string.
Rational read_rational(const Json& j);

/// {"memory": m, "values": {"<word>": number | "p/q", ...}}
ScalarPotential read_potential(const ShiftSpace& s, const Json& j);

/// {"d": d, "memory": m, "matrices": {"<word>": [[row], ...], ...},
///  "log_scales": {"<word>": number | "p/q"} (optional)}
MatrixCocycle read_cocycle(const ShiftSpace& s, const Json& j);

/// {"cycle": "<word>"} or {"stochastic": [[...]], "stationary": [...]}.
/// Also accepts the same object wrapped as {"measure": {...}}.
MeasureSpec read_measure(const ShiftSpace& s, const Json& j);

/// {"preamble": "<word>", "period": "<word>"}
EventuallyPeriodic read_point(const ShiftSpace& s, const Json& j);

Json write_rational(const Rational& q);
Json write_shift(const ShiftSpace& s);
Json write_potential(const ScalarPotential& f);
Json write_bracket(const BetaBracket& b);
Json write_interval(const Interval& i);
Json write_schedule(const BlockSchedule& s);

/// Finite doubles as numbers, non-finite ones as "inf", "-inf" or "nan".
Json write_real(double x);

}  // namespace eopt::json_io
