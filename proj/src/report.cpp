#include "eopt/report.hpp"

#include "eopt/errors.hpp"
#include "eopt/irregular.hpp"
#include "eopt/measures.hpp"
#include "eopt/perturb_lab.hpp"
#include "eopt/subadd_opt.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace eopt {

using json_io::Json;

namespace {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

std::string csv_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

// ----------------------------------------------------------------- params

class Params {
 public:
  explicit Params(const Json& j) : j_(j) {
    if (!j_.is_object()) invalid("params must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& raw(const char* key) const {
    if (!has(key)) invalid(std::string("params.") + key + " is required");
    return j_.at(key);
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) invalid(std::string("params.") + key + " must be an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const char* key, std::optional<std::uint64_t> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    const Json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_number_float() && v.get<double>() >= 0 && v.get<double>() == std::floor(v.get<double>()) &&
        v.get<double>() < 1.8e19) {
      return static_cast<std::uint64_t>(v.get<double>());
    }
    invalid(std::string("params.") + key + " must be a nonnegative integer");
  }

  double real(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    const Json& v = j_.at(key);
    if (!v.is_number()) invalid(std::string("params.") + key + " must be a number");
    return v.get<double>();
  }

  std::string text(const char* key) const {
    const Json& v = raw(key);
    if (!v.is_string()) invalid(std::string("params.") + key + " must be a string");
    return v.get<std::string>();
  }

 private:
  const Json& j_;
};

SearchOptions search_options(const Params& p, const RunOptions& options) {
  SearchOptions o;
  o.n_max = p.integer("n_max", o.n_max);
  o.p_max = p.integer("p_max", o.p_max);
  o.gap_tol = p.real("gap_tol", o.gap_tol);
  o.word_cap = p.unsigned_integer("word_cap", o.word_cap);
  o.threads = options.threads.value_or(p.integer("threads", 1));
  if (o.n_max < 1 || o.p_max < 1) invalid("params.n_max and params.p_max must be >= 1");
  if (!(o.gap_tol > 0.0)) invalid("params.gap_tol must be > 0");
  if (o.threads < 1) invalid("threads must be >= 1");
  return o;
}

// ---------------------------------------------------------------- context

struct Context {
  const Json& config;
  const RunOptions& options;
  std::ostream& log;
  Params params;

  std::optional<ShiftSpace> space_cache;

  void note(const std::string& line) const {
    if (options.verbose) log << "[eopt] " << line << '\n';
  }

  const ShiftSpace& space() {
    if (!space_cache) {
      if (!config.contains("system")) invalid("config is missing \"system\"");
      space_cache = json_io::read_shift(config.at("system"));
    }
    return *space_cache;
  }

  bool has_potential() const { return config.contains("potential"); }
  bool has_cocycle() const { return config.contains("cocycle"); }

  ScalarPotential potential() { return json_io::read_potential(space(), config.at("potential")); }

  /// The cocycle, or e^f I_d built from the potential.
  MatrixCocycle cocycle() {
    if (has_cocycle() == has_potential()) invalid("config needs exactly one of \"cocycle\" and \"potential\"");
    if (has_cocycle()) return json_io::read_cocycle(space(), config.at("cocycle"));
    const int d = params.integer("d", 1);
    if (d < 1) invalid("params.d must be >= 1");
    return from_potential(potential(), d);
  }

  /// The potential, or the scalar data of a conformal cocycle.
  ScalarPotential birkhoff_potential() {
    if (has_potential()) return potential();
    if (has_cocycle()) {
      const MatrixCocycle a = json_io::read_cocycle(space(), config.at("cocycle"));
      if (const auto& f = a.conformal_potential()) return *f;
      invalid("this experiment needs a potential or a scalar-times-identity cocycle");
    }
    invalid("config needs a \"potential\"");
  }

  std::vector<MeasureSpec> measures(const char* key) {
    const Json& list = params.raw(key);
    if (!list.is_array() || list.empty()) invalid(std::string("params.") + key + " must be a nonempty array");
    std::vector<MeasureSpec> out;
    for (const Json& m : list) out.push_back(json_io::read_measure(space(), m));
    return out;
  }

  std::uint64_t seed() const {
    if (!params.has("seed")) invalid("params.seed is required for randomized experiments");
    return params.unsigned_integer("seed");
  }
};

struct ExperimentOutput {
  Json results = Json::object();
  Json provenance = Json::object();
  std::string series_header;
  std::vector<std::string> series_rows;
};

Json cycle_list(const std::vector<Cycle>& cycles) {
  Json out = Json::array();
  for (const Cycle& c : cycles) out.push_back(to_string(c));
  return out;
}

Json oscillation_json(const Oscillation& o) {
  return {{"inf_tail", json_io::write_real(o.inf_tail)},
          {"sup_tail", json_io::write_real(o.sup_tail)},
          {"gap", json_io::write_real(o.gap)}};
}

// ------------------------------------------------------------ experiments

ExperimentOutput run_beta(Context& ctx) {
  const MatrixCocycle a = ctx.cocycle();
  const SearchOptions opts = search_options(ctx.params, ctx.options);
  const double slack = ctx.params.real("slack", 1e-6);
  if (slack < 0.0) invalid("params.slack must be >= 0");
  ctx.note("bracketing with n_max=" + std::to_string(opts.n_max) + " p_max=" + std::to_string(opts.p_max));
  const OptReport r = matrix_candidates(a, opts, slack);

  ExperimentOutput out;
  Json candidates = Json::array();
  for (const auto& c : r.candidates) {
    candidates.push_back({{"cycle", to_string(c.cycle)}, {"exponent", json_io::write_real(c.exponent)}});
  }
  out.results = {{"bracket", json_io::write_bracket(r.bracket)},
                 {"candidates", candidates},
                 {"unique_at_resolution", r.unique_at_resolution},
                 {"slack", slack}};
  out.provenance = {{"bracket.lower", "bracket"},
                    {"bracket.upper", "bracket"},
                    {"bracket.width", "float"},
                    {"candidates.exponent", "float"},
                    {"slack", "float"}};
  if (r.bracket.exact_beta) out.provenance["bracket.exact_beta"] = "exact-rational";
  out.series_header = "kind,n_or_p,value";
  for (const auto& s : r.bracket.series) {
    out.series_rows.push_back(s.kind + "," + std::to_string(s.n_or_p) + "," + csv_number(s.value));
  }
  return out;
}

ExperimentOutput run_birkhoff(Context& ctx) {
  const ScalarPotential f = ctx.birkhoff_potential();
  const CriticalGraph cg = critical_graph(f);
  const int p_max = ctx.params.integer("p_max", static_cast<int>(cg.graph->node_count()));
  if (p_max < 1) invalid("params.p_max must be >= 1");
  const MaximizingCycles mc = maximizing_cycles(f, p_max);
  ExperimentOutput out;
  out.results = {{"beta", json_io::write_rational(cg.beta)}, {"unique", mc.unique}, {"critical_cycles", cycle_list(mc.cycles)}};
  out.provenance = {{"beta", "exact-rational"}};
  return out;
}

ExperimentOutput run_perturb(Context& ctx) {
  const ScalarPotential f = ctx.birkhoff_potential();
  const ScalarPotential gamma = json_io::read_potential(ctx.space(), ctx.params.raw("gamma"));
  std::vector<Rational> grid;
  if (ctx.params.has("epsilons")) {
    const Json& list = ctx.params.raw("epsilons");
    if (!list.is_array()) invalid("params.epsilons must be an array");
    for (const Json& e : list) grid.push_back(json_io::read_rational(e));
  } else {
    const int count = ctx.params.integer("grid", 12);
    if (count < 1) invalid("params.grid must be >= 1");
    grid = dyadic_grid(count);
  }
  const SweepResult sweep = lemma4_sweep(f, gamma, grid);
  ExperimentOutput out;
  Json points = Json::array();
  out.series_header = "epsilon,diam,hausdorff_to_limit,num_extreme_values";
  for (const auto& p : sweep.points) {
    Json values = Json::array();
    for (const auto& v : p.values) values.push_back(json_io::write_rational(v));
    points.push_back({{"epsilon", json_io::write_rational(p.epsilon)},
                      {"values", values},
                      {"diameter", json_io::write_rational(p.diameter)},
                      {"hausdorff_to_limit", json_io::write_rational(p.hausdorff_to_limit)}});
    out.series_rows.push_back(csv_number(to_double(p.epsilon)) + "," + csv_number(to_double(p.diameter)) + "," +
                              csv_number(to_double(p.hausdorff_to_limit)) + "," + std::to_string(p.values.size()));
  }
  out.results = {{"limit", json_io::write_rational(sweep.limit)},
                 {"points", points},
                 {"final_hausdorff_zero", sweep.points.back().hausdorff_to_limit == 0},
                 {"final_diameter_zero", sweep.points.back().diameter == 0}};
  out.provenance = {{"limit", "exact-rational"}, {"points", "exact-rational"}};
  return out;
}

ExperimentOutput run_probe(Context& ctx) {
  const MatrixCocycle a = ctx.cocycle();
  const SearchOptions opts = search_options(ctx.params, ctx.options);
  const auto samples = ctx.params.unsigned_integer("samples", 200);
  const double delta = ctx.params.real("delta", 0.1);
  const double slack = ctx.params.real("slack", 1e-6);
  const ProbeResult r = uniqueness_probe(a, samples, delta, ctx.seed(), opts, slack);
  ExperimentOutput out;
  out.results = {{"samples", r.samples},
                 {"unique", r.unique},
                 {"frequency", r.frequency},
                 {"eta_bound", json_io::write_real(r.eta_bound)},
                 {"delta", delta}};
  out.provenance = {{"frequency", "float"}, {"eta_bound", "float"}, {"delta", "float"}};
  return out;
}

ExperimentOutput run_lambda(Context& ctx) {
  const MatrixCocycle a = ctx.cocycle();
  const auto lambda = ctx.measures("measures");
  const auto trials = ctx.params.unsigned_integer("trials", 100);
  const StabilityResult r = lambda_stability(lambda, a, trials, ctx.seed());
  ExperimentOutput out;
  out.results = {{"argmax", r.argmax},
                 {"gap", json_io::write_real(r.gap)},
                 {"delta", json_io::write_real(r.delta)},
                 {"trials", r.trials},
                 {"kept", r.kept},
                 {"max_distance", json_io::write_real(r.max_distance)}};
  out.provenance = {{"gap", "float"}, {"delta", "float"}, {"max_distance", "float"}};
  return out;
}

ExperimentOutput run_irregular(Context& ctx) {
  const MatrixCocycle a = ctx.cocycle();
  const ShiftSpace& s = ctx.space();
  const Cycle c1 = Cycle::parse(s, ctx.params.text("c1"));
  const Cycle c2 = Cycle::parse(s, ctx.params.text("c2"));
  const double ratio = ctx.params.real("ratio", 3.0);
  const int depth = ctx.params.integer("depth", 8);
  const BlockSchedule schedule = build_irregular_point(a, c1, c2, ratio, depth);
  const std::size_t available = schedule.word.size() - static_cast<std::size_t>(a.memory()) + 1;
  const auto length = ctx.params.unsigned_integer("length", std::min(available, kMaxSeriesLength));
  ctx.note("schedule has " + std::to_string(schedule.word.size()) + " letters");
  const auto series = finite_time_exponents(a, schedule, length);

  ExperimentOutput out;
  out.results = {{"schedule", json_io::write_schedule(schedule)},
                 {"length", series.size()},
                 {"tail", oscillation_json(oscillation(series))},
                 {"block_ends", oscillation_json(boundary_oscillation(series, schedule, a.memory()))}};
  out.provenance = {{"tail", "float"}, {"block_ends", "float"}, {"schedule.ratio", "float"}};
  if (ctx.params.has("control")) {
    const EventuallyPeriodic x = json_io::read_point(s, ctx.params.raw("control"));
    const auto control_length = ctx.params.unsigned_integer("control_length", 10'000);
    out.results["control"] = oscillation_json(oscillation(finite_time_exponents(a, x, control_length)));
    out.provenance["control"] = "float";
  }
  out.series_header = "n,exponent";
  out.series_rows.reserve(series.size());
  for (std::size_t n = 0; n < series.size(); ++n) {
    out.series_rows.push_back(std::to_string(n + 1) + "," + csv_number(series[n]));
  }
  return out;
}

ExperimentOutput run_flatten(Context& ctx) {
  const Json& list = ctx.params.raw("values");
  if (!list.is_array()) invalid("params.values must be an array");
  IdentitySystem sys;
  for (const Json& v : list) sys.values.push_back(json_io::read_rational(v));
  const FlattenResult r = flatten_top(sys, ctx.params.integer("n"));
  Json g = Json::array();
  for (const auto& v : r.g) g.push_back(json_io::write_rational(v));
  ExperimentOutput out;
  out.results = {{"level", json_io::write_rational(r.level)},
                 {"g", g},
                 {"distance", json_io::write_rational(r.distance)},
                 {"bound", json_io::write_rational(r.bound)},
                 {"within_bound", r.distance <= r.bound},
                 {"argmax_count", r.argmax_count},
                 {"band_holds", r.band_holds}};
  out.provenance = {{"level", "exact-rational"}, {"g", "exact-rational"}, {"distance", "exact-rational"},
                    {"bound", "exact-rational"}};
  return out;
}

ExperimentOutput run_measure(Context& ctx) {
  const auto lambda = ctx.measures("measures");
  ExperimentOutput out;
  const int n_max = ctx.params.integer("n_max", 8);
  const auto word_cap = ctx.params.unsigned_integer("word_cap", 10'000'000);
  if (ctx.has_cocycle() || ctx.has_potential()) {
    const MatrixCocycle a = ctx.cocycle();
    const RestrictedBeta rb = restricted_beta(lambda, a, n_max, word_cap);
    Json enclosures = Json::array();
    for (const auto& e : rb.enclosures) enclosures.push_back(json_io::write_interval(e));
    Json argmax = Json::array();
    for (auto i : rb.argmax) argmax.push_back(i);
    out.results["exponents"] = enclosures;
    out.results["restricted_beta"] = {{"value", json_io::write_interval(rb.value)},
                                      {"argmax", argmax},
                                      {"certified_singleton", rb.certified_singleton},
                                      {"gap", json_io::write_real(rb.gap)}};
    out.provenance["exponents"] = "bracket";
    out.provenance["restricted_beta.value"] = "bracket";
    out.provenance["restricted_beta.gap"] = "float";
    if (ctx.has_potential()) {
      const ScalarPotential f = ctx.potential();
      Json integrals = Json::array();
      for (const auto& mu : lambda) integrals.push_back(json_io::write_rational(integrate(mu, f)));
      out.results["integrals"] = integrals;
      out.provenance["integrals"] = "exact-rational";
    }
  }
  if (lambda.size() >= 2) {
    const auto i_max = ctx.params.unsigned_integer("i_max", 6);
    Json distances = Json::array();
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      for (std::size_t j = i + 1; j < lambda.size(); ++j) {
        const auto d = weakstar_distance(lambda[i], lambda[j], i_max);
        distances.push_back({{"pair", {i, j}},
                             {"value", json_io::write_rational(d.exact_value)},
                             {"error_bound", json_io::write_real(d.error_bound)}});
      }
    }
    out.results["weakstar"] = distances;
    out.provenance["weakstar.value"] = "exact-rational";
    out.provenance["weakstar.error_bound"] = "float";
  }
  return out;
}

const std::map<std::string, std::function<ExperimentOutput(Context&)>>& experiments() {
  static const std::map<std::string, std::function<ExperimentOutput(Context&)>> table = {
      {"beta", run_beta},         {"birkhoff", run_birkhoff}, {"perturb", run_perturb},
      {"probe", run_probe},       {"lambda", run_lambda},     {"irregular", run_irregular},
      {"flatten", run_flatten},   {"measure", run_measure},
  };
  return table;
}

int exit_code_for(ErrorCode code) { return code == ErrorCode::BudgetExceeded ? kExitBudget : kExitInvalid; }

Json error_body(ErrorCode code, const std::string& message, const std::string& digest, const std::string& experiment) {
  return {{"tool_version", std::string(kToolVersion)},
          {"config_digest", digest},
          {"experiment", experiment},
          {"norm_tag", std::string(kNormTag)},
          {"status", "error"},
          {"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
}

std::string series_text(const ExperimentOutput& out) {
  if (out.series_header.empty()) return {};
  std::string text = out.series_header + "\n";
  for (const auto& row : out.series_rows) text += row + "\n";
  return text;
}

// ------------------------------------------------------------------ cache

std::optional<std::string> cache_directory(const RunOptions& options) {
  if (options.cache_dir) return options.cache_dir;
  if (const char* env = std::getenv("EOPT_CACHE_DIR"); env != nullptr && *env != '\0') return std::string(env);
  return std::nullopt;
}

struct CachedRun {
  Json body;
  std::string series_csv;
};

std::optional<CachedRun> cache_lookup(const fs::path& file, const std::string& digest, std::ostream& log) {
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  try {
    std::ifstream in(file);
    const Json entry = Json::parse(in);
    const Json& body = entry.at("body");
    if (!body.is_object() || body.value("config_digest", "") != digest ||
        entry.at("body_sha256").get<std::string>() != body_hash(body)) {
      throw Error(ErrorCode::CacheCorrupt, "entry does not match its digest");
    }
    return CachedRun{body, entry.at("series_csv").get<std::string>()};
  } catch (const std::exception& e) {
    log << "warning: " << to_string(ErrorCode::CacheCorrupt) << ": ignoring cache entry " << file.string() << " ("
        << e.what() << "); recomputing\n";
    return std::nullopt;
  }
}

void cache_store(const fs::path& file, const Json& body, const std::string& series, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << Json{{"body", body}, {"body_sha256", body_hash(body)}, {"series_csv", series}}.dump() << '\n';
    if (!out) {
      log << "warning: could not write cache entry " << file.string() << '\n';
      return;
    }
  }
  fs::rename(tmp, file, ec);
  if (ec) log << "warning: could not write cache entry " << file.string() << '\n';
}

RunOutcome finish(Json body, std::string series, int exit_code, bool cached, double seconds) {
  const std::string hash = body_hash(body);
  body["meta"] = {{"wall_time_s", seconds}, {"cached", cached}, {"body_sha256", hash}};
  return {std::move(body), std::move(series), exit_code};
}

}  // namespace

std::string config_digest(const Json& config) {
  Json canonical = config;
  if (canonical.is_object()) {
    canonical.erase("out");
    if (canonical.contains("params") && canonical["params"].is_object()) canonical["params"].erase("threads");
  }
  return sha256_hex(canonical.dump() + "\n" + std::string(kToolVersion));
}

std::string body_hash(const Json& report) {
  Json body = report;
  if (body.is_object()) body.erase("meta");
  return sha256_hex(body.dump());
}

RunOutcome execute(const Json& config, const RunOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const std::string digest = config_digest(config);
  std::string experiment;
  try {
    if (!config.is_object()) invalid("config must be a JSON object");
    const auto exp = config.find("experiment");
    if (exp == config.end() || !exp->is_string()) invalid("config needs a string \"experiment\"");
    experiment = exp->get<std::string>();
    const auto& table = experiments();
    const auto handler = table.find(experiment);
    if (handler == table.end()) invalid("unknown experiment '" + experiment + "'");

    std::optional<fs::path> cache_file;
    if (auto dir = cache_directory(options)) {
      cache_file = fs::path(*dir) / (digest + ".json");
      if (auto hit = cache_lookup(*cache_file, digest, log)) {
        if (options.verbose) log << "[eopt] served from cache " << cache_file->string() << '\n';
        return finish(std::move(hit->body), std::move(hit->series_csv), kExitOk, true, elapsed());
      }
    }

    static const Json kEmpty = Json::object();
    const Json& params = config.contains("params") ? config.at("params") : kEmpty;
    Context ctx{config, options, log, Params(params), std::nullopt};
    ctx.note("running experiment '" + experiment + "'");
    ExperimentOutput out = handler->second(ctx);

    Json body = {{"tool_version", std::string(kToolVersion)},
                 {"config_digest", digest},
                 {"experiment", experiment},
                 {"norm_tag", std::string(kNormTag)},
                 {"status", "ok"},
                 {"results", std::move(out.results)},
                 {"provenance", std::move(out.provenance)},
                 {"series", out.series_header.empty() ? Json(nullptr) : Json(out.series_header)}};
    std::string series = series_text(out);
    if (cache_file) cache_store(*cache_file, body, series, log);
    return finish(std::move(body), std::move(series), kExitOk, false, elapsed());
  } catch (const BudgetExceeded& e) {
    Json body = error_body(e.code(), e.detail(), digest, experiment);
    if (e.partial()) body["partial_bracket"] = json_io::write_bracket(*e.partial());
    return finish(std::move(body), {}, kExitBudget, false, elapsed());
  } catch (const Error& e) {
    return finish(error_body(e.code(), e.detail(), digest, experiment), {}, exit_code_for(e.code()), false, elapsed());
  } catch (const Json::exception& e) {
    return finish(error_body(ErrorCode::ValidationError, e.what(), digest, experiment), {}, kExitInvalid, false,
                  elapsed());
  }
}

RunOutcome execute_text(std::string_view text, const RunOptions& options, std::ostream& log) {
  Json config;
  try {
    config = Json::parse(text);
  } catch (const Json::parse_error& e) {
    Json body = error_body(ErrorCode::ParseError, e.what(), sha256_hex(text), "");
    return finish(std::move(body), {}, kExitInvalid, false, 0.0);
  }
  return execute(config, options, log);
}

int run(const std::string& config_path, const std::optional<std::string>& out_path, const RunOptions& options,
        std::ostream& log) {
  std::ifstream in(config_path);
  if (!in) {
    log << "error: cannot read config '" << config_path << "'\n";
    return kExitInvalid;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (options.experiment) {
    try {
      Json config = Json::parse(text);
      if (config.is_object()) {
        config["experiment"] = *options.experiment;
        text = config.dump();
      }
    } catch (const Json::parse_error&) {
    }
  }
  RunOutcome outcome = execute_text(text, options, log);

  // Output paths come from the flag first, then the config.
  std::optional<std::string> report_path = out_path;
  std::optional<std::string> series_path;
  try {
    const Json config = Json::parse(text);
    if (config.is_object() && config.contains("out") && config["out"].is_object()) {
      const Json& out = config["out"];
      if (!report_path && out.contains("report") && out["report"].is_string()) report_path = out["report"].get<std::string>();
      if (out.contains("series") && out["series"].is_string()) series_path = out["series"].get<std::string>();
    }
  } catch (const Json::exception&) {
  }
  if (!series_path && report_path) series_path = fs::path(*report_path).replace_extension(".csv").string();

  if (!outcome.series_csv.empty() && series_path) {
    std::ofstream series(*series_path);
    series << outcome.series_csv;
    if (!series) log << "warning: could not write series '" << *series_path << "'\n";
    outcome.report["meta"]["series_path"] = *series_path;
  }
  const std::string text_out = outcome.report.dump(2) + "\n";
  if (report_path) {
    std::ofstream report(*report_path);
    report << text_out;
    if (!report) {
      log << "error: cannot write report '" << *report_path << "'\n";
      return kExitInvalid;
    }
  } else {
    std::cout << text_out;
  }
  if (outcome.exit_code != kExitOk && outcome.report.contains("error")) {
    log << "error: " << outcome.report["error"]["message"].get<std::string>() << '\n';
  }
  return outcome.exit_code;
}

}  // namespace eopt
