#include "eopt/subadd_opt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace eopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using MaybeRational = std::optional<Rational>;

// ------------------------------------------------------------ graph helpers

struct GraphPotential {
  std::shared_ptr<const TransitionGraph> graph;
  std::vector<Rational> weights;  // per edge
};

GraphPotential on_graph(const ScalarPotential& f, int memory) {
  const int m = std::max({memory, f.memory(), 2});
  auto graph = std::make_shared<const TransitionGraph>(f.space(), m);
  return {graph, f.lift(m).values()};
}

// Longest walk weights ending at each node (empty walk = 0) under `weights`
// restricted to `mask`. Requires every masked cycle to have weight <= 0.
std::vector<Rational> walk_potentials(const TransitionGraph& g, const std::vector<char>& mask,
                                      const std::vector<Rational>& weights) {
  std::vector<Rational> pi(g.node_count(), Rational(0));
  for (std::size_t round = 0; round <= g.node_count(); ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!mask[e]) continue;
      const auto u = static_cast<std::size_t>(g.edge_from(e));
      const auto v = static_cast<std::size_t>(g.edge_to(e));
      Rational candidate = pi[u] + weights[e];
      if (candidate > pi[v]) {
        pi[v] = std::move(candidate);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return pi;
}

// Tarjan on the masked subgraph; returns component id per node.
std::vector<int> strong_components(const TransitionGraph& g, const std::vector<char>& mask) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> out(n);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (mask[e]) out[static_cast<std::size_t>(g.edge_from(e))].push_back(g.edge_to(e));
  }
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<int> comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  int next_comp = 0;
  std::function<void(int)> visit = [&](int v) {
    const auto vi = static_cast<std::size_t>(v);
    index[vi] = low[vi] = counter++;
    stack.push_back(v);
    on_stack[vi] = 1;
    for (int w : out[vi]) {
      const auto wi = static_cast<std::size_t>(w);
      if (index[wi] < 0) {
        visit(w);
        low[vi] = std::min(low[vi], low[wi]);
      } else if (on_stack[wi]) {
        low[vi] = std::min(low[vi], index[wi]);
      }
    }
    if (low[vi] == index[vi]) {
      while (true) {
        const int w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = 0;
        comp[static_cast<std::size_t>(w)] = next_comp;
        if (w == v) break;
      }
      ++next_comp;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(static_cast<int>(v));
  }
  return comp;
}

Rational cycle_sum(const GraphPotential& gp, const Cycle& c) {
  Rational sum = 0;
  for (int e : gp.graph->cycle_edges(c)) sum += gp.weights[static_cast<std::size_t>(e)];
  return sum;
}

// Exact U_n of a Birkhoff potential: best n-edge walk, divided by n.
Rational exact_word_max(const GraphPotential& gp, int n) {
  const TransitionGraph& g = *gp.graph;
  std::vector<MaybeRational> d(g.node_count(), Rational(0));
  for (int step = 0; step < n; ++step) {
    std::vector<MaybeRational> next(g.node_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& from = d[static_cast<std::size_t>(g.edge_from(e))];
      if (!from) continue;
      Rational candidate = *from + gp.weights[e];
      auto& slot = next[static_cast<std::size_t>(g.edge_to(e))];
      if (!slot || candidate > *slot) slot = std::move(candidate);
    }
    d = std::move(next);
  }
  MaybeRational best;
  for (const auto& v : d) {
    if (v && (!best || *v > *best)) best = v;
  }
  return *best / n;
}

// max over edges of w(e) + pi(from) - pi(to), where pi are the walk
// potentials of w - beta. The cohomologous potential is <= beta everywhere
// and reaches it on critical edges, so its one-step word max is beta.
Rational coboundary_upper(const GraphPotential& gp, const Rational& beta) {
  const TransitionGraph& g = *gp.graph;
  std::vector<Rational> shifted;
  shifted.reserve(gp.weights.size());
  for (const auto& w : gp.weights) shifted.push_back(w - beta);
  const std::vector<char> all(g.edge_count(), 1);
  const auto pi = walk_potentials(g, all, shifted);
  MaybeRational best;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    Rational v = gp.weights[e] + pi[static_cast<std::size_t>(g.edge_from(e))] -
                 pi[static_cast<std::size_t>(g.edge_to(e))];
    if (!best || v > *best) best = std::move(v);
  }
  return *best;
}

// ------------------------------------------------------- matrix word tree

std::vector<int> cycle_windows(const WordIndex& index, const Cycle& c) {
  const auto m = static_cast<std::size_t>(index.length());
  std::vector<int> out;
  out.reserve(c.period());
  std::vector<int> window(m);
  for (std::size_t i = 0; i < c.period(); ++i) {
    for (std::size_t j = 0; j < m; ++j) window[j] = c.letter(i + j);
    out.push_back(index.find(window));
  }
  return out;
}

double max_step_log_norm(const MatrixCocycle& a) {
  double best = kNegInf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    best = std::max(best, a.log_scale_double(i) + std::log(op_norm(a.base(i))));
  }
  return best;
}

struct TreeNode {
  int window;
  int steps;
  double value;
  Matrix product;  // unit-norm
};

// Exhaustive search for max log||A(n, .)|| over admissible words. Subtrees
// whose optimistic bound falls below `threshold` are skipped; `threshold`
// must be attained by some depth-n word, so the maximum is exact. The
// threshold is fixed before the search starts, so the visited set and node
// count do not depend on the thread schedule.
class WordTreeSearch {
 public:
  WordTreeSearch(const MatrixCocycle& a, int n, double threshold, const SearchOptions& opts)
      : a_(a),
        n_(n),
        k_(a.space().alphabet_size()),
        threshold_(threshold - 1e-9 * std::max(1.0, std::abs(threshold))),
        max_step_(max_step_log_norm(a)),
        cap_(opts.word_cap),
        threads_(std::max(1, opts.threads)) {}

  double run() {
    std::vector<TreeNode> frontier;
    std::uint64_t nodes = 0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const Matrix& base = a_.base(i);
      const double norm = op_norm(base);
      ++nodes;
      TreeNode node{static_cast<int>(i), 1, a_.log_scale_double(i) + std::log(norm), base / norm};
      if (!pruned(node)) frontier.push_back(std::move(node));
    }
    const std::size_t target = static_cast<std::size_t>(threads_) * 16;
    while (!frontier.empty() && frontier.front().steps < n_ && frontier.size() < target) {
      std::vector<TreeNode> next;
      for (const TreeNode& node : frontier) {
        for (int c = 0; c < k_; ++c) {
          auto child = extend(node, c);
          if (!child) continue;
          ++nodes;
          if (!pruned(*child)) next.push_back(std::move(*child));
        }
      }
      frontier = std::move(next);
      if (nodes > cap_) over_budget();
    }
    total_.store(nodes);

    std::vector<double> best(frontier.size(), kNegInf);
    std::atomic<std::size_t> next_item{0};
    auto worker = [&] {
      while (!abort_.load(std::memory_order_relaxed)) {
        const std::size_t item = next_item.fetch_add(1);
        if (item >= frontier.size()) break;
        std::uint64_t local = 0;
        double local_best = kNegInf;
        descend(frontier[item], local, local_best);
        flush(local);
        best[item] = local_best;
      }
    };
    if (threads_ == 1 || frontier.size() < 2) {
      worker();
    } else {
      std::vector<std::thread> pool;
      const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads_), frontier.size());
      for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (abort_.load() || total_.load() > cap_) over_budget();
    nodes_ = total_.load();
    return *std::max_element(best.begin(), best.end());
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  const MatrixCocycle& a_;
  int n_;
  int k_;
  double threshold_;
  double max_step_;
  std::uint64_t cap_;
  int threads_;
  std::atomic<std::uint64_t> total_{0};
  std::atomic<bool> abort_{false};
  std::uint64_t nodes_ = 0;

  [[noreturn]] void over_budget() const {
    throw BudgetExceeded("word tree at depth " + std::to_string(n_) + " exceeds the cap of " +
                         std::to_string(cap_) + " nodes");
  }

  bool pruned(const TreeNode& node) const {
    return node.value + (n_ - node.steps) * max_step_ < threshold_;
  }

  std::optional<TreeNode> extend(const TreeNode& node, int letter) const {
    const int j = a_.index().successor(static_cast<std::size_t>(node.window), letter);
    if (j < 0) return std::nullopt;
    const auto ju = static_cast<std::size_t>(j);
    Matrix product = a_.base(ju) * node.product;
    const double norm = op_norm(product);
    product /= norm;
    return TreeNode{j, node.steps + 1, node.value + a_.log_scale_double(ju) + std::log(norm), std::move(product)};
  }

  void flush(std::uint64_t& local) {
    if (local == 0) return;
    if (total_.fetch_add(local) + local > cap_) abort_.store(true);
    local = 0;
  }

  void descend(const TreeNode& node, std::uint64_t& local, double& local_best) {
    if (node.steps == n_) {
      local_best = std::max(local_best, node.value);
      return;
    }
    if (local >= 4096) {
      flush(local);
      if (abort_.load(std::memory_order_relaxed)) return;
    }
    for (int c = 0; c < k_; ++c) {
      auto child = extend(node, c);
      if (!child) continue;
      ++local;
      if (!pruned(*child)) descend(*child, local, local_best);
    }
  }
};

double word_max_matrix(const MatrixCocycle& a, int n, const Cycle& witness, const SearchOptions& opts) {
  const Word w = witness.unroll(static_cast<std::size_t>(n + a.memory() - 1));
  const double threshold = log_norm_of_product(a, w);
  WordTreeSearch search(a, n, threshold, opts);
  return search.run() / n;
}

double matrix_cycle_exponent(const MatrixCocycle& a, const Cycle& c) {
  Rational scale = 0;
  Matrix product = Matrix::Identity(a.dimension(), a.dimension());
  double log_acc = 0.0;
  for (int i : cycle_windows(a.index(), c)) {
    const auto iu = static_cast<std::size_t>(i);
    scale += a.log_scale(iu);
    product = a.base(iu) * product;
    const double norm = op_norm(product);
    product /= norm;
    log_acc += std::log(norm);
  }
  const auto p = static_cast<double>(c.period());
  const double rho = spectral_radius(product);
  return to_double(scale / static_cast<long>(c.period())) + (log_acc + std::log(rho)) / p;
}

std::vector<Cycle> cycles_within_budget(const ShiftSpace& s, int p_max, const SearchOptions& opts) {
  // Cheap count first: total admissible cyclic words bounds the Lyndon count.
  double estimate = 0.0;
  for (int p = 1; p <= p_max; ++p) {
    estimate += std::pow(static_cast<double>(s.alphabet_size()), p) / p;
  }
  if (estimate > 4.0 * static_cast<double>(opts.word_cap)) {
    auto cycles = std::vector<Cycle>{};
    throw BudgetExceeded("cycle enumeration up to period " + std::to_string(p_max) + " exceeds the cap");
  }
  auto cycles = enumerate_cycles(s, p_max);
  if (cycles.size() > opts.word_cap) {
    throw BudgetExceeded("cycle enumeration up to period " + std::to_string(p_max) + " exceeds the cap");
  }
  return cycles;
}

struct Exponents {
  std::vector<Cycle> cycles;
  std::vector<double> values;
  std::vector<Rational> exact;  // conformal case only
};

Exponents all_cycle_exponents(const MatrixCocycle& a, int p_max, const SearchOptions& opts) {
  Exponents out;
  out.cycles = cycles_within_budget(a.space(), p_max, opts);
  out.values.reserve(out.cycles.size());
  if (const auto& f = a.conformal_potential()) {
    const GraphPotential gp = on_graph(*f, f->memory());
    for (const Cycle& c : out.cycles) {
      out.exact.push_back(cycle_sum(gp, c) / static_cast<long>(c.period()));
      out.values.push_back(to_double(out.exact.back()));
    }
  } else {
    for (const Cycle& c : out.cycles) out.values.push_back(matrix_cycle_exponent(a, c));
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------ critical graph

bool CriticalGraph::contains_edge(int e) const { return std::binary_search(edges.begin(), edges.end(), e); }

bool CriticalGraph::contains_cycle(const Cycle& c) const {
  for (int e : graph->cycle_edges(c)) {
    if (e < 0 || !contains_edge(e)) return false;
  }
  return true;
}

bool CriticalGraph::is_single_cycle() const {
  if (components.size() != 1) return false;
  if (edges.size() != components.front().size()) return false;
  std::vector<int> out_degree(graph->node_count(), 0);
  for (int e : edges) ++out_degree[static_cast<std::size_t>(graph->edge_from(e))];
  for (int v : components.front()) {
    if (out_degree[static_cast<std::size_t>(v)] != 1) return false;
  }
  return true;
}

std::optional<Rational> max_cycle_mean(const TransitionGraph& g, const std::vector<char>& mask,
                                       const std::vector<Rational>& weights) {
  // Karp with a virtual source joined to every node by a zero edge:
  // beta = max_v min_k (D_V(v) - D_k(v)) / (V - k).
  const std::size_t n = g.node_count();
  std::vector<std::vector<MaybeRational>> d(n + 1, std::vector<MaybeRational>(n));
  for (auto& v : d[0]) v = Rational(0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!mask[e]) continue;
      const auto& from = d[k - 1][static_cast<std::size_t>(g.edge_from(e))];
      if (!from) continue;
      Rational candidate = *from + weights[e];
      auto& slot = d[k][static_cast<std::size_t>(g.edge_to(e))];
      if (!slot || candidate > *slot) slot = std::move(candidate);
    }
  }
  MaybeRational best;
  for (std::size_t v = 0; v < n; ++v) {
    if (!d[n][v]) continue;
    MaybeRational worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (!d[k][v]) continue;
      Rational ratio = (*d[n][v] - *d[k][v]) / static_cast<long>(n - k);
      if (!worst || ratio < *worst) worst = std::move(ratio);
    }
    if (worst && (!best || *worst > *best)) best = std::move(worst);
  }
  return best;
}

Rational karp_beta(const ScalarPotential& f) {
  const GraphPotential gp = on_graph(f, f.memory());
  const std::vector<char> all(gp.graph->edge_count(), 1);
  return *max_cycle_mean(*gp.graph, all, gp.weights);
}

CriticalGraph critical_graph(const ScalarPotential& f, int memory) {
  const GraphPotential gp = on_graph(f, memory);
  const TransitionGraph& g = *gp.graph;
  const std::vector<char> all(g.edge_count(), 1);
  const Rational beta = *max_cycle_mean(g, all, gp.weights);

  std::vector<Rational> shifted;
  shifted.reserve(gp.weights.size());
  for (const auto& w : gp.weights) shifted.push_back(w - beta);
  const auto pi = walk_potentials(g, all, shifted);

  // Mean-beta cycles consist of tight edges; a tight edge lies on one iff
  // its endpoints share a strong component of the tight subgraph.
  std::vector<char> tight(g.edge_count(), 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    tight[e] = pi[static_cast<std::size_t>(g.edge_from(e))] + shifted[e] == pi[static_cast<std::size_t>(g.edge_to(e))];
  }
  const auto comp = strong_components(g, tight);

  CriticalGraph out{beta, gp.graph, {}, {}};
  std::vector<char> in_critical(g.node_count(), 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto u = static_cast<std::size_t>(g.edge_from(e));
    const auto v = static_cast<std::size_t>(g.edge_to(e));
    if (tight[e] && comp[u] == comp[v]) {
      out.edges.push_back(static_cast<int>(e));
      in_critical[u] = 1;
    }
  }
  std::vector<std::vector<int>> by_comp(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (in_critical[v]) by_comp[static_cast<std::size_t>(comp[v])].push_back(static_cast<int>(v));
  }
  for (auto& nodes : by_comp) {
    if (!nodes.empty()) out.components.push_back(std::move(nodes));
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

MaximizingCycles maximizing_cycles(const ScalarPotential& f, int p_max) {
  const CriticalGraph cg = critical_graph(f);
  MaximizingCycles out{{}, cg.is_single_cycle()};
  for (const Cycle& c : enumerate_cycles(f.space(), p_max)) {
    if (cg.contains_cycle(c)) out.cycles.push_back(c);
  }
  return out;
}

std::pair<Rational, Rational> relative_range(const ScalarPotential& f, const ScalarPotential& gamma) {
  if (!(f.space() == gamma.space())) {
    throw Error(ErrorCode::ShapeMismatch, "potentials live on different shift spaces");
  }
  const int m = std::max({f.memory(), gamma.memory(), 2});
  const CriticalGraph cg = critical_graph(f, m);
  const TransitionGraph& g = *cg.graph;
  std::vector<char> mask(g.edge_count(), 0);
  for (int e : cg.edges) mask[static_cast<std::size_t>(e)] = 1;
  const std::vector<Rational> weights = gamma.lift(m).values();
  std::vector<Rational> negated;
  negated.reserve(weights.size());
  for (const auto& w : weights) negated.push_back(-w);
  const Rational hi = *max_cycle_mean(g, mask, weights);
  const Rational lo = -*max_cycle_mean(g, mask, negated);
  return {lo, hi};
}

Rational relative_beta(const ScalarPotential& f, const ScalarPotential& gamma) {
  return relative_range(f, gamma).second;
}

// ------------------------------------------------------------------- bounds

double cycle_exponent(const MatrixCocycle& a, const Cycle& c) {
  if (const auto& f = a.conformal_potential()) {
    const GraphPotential gp = on_graph(*f, f->memory());
    return to_double(cycle_sum(gp, c) / static_cast<long>(c.period()));
  }
  return matrix_cycle_exponent(a, c);
}

CycleBound lower_bound_cycles(const MatrixCocycle& a, int p_max, const SearchOptions& opts) {
  const Exponents ex = all_cycle_exponents(a, p_max, opts);
  CycleBound out{kNegInf, std::nullopt};
  for (std::size_t i = 0; i < ex.cycles.size(); ++i) {
    if (ex.values[i] > out.value) {
      out.value = ex.values[i];
      out.witness = ex.cycles[i];
    }
  }
  return out;
}

double upper_bound(const MatrixCocycle& a, int n, const SearchOptions& opts) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  }
  if (const auto& f = a.conformal_potential()) {
    return to_double(exact_word_max(on_graph(*f, f->memory()), n));
  }
  const CycleBound seed = lower_bound_cycles(a, std::min(n, 6), opts);
  if (!seed.witness) {
    // No short cycle to seed the threshold: search without pruning.
    WordTreeSearch search(a, n, kNegInf, opts);
    return search.run() / n;
  }
  return word_max_matrix(a, n, *seed.witness, opts);
}

BetaBracket beta_bracket(const MatrixCocycle& a, const SearchOptions& opts) {
  if (opts.n_max < 1 || opts.p_max < 1 || !(opts.gap_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need n_max >= 1, p_max >= 1 and gap_tol > 0");
  }
  BetaBracket out{kNegInf, std::numeric_limits<double>::infinity(), 0, 0, std::nullopt,
                  std::string(kNormTag), "word-max", std::nullopt, {}};

  const auto& conformal = a.conformal_potential();
  std::optional<GraphPotential> gp;
  Rational exact_lower;
  bool have_exact_lower = false;
  Rational exact_upper;
  if (conformal) {
    gp = on_graph(*conformal, conformal->memory());
    const std::vector<char> all(gp->graph->edge_count(), 1);
    const Rational beta = *max_cycle_mean(*gp->graph, all, gp->weights);
    out.exact_beta = beta;
    exact_upper = coboundary_upper(*gp, beta);
    out.upper = to_double(exact_upper);
    out.upper_source = "coboundary";
  }

  std::vector<Cycle> cycles;
  try {
    cycles = cycles_within_budget(a.space(), opts.p_max, opts);
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(e.detail(), out);
  }
  std::size_t next_cycle = 0;

  const int k_max = std::max(opts.n_max, opts.p_max);
  for (int k = 1; k <= k_max; ++k) {
    if (k <= opts.p_max) {
      for (; next_cycle < cycles.size() && static_cast<int>(cycles[next_cycle].period()) == k; ++next_cycle) {
        const Cycle& c = cycles[next_cycle];
        if (gp) {
          Rational mean = cycle_sum(*gp, c) / static_cast<long>(k);
          if (!have_exact_lower || mean > exact_lower) {
            exact_lower = std::move(mean);
            have_exact_lower = true;
            out.lower = to_double(exact_lower);
            out.witness = c;
          }
        } else {
          const double value = matrix_cycle_exponent(a, c);
          if (value > out.lower) {
            out.lower = value;
            out.witness = c;
          }
        }
      }
      out.p_used = k;
      out.series.push_back({"lower", k, out.lower});
    }
    if (k <= opts.n_max) {
      double u;
      try {
        if (gp) {
          const Rational exact = exact_word_max(*gp, k);
          if (exact < exact_upper) {
            exact_upper = exact;
            out.upper_source = "word-max";
          }
          u = to_double(exact);
        } else if (out.witness) {
          u = word_max_matrix(a, k, *out.witness, opts);
        } else {
          WordTreeSearch search(a, k, kNegInf, opts);
          u = search.run() / k;
        }
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(e.detail(), out);
      }
      out.n_used = k;
      out.series.push_back({"upper", k, u});
      if (gp) {
        out.upper = to_double(exact_upper);
      } else {
        out.upper = std::min(out.upper, u);
      }
    }
    if (out.upper - out.lower <= opts.gap_tol) break;
  }
  return out;
}

OptReport matrix_candidates(const MatrixCocycle& a, const SearchOptions& opts, double slack) {
  if (slack < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "slack must be >= 0");
  }
  OptReport report{beta_bracket(a, opts), {}, false, slack};
  BetaBracket& b = report.bracket;
  const Exponents ex = all_cycle_exponents(a, opts.p_max, opts);
  // Every cycle exponent is a lower bound, so the full sweep may raise it.
  for (std::size_t i = 0; i < ex.cycles.size(); ++i) {
    if (ex.values[i] > b.lower) {
      b.lower = ex.values[i];
      b.witness = ex.cycles[i];
    }
  }
  b.p_used = opts.p_max;
  for (std::size_t i = 0; i < ex.cycles.size(); ++i) {
    if (ex.values[i] >= b.lower - slack) {
      report.candidates.push_back({ex.cycles[i], ex.values[i]});
    }
  }
  report.unique_at_resolution = report.candidates.size() == 1 && b.upper - b.lower <= slack;
  return report;
}

}  // namespace eopt
