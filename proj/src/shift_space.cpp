#include "eopt/shift_space.hpp"

#include "eopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace eopt {

namespace {

constexpr std::string_view kLetterChars = "0123456789abcdefghijklmnopqrstuvwxyz";

int parse_letter(char c) {
  const auto pos = kLetterChars.find(c);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, std::string("bad letter '") + c + "'");
  }
  return static_cast<int>(pos);
}

// Start index of the lexicographically least rotation.
std::size_t least_rotation(const Word& w) {
  const std::size_t n = w.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const int a = w[(r + i) % n];
      const int b = w[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  return best;
}

bool is_primitive(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) {
      periodic = w[i] == w[i - d];
    }
    if (periodic) return false;
  }
  return true;
}

}  // namespace

Word Word::parse(std::string_view text) {
  Word w;
  w.letters.reserve(text.size());
  for (char c : text) {
    w.letters.push_back(parse_letter(c));
  }
  return w;
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  return Word(std::vector<int>(letters.begin() + static_cast<std::ptrdiff_t>(pos),
                               letters.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

std::string to_string(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (int l : w.letters) {
    if (l < 0 || l >= static_cast<int>(kLetterChars.size())) {
      throw Error(ErrorCode::InvalidArgument, "letter has no single-character form");
    }
    out.push_back(kLetterChars[static_cast<std::size_t>(l)]);
  }
  return out;
}

ShiftSpace::ShiftSpace(int k, const std::vector<std::vector<bool>>& allowed) : k_(k) {
  if (k <= 0) {
    throw Error(ErrorCode::EmptyAlphabet, "alphabet size must be >= 1");
  }
  if (allowed.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::ValidationError, "transition relation must be k x k");
  }
  allowed_.assign(static_cast<std::size_t>(k * k), 0);
  for (int a = 0; a < k; ++a) {
    if (allowed[static_cast<std::size_t>(a)].size() != static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::ValidationError, "transition relation must be k x k");
    }
    for (int b = 0; b < k; ++b) {
      allowed_[static_cast<std::size_t>(a * k + b)] = allowed[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ? 1 : 0;
    }
  }
  // Letter a lies on a cycle iff a reaches itself in >= 1 step.
  for (int a = 0; a < k; ++a) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    std::deque<int> queue;
    for (int b = 0; b < k; ++b) {
      if (this->allowed(a, b)) {
        seen[static_cast<std::size_t>(b)] = 1;
        queue.push_back(b);
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < k; ++v) {
        if (this->allowed(u, v) && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
        }
      }
    }
    if (!seen[static_cast<std::size_t>(a)]) {
      throw Error(ErrorCode::NoCycle, "letter " + std::to_string(a) + " lies on no admissible cycle");
    }
  }
}

ShiftSpace ShiftSpace::full(int k) {
  if (k <= 0) {
    throw Error(ErrorCode::EmptyAlphabet, "alphabet size must be >= 1");
  }
  return ShiftSpace(k, std::vector<std::vector<bool>>(static_cast<std::size_t>(k),
                                                      std::vector<bool>(static_cast<std::size_t>(k), true)));
}

bool ShiftSpace::is_full() const noexcept {
  return std::all_of(allowed_.begin(), allowed_.end(), [](char c) { return c != 0; });
}

bool ShiftSpace::is_admissible(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= k_) return false;
    if (i > 0 && !allowed(w[i - 1], w[i])) return false;
  }
  return true;
}

bool ShiftSpace::is_cyclically_admissible(const Word& w) const {
  return !w.empty() && is_admissible(w) && allowed(w.back(), w[0]);
}

std::vector<std::vector<bool>> ShiftSpace::transitions() const {
  std::vector<std::vector<bool>> out(static_cast<std::size_t>(k_), std::vector<bool>(static_cast<std::size_t>(k_)));
  for (int a = 0; a < k_; ++a) {
    for (int b = 0; b < k_; ++b) {
      out[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = allowed(a, b);
    }
  }
  return out;
}

ShiftSpace new_shift(int k, const std::vector<std::vector<bool>>& allowed) {
  return ShiftSpace(k, allowed);
}

Cycle Cycle::from_word(const ShiftSpace& s, const Word& w) {
  if (w.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty cycle word");
  }
  if (!s.is_cyclically_admissible(w)) {
    throw Error(ErrorCode::Inadmissible, "cycle '" + to_string(w) + "' is not cyclically admissible");
  }
  if (!is_primitive(w)) {
    throw Error(ErrorCode::InvalidArgument, "cycle '" + to_string(w) + "' is a proper power");
  }
  const std::size_t r = least_rotation(w);
  Word canonical;
  canonical.letters.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    canonical.letters.push_back(w[(r + i) % w.size()]);
  }
  return Cycle(std::move(canonical));
}

Word Cycle::unroll(std::size_t n) const {
  Word out;
  out.letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.letters.push_back(letter(i));
  }
  return out;
}

std::string to_string(const Cycle& c) { return to_string(c.word()); }

void EventuallyPeriodic::validate(const ShiftSpace& s) const {
  if (period.empty()) {
    throw Error(ErrorCode::InvalidArgument, "point needs a nonempty periodic part");
  }
  if (!s.is_admissible(preamble) || !s.is_cyclically_admissible(period) ||
      (!preamble.empty() && !s.allowed(preamble.back(), period[0]))) {
    throw Error(ErrorCode::Inadmissible,
                "point '" + to_string(preamble) + "(" + to_string(period) + ")' is not admissible");
  }
}

int EventuallyPeriodic::letter(std::size_t i) const {
  if (i < preamble.size()) return preamble[i];
  return period[(i - preamble.size()) % period.size()];
}

Word EventuallyPeriodic::prefix(std::size_t n) const {
  Word out;
  out.letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.letters.push_back(letter(i));
  }
  return out;
}

std::vector<Word> admissible_words(const ShiftSpace& s, int n) {
  std::vector<Word> out;
  if (n <= 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  const int k = s.alphabet_size();
  std::vector<int> current;
  current.reserve(static_cast<std::size_t>(n));
  // DFS in lexicographic order.
  auto recurse = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == n) {
      out.emplace_back(current);
      return;
    }
    for (int c = 0; c < k; ++c) {
      if (!current.empty() && !s.allowed(current.back(), c)) continue;
      current.push_back(c);
      self(self);
      current.pop_back();
    }
  };
  recurse(recurse);
  return out;
}

std::vector<Cycle> enumerate_cycles(const ShiftSpace& s, int p_max) {
  std::vector<Cycle> out;
  if (p_max <= 0) return out;
  const int k = s.alphabet_size();
  const auto n = static_cast<std::size_t>(p_max);
  std::vector<int> a(n, 0);
  // FKM generation of prenecklaces with admissibility pruning; the prefix
  // a[0..len) is Lyndon exactly when its Lyndon period p equals len.
  auto rec = [&](auto&& self, std::size_t len, std::size_t p) -> void {
    if (p == len && s.allowed(a[len - 1], a[0])) {
      out.push_back(Cycle(Word(std::vector<int>(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len)))));
    }
    if (len == n) return;
    for (int c = a[len - p]; c < k; ++c) {
      if (!s.allowed(a[len - 1], c)) continue;
      a[len] = c;
      self(self, len + 1, c == a[len - p] ? p : len + 1);
    }
  };
  for (int c = 0; c < k; ++c) {
    a[0] = c;
    rec(rec, 1, 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Word connect(const ShiftSpace& s, int a, int b) {
  const int k = s.alphabet_size();
  if (a < 0 || a >= k || b < 0 || b >= k) {
    throw Error(ErrorCode::InvalidArgument, "letter out of range");
  }
  constexpr int kInf = std::numeric_limits<int>::max();
  // dist[v] = fewest steps from v to b (0 at b), by reverse BFS.
  std::vector<int> dist(static_cast<std::size_t>(k), kInf);
  std::deque<int> queue{b};
  dist[static_cast<std::size_t>(b)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u = 0; u < k; ++u) {
      if (s.allowed(u, v) && dist[static_cast<std::size_t>(u)] == kInf) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(u);
      }
    }
  }
  int first_step = kInf;
  for (int c = 0; c < k; ++c) {
    if (s.allowed(a, c) && dist[static_cast<std::size_t>(c)] != kInf) {
      first_step = std::min(first_step, dist[static_cast<std::size_t>(c)]);
    }
  }
  if (first_step == kInf) {
    throw Error(ErrorCode::Unreachable, "no admissible path from " + std::to_string(a) + " to " + std::to_string(b));
  }
  Word w(std::vector<int>{a});
  int remaining = first_step;
  int current = a;
  // Greedy least letter that stays on a shortest path.
  while (true) {
    for (int c = 0; c < k; ++c) {
      if (s.allowed(current, c) && dist[static_cast<std::size_t>(c)] == remaining) {
        current = c;
        break;
      }
    }
    w.letters.push_back(current);
    if (remaining == 0) break;
    --remaining;
  }
  return w;
}

double point_distance(const EventuallyPeriodic& x, const EventuallyPeriodic& y) {
  // Two eventually periodic sequences that agree this far agree forever.
  const std::size_t horizon =
      std::max(x.preamble.size(), y.preamble.size()) + std::lcm(x.period.size(), y.period.size());
  for (std::size_t i = 0; i < horizon; ++i) {
    if (x.letter(i) != y.letter(i)) {
      return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 1074)));
    }
  }
  return 0.0;
}

double point_distance(const Word& x, const Word& y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != y[i]) {
      return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 1074)));
    }
  }
  return 0.0;
}

WordIndex::WordIndex(const ShiftSpace& s, int length) : k_(s.alphabet_size()), length_(length) {
  if (length < 1) {
    throw Error(ErrorCode::InvalidArgument, "word index needs length >= 1");
  }
  const double span = std::pow(static_cast<double>(k_), length);
  if (span > 9.0e18) {
    throw Error(ErrorCode::BudgetExceeded, "word length too large to index");
  }
  words_ = admissible_words(s, length);
  lookup_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    lookup_.emplace(code(words_[i].letters), static_cast<int>(i));
  }
  succ_.assign(words_.size() * static_cast<std::size_t>(k_), -1);
  std::vector<int> buf(static_cast<std::size_t>(length));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const Word& w = words_[i];
    for (int c = 0; c < k_; ++c) {
      if (!s.allowed(w.back(), c)) continue;
      std::copy(w.letters.begin() + 1, w.letters.end(), buf.begin());
      buf.back() = c;
      succ_[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c)] = find(buf);
    }
  }
}

std::uint64_t WordIndex::code(std::span<const int> letters) const {
  std::uint64_t c = 0;
  for (int l : letters) {
    c = c * static_cast<std::uint64_t>(k_) + static_cast<std::uint64_t>(l);
  }
  return c;
}

int WordIndex::find(std::span<const int> letters) const {
  if (static_cast<int>(letters.size()) != length_) return -1;
  for (int l : letters) {
    if (l < 0 || l >= k_) return -1;
  }
  const auto it = lookup_.find(code(letters));
  return it == lookup_.end() ? -1 : it->second;
}

TransitionGraph::TransitionGraph(const ShiftSpace& s, int memory)
    : nodes_(s, std::max(memory, 2) - 1), edges_(s, std::max(memory, 2)) {
  from_.resize(edges_.size());
  to_.resize(edges_.size());
  const auto m = static_cast<std::size_t>(edges_.length());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Word& w = edges_.word(e);
    from_[e] = nodes_.find(std::span<const int>(w.letters.data(), m - 1));
    to_[e] = nodes_.find(std::span<const int>(w.letters.data() + 1, m - 1));
  }
}

std::vector<int> TransitionGraph::cycle_edges(const Cycle& c) const {
  const auto m = static_cast<std::size_t>(edges_.length());
  std::vector<int> out;
  out.reserve(c.period());
  std::vector<int> window(m);
  for (std::size_t i = 0; i < c.period(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      window[j] = c.letter(i + j);
    }
    out.push_back(edges_.find(window));
  }
  return out;
}

}  // namespace eopt
