#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eopt {

/// A finite word over the alphabet {0, ..., k-1}.
///
/// Text form writes one character per letter: 0-9 then a-z, so alphabets up
/// to 36 letters round-trip through strings.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> l) : letters(std::move(l)) {}

  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return letters.size(); }
  bool empty() const noexcept { return letters.empty(); }
  int operator[](std::size_t i) const { return letters[i]; }
  int back() const { return letters.back(); }

  Word slice(std::size_t pos, std::size_t len) const;

  auto operator<=>(const Word&) const = default;
};

std::string to_string(const Word& w);

/// One-sided subshift of finite type given by a transition relation.
class ShiftSpace {
 public:
  /// Validates: k >= 1 and every letter lies on some admissible cycle.
  ShiftSpace(int k, const std::vector<std::vector<bool>>& allowed);

  static ShiftSpace full(int k);

  int alphabet_size() const noexcept { return k_; }
  bool allowed(int a, int b) const { return allowed_[static_cast<std::size_t>(a * k_ + b)] != 0; }
  bool is_full() const noexcept;

  bool is_admissible(const Word& w) const;
  /// Admissible and the wrap-around pair last -> first is allowed.
  bool is_cyclically_admissible(const Word& w) const;

  std::vector<std::vector<bool>> transitions() const;

  bool operator==(const ShiftSpace&) const = default;

 private:
  int k_;
  std::vector<char> allowed_;
};

ShiftSpace new_shift(int k, const std::vector<std::vector<bool>>& allowed);

/// Primitive admissible cycle stored in its lexicographically least rotation.
class Cycle {
 public:
  /// Canonicalizes the rotation. Throws InvalidArgument for a word that is a
  /// proper power, Inadmissible when the word does not close up.
  static Cycle from_word(const ShiftSpace& s, const Word& w);
  static Cycle parse(const ShiftSpace& s, std::string_view text) {
    return from_word(s, Word::parse(text));
  }

  const Word& word() const noexcept { return word_; }
  std::size_t period() const noexcept { return word_.size(); }
  int letter(std::size_t i) const { return word_[i % word_.size()]; }

  /// The first n symbols of the periodic sequence.
  Word unroll(std::size_t n) const;

  auto operator<=>(const Cycle& o) const {
    if (auto c = period() <=> o.period(); c != 0) return c;
    return word_ <=> o.word_;
  }
  bool operator==(const Cycle&) const = default;

 private:
  explicit Cycle(Word w) : word_(std::move(w)) {}
  Word word_;

  friend std::vector<Cycle> enumerate_cycles(const ShiftSpace& s, int p_max);
};

std::string to_string(const Cycle& c);

/// Eventually periodic point x = preamble . period^infinity.
struct EventuallyPeriodic {
  Word preamble;
  Word period;

  /// Throws Inadmissible when the sequence is not a point of the shift.
  void validate(const ShiftSpace& s) const;
  int letter(std::size_t i) const;
  Word prefix(std::size_t n) const;
};

/// All admissible words of length n in lexicographic order.
std::vector<Word> admissible_words(const ShiftSpace& s, int n);

/// All primitive cycles with period <= p_max, ordered by (period, word).
std::vector<Cycle> enumerate_cycles(const ShiftSpace& s, int p_max);

/// Shortest admissible word of length >= 2 from letter a to letter b,
/// lexicographically least among the shortest. Throws Unreachable.
Word connect(const ShiftSpace& s, int a, int b);

/// d(x, y) = 2^-(first index of disagreement), 0 for equal points.
double point_distance(const EventuallyPeriodic& x, const EventuallyPeriodic& y);
/// Same metric on the longest common compared prefix of two finite words.
double point_distance(const Word& x, const Word& y);

/// Dense index over the admissible words of one fixed length.
class WordIndex {
 public:
  WordIndex(const ShiftSpace& s, int length);

  int length() const noexcept { return length_; }
  std::size_t size() const noexcept { return words_.size(); }
  const Word& word(std::size_t i) const { return words_[i]; }
  const std::vector<Word>& words() const noexcept { return words_; }

  /// Index of an admissible word of this length, or -1.
  int find(std::span<const int> letters) const;
  int find(const Word& w) const { return find(std::span<const int>(w.letters)); }

  /// Index of word(i) shifted left by one and extended by `letter`, or -1.
  int successor(std::size_t i, int letter) const {
    return succ_[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(letter)];
  }

 private:
  int k_;
  int length_;
  std::vector<Word> words_;
  std::unordered_map<std::uint64_t, int> lookup_;
  std::vector<int> succ_;

  std::uint64_t code(std::span<const int> letters) const;
};

/// The transition graph of memory-m words: nodes are admissible (m-1)-words,
/// edges are admissible m-words joining prefix to suffix. Memory 1 data is
/// lifted to memory 2 so that edges stay in bijection with windows.
class TransitionGraph {
 public:
  TransitionGraph(const ShiftSpace& s, int memory);

  int memory() const noexcept { return edges_.length(); }
  const WordIndex& nodes() const noexcept { return nodes_; }
  const WordIndex& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  int edge_from(std::size_t e) const { return from_[e]; }
  int edge_to(std::size_t e) const { return to_[e]; }

  /// Edge indices of the cyclic windows of c, in order.
  std::vector<int> cycle_edges(const Cycle& c) const;

 private:
  WordIndex nodes_;
  WordIndex edges_;
  std::vector<int> from_;
  std::vector<int> to_;
};

}  // namespace eopt
