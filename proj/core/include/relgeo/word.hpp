#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relgeo {

// A letter is a signed 1-based generator index: +i is the i-th generator,
// -i its inverse. All inner loops compare plain integers.
using Letter = std::int32_t;

inline Letter inv(Letter l) { return -l; }
inline int gen_of(Letter l) { return l < 0 ? -l : l; }

// Letter order used everywhere: a < a' < b < b' < ...
inline int letter_key(Letter l) { return 2 * gen_of(l) + (l < 0 ? 1 : 0); }
inline bool letter_less(Letter a, Letter b) { return letter_key(a) < letter_key(b); }

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  bool reduced() const { return reduced_; }

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  // shortlex with the letter order above
  friend bool operator<(const Word& a, const Word& b);

 private:
  std::vector<Letter> letters_;
  bool reduced_ = false;
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w.letters()) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l));
      h *= 1099511628211ull;
    }
    return h;
  }
};

Word free_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);           // raw concatenation
Word concat_reduced(const Word& a, const Word& b);   // concatenation + free reduction
Word rotate(const Word& w, std::size_t k);           // left rotation by k
Word cyclic_reduce(const Word& w);                   // requires reduced input
// Least rotation of the cyclic reduction; conjugate rotations get equal output.
Word cyclic_normalize(const Word& w);
bool is_cyclically_reduced(const Word& w);

struct Presentation {
  int generator_count = 0;
  std::vector<std::string> generator_names;     // size == generator_count
  std::vector<Word> relators;                   // cyclically reduced
  std::vector<std::vector<int>> parabolics;     // sorted 1-based generator indices

  int name_index(const std::string& name) const;  // 1-based, 0 if unknown
};

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Text format: `gens a,b; rel a b a' b'; par {a},{b}` where a word is a
// juxtaposition of names with `'` for inverse, `^n` for powers, `[x,y]` for
// commutators and `(...)` for grouping. parse(print(p)) == p.
Presentation parse_presentation(const std::string& text);
std::string print_presentation(const Presentation& p);

std::string word_to_string(const Word& w, const std::vector<std::string>& names);
// Parses a standalone word over the given generator names.
Word parse_word(const std::string& text, const std::vector<std::string>& names);

class WordSet {
 public:
  WordSet() = default;
  explicit WordSet(std::vector<Word> words);  // sorts + dedupes

  const std::vector<Word>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool closed() const { return closed_; }
  bool contains(const Word& w) const;
  void insert(const Word& w);

  friend WordSet close_word_set(const WordSet& in);

 private:
  std::vector<Word> words_;  // sorted shortlex, unique
  bool closed_ = false;
};

// Smallest superset closed under cyclic rotation and inversion. Input words
// must be cyclically reduced (rotations of merely reduced words need not be
// reduced).
WordSet close_word_set(const WordSet& in);

}  // namespace relgeo
