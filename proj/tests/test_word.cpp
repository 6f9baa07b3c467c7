#include <doctest.h>

#include <random>

#include "relgeo/word.hpp"
#include "test_helpers.hpp"

using namespace relgeo;
using relgeo::testing::random_cyclic_word;
using relgeo::testing::random_reduced_word;

namespace {
Word w(std::vector<Letter> ls) { return Word(std::move(ls)); }
}  // namespace

TEST_CASE("free_reduce cancels adjacent inverse pairs") {
  CHECK(free_reduce(w({1, -1, 2})) == w({2}));
  CHECK(free_reduce(Word()) == Word());
  CHECK(free_reduce(w({1, 2, -2, -1})) == Word());
}

TEST_CASE("free_reduce is idempotent and length-nonincreasing on random words") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::vector<Letter> ls;
    for (int i = 0; i < 14; ++i) {
      int g = static_cast<int>(uniform_index(rng, 4));
      ls.push_back(g % 2 == 0 ? static_cast<Letter>(g / 2 + 1)
                              : static_cast<Letter>(-(g / 2 + 1)));
    }
    Word raw(ls);
    Word r = free_reduce(raw);
    CHECK(r.size() <= raw.size());
    CHECK(free_reduce(r) == r);
    CHECK(r.reduced());
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] != inv(r[i - 1]));
  }
}

TEST_CASE("cyclic_normalize canonical examples") {
  CHECK(cyclic_normalize(w({2, 1, -2})) == w({1}));
  CHECK(cyclic_normalize(w({2, 1})) == w({1, 2}));
  CHECK(cyclic_normalize(w({1, 2, 1, 2})) == w({1, 2, 1, 2}));
}

TEST_CASE("cyclic_normalize is rotation invariant") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    int len = 1 + static_cast<int>(uniform_index(rng, 12));
    Word c = random_cyclic_word(rng, len);
    Word canon = cyclic_normalize(c);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(cyclic_normalize(rotate(c, k)) == canon);
  }
}

TEST_CASE("parse_presentation round trip and examples") {
  Presentation p = parse_presentation("gens a,b; rel [a,b]; par {a}");
  CHECK(p.generator_count == 2);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0] == w({1, 2, -1, -2}));
  REQUIRE(p.parabolics.size() == 1);
  CHECK(p.parabolics[0] == std::vector<int>{1});

  // parse -> print -> parse identity
  std::string printed = print_presentation(p);
  Presentation q = parse_presentation(printed);
  CHECK(q.generator_names == p.generator_names);
  CHECK(q.relators == p.relators);
  CHECK(q.parabolics == p.parabolics);
  CHECK(print_presentation(q) == printed);
}

TEST_CASE("parser keeps relators verbatim and reports errors") {
  CHECK_THROWS_AS(parse_presentation("gens a,b; rel ;"), ParseError);
  CHECK_THROWS_AS(parse_presentation("gens a,b; rel c;"), ParseError);
  CHECK_THROWS_AS(parse_presentation("gens a,b; rel a a';"), ParseError);  // empty after reduction

  Presentation p = parse_presentation("gens a,b,c,d; rel [a,b],[c,d]; par {a,b},{c,d}");
  CHECK(p.relators.size() == 2);
  CHECK(p.relators[1] == w({3, 4, -3, -4}));
  CHECK(p.parabolics.size() == 2);

  Presentation f = parse_presentation("gens a,b;");
  CHECK(f.relators.empty());

  CHECK(parse_word("a^3", {"a", "b"}) == w({1, 1, 1}));
  CHECK(parse_word("(ab)^-1", {"a", "b"}) == w({-2, -1}));
  CHECK(parse_word("b a b'", {"a", "b"}) == w({2, 1, -2}));
}

TEST_CASE("close_word_set enumerates rotation and inversion orbits") {
  WordSet s(std::vector<Word>{w({1, 2})});
  WordSet c = close_word_set(s);
  CHECK(c.size() == 4);
  CHECK(c.contains(w({1, 2})));
  CHECK(c.contains(w({2, 1})));
  CHECK(c.contains(w({-2, -1})));
  CHECK(c.contains(w({-1, -2})));
  CHECK(c.closed());

  WordSet single(std::vector<Word>{w({1})});
  WordSet cs = close_word_set(single);
  CHECK(cs.size() == 2);

  CHECK(close_word_set(WordSet{}).empty());
}

TEST_CASE("close_word_set is idempotent and orbit sizes divide the total") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    std::vector<Word> in;
    for (int i = 0; i < 3; ++i)
      in.push_back(random_cyclic_word(rng, 2 + static_cast<int>(uniform_index(rng, 6))));
    WordSet c = close_word_set(WordSet(in));
    WordSet cc = close_word_set(c);
    CHECK(cc.words() == c.words());
  }
}
