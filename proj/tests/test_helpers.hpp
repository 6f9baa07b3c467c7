#pragma once

#include <random>
#include <vector>

#include "relgeo/parallel.hpp"
#include "relgeo/word.hpp"

namespace relgeo::testing {

// random freely reduced word
inline Word random_reduced_word(std::mt19937_64& rng, int len, int alphabet = 2) {
  std::vector<Letter> ls;
  for (int i = 0; i < len; ++i) {
    for (;;) {
      int g = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(2 * alphabet)));
      Letter cand = (g % 2 == 0) ? static_cast<Letter>(g / 2 + 1)
                                 : static_cast<Letter>(-(g / 2 + 1));
      if (!ls.empty() && cand == inv(ls.back())) continue;
      ls.push_back(cand);
      break;
    }
  }
  return Word(std::move(ls));
}

// random cyclically reduced word
inline Word random_cyclic_word(std::mt19937_64& rng, int len, int alphabet = 2) {
  for (;;) {
    Word w = random_reduced_word(rng, len, alphabet);
    if (is_cyclically_reduced(w)) return w;
  }
}

// enumerate all freely reduced words of exactly the given length
inline void for_each_reduced_word(int len, int alphabet,
                                  const std::function<void(const Word&)>& fn) {
  std::vector<Letter> ls;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(ls.size()) == len) {
      fn(Word(ls));
      return;
    }
    for (int k = 0; k < 2 * alphabet; ++k) {
      Letter cand = (k % 2 == 0) ? static_cast<Letter>(k / 2 + 1)
                                 : static_cast<Letter>(-(k / 2 + 1));
      if (!ls.empty() && cand == inv(ls.back())) continue;
      ls.push_back(cand);
      rec();
      ls.pop_back();
    }
  };
  rec();
}

}  // namespace relgeo::testing
