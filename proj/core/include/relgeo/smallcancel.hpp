#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relgeo/rat.hpp"
#include "relgeo/word.hpp"

namespace relgeo {

// ---------------------------------------------------------------------------
// C'(lambda) pieces
// ---------------------------------------------------------------------------

struct PieceReport {
  // pair_max[i][j]: longest piece between (the symmetrized orbits of) input
  // relators i and j; the diagonal additionally covers repeated subwords
  // inside one orbit member.
  std::vector<std::vector<int>> pair_max;
  double lambda_measured = 0.0;
  struct Witness {
    int relator_a = -1, relator_b = -1;
    int piece_len = 0;
  };
  std::optional<Witness> worst;
};

struct CPrimeResult {
  bool ok = false;
  PieceReport report;
};

// True iff every piece of the rotation/inversion closure of `relators` is
// shorter than lambda times the length of each relator containing it.
// Throws std::invalid_argument on an empty relator set.
CPrimeResult check_c_prime(const WordSet& relators, const Rat& lambda);

// ---------------------------------------------------------------------------
// C*(lambda)
// ---------------------------------------------------------------------------
//
// The conditions are checked at cyclic-orbit granularity: W splits into
// orbits under rotation and inversion, condition (2) constrains common
// subwords of words from distinct orbits, and within one orbit condition (1)
// forbids a subword of length >= lambda*|w| from occurring at two distinct
// cyclic positions (plus the analogous bound for subwords shared by w and
// w^-1). Rotations of one word always share long subwords, so the per-word
// reading would reject every closed set.

struct CStarWitness {
  Word subword;
  Word host_a, host_b;  // orbit representatives; equal hosts = within-orbit case
  int condition = 0;    // 1 = repeat within a word, 2 = overlap across words
};

struct CStarResult {
  bool ok = false;
  std::optional<CStarWitness> witness;
};

CStarResult check_cstar(const WordSet& closed, const Rat& lambda);
// Reference scanner: pairwise DP over all closed-set word pairs; same
// semantics as check_cstar, kept as the independent oracle.
CStarResult check_cstar_naive(const WordSet& closed, const Rat& lambda);

struct CStarProfile {
  // lambda_n: sup over the sub-family {w : |w| >= n} of the binding piece
  // ratios; the family satisfies C*(l) for every l > lambda_n.
  std::map<int, double> lambda_n;
  std::map<int, int> kappa_n;  // number of closed-set words of each exact length
  std::string to_csv() const;  // columns n,lambda_n,kappa_n
};

CStarProfile cstar_profile(const WordSet& closed);

// ---------------------------------------------------------------------------
// Word-set generation
// ---------------------------------------------------------------------------

struct GenerateShortfall {
  int length = 0;
  int requested = 0;
  int obtained = 0;
};

struct GenerateResult {
  WordSet words;  // closed
  std::vector<GenerateShortfall> shortfalls;
  bool complete() const { return shortfalls.empty(); }
};

// Rejection-samples cyclically reduced words per requested length over a
// 2*alphabet signed alphabet, screening each candidate against the already
// accepted corpus, and re-verifies the final set with check_cstar (a failed
// re-verification is a logic error and throws). Deterministic per seed.
GenerateResult generate_cstar_words(const Rat& lambda, const std::vector<int>& lengths,
                                    int per_length, std::uint64_t seed, int alphabet = 2,
                                    int retry_budget = 400);

// ---------------------------------------------------------------------------
// Dehn's algorithm
// ---------------------------------------------------------------------------

struct DehnPreconditionError : std::runtime_error {
  PieceReport report;
  explicit DehnPreconditionError(PieceReport r)
      : std::runtime_error("relators do not satisfy C'(1/6)"), report(std::move(r)) {}
};

// Greedy majority-relator rewriting. Valid as a word-problem solver whenever
// the relators satisfy C'(1/6); the constructor verifies that and refuses
// otherwise, carrying the measured piece report.
class DehnReducer {
 public:
  explicit DehnReducer(const WordSet& relators);

  Word reduce(Word w) const;
  bool trivial(const Word& w) const { return reduce(w).empty(); }
  const std::vector<Word>& closed_relators() const { return closed_; }

 private:
  struct TrieNode {
    std::map<Letter, int> next;
    int min_relator_len = 0;   // shortest closed relator with this prefix
    int min_relator_idx = -1;  // deterministic pick among them
  };
  // Longest match of w[pos..] along the trie that covers more than half of
  // some closed relator; returns match length and relator index, or len 0.
  std::pair<int, int> best_match(const std::vector<Letter>& w, std::size_t pos) const;

  std::vector<Word> closed_;
  std::vector<TrieNode> trie_;
};

Word dehn_reduce(const Word& w, const WordSet& relators);

// One representative per rotation/inversion orbit, sorted by (length, key).
std::vector<Word> orbit_representatives(const WordSet& ws);

// Serialization: one word per line in the parser syntax.
std::string word_set_to_text(const WordSet& ws, const std::vector<std::string>& names);
WordSet word_set_from_text(const std::string& text, const std::vector<std::string>& names);

}  // namespace relgeo
