#include "relgeo/smallcancel.hpp"

#include <algorithm>
#include <climits>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "relgeo/parallel.hpp"

namespace relgeo {

namespace {

// ---------------------------------------------------------------------------
// Suffix automaton over Letter sequences
// ---------------------------------------------------------------------------

struct Sam {
  struct St {
    std::map<Letter, int> next;
    int link = -1;
    int len = 0;
    int min_src = INT_MAX;  // base length of the first source word containing the class
    int src_id = -1;
    long long cnt = 0;       // |endpos|, single-string builds only
    int min_end = INT_MAX;
    int max_end = -1;
    // "hot": the class's full-length member already violates lambda against
    // its own shortest source (len > lambda * min_src); hot_anc folds the
    // suffix-link ancestors in, so a streaming query can detect violations
    // against shorter corpus words in O(1) per position.
    bool hot = false;
    bool hot_anc = false;
  };
  std::vector<St> st;
  long long lam_num = 0, lam_den = 0;  // 0/0 = hot tracking disabled
  Sam() { st.emplace_back(); }

  bool compute_hot(int v) const {
    if (lam_den == 0) return false;
    return static_cast<long long>(st[v].len) * lam_den > lam_num * st[v].min_src;
  }
  void finish_state(int v) {
    st[v].hot = compute_hot(v);
    st[v].hot_anc = st[v].hot || (st[v].link >= 0 && st[st[v].link].hot_anc);
  }

  int new_state(int len, int src_len, int src_id) {
    st.emplace_back();
    st.back().len = len;
    st.back().min_src = src_len;
    st.back().src_id = src_id;
    return static_cast<int>(st.size()) - 1;
  }
  int clone_state(int q, int len) {
    st.push_back(st[q]);
    st.back().len = len;
    st.back().cnt = 0;
    st.back().min_end = INT_MAX;
    st.back().max_end = -1;
    return static_cast<int>(st.size()) - 1;
  }
  void mark_end(int v, int end_index) {
    st[v].cnt += 1;
    st[v].min_end = std::min(st[v].min_end, end_index);
    st[v].max_end = std::max(st[v].max_end, end_index);
  }

  // Generalized extend; safe for repeated strings. end_index < 0 disables
  // endpos bookkeeping.
  int extend(int last, Letter c, int src_len, int src_id, int end_index = -1) {
    auto it = st[last].next.find(c);
    if (it != st[last].next.end()) {
      int q = it->second;
      if (st[q].len == st[last].len + 1) {
        if (end_index >= 0) mark_end(q, end_index);
        return q;
      }
      int cl = clone_state(q, st[last].len + 1);
      finish_state(cl);  // link copied from q; a clone is never hotter than q
      int p = last;
      while (p != -1) {
        auto jt = st[p].next.find(c);
        if (jt == st[p].next.end() || jt->second != q) break;
        jt->second = cl;
        p = st[p].link;
      }
      st[q].link = cl;
      if (end_index >= 0) mark_end(cl, end_index);
      return cl;
    }
    int cur = new_state(st[last].len + 1, src_len, src_id);
    if (end_index >= 0) mark_end(cur, end_index);
    int p = last;
    while (p != -1 && !st[p].next.count(c)) {
      st[p].next[c] = cur;
      p = st[p].link;
    }
    if (p == -1) {
      st[cur].link = 0;
    } else {
      int q = st[p].next[c];
      if (st[q].len == st[p].len + 1) {
        st[cur].link = q;
      } else {
        int cl = clone_state(q, st[p].len + 1);
        finish_state(cl);
        while (p != -1) {
          auto jt = st[p].next.find(c);
          if (jt == st[p].next.end() || jt->second != q) break;
          jt->second = cl;
          p = st[p].link;
        }
        st[q].link = cl;
        st[cur].link = cl;
      }
    }
    finish_state(cur);
    return cur;
  }

  void add_string(const std::vector<Letter>& s, int src_len, int src_id,
                  bool track_endpos = false) {
    int last = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      last = extend(last, s[i], src_len, src_id, track_endpos ? static_cast<int>(i) : -1);
  }

  // Pulls endpos statistics up the link tree.
  void finalize_endpos() {
    std::vector<int> order(st.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return st[a].len > st[b].len; });
    for (int v : order) {
      int p = st[v].link;
      if (p < 0) continue;
      st[p].cnt += st[v].cnt;
      st[p].min_end = std::min(st[p].min_end, st[v].min_end);
      st[p].max_end = std::max(st[p].max_end, st[v].max_end);
    }
  }
};

std::vector<Letter> doubled(const Word& w) {
  std::vector<Letter> d;
  d.reserve(2 * w.size());
  d.insert(d.end(), w.letters().begin(), w.letters().end());
  d.insert(d.end(), w.letters().begin(), w.letters().end());
  return d;
}

// Longest subword occurring at two distinct cyclic positions of w.
int cyclic_repeat_len(const Word& w) {
  int n = static_cast<int>(w.size());
  if (n == 0) return 0;
  Sam sam;
  sam.add_string(doubled(w), n, 0, /*track_endpos=*/true);
  sam.finalize_endpos();
  int best = 0;
  for (std::size_t v = 1; v < sam.st.size(); ++v) {
    const auto& s = sam.st[v];
    int link_len = s.link >= 0 ? sam.st[s.link].len : 0;
    if (link_len >= n) continue;  // every member of the class exceeds one period
    bool repeated = s.cnt >= 3 || (s.cnt == 2 && s.max_end - s.min_end != n);
    if (repeated) best = std::max(best, std::min(s.len, n));
  }
  return best;
}

// Longest common subword of a rotation of a and a rotation of b, capped at
// min(|a|, |b|). Streams doubled(b) over an automaton of doubled(a).
int cyclic_lcs(const Word& a, const Word& b) {
  if (a.empty() || b.empty()) return 0;
  int cap = static_cast<int>(std::min(a.size(), b.size()));
  Sam sam;
  sam.add_string(doubled(a), static_cast<int>(a.size()), 0);
  int v = 0, l = 0, best = 0;
  for (Letter c : doubled(b)) {
    if (sam.st[v].next.count(c)) {
      v = sam.st[v].next[c];
      ++l;
    } else {
      while (v != -1 && !sam.st[v].next.count(c)) v = sam.st[v].link;
      if (v == -1) {
        v = 0;
        l = 0;
      } else {
        l = sam.st[v].len + 1;
        v = sam.st[v].next[c];
      }
    }
    best = std::max(best, std::min(l, cap));
  }
  return best;
}

struct Orbit {
  Word rep;        // an arbitrary member, cyclically reduced
  Word key;        // min(cyclic_normalize(rep), cyclic_normalize(rep^-1))
  int length = 0;
  int count = 0;   // closed-set words in this orbit
  bool self_inverse = false;  // rep^-1 lies in the rotation orbit of rep
};

Word orbit_key(const Word& w) {
  Word a = cyclic_normalize(w);
  Word b = cyclic_normalize(inverse(w));
  return b < a ? b : a;
}

std::vector<Orbit> collect_orbits(const WordSet& ws) {
  std::map<Word, Orbit> seen;
  for (const Word& w : ws.words()) {
    if (w.empty()) throw std::invalid_argument("C* set contains the empty word");
    if (!is_cyclically_reduced(w))
      throw std::invalid_argument("C* set contains a non-cyclically-reduced word");
    Word key = orbit_key(w);
    auto it = seen.find(key);
    if (it == seen.end()) {
      Orbit o;
      o.rep = w;
      o.key = key;
      o.length = static_cast<int>(w.size());
      o.count = 1;
      o.self_inverse = cyclic_normalize(w) == cyclic_normalize(inverse(w));
      seen.emplace(std::move(key), std::move(o));
    } else {
      it->second.count += 1;
    }
  }
  std::vector<Orbit> out;
  out.reserve(seen.size());
  for (auto& [k, o] : seen) out.push_back(std::move(o));
  std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.key < b.key;
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// C'(lambda)
// ---------------------------------------------------------------------------

CPrimeResult check_c_prime(const WordSet& relators, const Rat& lambda) {
  if (relators.empty()) throw std::invalid_argument("check_c_prime: empty relator set");
  std::vector<Word> reps;
  for (const Word& r : relators.words()) {
    Word c = cyclic_reduce(free_reduce(r));
    if (c.empty()) throw std::invalid_argument("check_c_prime: trivial relator");
    reps.push_back(c);
  }
  const int m = static_cast<int>(reps.size());
  std::vector<Word> keys(m);
  for (int i = 0; i < m; ++i) keys[i] = orbit_key(reps[i]);

  CPrimeResult res;
  res.report.pair_max.assign(m, std::vector<int>(m, 0));
  int worst_len = -1;

  auto record = [&](int i, int j, int piece) {
    res.report.pair_max[i][j] = std::max(res.report.pair_max[i][j], piece);
    res.report.pair_max[j][i] = res.report.pair_max[i][j];
    if (piece > worst_len) {
      worst_len = piece;
      res.report.worst = PieceReport::Witness{i, j, piece};
    }
  };

  for (int i = 0; i < m; ++i) {
    int diag = cyclic_repeat_len(reps[i]);
    // w vs w^-1 pairs; when the inverse lies in the rotation orbit of w the
    // distinct-pair content is already covered by the cyclic repeat.
    if (cyclic_normalize(reps[i]) != cyclic_normalize(inverse(reps[i])))
      diag = std::max(diag, cyclic_lcs(reps[i], inverse(reps[i])));
    record(i, i, diag);
    for (int j = i + 1; j < m; ++j) {
      int piece;
      if (keys[i] == keys[j]) {
        piece = static_cast<int>(std::min(reps[i].size(), reps[j].size()));  // duplicates
      } else {
        piece = std::max(cyclic_lcs(reps[i], reps[j]), cyclic_lcs(reps[i], inverse(reps[j])));
      }
      record(i, j, piece);
    }
  }

  bool ok = true;
  double measured = 0.0;
  for (int i = 0; i < m; ++i) {
    long long ni = static_cast<long long>(reps[i].size());
    int maxpiece = 0;
    for (int j = 0; j < m; ++j) maxpiece = std::max(maxpiece, res.report.pair_max[i][j]);
    measured = std::max(measured, static_cast<double>(maxpiece) / static_cast<double>(ni));
    for (int j = 0; j < m; ++j) {
      // piece contained in relators i and j must be < lambda * each length
      if (!lt_scaled(res.report.pair_max[i][j], lambda, ni)) ok = false;
    }
  }
  res.report.lambda_measured = measured;
  res.ok = ok;
  return res;
}

// ---------------------------------------------------------------------------
// C*(lambda) fast checker
// ---------------------------------------------------------------------------

namespace {

struct StreamHit {
  int effective = 0;  // capped common-subword length
  int host = -1;      // source orbit id
  std::size_t end = 0;
};

// Actual repeated subword of the cyclic word, given its known length.
Word cyclic_repeat_witness(const Word& w, int len) {
  std::size_t n = w.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      std::size_t k = 0;
      while (k < n && w[(p + k) % n] == w[(q + k) % n]) ++k;
      if (static_cast<int>(k) >= len) {
        std::vector<Letter> sub(static_cast<std::size_t>(len));
        for (int t = 0; t < len; ++t) sub[t] = w[(p + t) % n];
        return Word(std::move(sub));
      }
    }
  }
  return Word();
}

// Some common cyclic subword of a and b of the given length.
Word cyclic_lcs_witness(const Word& a, const Word& b, int len) {
  auto da = doubled(a), db = doubled(b);
  for (std::size_t i = 0; i + len <= da.size(); ++i) {
    for (std::size_t j = 0; j + len <= db.size(); ++j) {
      int k = 0;
      while (k < len && da[i + k] == db[j + k]) ++k;
      if (k == len)
        return Word(std::vector<Letter>(da.begin() + i, da.begin() + i + len));
    }
  }
  return Word();
}

// Streams text over the corpus automaton; returns the worst capped hit.
StreamHit stream_worst(const Sam& sam, const std::vector<Letter>& text, int base_len) {
  StreamHit hit;
  int v = 0, l = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    Letter c = text[i];
    if (sam.st[v].next.count(c)) {
      v = sam.st[v].next.at(c);
      ++l;
    } else {
      while (v != -1 && !sam.st[v].next.count(c)) v = sam.st[v].link;
      if (v == -1) {
        v = 0;
        l = 0;
        continue;
      }
      l = sam.st[v].len + 1;
      v = sam.st[v].next.at(c);
    }
    int eff = std::min({l, sam.st[v].min_src, base_len});
    if (eff > hit.effective) hit = StreamHit{eff, sam.st[v].src_id, i};
  }
  return hit;
}

// Incremental C* screen over orbits inserted in nondecreasing length order.
class CStarScreen {
 public:
  explicit CStarScreen(Rat lambda) : lambda_(lambda) {}

  // Within-orbit violation, if any: cyclic repeat or w-vs-w^-1 overlap.
  std::optional<CStarWitness> self_violation(const Word& rep) const {
    long long n = static_cast<long long>(rep.size());
    int l1 = cyclic_repeat_len(rep);
    if (!lt_scaled(l1, lambda_, n))  // violation iff l1 >= lambda*n
      return CStarWitness{cyclic_repeat_witness(rep, l1), rep, rep, 1};
    if (cyclic_normalize(rep) != cyclic_normalize(inverse(rep))) {
      int l2 = cyclic_lcs(rep, inverse(rep));
      if (!le_scaled(l2, lambda_, n))
        return CStarWitness{cyclic_lcs_witness(rep, inverse(rep),
                                               static_cast<int>(std::min<long long>(l2, n))),
                            rep, inverse(rep), 2};
    }
    return std::nullopt;
  }

  // Cross-orbit violation of rep against the inserted corpus (all corpus
  // lengths must be <= |rep|, which holds for ascending insertion).
  std::optional<CStarWitness> corpus_violation(const Word& rep) const {
    if (reps_.empty()) return std::nullopt;
    std::vector<Letter> text = doubled(rep);
    int v = 0, l = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      Letter c = text[i];
      if (sam_.st[v].next.count(c)) {
        v = sam_.st[v].next.at(c);
        ++l;
      } else {
        while (v != -1 && !sam_.st[v].next.count(c)) v = sam_.st[v].link;
        if (v == -1) {
          v = 0;
          l = 0;
          continue;
        }
        l = sam_.st[v].len + 1;
        v = sam_.st[v].next.at(c);
      }
      if (l == 0) continue;
      // current match: violation against the state's shortest source
      long long m = sam_.st[v].min_src;
      if (static_cast<long long>(l) * lambda_.den > lambda_.num * m) {
        int eff = static_cast<int>(std::min<long long>(l, m));
        std::vector<Letter> sub(text.begin() + (i + 1 - eff), text.begin() + i + 1);
        return CStarWitness{Word(std::move(sub)), rep, reps_[sam_.st[v].src_id], 2};
      }
      // shorter suffixes of the match against shorter sources
      int link = sam_.st[v].link;
      if (link >= 0 && sam_.st[link].hot_anc) {
        int a = link;
        while (a >= 0 && !sam_.st[a].hot) a = sam_.st[a].link;
        long long ma = sam_.st[a].min_src;
        int eff = static_cast<int>(std::min<long long>(sam_.st[a].len, ma));
        std::vector<Letter> sub(text.begin() + (i + 1 - eff), text.begin() + i + 1);
        return CStarWitness{Word(std::move(sub)), rep, reps_[sam_.st[a].src_id], 2};
      }
    }
    return std::nullopt;
  }

  void insert(const Word& rep) {
    int id = static_cast<int>(reps_.size());
    reps_.push_back(rep);
    int n = static_cast<int>(rep.size());
    sam_.lam_num = lambda_.num;
    sam_.lam_den = lambda_.den;
    sam_.add_string(doubled(rep), n, id);
    sam_.add_string(doubled(inverse(rep)), n, id);
  }

  const std::vector<Word>& reps() const { return reps_; }

 private:
  Rat lambda_;
  Sam sam_;
  std::vector<Word> reps_;
};

}  // namespace

CStarResult check_cstar(const WordSet& ws, const Rat& lambda) {
  CStarResult res;
  res.ok = true;
  if (ws.empty()) return res;
  std::vector<Orbit> orbits = collect_orbits(ws);
  CStarScreen screen(lambda);
  for (const Orbit& o : orbits) {
    if (auto w = screen.self_violation(o.rep)) {
      res.ok = false;
      res.witness = std::move(w);
      return res;
    }
    if (auto w = screen.corpus_violation(o.rep)) {
      res.ok = false;
      res.witness = std::move(w);
      return res;
    }
    screen.insert(o.rep);
  }
  return res;
}

CStarResult check_cstar_naive(const WordSet& ws, const Rat& lambda) {
  CStarResult res;
  res.ok = true;
  if (ws.empty()) return res;
  std::vector<Orbit> orbits = collect_orbits(ws);

  // longest common subword of two explicit letter sequences, O(n*m)
  auto lcs_linear = [](const std::vector<Letter>& a, const std::vector<Letter>& b) {
    std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    int best = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      for (std::size_t j = 1; j <= b.size(); ++j) {
        cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
        best = std::max(best, cur[j]);
      }
      std::swap(prev, cur);
    }
    return best;
  };
  auto capped_cyclic_lcs = [&](const Word& a, const Word& b) {
    int v = lcs_linear(doubled(a), doubled(b));
    return std::min<int>(v, static_cast<int>(std::min(a.size(), b.size())));
  };

  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const Word& w = orbits[i].rep;
    long long n = static_cast<long long>(w.size());
    // condition (1): subword at two distinct cyclic positions
    int l1 = 0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      for (std::size_t q = p + 1; q < w.size(); ++q) {
        std::size_t k = 0;
        while (k < w.size() && w[(p + k) % w.size()] == w[(q + k) % w.size()]) ++k;
        l1 = std::max<int>(l1, static_cast<int>(k));
      }
    }
    if (!lt_scaled(l1, lambda, n)) {
      res.ok = false;
      res.witness = CStarWitness{cyclic_repeat_witness(w, l1), w, w, 1};
      return res;
    }
    if (cyclic_normalize(w) != cyclic_normalize(inverse(w))) {
      int l2 = capped_cyclic_lcs(w, inverse(w));
      if (!le_scaled(l2, lambda, n)) {
        res.ok = false;
        res.witness = CStarWitness{cyclic_lcs_witness(w, inverse(w), l2), w, inverse(w), 2};
        return res;
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Word& v = orbits[j].rep;
      long long m = std::min<long long>(n, static_cast<long long>(v.size()));
      int l = std::max(capped_cyclic_lcs(w, v), capped_cyclic_lcs(w, inverse(v)));
      if (!le_scaled(l, lambda, m)) {
        res.ok = false;
        Word sub = cyclic_lcs_witness(w, v, l);
        if (sub.empty()) sub = cyclic_lcs_witness(w, inverse(v), l);
        res.witness = CStarWitness{std::move(sub), w, v, 2};
        return res;
      }
    }
  }
  return res;
}

CStarProfile cstar_profile(const WordSet& ws) {
  CStarProfile prof;
  if (ws.empty()) return prof;
  for (const Word& w : ws.words()) prof.kappa_n[static_cast<int>(w.size())] += 1;

  std::vector<Orbit> orbits = collect_orbits(ws);
  // Process lengths descending; after absorbing all orbits of length >= n the
  // running max ratio is exactly lambda_n for the family {|w| >= n}.
  std::sort(orbits.begin(), orbits.end(), [](const Orbit& a, const Orbit& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.key < b.key;
  });
  Sam sam;
  std::vector<int> lengths;  // per source id
  double running = 0.0;
  std::map<int, double> at_length;  // length -> lambda for family >= length
  std::size_t i = 0;
  while (i < orbits.size()) {
    int len = orbits[i].length;
    std::size_t j = i;
    for (; j < orbits.size() && orbits[j].length == len; ++j) {
      const Word& rep = orbits[j].rep;
      long long n = rep.size();
      int l1 = cyclic_repeat_len(rep);
      running = std::max(running, static_cast<double>(l1) / static_cast<double>(n));
      if (cyclic_normalize(rep) != cyclic_normalize(inverse(rep))) {
        int l2 = cyclic_lcs(rep, inverse(rep));
        running = std::max(running, static_cast<double>(l2) / static_cast<double>(n));
      }
      if (!lengths.empty()) {
        StreamHit hit = stream_worst(sam, doubled(rep), static_cast<int>(n));
        if (hit.host >= 0)
          running = std::max(running, static_cast<double>(hit.effective) / static_cast<double>(n));
      }
      int id = static_cast<int>(lengths.size());
      lengths.push_back(static_cast<int>(n));
      sam.add_string(doubled(rep), static_cast<int>(n), id);
      sam.add_string(doubled(inverse(rep)), static_cast<int>(n), id);
    }
    at_length[len] = running;
    i = j;
  }

  int max_len = orbits.front().length;
  double cur = 0.0;
  // at_length is keyed by breakpoints; fill densely from n = max down to 1
  for (int n = max_len; n >= 1; --n) {
    auto it = at_length.find(n);
    if (it != at_length.end()) cur = it->second;
    prof.lambda_n[n] = cur;
  }
  return prof;
}

std::string CStarProfile::to_csv() const {
  std::ostringstream os;
  os << "n,lambda_n,kappa_n\n";
  for (const auto& [n, l] : lambda_n) {
    auto it = kappa_n.find(n);
    os << n << ',' << l << ',' << (it == kappa_n.end() ? 0 : it->second) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

GenerateResult generate_cstar_words(const Rat& lambda, const std::vector<int>& lengths_in,
                                    int per_length, std::uint64_t seed, int alphabet,
                                    int retry_budget) {
  if (alphabet < 2) throw std::invalid_argument("generate_cstar_words: alphabet < 2");
  if (lambda.num <= 0 || lambda >= Rat(1))
    throw std::invalid_argument("generate_cstar_words: lambda must be in (0,1)");
  std::vector<int> lengths = lengths_in;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  for (int l : lengths)
    if (l <= 0) throw std::invalid_argument("generate_cstar_words: nonpositive length");

  GenerateResult out;
  if (per_length <= 0) {
    out.words = close_word_set(WordSet{});
    return out;
  }

  CStarScreen screen(lambda);
  std::vector<Word> accepted;
  for (int len : lengths) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(len));
    int got = 0;
    int tries = 0;
    while (got < per_length && tries < retry_budget) {
      ++tries;
      // random cyclically reduced word
      std::vector<Letter> ls(len);
      for (int i = 0; i < len; ++i) {
        for (;;) {
          int g = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(2 * alphabet)));
          Letter cand = (g % 2 == 0) ? static_cast<Letter>(g / 2 + 1)
                                     : static_cast<Letter>(-(g / 2 + 1));
          if (i > 0 && cand == inv(ls[i - 1])) continue;
          if (i == len - 1 && len > 1 && cand == inv(ls[0])) continue;
          ls[i] = cand;
          break;
        }
      }
      Word cand(std::move(ls));
      if (screen.self_violation(cand)) continue;
      if (screen.corpus_violation(cand)) continue;
      screen.insert(cand);
      accepted.push_back(std::move(cand));
      ++got;
    }
    if (got < per_length) out.shortfalls.push_back({len, per_length, got});
  }

  out.words = close_word_set(WordSet(std::move(accepted)));
  CStarResult verify = check_cstar(out.words, lambda);
  if (!verify.ok)
    throw std::logic_error("generate_cstar_words: self-verification failed");
  return out;
}

// ---------------------------------------------------------------------------
// Dehn's algorithm
// ---------------------------------------------------------------------------

DehnReducer::DehnReducer(const WordSet& relators) {
  CPrimeResult pre = check_c_prime(relators, Rat(1, 6));
  if (!pre.ok) throw DehnPreconditionError(std::move(pre.report));
  closed_ = close_word_set(relators).words();

  trie_.emplace_back();
  for (int idx = 0; idx < static_cast<int>(closed_.size()); ++idx) {
    const Word& r = closed_[idx];
    int node = 0;
    for (Letter l : r.letters()) {
      auto it = trie_[node].next.find(l);
      if (it == trie_[node].next.end()) {
        trie_.emplace_back();
        int fresh = static_cast<int>(trie_.size()) - 1;
        trie_[node].next[l] = fresh;
        node = fresh;
        trie_[node].min_relator_len = static_cast<int>(r.size());
        trie_[node].min_relator_idx = idx;
      } else {
        node = it->second;
        int rl = static_cast<int>(r.size());
        if (rl < trie_[node].min_relator_len ||
            (rl == trie_[node].min_relator_len && idx < trie_[node].min_relator_idx)) {
          trie_[node].min_relator_len = rl;
          trie_[node].min_relator_idx = idx;
        }
      }
    }
  }
}

std::pair<int, int> DehnReducer::best_match(const std::vector<Letter>& w,
                                            std::size_t pos) const {
  int node = 0;
  int best_len = 0, best_idx = -1;
  for (std::size_t i = pos; i < w.size(); ++i) {
    auto it = trie_[node].next.find(w[i]);
    if (it == trie_[node].next.end()) break;
    node = it->second;
    int depth = static_cast<int>(i - pos + 1);
    if (2 * depth > trie_[node].min_relator_len) {
      best_len = depth;
      best_idx = trie_[node].min_relator_idx;
    }
  }
  return {best_len, best_idx};
}

Word DehnReducer::reduce(Word w) const {
  w = free_reduce(w);
  for (;;) {
    const auto& ls = w.letters();
    int match_len = 0, match_idx = -1;
    std::size_t match_pos = 0;
    for (std::size_t pos = 0; pos < ls.size(); ++pos) {
      auto [len, idx] = best_match(ls, pos);
      if (len > 0) {
        match_len = len;
        match_idx = idx;
        match_pos = pos;
        break;  // leftmost position, longest match there
      }
    }
    if (match_len == 0) return w;
    const Word& r = closed_[match_idx];
    // r = u s with u the matched prefix, so u = s^-1 in the group
    std::vector<Letter> next;
    next.reserve(ls.size() - match_len + r.size() - match_len);
    next.insert(next.end(), ls.begin(), ls.begin() + match_pos);
    for (std::size_t i = r.size(); i > static_cast<std::size_t>(match_len); --i)
      next.push_back(inv(r[i - 1]));
    next.insert(next.end(), ls.begin() + match_pos + match_len, ls.end());
    w = free_reduce(Word(std::move(next)));
  }
}

Word dehn_reduce(const Word& w, const WordSet& relators) {
  return DehnReducer(relators).reduce(w);
}

std::vector<Word> orbit_representatives(const WordSet& ws) {
  std::vector<Word> out;
  for (const Orbit& o : collect_orbits(ws)) out.push_back(o.rep);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string word_set_to_text(const WordSet& ws, const std::vector<std::string>& names) {
  std::ostringstream os;
  for (const Word& w : ws.words()) os << word_to_string(w, names) << '\n';
  return os.str();
}

WordSet word_set_from_text(const std::string& text, const std::vector<std::string>& names) {
  std::vector<Word> words;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) continue;
    words.push_back(parse_word(line, names));
  }
  return WordSet(std::move(words));
}

}  // namespace relgeo
