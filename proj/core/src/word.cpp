#include "relgeo/word.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "relgeo/rat.hpp"

namespace relgeo {

namespace {

bool scan_reduced(const std::vector<Letter>& ls) {
  for (std::size_t i = 1; i < ls.size(); ++i)
    if (ls[i] == inv(ls[i - 1])) return false;
  return true;
}

}  // namespace

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (Letter l : letters_)
    if (l == 0) throw std::invalid_argument("Word: zero letter");
  reduced_ = scan_reduced(letters_);
}

bool operator<(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto& x = a.letters_;
  const auto& y = b.letters_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return letter_less(x[i], y[i]);
  }
  return false;
}

Word free_reduce(const Word& w) {
  if (w.reduced()) return w;
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w.letters()) {
    if (!out.empty() && out.back() == inv(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(std::move(out));
}

Word inverse(const Word& w) {
  std::vector<Letter> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = inv(w[w.size() - 1 - i]);
  return Word(std::move(out));
}

Word concat(const Word& a, const Word& b) {
  std::vector<Letter> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.letters().begin(), a.letters().end());
  out.insert(out.end(), b.letters().begin(), b.letters().end());
  return Word(std::move(out));
}

Word concat_reduced(const Word& a, const Word& b) { return free_reduce(concat(a, b)); }

Word rotate(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  std::vector<Letter> out;
  out.reserve(w.size());
  out.insert(out.end(), w.letters().begin() + k, w.letters().end());
  out.insert(out.end(), w.letters().begin(), w.letters().begin() + k);
  return Word(std::move(out));
}

bool is_cyclically_reduced(const Word& w) {
  if (!w.reduced()) return false;
  if (w.size() < 2) return true;
  return w[0] != inv(w[w.size() - 1]);
}

Word cyclic_reduce(const Word& w) {
  if (!w.reduced()) throw std::invalid_argument("cyclic_reduce: word not reduced");
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == inv(w[hi - 1])) { ++lo; --hi; }
  return Word(std::vector<Letter>(w.letters().begin() + lo, w.letters().begin() + hi));
}

Word cyclic_normalize(const Word& w) {
  Word c = cyclic_reduce(free_reduce(w));
  if (c.size() < 2) return c;
  Word best = c;
  for (std::size_t k = 1; k < c.size(); ++k) {
    Word r = rotate(c, k);
    if (r < best) best = r;
  }
  return best;
}

int Presentation::name_index(const std::string& name) const {
  for (int i = 0; i < generator_count; ++i)
    if (generator_names[i] == name) return i + 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Presentation text format
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  bool accept_keyword(const std::string& kw) {
    skip_ws();
    if (s.compare(pos, kw.size(), kw) == 0) {
      std::size_t end = pos + kw.size();
      if (end >= s.size() || !std::isalnum(static_cast<unsigned char>(s[end]))) {
        pos = end;
        return true;
      }
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected identifier", pos);
    return s.substr(start, pos - start);
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected integer", pos);
    return std::stoll(s.substr(start, pos - start));
  }
};

class WordParser {
 public:
  WordParser(Cursor& c, const std::vector<std::string>& names) : c_(c), names_(names) {}

  // word := factor+ ; stops at , ; } ] or eof
  std::vector<Letter> word() {
    std::vector<Letter> out;
    bool any = false;
    for (;;) {
      char p = c_.peek();
      if (p == ',' || p == ';' || p == '}' || p == ']' || p == ')' || p == '\0') break;
      auto f = factor();
      out.insert(out.end(), f.begin(), f.end());
      any = true;
    }
    if (!any) throw ParseError("expected word", c_.pos);
    return out;
  }

 private:
  std::vector<Letter> factor() {
    std::vector<Letter> base = atom();
    for (;;) {
      if (c_.accept('\'')) {
        base = invert(base);
      } else if (c_.accept('^')) {
        long long n = c_.integer();
        base = power(base, n);
      } else {
        break;
      }
    }
    return base;
  }

  std::vector<Letter> atom() {
    if (c_.accept('[')) {
      auto x = word();
      c_.expect(',');
      auto y = word();
      c_.expect(']');
      std::vector<Letter> out = x;
      append(out, y);
      append(out, invert(x));
      append(out, invert(y));
      return out;
    }
    if (c_.accept('(')) {
      auto x = word();
      c_.expect(')');
      return x;
    }
    std::size_t at = c_.pos;
    std::string run = c_.ident();
    return segment(run, at);
  }

  // Splits an identifier run into declared generator names (maximal munch
  // with backtracking, so single-letter alphabets behave as juxtaposition).
  std::vector<Letter> segment(const std::string& run, std::size_t at) {
    std::size_t n = run.size();
    std::vector<int> next(n + 1, -1);  // length of name consumed at i, -1 = unreachable
    std::vector<bool> ok(n + 1, false);
    ok[n] = true;
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t len = n - i; len >= 1; --len) {
        if (!ok[i + len]) continue;
        std::string cand = run.substr(i, len);
        bool known = false;
        for (const auto& nm : names_)
          if (nm == cand) { known = true; break; }
        if (known) { ok[i] = true; next[i] = static_cast<int>(len); break; }
      }
    }
    if (!ok[0]) throw ParseError("unknown generator in '" + run + "'", at);
    std::vector<Letter> out;
    std::size_t i = 0;
    while (i < n) {
      std::string nm = run.substr(i, next[i]);
      for (std::size_t g = 0; g < names_.size(); ++g)
        if (names_[g] == nm) { out.push_back(static_cast<Letter>(g + 1)); break; }
      i += next[i];
    }
    return out;
  }

  static std::vector<Letter> invert(const std::vector<Letter>& v) {
    std::vector<Letter> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = inv(v[v.size() - 1 - i]);
    return out;
  }
  static std::vector<Letter> power(const std::vector<Letter>& v, long long n) {
    std::vector<Letter> base = n < 0 ? invert(v) : v;
    long long reps = n < 0 ? -n : n;
    std::vector<Letter> out;
    for (long long k = 0; k < reps; ++k) out.insert(out.end(), base.begin(), base.end());
    return out;
  }
  static void append(std::vector<Letter>& a, const std::vector<Letter>& b) {
    a.insert(a.end(), b.begin(), b.end());
  }

  Cursor& c_;
  const std::vector<std::string>& names_;
};

}  // namespace

Presentation parse_presentation(const std::string& text) {
  Cursor c{text};
  Presentation p;

  if (!c.accept_keyword("gens")) throw ParseError("expected 'gens'", c.pos);
  for (;;) {
    std::size_t at = c.pos;
    std::string nm = c.ident();
    if (p.name_index(nm) != 0) throw ParseError("duplicate generator '" + nm + "'", at);
    p.generator_names.push_back(nm);
    if (!c.accept(',')) break;
  }
  p.generator_count = static_cast<int>(p.generator_names.size());
  c.expect(';');

  if (c.accept_keyword("rel")) {
    WordParser wp(c, p.generator_names);
    for (;;) {
      std::size_t at = c.pos;
      Word raw(wp.word());
      Word r = cyclic_reduce(free_reduce(raw));
      if (r.empty()) throw ParseError("empty relator after reduction", at);
      p.relators.push_back(r);
      if (!c.accept(',')) break;
    }
    c.expect(';');
  }

  if (c.accept_keyword("par")) {
    for (;;) {
      c.expect('{');
      std::vector<int> subset;
      for (;;) {
        std::size_t at = c.pos;
        std::string nm = c.ident();
        int idx = p.name_index(nm);
        if (idx == 0) throw ParseError("unknown generator '" + nm + "'", at);
        subset.push_back(idx);
        if (!c.accept(',')) break;
      }
      c.expect('}');
      std::sort(subset.begin(), subset.end());
      subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
      for (const auto& other : p.parabolics)
        if (other == subset) throw ParseError("duplicate parabolic subset", c.pos);
      p.parabolics.push_back(std::move(subset));
      if (!c.accept(',')) break;
    }
    c.accept(';');
  }

  if (!c.eof()) throw ParseError("trailing input", c.pos);
  return p;
}

std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    Letter l = w[i];
    os << names.at(gen_of(l) - 1);
    if (l < 0) os << '\'';
  }
  return os.str();
}

Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  Cursor c{text};
  WordParser wp(c, names);
  Word w(wp.word());
  if (!c.eof()) throw ParseError("trailing input after word", c.pos);
  return w;
}

std::string print_presentation(const Presentation& p) {
  std::ostringstream os;
  os << "gens ";
  for (int i = 0; i < p.generator_count; ++i) {
    if (i) os << ',';
    os << p.generator_names[i];
  }
  os << ';';
  if (!p.relators.empty()) {
    os << " rel ";
    for (std::size_t i = 0; i < p.relators.size(); ++i) {
      if (i) os << ", ";
      os << word_to_string(p.relators[i], p.generator_names);
    }
    os << ';';
  }
  if (!p.parabolics.empty()) {
    os << " par ";
    for (std::size_t i = 0; i < p.parabolics.size(); ++i) {
      if (i) os << ',';
      os << '{';
      for (std::size_t j = 0; j < p.parabolics[i].size(); ++j) {
        if (j) os << ',';
        os << p.generator_names[p.parabolics[i][j] - 1];
      }
      os << '}';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// WordSet
// ---------------------------------------------------------------------------

WordSet::WordSet(std::vector<Word> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
}

bool WordSet::contains(const Word& w) const {
  return std::binary_search(words_.begin(), words_.end(), w);
}

void WordSet::insert(const Word& w) {
  auto it = std::lower_bound(words_.begin(), words_.end(), w);
  if (it == words_.end() || *it != w) words_.insert(it, w);
  closed_ = false;
}

WordSet close_word_set(const WordSet& in) {
  std::vector<Word> out;
  for (const Word& w : in.words()) {
    if (!w.reduced()) throw std::invalid_argument("close_word_set: word not reduced");
    if (!is_cyclically_reduced(w))
      throw std::invalid_argument("close_word_set: word not cyclically reduced");
    Word wi = inverse(w);
    std::size_t n = std::max<std::size_t>(1, w.size());
    for (std::size_t k = 0; k < n; ++k) {
      out.push_back(rotate(w, k));
      out.push_back(rotate(wi, k));
    }
  }
  WordSet ws(std::move(out));
  ws.closed_ = true;
  return ws;
}

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(std::stoll(s));
  return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

}  // namespace relgeo
