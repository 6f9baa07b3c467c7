#include "relgeo/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace relgeo {

bool GroupOracle::in_parabolic(const Word& w, int parabolic_index) const {
  const Presentation& p = presentation();
  if (parabolic_index < 0 || parabolic_index >= static_cast<int>(p.parabolics.size()))
    throw std::out_of_range("in_parabolic: bad parabolic index");
  Word nf = normal_form(w);
  const auto& gens = p.parabolics[parabolic_index];
  for (Letter l : nf.letters())
    if (!std::binary_search(gens.begin(), gens.end(), gen_of(l))) return false;
  return true;
}

int GroupOracle::distance(const Word& u, const Word& v) const {
  return static_cast<int>(normal_form(concat(inverse(u), v)).size());
}

namespace {

class FreeOracle final : public GroupOracle {
 public:
  explicit FreeOracle(Presentation p) : p_(std::move(p)) {}
  Word normal_form(const Word& w) const override { return free_reduce(w); }
  const Presentation& presentation() const override { return p_; }

  int distance(const Word& u, const Word& v) const override {
    std::size_t k = 0;
    while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
    return static_cast<int>(u.size() + v.size() - 2 * k);
  }

  std::optional<Word> coset_key(const Word& canonical, int parabolic) const override {
    const auto& gens = p_.parabolics.at(parabolic);
    std::size_t end = canonical.size();
    while (end > 0 &&
           std::binary_search(gens.begin(), gens.end(), gen_of(canonical[end - 1])))
      --end;
    return Word(std::vector<Letter>(canonical.letters().begin(),
                                    canonical.letters().begin() + end));
  }

 private:
  Presentation p_;
};

class AbelianOracle final : public GroupOracle {
 public:
  explicit AbelianOracle(Presentation p) : p_(std::move(p)) {}

  Word normal_form(const Word& w) const override {
    std::vector<long long> e(p_.generator_count, 0);
    for (Letter l : w.letters()) e[gen_of(l) - 1] += l > 0 ? 1 : -1;
    std::vector<Letter> out;
    for (int g = 0; g < p_.generator_count; ++g) {
      Letter l = e[g] > 0 ? static_cast<Letter>(g + 1) : static_cast<Letter>(-(g + 1));
      for (long long k = 0; k < std::llabs(e[g]); ++k) out.push_back(l);
    }
    return Word(std::move(out));
  }
  const Presentation& presentation() const override { return p_; }

  int distance(const Word& u, const Word& v) const override {
    int d = 0;
    std::vector<int> e(p_.generator_count, 0);
    for (Letter l : u.letters()) e[gen_of(l) - 1] -= l > 0 ? 1 : -1;
    for (Letter l : v.letters()) e[gen_of(l) - 1] += l > 0 ? 1 : -1;
    for (int x : e) d += std::abs(x);
    return d;
  }

  std::optional<Word> coset_key(const Word& canonical, int parabolic) const override {
    const auto& gens = p_.parabolics.at(parabolic);
    std::vector<Letter> out;
    for (Letter l : canonical.letters())
      if (!std::binary_search(gens.begin(), gens.end(), gen_of(l))) out.push_back(l);
    return Word(std::move(out));
  }

 private:
  Presentation p_;
};

class FiniteTableOracle final : public GroupOracle {
 public:
  FiniteTableOracle(Presentation p, std::vector<std::vector<int>> table)
      : p_(std::move(p)), table_(std::move(table)) {
    int n = static_cast<int>(table_.size());
    for (const auto& row : table_)
      if (static_cast<int>(row.size()) != 2 * p_.generator_count)
        throw std::invalid_argument("finite table: wrong row width");
    // shortlex-least geodesic word per element, by BFS in generator-key order
    rep_.assign(n, Word());
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int e : frontier) {
        for (int k = 0; k < 2 * p_.generator_count; ++k) {
          Letter l = letter_of_slot(k);
          int to = table_[e][k];
          if (seen[to]) continue;
          seen[to] = true;
          std::vector<Letter> ls = rep_[e].letters();
          ls.push_back(l);
          rep_[to] = Word(std::move(ls));
          next.push_back(to);
        }
      }
      frontier = std::move(next);
    }
    for (bool s : seen)
      if (!s) throw std::invalid_argument("finite table: generators do not generate");
  }

  Word normal_form(const Word& w) const override { return rep_[element_of(w)]; }
  const Presentation& presentation() const override { return p_; }

 private:
  // slots per generator-key order: +1, -1, +2, -2, ...
  static Letter letter_of_slot(int k) {
    return k % 2 == 0 ? static_cast<Letter>(k / 2 + 1) : static_cast<Letter>(-(k / 2 + 1));
  }
  static int slot_of_letter(Letter l) { return 2 * (gen_of(l) - 1) + (l < 0 ? 1 : 0); }

  int element_of(const Word& w) const {
    int e = 0;
    for (Letter l : w.letters()) e = table_[e][slot_of_letter(l)];
    return e;
  }

  Presentation p_;
  std::vector<std::vector<int>> table_;
  std::vector<Word> rep_;
};

class FreeProductOracle final : public GroupOracle {
 public:
  FreeProductOracle(Presentation p, std::vector<std::unique_ptr<GroupOracle>> factors,
                    std::vector<std::vector<int>> factor_gens)
      : p_(std::move(p)), factors_(std::move(factors)), factor_gens_(std::move(factor_gens)) {
    if (factors_.size() != factor_gens_.size())
      throw std::invalid_argument("free product: factor/generator mismatch");
    owner_.assign(p_.generator_count + 1, -1);
    for (std::size_t f = 0; f < factor_gens_.size(); ++f)
      for (int g : factor_gens_[f]) owner_.at(g) = static_cast<int>(f);
    for (int g = 1; g <= p_.generator_count; ++g)
      if (owner_[g] < 0) throw std::invalid_argument("free product: unassigned generator");
  }

  Word normal_form(const Word& w) const override {
    // alternating product of factor normal forms, reduced until stable
    std::vector<std::pair<int, Word>> syllables;  // (factor, nf in product letters)
    auto push = [&](int f, const Word& chunk) {
      Word nf = factor_nf(f, chunk);
      if (nf.empty()) return;
      if (!syllables.empty() && syllables.back().first == f) {
        Word merged = factor_nf(f, concat(syllables.back().second, nf));
        syllables.pop_back();
        if (!merged.empty()) syllables.emplace_back(f, std::move(merged));
        // a vanished syllable may let neighbours merge; handled by caller loop
      } else {
        syllables.emplace_back(f, std::move(nf));
      }
    };

    std::vector<std::pair<int, Word>> raw;
    for (Letter l : w.letters()) {
      int f = owner_[gen_of(l)];
      if (!raw.empty() && raw.back().first == f) {
        Word ext = concat(raw.back().second, Word({l}));
        raw.back().second = std::move(ext);
      } else {
        raw.emplace_back(f, Word({l}));
      }
    }
    bool changed = true;
    std::vector<std::pair<int, Word>> cur = std::move(raw);
    while (changed) {
      syllables.clear();
      for (auto& [f, chunk] : cur) push(f, chunk);
      changed = false;
      for (std::size_t i = 1; i < syllables.size(); ++i)
        if (syllables[i].first == syllables[i - 1].first) { changed = true; break; }
      cur = std::move(syllables);
      syllables = {};
    }
    std::vector<Letter> out;
    for (auto& [f, chunk] : cur)
      out.insert(out.end(), chunk.letters().begin(), chunk.letters().end());
    return Word(std::move(out));
  }

  const Presentation& presentation() const override { return p_; }

  int distance(const Word& u, const Word& v) const override {
    auto su = syllables(u);
    auto sv = syllables(v);
    std::size_t k = 0;
    while (k < su.size() && k < sv.size() && syll_equal(u, su[k], v, sv[k])) ++k;
    int d = 0;
    if (k < su.size() && k < sv.size() && owner_of(u, su[k]) == owner_of(v, sv[k])) {
      int f = owner_of(u, su[k]);
      d += factors_[f]->distance(local(f, u, su[k]), local(f, v, sv[k]));
      for (std::size_t i = k + 1; i < su.size(); ++i) d += su[i].second - su[i].first;
      for (std::size_t i = k + 1; i < sv.size(); ++i) d += sv[i].second - sv[i].first;
    } else {
      for (std::size_t i = k; i < su.size(); ++i) d += su[i].second - su[i].first;
      for (std::size_t i = k; i < sv.size(); ++i) d += sv[i].second - sv[i].first;
    }
    return d;
  }

  std::optional<Word> coset_key(const Word& canonical, int parabolic) const override {
    int f = factor_of_parabolic(parabolic);
    if (f < 0) return std::nullopt;
    auto sy = syllables(canonical);
    std::size_t end = canonical.size();
    if (!sy.empty() && owner_of(canonical, sy.back()) == f) end = sy.back().first;
    return Word(std::vector<Letter>(canonical.letters().begin(),
                                    canonical.letters().begin() + end));
  }

 private:
  using Range = std::pair<int, int>;  // [first, second) letter indices

  std::vector<Range> syllables(const Word& w) const {
    std::vector<Range> out;
    int i = 0, n = static_cast<int>(w.size());
    while (i < n) {
      int f = owner_[gen_of(w[i])];
      int j = i;
      while (j < n && owner_[gen_of(w[j])] == f) ++j;
      out.push_back({i, j});
      i = j;
    }
    return out;
  }
  int owner_of(const Word& w, Range r) const { return owner_[gen_of(w[r.first])]; }
  bool syll_equal(const Word& a, Range ra, const Word& b, Range rb) const {
    if (ra.second - ra.first != rb.second - rb.first) return false;
    if (owner_of(a, ra) != owner_of(b, rb)) return false;
    for (int i = 0; i < ra.second - ra.first; ++i)
      if (a[ra.first + i] != b[rb.first + i]) return false;
    return true;
  }
  Word local(int f, const Word& w, Range r) const {
    const auto& gens = factor_gens_[f];
    std::vector<Letter> ls;
    ls.reserve(r.second - r.first);
    for (int i = r.first; i < r.second; ++i) {
      Letter l = w[i];
      auto it = std::lower_bound(gens.begin(), gens.end(), gen_of(l));
      int idx = static_cast<int>(it - gens.begin()) + 1;
      ls.push_back(l > 0 ? static_cast<Letter>(idx) : static_cast<Letter>(-idx));
    }
    return Word(std::move(ls));
  }
  int factor_of_parabolic(int parabolic) const {
    const auto& gens = p_.parabolics.at(parabolic);
    for (std::size_t f = 0; f < factor_gens_.size(); ++f)
      if (factor_gens_[f] == gens) return static_cast<int>(f);
    return -1;
  }

  // chunk uses product letters; translate to the factor alphabet and back
  Word factor_nf(int f, const Word& chunk) const {
    const auto& gens = factor_gens_[f];
    std::vector<Letter> local;
    local.reserve(chunk.size());
    for (Letter l : chunk.letters()) {
      auto it = std::lower_bound(gens.begin(), gens.end(), gen_of(l));
      int idx = static_cast<int>(it - gens.begin()) + 1;
      local.push_back(l > 0 ? static_cast<Letter>(idx) : static_cast<Letter>(-idx));
    }
    Word nf = factors_[f]->normal_form(Word(std::move(local)));
    std::vector<Letter> global;
    global.reserve(nf.size());
    for (Letter l : nf.letters()) {
      int g = gens[gen_of(l) - 1];
      global.push_back(l > 0 ? static_cast<Letter>(g) : static_cast<Letter>(-g));
    }
    return Word(std::move(global));
  }

  Presentation p_;
  std::vector<std::unique_ptr<GroupOracle>> factors_;
  std::vector<std::vector<int>> factor_gens_;
  std::vector<int> owner_;
};

class DehnOracle final : public GroupOracle {
 public:
  explicit DehnOracle(Presentation p)
      : p_(std::move(p)), reducer_(WordSet(p_.relators)) {}

  Word normal_form(const Word& w) const override {
    Word d = reducer_.reduce(w);
    if (d.empty()) return d;
    auto it = memo_.find(d);
    if (it != memo_.end()) return it->second;
    // shortlex-least v with v = d in the group; Dehn reducing never lengthens,
    // so |v| <= |d| and the search space is finite
    Word best = shortlex_search(d);
    memo_.emplace(std::move(d), best);
    return best;
  }

  const Presentation& presentation() const override { return p_; }

 private:
  Word shortlex_search(const Word& d) const {
    Word target_inv = inverse(d);
    std::vector<Word> level{Word()};
    for (std::size_t len = 0; len <= d.size(); ++len) {
      for (const Word& v : level)
        if (reducer_.trivial(concat(target_inv, v))) return v;
      std::vector<Word> next;
      for (const Word& v : level) {
        for (int k = 0; k < 2 * p_.generator_count; ++k) {
          Letter l = k % 2 == 0 ? static_cast<Letter>(k / 2 + 1)
                                : static_cast<Letter>(-(k / 2 + 1));
          if (!v.empty() && v[v.size() - 1] == inv(l)) continue;
          std::vector<Letter> ls = v.letters();
          ls.push_back(l);
          next.push_back(Word(std::move(ls)));
        }
      }
      level = std::move(next);
    }
    return d;  // unreachable for a correct reducer
  }

  Presentation p_;
  DehnReducer reducer_;
  mutable std::map<Word, Word> memo_;
};

Presentation registry_presentation(const std::string& name) {
  if (name == "free") return parse_presentation("gens a,b;");
  if (name == "free-rel-a") return parse_presentation("gens a,b; par {a}");
  if (name == "abelian-2") return parse_presentation("gens a,b; rel [a,b];");
  if (name == "abelian-2-rel-a") return parse_presentation("gens a,b; rel [a,b]; par {a}");
  if (name == "surface") return parse_presentation("gens a,b,c,d; rel [a,b][c,d];");
  if (name == "zz-free-product")
    return parse_presentation("gens a,b,c,d; rel [a,b],[c,d]; par {a,b},{c,d}");
  throw std::invalid_argument("unknown group '" + name + "'");
}

}  // namespace

std::unique_ptr<GroupOracle> make_free_oracle(Presentation p) {
  return std::make_unique<FreeOracle>(std::move(p));
}

std::unique_ptr<GroupOracle> make_abelian_oracle(Presentation p) {
  return std::make_unique<AbelianOracle>(std::move(p));
}

std::unique_ptr<GroupOracle> make_finite_table_oracle(Presentation p,
                                                      std::vector<std::vector<int>> table) {
  return std::make_unique<FiniteTableOracle>(std::move(p), std::move(table));
}

std::unique_ptr<GroupOracle> make_free_product_oracle(
    Presentation p, std::vector<std::unique_ptr<GroupOracle>> factors,
    std::vector<std::vector<int>> factor_generators) {
  return std::make_unique<FreeProductOracle>(std::move(p), std::move(factors),
                                             std::move(factor_generators));
}

std::unique_ptr<GroupOracle> make_dehn_oracle(Presentation p) {
  return std::make_unique<DehnOracle>(std::move(p));
}

std::unique_ptr<GroupOracle> make_registry_oracle(const std::string& name) {
  Presentation p = registry_presentation(name);
  if (name == "free" || name == "free-rel-a") return make_free_oracle(std::move(p));
  if (name == "abelian-2" || name == "abelian-2-rel-a")
    return make_abelian_oracle(std::move(p));
  if (name == "surface") return make_dehn_oracle(std::move(p));
  if (name == "zz-free-product") {
    std::vector<std::unique_ptr<GroupOracle>> factors;
    factors.push_back(make_abelian_oracle(parse_presentation("gens a,b; rel [a,b];")));
    factors.push_back(make_abelian_oracle(parse_presentation("gens c,d; rel [c,d];")));
    return make_free_product_oracle(std::move(p), std::move(factors), {{1, 2}, {3, 4}});
  }
  throw std::invalid_argument("unknown group '" + name + "'");
}

}  // namespace relgeo
