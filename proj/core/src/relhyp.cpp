#include "relgeo/relhyp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>

#include "relgeo/parallel.hpp"

namespace relgeo {

FatParams::FatParams(Rat t, Rat s, Rat n) : theta(t), sigma(s), nu(n) {
  if (!(Rat(0) < theta)) throw std::invalid_argument("FatParams: theta must be positive");
  if (sigma < Rat(1)) throw std::invalid_argument("FatParams: sigma must be >= 1");
  Rat four_sigma(4 * sigma.num, sigma.den);
  if (nu < four_sigma) throw std::invalid_argument("FatParams: nu must be >= 4*sigma");
}

std::vector<CosetRef> ball_cosets(const RelBallGraph& rel) {
  std::vector<CosetRef> out;
  for (int i = 0; i < rel.parabolic_count; ++i)
    for (std::size_t c = 0; c < rel.members[i].size(); ++c)
      out.push_back({i, static_cast<int>(c), &rel.members[i][c]});
  return out;
}

namespace {

// dist_S from every vertex to the coset (min over members)
std::vector<int> dist_to_set(const BallGraph& ball, const std::vector<int>& set) {
  std::vector<int> d(ball.size(), kUnreachable);
  for (int v = 0; v < ball.size(); ++v) {
    int best = kUnreachable;
    for (int m : set) best = std::min(best, ball.dist(v, m));
    d[v] = best;
  }
  return d;
}

// multi-source BFS over S edges, cut off at max_depth; -1 marks "beyond"
void capped_dist_to_set(const BallGraph& ball, const std::vector<int>& set, int max_depth,
                        std::vector<int>& out, std::vector<int>& touched) {
  touched.clear();
  std::deque<int> q;
  for (int m : set) {
    if (out[m] != -1) continue;
    out[m] = 0;
    touched.push_back(m);
    q.push_back(m);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (out[u] >= max_depth) continue;
    for (auto [v, g] : ball.adj[u]) {
      (void)g;
      if (out[v] != -1) continue;
      out[v] = out[u] + 1;
      touched.push_back(v);
      q.push_back(v);
    }
  }
}

std::vector<std::vector<int>> coset_dist_matrix(const RelBallGraph& rel,
                                                const std::vector<CosetRef>& cosets) {
  std::vector<std::vector<int>> d(cosets.size());
  parallel_for(cosets.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) d[c] = dist_to_set(rel.ball, *cosets[c].members);
  });
  return d;
}

int set_diameter(const BallGraph& ball, const std::vector<int>& set) {
  int diam = 0;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      diam = std::max(diam, ball.dist(set[a], set[b]));
  return diam;
}

std::string coset_name(const CosetRef& c) {
  return "H" + std::to_string(c.parabolic) + "/coset" + std::to_string(c.coset);
}

}  // namespace

std::vector<int> saturation(const RelBallGraph& rel, const std::vector<int>& q, const Rat& mu) {
  std::vector<int> out = q;
  for (const CosetRef& c : ball_cosets(rel)) {
    bool meets = false;
    for (int m : *c.members) {
      for (int x : q)
        if (le_scaled(rel.ball.dist(m, x), mu, 1)) {
          meets = true;
          break;
        }
      if (meets) break;
    }
    if (meets) out.insert(out.end(), c.members->begin(), c.members->end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AlphaReport alpha1_report(const RelBallGraph& rel, const Rat& delta) {
  auto cosets = ball_cosets(rel);
  if (cosets.size() < 2)
    throw std::invalid_argument("alpha1_report: fewer than two ball cosets");
  const int n = rel.size();
  int depth = static_cast<int>(delta.num / delta.den);  // dist <= delta, integer metric

  // per-vertex incidence lists: which cosets have v in N_delta
  std::vector<std::vector<int>> at_vertex(n);
  {
    std::vector<int> dist(n, -1), touched;
    for (std::size_t c = 0; c < cosets.size(); ++c) {
      capped_dist_to_set(rel.ball, *cosets[c].members, depth, dist, touched);
      for (int v : touched) {
        at_vertex[v].push_back(static_cast<int>(c));
        dist[v] = -1;
      }
    }
  }

  // candidate pairs co-occur at some vertex; collect their intersections
  std::map<std::pair<int, int>, std::vector<int>> inter;
  for (int v = 0; v < n; ++v) {
    const auto& cs = at_vertex[v];
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) inter[{cs[i], cs[j]}].push_back(v);
  }

  int best = -1;
  std::pair<int, int> best_pair{-1, -1};
  for (const auto& [pair, verts] : inter) {
    int diam = set_diameter(rel.ball, verts);
    if (diam > best) {
      best = diam;
      best_pair = pair;
    }
  }

  AlphaReport rep;
  rep.condition = "alpha1";
  rep.params["delta"] = delta.str();
  AlphaReport::Entry e;
  e.r = rel.ball.radius;
  e.measured["diameter"] = best < 0 ? 0.0 : static_cast<double>(best);
  if (best_pair.first >= 0)
    e.witnesses.push_back(coset_name(cosets[best_pair.first]) + " vs " +
                          coset_name(cosets[best_pair.second]));
  rep.per_radius.push_back(std::move(e));
  return rep;
}

AlphaReport alpha2_report(const RelBallGraph& rel, const Rat& theta,
                          std::size_t geodesic_cap) {
  if (theta < Rat(0) || !(theta < Rat(1, 2)))
    throw std::invalid_argument("alpha2_report: theta must lie in [0, 1/2)");
  auto cosets = ball_cosets(rel);
  const int n = rel.size();
  // endpoints qualify only within theta * (max possible length) of the coset
  int lmax = 2 * rel.ball.radius;
  int reach = static_cast<int>((theta.num * lmax) / theta.den);

  std::mutex mu;
  std::map<int, int> per_len;  // l -> max measured M
  int measured = 0;
  bool truncated = false;

  parallel_for(cosets.size(), [&](std::size_t lo, std::size_t hi) {
    std::map<int, int> local_per_len;
    int local_measured = 0;
    bool local_trunc = false;
    std::vector<int> dist(n, -1), touched;
    for (std::size_t c = lo; c < hi; ++c) {
      capped_dist_to_set(rel.ball, *cosets[c].members, reach, dist, touched);
      std::vector<int> candidates = touched;
      std::sort(candidates.begin(), candidates.end());
      for (std::size_t a = 0; a < candidates.size(); ++a) {
        for (std::size_t b = a + 1; b < candidates.size(); ++b) {
          int u = candidates[a], v = candidates[b];
          int l = rel.ball.dist(u, v);
          if (l == 0 || l == kUnreachable) continue;
          if (!le_scaled(dist[u], theta, l) || !le_scaled(dist[v], theta, l)) continue;
          // no geodesic can land farther from the coset than its endpoints
          int bound = std::min(dist[u], dist[v]);
          auto it = local_per_len.find(l);
          int current = it == local_per_len.end() ? -1 : it->second;
          if (bound <= current && bound <= local_measured) continue;
          GeodesicSet geos = geodesics_between(rel.ball, u, v, geodesic_cap);
          if (geos.truncated) local_trunc = true;
          for (const auto& path : geos.paths) {
            int m = kUnreachable;
            for (int x : path) {
              int dx = dist[x];
              if (dx < 0) dx = kUnreachable;  // beyond the capped BFS: farther than reach
              m = std::min(m, dx);
            }
            local_measured = std::max(local_measured, m);
            auto jt = local_per_len.find(l);
            if (jt == local_per_len.end())
              local_per_len[l] = m;
            else
              jt->second = std::max(jt->second, m);
          }
        }
      }
      for (int v : touched) dist[v] = -1;
    }
    std::lock_guard<std::mutex> lock(mu);
    measured = std::max(measured, local_measured);
    truncated = truncated || local_trunc;
    for (auto [l, m] : local_per_len) {
      auto it = per_len.find(l);
      if (it == per_len.end())
        per_len[l] = m;
      else
        it->second = std::max(it->second, m);
    }
  });

  AlphaReport rep;
  rep.condition = "alpha2";
  rep.params["theta"] = theta.str();
  AlphaReport::Entry e;
  e.r = rel.ball.radius;
  e.measured["M"] = static_cast<double>(measured);
  for (auto [l, m] : per_len)
    e.witnesses.push_back("l=" + std::to_string(l) + " M=" + std::to_string(m));
  e.truncated = truncated;
  rep.per_radius.push_back(std::move(e));
  return rep;
}

FatResult is_fat_polygon(const BallGraph& ball, const Polygon& p, const FatParams& fp) {
  const int k = p.corners();
  if (k < 2) throw std::invalid_argument("is_fat_polygon: need at least 2 edges");
  for (int i = 0; i < k; ++i) {
    const auto& e = p.edges[i];
    const auto& f = p.edges[(i + 1) % k];
    if (e.empty() || e.back() != f.front())
      throw std::invalid_argument("is_fat_polygon: edges do not close up");
    for (std::size_t j = 0; j + 1 < e.size(); ++j) {
      bool adj = false;
      for (auto [w, g] : ball.adj[e[j]]) {
        (void)g;
        if (w == e[j + 1]) adj = true;
      }
      if (!adj) throw std::invalid_argument("is_fat_polygon: edge is not a path");
    }
    if (static_cast<int>(e.size()) - 1 != ball.dist(e.front(), e.back()))
      throw std::invalid_argument("is_fat_polygon: edge " + std::to_string(i) +
                                  " is not geodesic");
  }

  double theta = fp.theta.value();
  double sigma_theta = fp.sigma.value() * theta;
  double nu_theta = fp.nu.value() * theta;
  double margin = std::numeric_limits<double>::infinity();

  // (F1)
  for (int i = 0; i < k; ++i) {
    const auto& e = p.edges[i];
    int x = e.front(), y = e.back();
    for (int z : e) {
      if (ball.dist(z, x) <= sigma_theta || ball.dist(z, y) <= sigma_theta) continue;
      int dmin = kUnreachable;
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        for (int w : p.edges[j]) dmin = std::min(dmin, ball.dist(z, w));
      }
      if (dmin != kUnreachable) margin = std::min(margin, dmin - theta);
    }
  }
  // (F2)
  for (int i = 0; i < k; ++i) {
    int x = p.corner(i);
    int dmin = kUnreachable;
    for (int j = 0; j < k; ++j) {
      if (j == i || (j + 1) % k == i) continue;  // skip the two incident edges
      for (int w : p.edges[j]) dmin = std::min(dmin, ball.dist(x, w));
    }
    if (dmin != kUnreachable) margin = std::min(margin, dmin - nu_theta);
  }

  FatResult res;
  res.margin = margin == std::numeric_limits<double>::infinity() ? 0.0 : margin;
  res.fat = res.margin >= 0.0;
  return res;
}

AlphaReport alpha3_report(const RelBallGraph& rel, const FatParams& fp, int k, int samples,
                          std::uint64_t seed) {
  if (k != 3 && k != 4) throw std::invalid_argument("alpha3_report: k must be 3 or 4");
  auto cosets = ball_cosets(rel);
  const int n = rel.size();

  std::mt19937_64 rng(seed);
  int fat_count = 0;
  double chi = 0.0;
  std::string witness;

  for (int s = 0; s < samples; ++s) {
    std::vector<int> corners(k);
    bool distinct = true;
    for (int i = 0; i < k; ++i) corners[i] = static_cast<int>(uniform_index(rng, n));
    for (int i = 0; i < k && distinct; ++i)
      for (int j = i + 1; j < k; ++j)
        if (corners[i] == corners[j]) distinct = false;
    if (!distinct) continue;

    Polygon poly;
    bool usable = true;
    for (int i = 0; i < k; ++i) {
      int u = corners[i], v = corners[(i + 1) % k];
      if (rel.ball.dist(u, v) == kUnreachable) {
        usable = false;
        break;
      }
      poly.edges.push_back(chosen_geodesic(rel.ball, u, v));
    }
    if (!usable) continue;

    FatResult fr = is_fat_polygon(rel.ball, poly, fp);
    if (!fr.fat) continue;
    ++fat_count;

    int best = kUnreachable;
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < cosets.size(); ++c) {
      int worst = 0;
      for (const auto& e : poly.edges)
        for (int x : e) {
          int d = kUnreachable;
          for (int m : *cosets[c].members) d = std::min(d, rel.ball.dist(x, m));
          worst = std::max(worst, d);
          if (worst >= best) break;  // cannot beat the best coset anymore
        }
      if (worst < best) {
        best = worst;
        best_c = c;
      }
    }
    double val = cosets.empty() ? static_cast<double>(kUnreachable) : static_cast<double>(best);
    if (val > chi) {
      chi = val;
      std::ostringstream os;
      os << "corners";
      for (int c : corners) os << ' ' << c;
      if (!cosets.empty()) os << " nearest " << coset_name(cosets[best_c]);
      witness = os.str();
    }
  }

  AlphaReport rep;
  rep.condition = "alpha3";
  rep.params["theta"] = fp.theta.str();
  rep.params["sigma"] = fp.sigma.str();
  rep.params["nu"] = fp.nu.str();
  rep.params["k"] = std::to_string(k);
  rep.params["samples"] = std::to_string(samples);
  rep.params["seed"] = std::to_string(seed);
  AlphaReport::Entry e;
  e.r = rel.ball.radius;
  e.measured["chi"] = chi;
  e.measured["fat_polygons"] = static_cast<double>(fat_count);
  if (fat_count == 0) {
    e.vacuous = true;
    rep.verdict = "vacuous";
  } else if (!witness.empty()) {
    e.witnesses.push_back(witness);
  }
  rep.per_radius.push_back(std::move(e));
  return rep;
}

// ---------------------------------------------------------------------------
// BCP
// ---------------------------------------------------------------------------

namespace {

struct BcpPath {
  std::vector<int> vertices;
  // coset components: (parabolic, coset, start vertex, end vertex)
  struct Comp {
    int parabolic, coset, start, end;
  };
  std::vector<Comp> comps;
};

// Enumerates lambda-bi-Lipschitz backtracking-free paths from the anchor.
class BcpEnumerator {
 public:
  BcpEnumerator(const RelBallGraph& rel, Rat lambda, int len_cap, std::size_t cap)
      : rel_(rel), lambda_(lambda), len_cap_(len_cap), cap_(cap) {
    neighbors_.resize(rel.size());
    for (int u = 0; u < rel.size(); ++u) neighbors_[u] = rel_neighbors(rel, u);
  }

  bool truncated() const { return truncated_; }

  std::vector<BcpPath> run(int anchor) {
    paths_.clear();
    truncated_ = false;
    path_ = {anchor};
    active_.assign(rel_.parabolic_count, -1);
    closed_.assign(rel_.parabolic_count, {});
    emit();
    dfs();
    return std::move(paths_);
  }

 private:
  void emit() {
    if (paths_.size() >= cap_) {
      truncated_ = true;
      return;
    }
    BcpPath p;
    p.vertices = path_;
    if (path_.size() >= 2) {
      RelPath rp = rel_path_from_vertices(rel_, path_);
      PathAnalysis an = analyze_path(rp, rel_);
      for (const auto& c : an.components)
        if (c.coset_component)
          p.comps.push_back({c.parabolic, c.coset, c.start_vertex, c.end_vertex});
    }
    paths_.push_back(std::move(p));
  }

  void dfs() {
    if (truncated_) return;
    if (static_cast<int>(path_.size()) - 1 >= len_cap_) return;
    int u = path_.back();
    for (int v : neighbors_[u]) {
      // bi-Lipschitz lower bound against every earlier vertex
      bool ok = true;
      int j = static_cast<int>(path_.size());
      for (int i = 0; i < j && ok; ++i) {
        long long gap = j - i;
        int d = rel_.rel_dist(path_[i], v);
        if (gap * lambda_.den > static_cast<long long>(lambda_.num) * d) ok = false;
      }
      if (!ok) continue;

      // backtracking-free pruning per parabolic
      std::vector<int> save_active = active_;
      std::vector<std::size_t> closed_sizes(rel_.parabolic_count);
      for (int i = 0; i < rel_.parabolic_count; ++i) closed_sizes[i] = closed_[i].size();
      bool reject = false;
      for (int i = 0; i < rel_.parabolic_count && !reject; ++i) {
        if (rel_.same_coset(i, u, v)) {
          int c = rel_.coset_of[i][u];
          if (active_[i] == c) continue;
          if (std::binary_search(closed_[i].begin(), closed_[i].end(), c)) {
            reject = true;
            break;
          }
          if (active_[i] >= 0) insert_closed(i, active_[i]);
          active_[i] = c;
        } else if (active_[i] >= 0) {
          insert_closed(i, active_[i]);
          active_[i] = -1;
        }
      }
      if (!reject) {
        path_.push_back(v);
        emit();
        dfs();
        path_.pop_back();
      }
      active_ = std::move(save_active);
      for (int i = 0; i < rel_.parabolic_count; ++i) closed_[i].resize(closed_sizes[i]);
      if (truncated_) return;
    }
  }

  void insert_closed(int i, int c) {
    auto it = std::lower_bound(closed_[i].begin(), closed_[i].end(), c);
    closed_[i].insert(it, c);
  }

  const RelBallGraph& rel_;
  Rat lambda_;
  int len_cap_;
  std::size_t cap_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<int> path_;
  std::vector<int> active_;                 // active coset per parabolic, -1 none
  std::vector<std::vector<int>> closed_;    // sorted closed cosets per parabolic
  std::vector<BcpPath> paths_;
  bool truncated_ = false;
};

}  // namespace

AlphaReport bcp_report(const RelBallGraph& rel, const Rat& lambda, int len_cap,
                       std::size_t path_cap) {
  if (lambda < Rat(1)) throw std::invalid_argument("bcp_report: lambda must be >= 1");

  BcpEnumerator en(rel, lambda, len_cap, path_cap);
  std::vector<BcpPath> paths = en.run(0);

  // bucket by endpoint
  std::vector<std::vector<std::size_t>> by_end(rel.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    by_end[paths[i].vertices.back()].push_back(i);

  int a1 = 0, a2 = 0;
  std::string w1, w2;
  auto consider_pair = [&](const BcpPath& p, const BcpPath& q) {
    for (const auto& s : p.comps) {
      const BcpPath::Comp* partner = nullptr;
      for (const auto& t : q.comps)
        if (t.parabolic == s.parabolic && t.coset == s.coset) partner = &t;
      if (partner == nullptr) {
        int d = rel.ball.dist(s.start, s.end);
        if (d > a1) {
          a1 = d;
          w1 = "unmatched component H" + std::to_string(s.parabolic) + "/coset" +
               std::to_string(s.coset);
        }
      } else {
        int d = std::max(rel.ball.dist(s.start, partner->start),
                         rel.ball.dist(s.end, partner->end));
        if (d > a2) {
          a2 = d;
          w2 = "component pair H" + std::to_string(s.parabolic) + "/coset" +
               std::to_string(s.coset);
        }
      }
    }
  };

  for (int x = 0; x < rel.size(); ++x) {
    // endpoints at S-distance <= 1: x itself and its S-neighbors
    std::vector<int> ends{x};
    for (auto [y, g] : rel.ball.adj[x]) {
      (void)g;
      ends.push_back(y);
    }
    for (std::size_t pi : by_end[x]) {
      for (int y : ends) {
        for (std::size_t qi : by_end[y]) {
          consider_pair(paths[pi], paths[qi]);
        }
      }
    }
  }

  AlphaReport rep;
  rep.condition = "bcp";
  rep.params["lambda"] = lambda.str();
  rep.params["len_cap"] = std::to_string(len_cap);
  AlphaReport::Entry e;
  e.r = rel.ball.radius;
  e.measured["a1"] = static_cast<double>(a1);
  e.measured["a2"] = static_cast<double>(a2);
  e.measured["paths"] = static_cast<double>(paths.size());
  if (!w1.empty()) e.witnesses.push_back("a1: " + w1);
  if (!w2.empty()) e.witnesses.push_back("a2: " + w2);
  e.truncated = en.truncated();
  rep.per_radius.push_back(std::move(e));
  return rep;
}

// ---------------------------------------------------------------------------
// Morse diagnostics
// ---------------------------------------------------------------------------

bool is_quasigeodesic(const BallGraph& ball, const std::vector<int>& path, const Rat& L,
                      const Rat& C) {
  if (path.empty()) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    bool adj = false;
    for (auto [w, g] : ball.adj[path[i]]) {
      (void)g;
      if (w == path[i + 1]) adj = true;
    }
    if (!adj) return false;
  }
  // (1/L)|i-j| - C <= d <= L|i-j| + C, exact rational comparisons
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      long long gap = static_cast<long long>(j - i);
      long long d = ball.dist(path[i], path[j]);
      // gap/L - C <= d  <=>  gap*C.den*L.den <= (d + C)(...)  cross-multiplied:
      // gap * L.den * C.den <= d * L.num * C.den + C.num * L.num ... careful:
      // gap/L <= d + C  <=>  gap * L.den * C.den <= L.num * (d * C.den + C.num)
      if (gap * L.den * C.den > L.num * (d * C.den + C.num)) return false;
      // d <= L*gap + C  <=>  d * L.den * C.den <= gap * L.num * C.den + C.num * L.den
      if (d * L.den * C.den > gap * L.num * C.den + C.num * L.den) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> sample_quasigeodesic(const BallGraph& ball, int u, int v,
                                                     const Rat& L, const Rat& C,
                                                     std::uint64_t seed, int attempts) {
  std::mt19937_64 rng(seed);
  for (int a = 0; a < attempts; ++a) {
    int w = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(ball.size())));
    if (ball.dist(u, w) == kUnreachable || ball.dist(w, v) == kUnreachable) continue;
    std::vector<int> path = chosen_geodesic(ball, u, w);
    std::vector<int> tail = chosen_geodesic(ball, w, v);
    path.insert(path.end(), tail.begin() + 1, tail.end());
    if (is_quasigeodesic(ball, path, L, C)) return path;
  }
  return std::nullopt;
}

namespace {

int dist_point_to_set(const BallGraph& ball, int x, const std::vector<int>& set) {
  int best = kUnreachable;
  for (int s : set) best = std::min(best, ball.dist(x, s));
  return best;
}

int hausdorff_rel(const RelBallGraph& rel, const std::vector<int>& a,
                  const std::vector<int>& b) {
  int h = 0;
  for (int x : a) {
    int best = kUnreachable;
    for (int y : b) best = std::min(best, rel.rel_dist(x, y));
    h = std::max(h, best);
  }
  for (int y : b) {
    int best = kUnreachable;
    for (int x : a) best = std::min(best, rel.rel_dist(x, y));
    h = std::max(h, best);
  }
  return h;
}

}  // namespace

AlphaReport morse_report(const RelBallGraph& rel, const std::vector<int>& g,
                         const std::vector<int>& q, const RelPath& p, const SatParams& sp) {
  if (g.empty() || q.empty() || p.vertices.empty())
    throw std::invalid_argument("morse_report: empty path");
  if (g.front() != q.front() || g.back() != q.back() || p.vertices.front() != g.front() ||
      p.vertices.back() != g.back())
    throw std::invalid_argument("morse_report: endpoints differ");
  if (static_cast<int>(g.size()) - 1 != rel.ball.dist(g.front(), g.back()))
    throw std::invalid_argument("morse_report: g is not geodesic");
  if (!is_quasigeodesic(rel.ball, q, sp.L, sp.C))
    throw std::invalid_argument("morse_report: q fails the (L,C) quasi-geodesic check");
  p.validate(rel);
  if (static_cast<int>(p.edges.size()) != rel.rel_dist(p.vertices.front(), p.vertices.back()))
    throw std::invalid_argument("morse_report: p is not a rel-geodesic");

  std::vector<int> sat_g = saturation(rel, g, sp.M);
  int tau1 = 0;
  for (int x : q) tau1 = std::max(tau1, dist_point_to_set(rel.ball, x, sat_g));

  // item 2: endpoint deviation of coset-to-coset sub-quasi-geodesics
  auto cosets = ball_cosets(rel);
  std::vector<std::size_t> in_sat;
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    bool meets = false;
    for (int m : *cosets[c].members)
      if (le_scaled(dist_point_to_set(rel.ball, m, g), sp.M, 1)) {
        meets = true;
        break;
      }
    if (meets) in_sat.push_back(c);
  }
  int delta = 0;
  for (std::size_t ai = 0; ai < in_sat.size(); ++ai) {
    for (std::size_t bi = 0; bi < in_sat.size(); ++bi) {
      if (ai == bi) continue;
      const auto& A = *cosets[in_sat[ai]].members;
      const auto& B = *cosets[in_sat[bi]].members;
      int last_a = -1, first_b = -1;
      for (std::size_t i = 0; i < q.size(); ++i)
        if (le_scaled(dist_point_to_set(rel.ball, q[i], A), sp.M, 1))
          last_a = static_cast<int>(i);
      if (last_a < 0) continue;
      for (std::size_t i = static_cast<std::size_t>(last_a); i < q.size(); ++i)
        if (le_scaled(dist_point_to_set(rel.ball, q[i], B), sp.M, 1)) {
          first_b = static_cast<int>(i);
          break;
        }
      if (first_b < 0) continue;
      delta = std::max(delta, dist_point_to_set(rel.ball, q[last_a], g));
      delta = std::max(delta, dist_point_to_set(rel.ball, q[first_b], g));
    }
  }

  int tau3 = hausdorff_rel(rel, q, p.vertices);

  AlphaReport rep;
  rep.condition = "morse";
  rep.params["L"] = sp.L.str();
  rep.params["C"] = sp.C.str();
  rep.params["M"] = sp.M.str();
  AlphaReport::Entry e;
  e.r = rel.ball.radius;
  e.measured["tau1"] = static_cast<double>(tau1);
  e.measured["delta"] = static_cast<double>(delta);
  e.measured["tau3"] = static_cast<double>(tau3);
  try {
    std::vector<int> lift = lift_path(p, rel);
    std::vector<int> sat_lift = saturation(rel, lift, sp.M);
    std::vector<int> sat_q = saturation(rel, q, sp.M);
    int fwd = 0, bwd = 0;
    for (int x : q) fwd = std::max(fwd, dist_point_to_set(rel.ball, x, sat_lift));
    for (int y : lift) bwd = std::max(bwd, dist_point_to_set(rel.ball, y, sat_q));
    e.measured["tau4_fwd"] = static_cast<double>(fwd);
    e.measured["tau4_bwd"] = static_cast<double>(bwd);
  } catch (const LiftError& err) {
    e.witnesses.push_back(std::string("partial: ") + err.what());
    rep.verdict = "partial";
  }
  rep.per_radius.push_back(std::move(e));
  return rep;
}

double quasiconvexity_t(const RelBallGraph& rel, const Rat& d, std::size_t geodesic_cap) {
  if (!(Rat(0) < d)) throw std::invalid_argument("quasiconvexity_t: d must be positive");
  auto cosets = ball_cosets(rel);
  auto dmat = coset_dist_matrix(rel, cosets);
  double t = 0.0;
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    std::vector<int> nd;
    for (int v = 0; v < rel.size(); ++v)
      if (le_scaled(dmat[c][v], d, 1)) nd.push_back(v);
    for (std::size_t a = 0; a < nd.size(); ++a) {
      for (std::size_t b = a + 1; b < nd.size(); ++b) {
        GeodesicSet geos = geodesics_between(rel.ball, nd[a], nd[b], geodesic_cap);
        for (const auto& path : geos.paths)
          for (int x : path)
            t = std::max(t, static_cast<double>(dmat[c][x]) / d.value());
      }
    }
  }
  return t;
}

}  // namespace relgeo
