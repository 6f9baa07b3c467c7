#include "relgeo/cayley.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <mutex>
#include <sstream>

#include "relgeo/parallel.hpp"

namespace relgeo {

namespace {

std::vector<std::uint8_t> bfs_row(const std::vector<std::vector<std::pair<int, Letter>>>& adj,
                                  int src) {
  std::vector<std::uint8_t> d(adj.size(), static_cast<std::uint8_t>(kUnreachable));
  std::deque<int> q{src};
  d[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (auto [v, g] : adj[u]) {
      (void)g;
      if (d[v] == kUnreachable) {
        d[v] = static_cast<std::uint8_t>(d[u] + 1);
        q.push_back(v);
      }
    }
  }
  return d;
}

}  // namespace

int BallGraph::index_of(const Word& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

int BallGraph::true_dist(int u, int v) const {
  if (dist_exact(u, v)) return dist_[u][v];
  return true_diff_.at({u, v});
}

int BallGraph::step(int u, Letter g) const {
  for (auto [v, l] : adj[u])
    if (l == g) return v;
  return -1;
}

BallGraph enumerate_ball(const GroupOracle& oracle, int r, std::size_t cap) {
  if (r < 0) throw std::invalid_argument("enumerate_ball: negative radius");
  if (2 * r >= kUnreachable) throw std::invalid_argument("enumerate_ball: radius too large");
  const Presentation& p = oracle.presentation();

  BallGraph ball;
  ball.radius = r;
  ball.generator_count = p.generator_count;
  ball.vertices.push_back(Word());
  ball.index_.emplace(Word(), 0);

  std::vector<int> frontier{0};
  for (int level = 1; level <= r; ++level) {
    std::vector<int> next;
    for (int u : frontier) {
      for (int k = 0; k < 2 * p.generator_count; ++k) {
        Letter g = k % 2 == 0 ? static_cast<Letter>(k / 2 + 1)
                              : static_cast<Letter>(-(k / 2 + 1));
        Word w = oracle.normal_form(concat(ball.vertices[u], Word({g})));
        if (static_cast<int>(w.size()) > level) continue;  // outside this level
        if (ball.index_.count(w)) continue;
        if (ball.vertices.size() >= cap) throw BallCapExceeded(ball.vertices.size());
        int id = static_cast<int>(ball.vertices.size());
        ball.vertices.push_back(w);
        ball.index_.emplace(std::move(w), id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }

  const int n = ball.size();
  ball.adj.assign(n, {});
  for (int u = 0; u < n; ++u) {
    for (int k = 0; k < 2 * p.generator_count; ++k) {
      Letter g = k % 2 == 0 ? static_cast<Letter>(k / 2 + 1)
                            : static_cast<Letter>(-(k / 2 + 1));
      Word w = oracle.normal_form(concat(ball.vertices[u], Word({g})));
      int v = ball.index_of(w);
      if (v >= 0 && v != u) ball.adj[u].emplace_back(v, g);
    }
  }

  ball.dist_.assign(n, {});
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t u = lo; u < hi; ++u) ball.dist_[u] = bfs_row(ball.adj, static_cast<int>(u));
  });

  std::size_t bits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  ball.exact_bits_.assign((bits + 63) / 64, 0);
  std::mutex diff_mutex;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    std::vector<std::pair<std::pair<int, int>, int>> local_diff;
    for (std::size_t u = lo; u < hi; ++u) {
      for (int v = 0; v < n; ++v) {
        int td = oracle.distance(ball.vertices[u], ball.vertices[v]);
        std::size_t bit = u * static_cast<std::size_t>(n) + v;
        if (td == ball.dist_[u][v]) {
          // rows can share a 64-bit word at chunk boundaries
          std::atomic_ref<std::uint64_t> word(ball.exact_bits_[bit / 64]);
          word.fetch_or(1ull << (bit % 64), std::memory_order_relaxed);
        } else {
          local_diff.push_back({{static_cast<int>(u), v}, td});
        }
      }
    }
    if (!local_diff.empty()) {
      std::lock_guard<std::mutex> lock(diff_mutex);
      for (auto& [k, v] : local_diff) ball.true_diff_.emplace(k, v);
    }
  });
  return ball;
}

std::string BallGraph::export_text(const std::vector<std::string>& names) const {
  std::ostringstream os;
  for (int v = 0; v < size(); ++v)
    os << "vertex " << v << ' '
       << (vertices[v].empty() ? std::string("1") : word_to_string(vertices[v], names)) << '\n';
  for (int u = 0; u < size(); ++u) {
    for (auto [v, g] : adj[u]) {
      if (u < v) {
        Word gw({g});
        os << "sedge " << u << ' ' << v << ' ' << word_to_string(gw, names) << '\n';
      }
    }
  }
  return os.str();
}

GeodesicSet geodesics_between(const BallGraph& ball, int u, int v, std::size_t cap) {
  if (u < 0 || v < 0 || u >= ball.size() || v >= ball.size())
    throw std::out_of_range("geodesics_between: endpoint outside ball");
  GeodesicSet out;
  if (ball.dist(u, v) == kUnreachable) return out;

  std::vector<int> path{u};
  // DFS over tight edges in ascending neighbor order -> lexicographic output
  std::vector<std::pair<int, std::vector<int>>> stack;  // (vertex, remaining choices)
  auto tight_neighbors = [&](int x) {
    std::vector<int> ns;
    for (auto [y, g] : ball.adj[x]) {
      (void)g;
      if (ball.dist(u, y) == ball.dist(u, x) + 1 &&
          ball.dist(y, v) + 1 == ball.dist(x, v))
        ns.push_back(y);
    }
    std::sort(ns.begin(), ns.end());
    return ns;
  };

  std::function<bool(int)> dfs = [&](int x) -> bool {
    if (x == v) {
      if (out.paths.size() >= cap) {
        out.truncated = true;
        return false;
      }
      out.paths.push_back(path);
      return true;
    }
    for (int y : tight_neighbors(x)) {
      path.push_back(y);
      bool go_on = dfs(y);
      path.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  dfs(u);
  return out;
}

std::vector<int> chosen_geodesic(const BallGraph& ball, int u, int v) {
  if (ball.dist(u, v) == kUnreachable)
    throw std::runtime_error("chosen_geodesic: endpoints not connected in ball");
  std::vector<int> path{u};
  int x = u;
  while (x != v) {
    int best = -1;
    for (auto [y, g] : ball.adj[x]) {
      (void)g;
      if (ball.dist(u, y) == ball.dist(u, x) + 1 && ball.dist(y, v) + 1 == ball.dist(x, v))
        if (best < 0 || y < best) best = y;
    }
    x = best;
    path.push_back(x);
  }
  return path;
}

// ---------------------------------------------------------------------------
// RelBallGraph
// ---------------------------------------------------------------------------

void RelBallGraph::compute_rel_dist() {
  const int n = size();
  rel_dist_.assign(n, {});
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t src = lo; src < hi; ++src) {
      std::vector<std::uint8_t> d(n, static_cast<std::uint8_t>(kUnreachable));
      std::deque<int> q{static_cast<int>(src)};
      d[src] = 0;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        auto relax = [&](int v) {
          if (d[v] == kUnreachable) {
            d[v] = static_cast<std::uint8_t>(d[u] + 1);
            q.push_back(v);
          }
        };
        for (auto [v, g] : ball.adj[u]) {
          (void)g;
          relax(v);
        }
        for (int i = 0; i < parabolic_count; ++i)
          for (int v : members[i][coset_of[i][u]])
            if (v != u) relax(v);
      }
      rel_dist_[src] = std::move(d);
    }
  });
}

RelBallGraph build_relative_ball(BallGraph ball, const GroupOracle& oracle) {
  const Presentation& p = oracle.presentation();
  if (p.parabolics.empty())
    throw std::invalid_argument("build_relative_ball: presentation has no parabolics");

  RelBallGraph rel;
  rel.ball = std::move(ball);
  rel.parabolic_count = static_cast<int>(p.parabolics.size());
  const int n = rel.size();

  rel.coset_of.assign(rel.parabolic_count, std::vector<int>(n, -1));
  rel.members.assign(rel.parabolic_count, {});
  for (int i = 0; i < rel.parabolic_count; ++i) {
    if (auto probe = oracle.coset_key(rel.ball.vertices[0], i)) {
      // syntactic coset keys: one oracle call per vertex
      std::unordered_map<Word, int, WordHash> key_to_coset;
      for (int v = 0; v < n; ++v) {
        Word key = *oracle.coset_key(rel.ball.vertices[v], i);
        auto [it, fresh] = key_to_coset.emplace(std::move(key),
                                                static_cast<int>(rel.members[i].size()));
        if (fresh) rel.members[i].push_back({});
        rel.coset_of[i][v] = it->second;
        rel.members[i][it->second].push_back(v);
      }
    } else {
      // pairwise fallback against each coset's first member
      std::vector<std::vector<int>>& reps = rel.members[i];
      for (int v = 0; v < n; ++v) {
        Word vi = rel.ball.vertices[v];
        bool placed = false;
        for (std::size_t c = 0; c < reps.size(); ++c) {
          int r = reps[c][0];
          Word diff = concat(inverse(rel.ball.vertices[r]), vi);
          if (oracle.in_parabolic(diff, i)) {
            rel.coset_of[i][v] = static_cast<int>(c);
            reps[c].push_back(v);
            placed = true;
            break;
          }
        }
        if (!placed) {
          rel.coset_of[i][v] = static_cast<int>(reps.size());
          reps.push_back({v});
        }
      }
    }
  }
  rel.compute_rel_dist();
  return rel;
}

RelBallGraph plain_relative_ball(BallGraph ball) {
  RelBallGraph rel;
  rel.ball = std::move(ball);
  rel.parabolic_count = 0;
  rel.compute_rel_dist();
  return rel;
}

std::vector<int> rel_neighbors(const RelBallGraph& rel, int u) {
  std::vector<int> ns;
  for (auto [v, g] : rel.ball.adj[u]) {
    (void)g;
    ns.push_back(v);
  }
  for (int i = 0; i < rel.parabolic_count; ++i)
    for (int v : rel.members[i][rel.coset_of[i][u]])
      if (v != u) ns.push_back(v);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

std::vector<int> chosen_rel_geodesic(const RelBallGraph& rel, int u, int v) {
  if (rel.rel_dist(u, v) == kUnreachable)
    throw std::runtime_error("chosen_rel_geodesic: endpoints not connected");
  std::vector<int> path{u};
  int x = u;
  while (x != v) {
    int best = -1;
    for (int y : rel_neighbors(rel, x))
      if (rel.rel_dist(u, y) == rel.rel_dist(u, x) + 1 &&
          rel.rel_dist(y, v) + 1 == rel.rel_dist(x, v)) {
        best = y;
        break;
      }
    if (best < 0) throw std::runtime_error("chosen_rel_geodesic: stuck");
    x = best;
    path.push_back(x);
  }
  return path;
}

std::string RelBallGraph::export_text(const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << ball.export_text(names);
  for (int i = 0; i < parabolic_count; ++i)
    for (std::size_t c = 0; c < members[i].size(); ++c)
      for (std::size_t a = 0; a < members[i][c].size(); ++a)
        for (std::size_t b = a + 1; b < members[i][c].size(); ++b)
          os << "hedge " << members[i][c][a] << ' ' << members[i][c][b] << ' ' << i << ' ' << c
             << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

void RelPath::validate(const RelBallGraph& rel) const {
  if (vertices.empty()) throw std::invalid_argument("RelPath: empty vertex sequence");
  if (edges.size() + 1 != vertices.size())
    throw std::invalid_argument("RelPath: edge/vertex count mismatch");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int u = vertices[e], v = vertices[e + 1];
    if (u == v) throw std::invalid_argument("RelPath: trivial edge");
    if (edges[e].kind == RelEdge::S) {
      if (rel.ball.step(u, edges[e].gen) != v)
        throw std::invalid_argument("RelPath: declared S edge absent");
    } else {
      int i = edges[e].parabolic;
      if (i < 0 || i >= rel.parabolic_count)
        throw std::invalid_argument("RelPath: bad parabolic index");
      if (!rel.same_coset(i, u, v) || rel.coset_of[i][u] != edges[e].coset)
        throw std::invalid_argument("RelPath: declared H edge absent");
    }
  }
}

RelPath rel_path_from_vertices(const RelBallGraph& rel, const std::vector<int>& vs) {
  RelPath p;
  p.vertices = vs;
  for (std::size_t e = 0; e + 1 < vs.size(); ++e) {
    int u = vs[e], v = vs[e + 1];
    RelEdge edge;
    bool found = false;
    for (auto [w, g] : rel.ball.adj[u]) {
      if (w == v) {
        edge.kind = RelEdge::S;
        edge.gen = g;
        found = true;
        break;
      }
    }
    if (!found) {
      for (int i = 0; i < rel.parabolic_count && !found; ++i) {
        if (rel.same_coset(i, u, v)) {
          edge.kind = RelEdge::H;
          edge.parabolic = i;
          edge.coset = rel.coset_of[i][u];
          found = true;
        }
      }
    }
    if (!found) throw std::invalid_argument("rel_path_from_vertices: consecutive pair not adjacent");
    p.edges.push_back(edge);
  }
  return p;
}

PathAnalysis analyze_path(const RelPath& p, const RelBallGraph& rel) {
  p.validate(rel);
  PathAnalysis out;
  const int m = p.length();

  // classify every edge: the set of (parabolic, coset) containing it
  auto cosets_of_edge = [&](int e) {
    std::vector<std::pair<int, int>> cs;
    int u = p.vertices[e], v = p.vertices[e + 1];
    if (p.edges[e].kind == RelEdge::H) {
      cs.emplace_back(p.edges[e].parabolic, p.edges[e].coset);
      return cs;
    }
    for (int i = 0; i < rel.parabolic_count; ++i)
      if (rel.same_coset(i, u, v)) cs.emplace_back(i, rel.coset_of[i][u]);
    return cs;
  };

  int e = 0;
  while (e < m) {
    auto cs = cosets_of_edge(e);
    if (cs.empty()) {
      int start = e;
      while (e < m && cosets_of_edge(e).empty()) ++e;
      PathComponent c;
      c.first_edge = start;
      c.last_edge = e - 1;
      c.coset_component = false;
      c.start_vertex = p.vertices[start];
      c.end_vertex = p.vertices[e];
      out.components.push_back(c);
    } else {
      // extend the longest run among the candidate cosets; ties to least i
      int best_i = -1, best_c = -1, best_end = e;
      for (auto [i, cid] : cs) {
        int j = e;
        while (j < m) {
          auto later = cosets_of_edge(j);
          bool still = false;
          for (auto [i2, c2] : later)
            if (i2 == i && c2 == cid) still = true;
          if (!still) break;
          ++j;
        }
        if (j - 1 > best_end || best_i < 0) {
          best_end = j - 1;
          best_i = i;
          best_c = cid;
        }
      }
      PathComponent c;
      c.first_edge = e;
      c.last_edge = best_end;
      c.coset_component = true;
      c.parabolic = best_i;
      c.coset = best_c;
      c.start_vertex = p.vertices[e];
      c.end_vertex = p.vertices[best_end + 1];
      out.components.push_back(c);
      e = best_end + 1;
    }
  }

  for (std::size_t a = 0; a < out.components.size() && !out.backtracking; ++a) {
    if (!out.components[a].coset_component) continue;
    for (std::size_t b = a + 1; b < out.components.size(); ++b) {
      if (!out.components[b].coset_component) continue;
      if (out.components[a].parabolic == out.components[b].parabolic &&
          out.components[a].coset == out.components[b].coset) {
        out.backtracking = true;
        out.backtrack_witness = {static_cast<int>(a), static_cast<int>(b)};
        break;
      }
    }
  }
  return out;
}

std::vector<int> lift_path(const RelPath& p, const RelBallGraph& rel) {
  p.validate(rel);
  std::vector<int> out{p.vertices[0]};
  for (int e = 0; e < p.length(); ++e) {
    int u = p.vertices[e], v = p.vertices[e + 1];
    if (p.edges[e].kind == RelEdge::S) {
      out.push_back(v);
      continue;
    }
    if (rel.ball.dist(u, v) == kUnreachable)
      throw LiftError(e, "endpoints disconnected inside the ball");
    if (!rel.ball.dist_exact(u, v))
      throw LiftError(e, "every geodesic between the endpoints leaves the ball");
    std::vector<int> geo = chosen_geodesic(rel.ball, u, v);
    out.insert(out.end(), geo.begin() + 1, geo.end());
  }
  return out;
}

}  // namespace relgeo
