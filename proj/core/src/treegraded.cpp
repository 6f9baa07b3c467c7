#include "relgeo/treegraded.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace relgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

std::vector<std::vector<std::pair<int, double>>> build_adj(const WeightedGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.n);
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n || e.u == e.v || e.len <= 0)
      throw std::invalid_argument("WeightedGraph: bad edge");
    adj[e.u].emplace_back(e.v, e.len);
    adj[e.v].emplace_back(e.u, e.len);
  }
  for (auto& ns : adj) std::sort(ns.begin(), ns.end());
  return adj;
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int src) {
  std::vector<double> d(adj.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u] + kEps) continue;
    for (auto [v, len] : adj[u]) {
      if (d[u] + len < d[v] - kEps) {
        d[v] = d[u] + len;
        pq.emplace(d[v], v);
      }
    }
  }
  return d;
}

}  // namespace

PieceSpace::PieceSpace(WeightedGraph g, std::vector<std::vector<int>> pieces)
    : g_(std::move(g)), pieces_(std::move(pieces)) {
  for (auto& p : pieces_) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.empty()) throw std::invalid_argument("PieceSpace: empty piece");
    for (int v : p)
      if (v < 0 || v >= g_.n) throw std::invalid_argument("PieceSpace: piece vertex out of range");
  }
  adj_ = build_adj(g_);
  dist_.resize(g_.n);
  for (int v = 0; v < g_.n; ++v) dist_[v] = dijkstra(adj_, v);
  validate();
}

void PieceSpace::validate() const {
  for (int v = 0; v < g_.n; ++v)
    if (dist_[0][v] == kInf) throw std::invalid_argument("PieceSpace: graph not connected");
  for (std::size_t pi = 0; pi < pieces_.size(); ++pi) {
    const auto& p = pieces_[pi];
    // induced connectivity + geodesicity: the induced shortest-path metric
    // must agree with the global metric on the piece
    std::vector<int> local(g_.n, -1);
    for (std::size_t i = 0; i < p.size(); ++i) local[p[i]] = static_cast<int>(i);
    std::vector<std::vector<std::pair<int, double>>> sub(p.size());
    for (const auto& e : g_.edges)
      if (local[e.u] >= 0 && local[e.v] >= 0) {
        sub[local[e.u]].emplace_back(local[e.v], e.len);
        sub[local[e.v]].emplace_back(local[e.u], e.len);
      }
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto d = dijkstra(sub, static_cast<int>(i));
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (d[j] == kInf)
          throw std::invalid_argument("PieceSpace: piece " + std::to_string(pi) +
                                      " induces a disconnected subgraph");
        if (d[j] > dist_[p[i]][p[j]] + kEps)
          throw std::invalid_argument("PieceSpace: piece " + std::to_string(pi) +
                                      " is not geodesic");
      }
    }
  }
}

std::string PieceSpace::to_json() const {
  nlohmann::json j;
  j["vertices"] = g_.n;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : g_.edges) edges.push_back({e.u, e.v, e.len});
  auto& pieces = j["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_) pieces.push_back(p);
  return j.dump(2);
}

PieceSpace PieceSpace::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  WeightedGraph g;
  g.n = j.at("vertices").get<int>();
  for (const auto& e : j.at("edges"))
    g.add_edge(e.at(0).get<int>(), e.at(1).get<int>(),
               e.size() > 2 ? e.at(2).get<double>() : 1.0);
  std::vector<std::vector<int>> pieces;
  for (const auto& p : j.at("pieces")) pieces.push_back(p.get<std::vector<int>>());
  return PieceSpace(std::move(g), std::move(pieces));
}

T1Result check_t1(const PieceSpace& x) {
  const auto& ps = x.pieces();
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      std::vector<int> inter;
      std::set_intersection(ps[a].begin(), ps[a].end(), ps[b].begin(), ps[b].end(),
                            std::back_inserter(inter));
      if (inter.size() > 1)
        return {false, static_cast<int>(a), static_cast<int>(b), std::move(inter)};
    }
  }
  return {};
}

namespace {

// Enumerates simple cycles of combinatorial length <= cap. Each cycle is
// reported once, rooted at its least vertex with the second vertex smaller
// than the last (kills orientation duplicates).
void enumerate_cycles(const PieceSpace& x, int cap,
                      const std::function<bool(const std::vector<int>&)>& visit) {
  const auto& adj = x.adjacency();
  int n = x.size();
  std::vector<int> path;
  std::vector<bool> used(n, false);

  std::function<bool(int, int)> dfs = [&](int root, int u) -> bool {
    for (auto [v, len] : adj[u]) {
      (void)len;
      if (v == root && path.size() >= 3) {
        if (path[1] < path.back())
          if (!visit(path)) return false;
      }
      if (v <= root || used[v]) continue;
      if (static_cast<int>(path.size()) >= cap) continue;
      used[v] = true;
      path.push_back(v);
      bool go_on = dfs(root, v);
      path.pop_back();
      used[v] = false;
      if (!go_on) return false;
    }
    return true;
  };

  for (int root = 0; root < n; ++root) {
    path = {root};
    used.assign(n, false);
    used[root] = true;
    if (!dfs(root, root)) return;
  }
}

}  // namespace

T2Result check_t2(const PieceSpace& x, int cycle_cap) {
  T2Result res;
  res.cycle_cap = cycle_cap;
  enumerate_cycles(x, cycle_cap, [&](const std::vector<int>& cycle) {
    for (const auto& p : x.pieces()) {
      bool inside = true;
      for (int v : cycle)
        if (!std::binary_search(p.begin(), p.end(), v)) {
          inside = false;
          break;
        }
      if (inside) return true;
    }
    res.ok = false;
    res.offending_cycle = cycle;
    return false;
  });
  return res;
}

std::vector<std::vector<int>> weighted_geodesics(const PieceSpace& x, int u, int v,
                                                 std::size_t cap, bool* truncated) {
  std::vector<std::vector<int>> out;
  if (truncated) *truncated = false;
  std::vector<int> path{u};
  std::function<bool(int)> dfs = [&](int a) -> bool {
    if (a == v) {
      if (out.size() >= cap) {
        if (truncated) *truncated = true;
        return false;
      }
      out.push_back(path);
      return true;
    }
    for (auto [b, len] : x.adjacency()[a]) {
      if (std::abs(x.dist(u, a) + len + x.dist(b, v) - x.dist(u, v)) < kEps &&
          std::abs(x.dist(u, b) - (x.dist(u, a) + len)) < kEps) {
        path.push_back(b);
        bool go_on = dfs(b);
        path.pop_back();
        if (!go_on) return false;
      }
    }
    return true;
  };
  dfs(u);
  return out;
}

ProjectResult project_to_piece(const PieceSpace& x, int vertex, int piece,
                               std::size_t geodesic_cap) {
  const auto& p = x.pieces().at(piece);
  int best = -1;
  double best_d = kInf;
  bool tie = false;
  int tie_with = -1;
  for (int m : p) {
    double d = x.dist(vertex, m);
    if (d < best_d - kEps) {
      best = m;
      best_d = d;
      tie = false;
    } else if (std::abs(d - best_d) < kEps && m != best) {
      tie = true;
      tie_with = m;
    }
  }
  if (tie) throw NonUniqueProjection(best, tie_with);

  ProjectResult res;
  res.vertex = best;
  for (int m : p) {
    bool trunc = false;
    auto geos = weighted_geodesics(x, vertex, m, geodesic_cap, &trunc);
    if (trunc) res.enumeration_truncated = true;
    for (const auto& g : geos)
      if (std::find(g.begin(), g.end(), best) == g.end()) res.geodesics_verified = false;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Canonical decomposition (blocks)
// ---------------------------------------------------------------------------

PieceSpace canonical_pieces(const WeightedGraph& g) {
  auto adj = build_adj(g);  // validates edges
  int n = g.n;
  if (n == 0) throw std::invalid_argument("canonical_pieces: empty graph");

  // Hopcroft–Tarjan with an explicit edge stack; multigraph-safe via edge ids.
  std::vector<std::vector<std::pair<int, int>>> inc(n);  // (neighbor, edge id)
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    inc[g.edges[id].u].emplace_back(g.edges[id].v, static_cast<int>(id));
    inc[g.edges[id].v].emplace_back(g.edges[id].u, static_cast<int>(id));
  }
  for (auto& v : inc) std::sort(v.begin(), v.end());

  std::vector<int> num(n, -1), low(n, 0);
  std::vector<std::pair<int, int>> estack;  // edges as vertex pairs
  std::vector<std::vector<int>> blocks;
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int u, int parent_edge) {
    num[u] = low[u] = timer++;
    for (auto [v, id] : inc[u]) {
      if (id == parent_edge) continue;
      if (num[v] == -1) {
        estack.emplace_back(u, v);
        dfs(v, id);
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= num[u]) {
          std::set<int> block;
          for (;;) {
            auto [a, b] = estack.back();
            estack.pop_back();
            block.insert(a);
            block.insert(b);
            if (a == u && b == v) break;
          }
          blocks.emplace_back(block.begin(), block.end());
        }
      } else if (num[v] < num[u]) {
        estack.emplace_back(u, v);
        low[u] = std::min(low[u], num[v]);
      }
    }
  };
  dfs(0, -1);
  for (int v = 0; v < n; ++v)
    if (num[v] == -1) throw std::invalid_argument("canonical_pieces: graph not connected");

  if (blocks.empty()) blocks.push_back({0});  // single-vertex graph
  std::sort(blocks.begin(), blocks.end());
  return PieceSpace(g, std::move(blocks));
}

PieceSpace glue_pieces(const PieceSpace& x, const std::vector<int>& selection, int recheck_cap) {
  if (selection.empty()) throw std::invalid_argument("glue_pieces: empty selection");
  std::vector<int> sel = selection;
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  for (int s : sel)
    if (s < 0 || s >= static_cast<int>(x.pieces().size()))
      throw std::out_of_range("glue_pieces: bad piece index");

  // connectivity of the union through shared vertices
  std::vector<int> comp(sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i) comp[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int a) { return comp[a] == a ? a : comp[a] = find(comp[a]); };
  for (std::size_t i = 0; i < sel.size(); ++i)
    for (std::size_t j = i + 1; j < sel.size(); ++j) {
      std::vector<int> inter;
      std::set_intersection(x.pieces()[sel[i]].begin(), x.pieces()[sel[i]].end(),
                            x.pieces()[sel[j]].begin(), x.pieces()[sel[j]].end(),
                            std::back_inserter(inter));
      if (!inter.empty()) comp[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  for (std::size_t i = 0; i < sel.size(); ++i)
    if (find(static_cast<int>(i)) != find(0))
      throw std::invalid_argument("glue_pieces: selected pieces are not connected");

  std::vector<std::vector<int>> pieces;
  std::vector<int> merged;
  for (int s : sel)
    merged.insert(merged.end(), x.pieces()[s].begin(), x.pieces()[s].end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  pieces.push_back(std::move(merged));
  for (std::size_t i = 0; i < x.pieces().size(); ++i)
    if (!std::binary_search(sel.begin(), sel.end(), static_cast<int>(i)))
      pieces.push_back(x.pieces()[i]);

  PieceSpace out(x.graph(), std::move(pieces));
  if (!check_t1(out).ok) throw std::runtime_error("glue_pieces: result violates T1");
  if (!check_t2(out, recheck_cap).ok) throw std::runtime_error("glue_pieces: result violates T2");
  return out;
}

PieceSpace split_bouquet(const PieceSpace& x, int piece, int cut_vertex, int recheck_cap) {
  const auto& p = x.pieces().at(piece);
  if (!std::binary_search(p.begin(), p.end(), cut_vertex))
    throw std::invalid_argument("split_bouquet: cut vertex not in piece");

  // components of the induced piece subgraph minus the cut vertex
  std::vector<int> local(x.size(), -1);
  for (std::size_t i = 0; i < p.size(); ++i) local[p[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> sub(p.size());
  for (const auto& e : x.graph().edges)
    if (local[e.u] >= 0 && local[e.v] >= 0) {
      sub[local[e.u]].push_back(local[e.v]);
      sub[local[e.v]].push_back(local[e.u]);
    }
  std::vector<int> comp(p.size(), -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == cut_vertex || comp[i] != -1) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      std::size_t a = stack.back();
      stack.pop_back();
      for (int b : sub[a]) {
        if (p[b] == cut_vertex || comp[b] != -1) continue;
        comp[b] = ncomp;
        stack.push_back(static_cast<std::size_t>(b));
      }
    }
    ++ncomp;
  }
  if (ncomp < 2) throw std::invalid_argument("split_bouquet: vertex does not cut the piece");

  std::vector<std::vector<int>> pieces;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> sub_piece{cut_vertex};
    for (std::size_t i = 0; i < p.size(); ++i)
      if (comp[i] == c) sub_piece.push_back(p[i]);
    std::sort(sub_piece.begin(), sub_piece.end());
    pieces.push_back(std::move(sub_piece));
  }
  for (std::size_t i = 0; i < x.pieces().size(); ++i)
    if (static_cast<int>(i) != piece) pieces.push_back(x.pieces()[i]);

  PieceSpace out(x.graph(), std::move(pieces));
  if (!check_t1(out).ok) throw std::runtime_error("split_bouquet: result violates T1");
  if (!check_t2(out, recheck_cap).ok)
    throw std::runtime_error("split_bouquet: result violates T2");
  return out;
}

}  // namespace relgeo
