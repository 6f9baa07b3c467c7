#include "relgeo/netapprox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relgeo/parallel.hpp"

namespace relgeo {

namespace {
constexpr double kTol = 1e-9;

std::string format3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}
}  // namespace

std::optional<std::string> MetricSample::validate_metric(int samples,
                                                         std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  int n = size();
  for (int s = 0; s < samples; ++s) {
    int i = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    int j = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    int k = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    if (std::abs(dist(i, i)) > kTol) return "dist(p,p) != 0 at p=" + std::to_string(i);
    if (std::abs(dist(i, j) - dist(j, i)) > kTol)
      return "asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    if (dist(i, j) < -kTol) return "negative distance";
    if (dist(i, k) > dist(i, j) + dist(j, k) + kTol)
      return "triangle inequality fails at (" + std::to_string(i) + "," + std::to_string(j) +
             "," + std::to_string(k) + ")";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Torus bouquets
// ---------------------------------------------------------------------------

TorusBouquetSample::TorusBouquetSample(std::vector<int> dims, int grid)
    : dims_(std::move(dims)), grid_(grid) {
  if (dims_.empty()) throw std::invalid_argument("torus bouquet: empty dims");
  if (grid_ < 2) throw std::invalid_argument("torus bouquet: grid must be >= 2");
  for (int d : dims_)
    if (d < 1) throw std::invalid_argument("torus bouquet: bad dimension");

  points_.push_back({-1, {}});  // shared basepoint
  for (std::size_t t = 0; t < dims_.size(); ++t) {
    int d = dims_[t];
    std::vector<int> idx(d, 0);
    for (;;) {
      bool origin = true;
      for (int c : idx)
        if (c != 0) origin = false;
      if (!origin) {
        Point p;
        p.torus = static_cast<int>(t);
        for (int c : idx) p.coord.push_back(static_cast<double>(c) / grid_);
        points_.push_back(std::move(p));
      }
      int pos = d - 1;
      while (pos >= 0 && idx[pos] == grid_ - 1) idx[pos--] = 0;
      if (pos < 0) break;
      ++idx[pos];
    }
  }
}

double TorusBouquetSample::intra(const Point& a, const Point& b) const {
  // a and b in the same torus (basepoint acts as the origin of any torus)
  const std::vector<double>& ca = a.coord;
  const std::vector<double>& cb = b.coord;
  std::size_t dim = std::max(ca.size(), cb.size());
  double s = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    double x = i < ca.size() ? ca[i] : 0.0;
    double y = i < cb.size() ? cb[i] : 0.0;
    double d = std::abs(x - y);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double TorusBouquetSample::dist(int i, int j) const {
  const Point& a = points_[i];
  const Point& b = points_[j];
  if (a.torus == b.torus || a.torus < 0 || b.torus < 0) {
    if (a.torus < 0 && b.torus < 0) return 0.0;
    return intra(a, b);
  }
  return intra(a, points_[0]) + intra(points_[0], b);
}

std::string TorusBouquetSample::point_label(int i) const {
  const Point& p = points_[i];
  if (p.torus < 0) return "base";
  std::ostringstream os;
  os << 'T' << p.torus << ":(";
  for (std::size_t c = 0; c < p.coord.size(); ++c) {
    if (c) os << ',';
    os << p.coord[c];
  }
  os << ')';
  return os.str();
}

std::unique_ptr<TorusBouquetSample> torus_bouquet_space(const std::vector<int>& dims,
                                                        int grid) {
  return std::make_unique<TorusBouquetSample>(dims, grid);
}

// ---------------------------------------------------------------------------
// snets
// ---------------------------------------------------------------------------

std::vector<int> greedy_snet(const MetricSample& space, const std::vector<int>& domain,
                             double delta, const std::vector<int>& seed_order) {
  if (domain.empty()) throw std::invalid_argument("greedy_snet: empty domain");
  if (delta <= 0) throw std::invalid_argument("greedy_snet: delta must be positive");
  std::vector<int> order(domain.size());
  if (seed_order.empty()) {
    for (std::size_t i = 0; i < domain.size(); ++i) order[i] = static_cast<int>(i);
  } else {
    if (seed_order.size() != domain.size())
      throw std::invalid_argument("greedy_snet: seed_order size mismatch");
    order = seed_order;
  }

  std::vector<int> net;
  for (int oi : order) {
    int p = domain[oi];
    bool separated = true;
    for (int q : net)
      if (space.dist(p, q) < delta - kTol) {
        separated = false;
        break;
      }
    if (separated) net.push_back(p);
  }

  // post-hoc verification: separation and coverage
  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = a + 1; b < net.size(); ++b)
      if (space.dist(net[a], net[b]) < delta - kTol)
        throw std::logic_error("greedy_snet: separation verification failed");
  for (int p : domain) {
    bool covered = false;
    for (int q : net)
      if (space.dist(p, q) < delta + kTol) {
        covered = true;
        break;
      }
    if (!covered) throw std::logic_error("greedy_snet: coverage verification failed");
  }
  return net;
}

GammaGraph gamma_graph(const MetricSample& space, const std::vector<int>& A, double kappa) {
  GammaGraph g;
  g.verts = A;
  g.kappa = kappa;
  const int n = static_cast<int>(A.size());

  std::vector<std::vector<GammaGraph::Edge>> rows(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t a = lo; a < hi; ++a)
      for (int b = static_cast<int>(a) + 1; b < n; ++b) {
        double d = space.dist(A[a], A[b]);
        if (d > kTol && d <= kappa + kTol)
          rows[a].push_back({static_cast<int>(a), b, d});
      }
  });
  for (auto& row : rows)
    g.edges.insert(g.edges.end(), row.begin(), row.end());

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.a].emplace_back(e.b, e.len);
    adj[e.b].emplace_back(e.a, e.len);
  }

  g.path_dist.assign(n, std::vector<float>(n, std::numeric_limits<float>::infinity()));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> dist(n);
    for (std::size_t src = lo; src < hi; ++src) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[src] = 0;
      pq.emplace(0.0, static_cast<int>(src));
      while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u] + kTol) continue;
        for (auto [v, len] : adj[u])
          if (dist[u] + len < dist[v] - kTol) {
            dist[v] = dist[u] + len;
            pq.emplace(dist[v], v);
          }
      }
      for (int v = 0; v < n; ++v) g.path_dist[src][v] = static_cast<float>(dist[v]);
    }
  });

  g.connected = true;
  for (int v = 0; v < n; ++v)
    if (!std::isfinite(g.path_dist[0][v])) g.connected = false;
  return g;
}

double GammaGraph::max_edge_len() const {
  double m = 0;
  for (const auto& e : edges) m = std::max(m, e.len);
  return m;
}
double GammaGraph::min_edge_len() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) m = std::min(m, e.len);
  return edges.empty() ? 0.0 : m;
}

SnetChain nested_snets(const MetricSample& space, const std::vector<double>& radii,
                       const std::vector<double>& deltas, double zeta,
                       const std::vector<int>& seed_order, std::vector<int> stage_numbers) {
  if (radii.size() != deltas.size() || radii.empty())
    throw std::invalid_argument("nested_snets: radii/deltas mismatch");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("nested_snets: deltas must be strictly decreasing");
    if (radii[i] < radii[i - 1])
      throw std::invalid_argument("nested_snets: radii must be nondecreasing");
  }
  if (stage_numbers.empty()) {
    stage_numbers.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) stage_numbers[i] = static_cast<int>(i) + 1;
  }
  if (stage_numbers.size() != radii.size())
    throw std::invalid_argument("nested_snets: stage_numbers size mismatch");

  SnetChain chain;
  chain.zeta = zeta;
  chain.space = &space;
  chain.deltas = deltas;
  chain.stage_numbers = stage_numbers;

  int base = space.basepoint();
  std::vector<int> net;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    std::vector<int> domain;
    for (int p = 0; p < space.size(); ++p)
      if (space.dist(base, p) <= radii[s] + kTol) domain.push_back(p);
    if (domain.empty()) throw std::invalid_argument("nested_snets: empty stage domain");

    // keep the previous net first so the extension is nested, then the rest
    // of the domain in seed order
    std::vector<int> order;
    std::vector<bool> in_net(space.size(), false);
    for (int p : net) in_net[p] = true;
    std::vector<int> dom_pos(space.size(), -1);
    for (std::size_t i = 0; i < domain.size(); ++i) dom_pos[domain[i]] = static_cast<int>(i);
    for (int p : net) {
      if (dom_pos[p] < 0)
        throw std::logic_error("nested_snets: previous net left the stage domain");
      order.push_back(dom_pos[p]);
    }
    if (seed_order.empty()) {
      for (std::size_t i = 0; i < domain.size(); ++i)
        if (!in_net[domain[i]]) order.push_back(static_cast<int>(i));
    } else {
      for (int p : seed_order)
        if (p < static_cast<int>(space.size()) && dom_pos[p] >= 0 && !in_net[p])
          order.push_back(dom_pos[p]);
      if (order.size() != domain.size())
        throw std::invalid_argument("nested_snets: seed_order does not cover the domain");
    }

    std::vector<int> next = greedy_snet(space, domain, deltas[s], order);
    // nesting: greedy keeps all previous members because they stay separated
    for (int p : net)
      if (std::find(next.begin(), next.end(), p) == next.end())
        throw std::logic_error("nested_snets: nesting verification failed");
    net = std::move(next);
    chain.nets.push_back(net);
    int k = stage_numbers[s] / 2;
    chain.gammas.push_back(gamma_graph(space, net, std::pow(zeta, k)));
  }
  return chain;
}

NetBoundsReport net_metric_bounds_check(const SnetChain& chain, double zeta) {
  (void)zeta;  // the bound depends only on each stage's gamma radius
  if (chain.stages() < 1 || chain.space == nullptr)
    throw std::invalid_argument("net_metric_bounds_check: empty chain");
  bool has_applicable = false;
  for (int n : chain.stage_numbers)
    if (n >= 2) has_applicable = true;
  if (!has_applicable)
    throw std::invalid_argument("net_metric_bounds_check: needs a stage with n >= 2");

  NetBoundsReport rep;
  for (int s = 0; s < chain.stages(); ++s) {
    if (chain.stage_numbers[s] < 2) continue;
    const GammaGraph& g = chain.gammas[s];
    double zk = g.kappa;  // zeta^{floor(n/2)}
    const int m = static_cast<int>(g.verts.size());
    constexpr double kFloatTol = 1e-5;  // path_dist is stored as float
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        double d = chain.space->dist(g.verts[a], g.verts[b]);
        double dn = g.path_dist[a][b];
        double upper = (1 + 6 * zk) * (d + 2 * zk) + 2 * zk;
        ++rep.pairs_checked;
        if (dn < d - kFloatTol || dn > upper + kFloatTol) {
          rep.ok = false;
          if (rep.violations.size() < 32)
            rep.violations.push_back(
                {chain.stage_numbers[s], g.verts[a], g.verts[b], d, upper, dn, d});
        }
        if (upper > 0) rep.max_rel_slack = std::max(rep.max_rel_slack, dn / upper);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fast sequences
// ---------------------------------------------------------------------------

namespace {

std::map<int, int> kappa_counts(const WordSet& words) {
  std::map<int, int> kappa;
  for (const Word& w : words.words()) kappa[static_cast<int>(w.size())] += 1;
  return kappa;
}

FastSeqResult fast_sequence_impl(const std::vector<const GammaGraph*>& graphs,
                                 const std::vector<int>& stage_numbers, double zeta,
                                 const WordSet& words, double growth,
                                 const std::vector<double>& eps) {
  if (graphs.empty()) throw std::invalid_argument("fast_sequence: no stages");
  if (eps.empty()) throw std::invalid_argument("fast_sequence: empty eps schedule");
  auto kappa = kappa_counts(words);
  int lmax = kappa.empty() ? 0 : kappa.rbegin()->first;

  FastSeqResult res;
  long long prev = 0;
  for (std::size_t s = 0; s < graphs.size(); ++s) {
    int n = stage_numbers[s];
    const GammaGraph& g = *graphs[s];
    double zn = std::pow(zeta, n);
    double epsn = s < eps.size() ? eps[s] : eps.back();
    long long E = g.edge_count();

    long long d = prev + 1;
    if (s > 0) {
      // (2') zeta^n d_n / d_{n-1} >= growth * n
      long long need = static_cast<long long>(std::ceil(growth * n * prev / zn - kTol));
      d = std::max(d, need);
    }
    if (E > 0) {
      // (3') E_n / (zeta^n d_n) <= eps_n
      long long need = static_cast<long long>(std::ceil(E / (epsn * zn) - kTol));
      d = std::max(d, need);
      // (1) kappa(i) >= E_n for every i in [floor(zeta^n d_n), lmax]
      if (kappa.empty() || kappa.rbegin()->second < E)
        throw FastSeqError("word lengths exhausted: kappa(" + std::to_string(lmax) +
                               ") < E_n",
                           lmax);
      int i0 = lmax;
      while (i0 > 1) {
        auto it = kappa.find(i0 - 1);
        if (it == kappa.end() || it->second < E) break;
        --i0;
      }
      long long need1 = static_cast<long long>(std::ceil(i0 / zn - kTol));
      d = std::max(d, need1);
      // supply for the longest edge demand
      double maxe = g.max_edge_len();
      for (;;) {
        long long demand = static_cast<long long>(std::floor(d * maxe + kTol));
        if (demand <= lmax) break;
        throw FastSeqError("edge demand " + std::to_string(demand) +
                               " exceeds the word range",
                           static_cast<int>(demand));
      }
      while (static_cast<long long>(std::floor(zn * d)) < i0) ++d;
      res.certificate.push_back("(1) stage " + std::to_string(n) + ": kappa(i) >= " +
                                std::to_string(E) + " for all i in [" +
                                std::to_string(static_cast<long long>(std::floor(zn * d))) +
                                "," + std::to_string(lmax) + "]");
    }
    if (s > 0)
      res.certificate.push_back(
          "(2') stage " + std::to_string(n) + ": zeta^n*d_n/d_{n-1} = " +
          format3(zn * d / prev) + " >= growth*n = " + format3(growth * n));
    if (E > 0)
      res.certificate.push_back("(3') stage " + std::to_string(n) + ": E_n/(zeta^n*d_n) = " +
                                format3(E / (zn * d)) + " <= eps = " + format3(epsn));
    res.d.push_back(d);
    prev = d;
  }
  return res;
}

}  // namespace

FastSeqResult fast_sequence(const SnetChain& chain, double zeta, const WordSet& words,
                            double growth, const std::vector<double>& eps) {
  std::vector<const GammaGraph*> graphs;
  for (const auto& g : chain.gammas) graphs.push_back(&g);
  return fast_sequence_impl(graphs, chain.stage_numbers, zeta, words, growth, eps);
}

// ---------------------------------------------------------------------------
// Edge words and relations
// ---------------------------------------------------------------------------

bool EdgeLabeling::injective_with_inverses() const {
  std::set<Word> seen;
  for (const Word& w : word) {
    if (w.empty()) return false;
    if (!seen.insert(w).second) return false;
    if (!seen.insert(inverse(w)).second) return false;
  }
  return true;
}

EdgeLabeling assign_edge_words(const GammaGraph& gamma, const WordSet& words, long long d_n,
                               std::uint64_t seed) {
  std::map<int, std::vector<Word>> by_len;
  for (const Word& rep : orbit_representatives(words))
    by_len[static_cast<int>(rep.size())].push_back(rep);
  std::mt19937_64 rng(seed);
  for (auto& [len, reps] : by_len) seeded_shuffle(reps, rng);

  EdgeLabeling lab;
  for (const auto& e : gamma.edges) {
    int len = static_cast<int>(std::floor(d_n * e.len + kTol));
    auto it = by_len.find(len);
    if (it == by_len.end() || it->second.empty()) throw SupplyShortfall(len);
    // a seeded rotation: the canonical orbit representative is the least
    // rotation, which starts every word with the same letter run and would
    // align junction cancellations across all blocks
    Word rep = it->second.back();
    it->second.pop_back();
    lab.word.push_back(rotate(rep, uniform_index(rng, rep.size())));
    lab.target_len.push_back(len);
  }
  if (!lab.injective_with_inverses())
    throw std::logic_error("assign_edge_words: injectivity verification failed");
  return lab;
}

namespace {

// relators plus the per-relator (sum of targets, actual length) audit
WordSet build_relations_audited(const GammaGraph& gamma, const EdgeLabeling& lab,
                                int cycle_bound,
                                std::vector<std::pair<long long, long long>>* audit,
                                int spanning_tree_root = 0) {
  const int n = static_cast<int>(gamma.verts.size());
  std::vector<std::vector<std::pair<int, int>>> inc(n);  // (neighbor, edge id)
  for (std::size_t id = 0; id < gamma.edges.size(); ++id) {
    inc[gamma.edges[id].a].emplace_back(gamma.edges[id].b, static_cast<int>(id));
    inc[gamma.edges[id].b].emplace_back(gamma.edges[id].a, static_cast<int>(id));
  }
  for (auto& v : inc) std::sort(v.begin(), v.end());

  auto edge_word = [&](int id, int from) {
    return gamma.edges[id].a == from ? lab.word[id] : inverse(lab.word[id]);
  };

  std::set<Word> seen;  // keyed up to rotation and inversion
  std::vector<Word> relators;
  auto emit = [&](const std::vector<std::pair<int, int>>& loop) {
    // loop: (edge id, from vertex) sequence
    Word w;
    long long target = 0;
    for (auto [id, from] : loop) {
      w = concat(w, edge_word(id, from));
      target += lab.target_len[id];
    }
    Word r = free_reduce(w);
    if (r.empty()) return;
    Word canon = cyclic_normalize(r);
    Word canon_inv = cyclic_normalize(inverse(r));
    Word key = canon_inv < canon ? canon_inv : canon;
    if (seen.insert(key).second) {
      relators.push_back(canon);
      if (audit) audit->emplace_back(target, static_cast<long long>(canon.size()));
    }
  };

  // spanning forest (BFS) + fundamental cycles
  std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<bool> tree_edge(gamma.edges.size(), false);
  for (int root = spanning_tree_root, scanned = 0; scanned < n;
       root = (root + 1) % n, ++scanned) {
    if (visited[root]) continue;
    std::queue<int> q;
    q.push(root);
    visited[root] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, id] : inc[u]) {
        if (visited[v]) continue;
        visited[v] = true;
        parent[v] = u;
        parent_edge[v] = id;
        depth[v] = depth[u] + 1;
        tree_edge[id] = true;
        q.push(v);
      }
    }
  }
  for (std::size_t id = 0; id < gamma.edges.size(); ++id) {
    if (tree_edge[id]) continue;
    int a = gamma.edges[id].a, b = gamma.edges[id].b;
    // loop: a -> b via the edge, then b -> a in the tree
    std::vector<std::pair<int, int>> up_b, up_a;
    int x = b, y = a;
    while (x != y) {
      if (depth[x] >= depth[y]) {
        up_b.emplace_back(parent_edge[x], x);
        x = parent[x];
      } else {
        up_a.emplace_back(parent_edge[y], y);
        y = parent[y];
      }
    }
    std::vector<std::pair<int, int>> loop{{static_cast<int>(id), a}};
    for (auto [eid, from] : up_b) loop.emplace_back(eid, from);
    for (std::size_t i = up_a.size(); i-- > 0;) {
      auto [eid, from] = up_a[i];
      // reversed direction: from the parent side down
      int other = gamma.edges[eid].a == from ? gamma.edges[eid].b : gamma.edges[eid].a;
      loop.emplace_back(eid, other);
    }
    emit(loop);
  }

  // simple cycles of combinatorial length <= cycle_bound
  if (cycle_bound >= 2) {
    std::vector<std::pair<int, int>> path_edges;  // (edge id, from vertex)
    std::vector<int> path_verts;
    std::vector<bool> used(n, false);
    std::function<void(int, int)> dfs = [&](int root, int u) {
      for (auto [v, id] : inc[u]) {
        if (!path_edges.empty() && id == path_edges.back().first) continue;
        if (v == root && path_verts.size() >= 2) {
          // orientation dedupe: 2-cycles by edge ids, longer by vertices
          bool keep;
          if (path_verts.size() == 2)
            keep = path_edges.front().first < id;
          else
            keep = path_verts[1] < path_verts.back();
          if (keep) {
            auto loop = path_edges;
            loop.emplace_back(id, u);
            emit(loop);
          }
        }
        if (v <= root || used[v]) continue;
        if (static_cast<int>(path_verts.size()) >= cycle_bound) continue;
        used[v] = true;
        path_verts.push_back(v);
        path_edges.emplace_back(id, u);
        dfs(root, v);
        path_edges.pop_back();
        path_verts.pop_back();
        used[v] = false;
      }
    };
    for (int root = 0; root < n; ++root) {
      path_verts = {root};
      path_edges.clear();
      used.assign(n, false);
      used[root] = true;
      dfs(root, root);
    }
  }
  return WordSet(std::move(relators));
}

}  // namespace

WordSet build_relations(const GammaGraph& gamma, const EdgeLabeling& labeling,
                        int cycle_bound) {
  return build_relations_audited(gamma, labeling, cycle_bound, nullptr);
}

WordSet build_relations_rooted(const GammaGraph& gamma, const EdgeLabeling& labeling,
                               int cycle_bound, int root) {
  return build_relations_audited(gamma, labeling, cycle_bound, nullptr, root);
}

// ---------------------------------------------------------------------------
// EO pipeline
// ---------------------------------------------------------------------------

EOConfig EOConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EOConfig cfg;
  if (j.contains("zeta")) cfg.zeta = j["zeta"].get<double>();
  if (j.contains("lambda")) cfg.lambda = parse_rat(j["lambda"].get<std::string>());
  if (j.contains("stage_max")) cfg.stage_max = j["stage_max"].get<int>();
  if (j.contains("growth")) cfg.growth = j["growth"].get<double>();
  if (j.contains("eps")) cfg.eps = j["eps"].get<std::vector<double>>();
  if (j.contains("d_seq")) cfg.d_seq = j["d_seq"].get<std::vector<long long>>();
  if (j.contains("cycle_bound")) cfg.cycle_bound = j["cycle_bound"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("per_length")) cfg.per_length = j["per_length"].get<int>();
  if (j.contains("spaces"))
    for (const auto& s : j["spaces"])
      cfg.spaces.push_back({s.at("dims").get<std::vector<int>>(), s.at("grid").get<int>()});
  return cfg;
}

std::string EOConfig::to_json() const {
  nlohmann::json j;
  j["zeta"] = zeta;
  j["lambda"] = lambda.str();
  j["stage_max"] = stage_max;
  j["growth"] = growth;
  j["eps"] = eps;
  if (!d_seq.empty()) j["d_seq"] = d_seq;
  j["cycle_bound"] = cycle_bound;
  j["seed"] = seed;
  j["per_length"] = per_length;
  auto& sp = j["spaces"] = nlohmann::json::array();
  for (const auto& s : spaces) sp.push_back({{"dims", s.dims}, {"grid", s.grid}});
  return j.dump(2);
}

namespace {

int trailing_zeros(int n) {
  int k = 0;
  while (n % 2 == 0 && n > 0) {
    n /= 2;
    ++k;
  }
  return k;
}

// smallest word length at which rejection sampling at this lambda has slack
// over the typical longest repeat of a random word
int viable_min_length(const Rat& lambda) {
  for (int l = std::max<long long>(2, lambda.den / std::max<long long>(1, lambda.num));; ++l) {
    double lhs = lambda.value() * l;
    double rhs = 2.0 * std::log(static_cast<double>(l)) / std::log(3.0) + 3.0;
    if (lhs >= rhs) return l;
    if (l > 100000) throw std::invalid_argument("lambda too small for generation");
  }
}

}  // namespace

EOBuildResult build_eo_presentation(const EOConfig& cfg) {
  if (cfg.stage_max < 0) throw std::invalid_argument("eo: negative stage_max");
  if (cfg.spaces.empty()) throw std::invalid_argument("eo: no spaces configured");
  if (!(cfg.zeta > 0 && cfg.zeta < 1)) throw std::invalid_argument("eo: zeta must be in (0,1)");

  EOBuildResult out;
  out.presentation.generator_count = 2;
  out.presentation.generator_names = {"a", "b"};
  if (cfg.stage_max == 0) return out;  // free group, no relators

  // stage schedule: the dyadic interleaving
  std::vector<std::unique_ptr<TorusBouquetSample>> spaces;
  for (const auto& s : cfg.spaces) spaces.push_back(torus_bouquet_space(s.dims, s.grid));
  std::vector<int> space_of(cfg.stage_max + 1, 0);
  for (int n = 1; n <= cfg.stage_max; ++n)
    space_of[n] = trailing_zeros(n) % static_cast<int>(spaces.size());

  // per-space nested chains over that space's global stages
  std::vector<SnetChain> chains(spaces.size());
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    std::vector<double> radii, deltas;
    std::vector<int> numbers;
    for (int n = 1; n <= cfg.stage_max; ++n) {
      if (space_of[n] != static_cast<int>(s)) continue;
      radii.push_back(n);
      deltas.push_back(std::pow(cfg.zeta, n));
      numbers.push_back(n);
    }
    if (numbers.empty()) continue;
    chains[s] = nested_snets(*spaces[s], radii, deltas, cfg.zeta, {}, numbers);
  }

  std::vector<const GammaGraph*> stage_graph(cfg.stage_max + 1, nullptr);
  for (std::size_t s = 0; s < spaces.size(); ++s)
    for (int i = 0; i < chains[s].stages(); ++i)
      stage_graph[chains[s].stage_numbers[i]] = &chains[s].gammas[i];

  std::vector<const GammaGraph*> graphs;
  std::vector<int> numbers;
  for (int n = 1; n <= cfg.stage_max; ++n) {
    graphs.push_back(stage_graph[n]);
    numbers.push_back(n);
  }
  std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.5} : cfg.eps;

  // provisional d for a given minimal word length (supply constraint aside)
  auto derive_d = [&](int lo) {
    std::vector<long long> d;
    long long prev = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      int n = numbers[i];
      double zn = std::pow(cfg.zeta, n);
      double epsn = i < eps.size() ? eps[i] : eps.back();
      long long dn = prev + 1;
      if (i > 0)
        dn = std::max(dn, static_cast<long long>(std::ceil(cfg.growth * n * prev / zn - kTol)));
      long long E = graphs[i]->edge_count();
      if (E > 0) {
        dn = std::max(dn, static_cast<long long>(std::ceil(E / (epsn * zn) - kTol)));
        dn = std::max(dn, static_cast<long long>(std::ceil(lo / zn - kTol)));
        while (static_cast<long long>(std::floor(zn * dn)) < lo) ++dn;
      }
      d.push_back(dn);
      prev = dn;
    }
    return d;
  };
  auto ranges_for = [&](const std::vector<long long>& d, int lo, int* hi_out, int* per_out) {
    int hi = lo;
    std::map<int, int> demand;
    for (std::size_t i = 0; i < graphs.size(); ++i)
      for (const auto& e : graphs[i]->edges) {
        int len = static_cast<int>(std::floor(d[i] * e.len + kTol));
        demand[len] += 1;
        hi = std::max(hi, len);
      }
    int per = cfg.per_length;
    for (auto [len, cnt] : demand) per = std::max(per, cnt + 1);
    *hi_out = hi;
    *per_out = per;
  };

  // the viable minimum length grows with the corpus: rejection sampling needs
  // lambda * lo above the typical longest match against everything accepted
  int lo = viable_min_length(cfg.lambda);
  std::vector<long long> d = derive_d(lo);
  WordSet words = cfg.words;
  if (words.empty() && cfg.d_seq.empty()) {
    for (int iter = 0; iter < 4; ++iter) {
      int hi = lo, per = cfg.per_length;
      ranges_for(d, lo, &hi, &per);
      double corpus_chars = 0;
      for (int l = lo; l <= hi; ++l) corpus_chars += 4.0 * per * l;
      double need = (std::log(std::max(16.0, corpus_chars)) / std::log(3.0) + 4.0) /
                    cfg.lambda.value();
      int lo2 = static_cast<int>(std::ceil(need));
      if (lo2 <= lo) break;
      lo = lo2;
      d = derive_d(lo);
    }
  }
  if (!cfg.d_seq.empty()) {
    if (cfg.d_seq.size() != graphs.size())
      throw std::invalid_argument("eo: d_seq length does not match stage_max");
    d = cfg.d_seq;
  }

  if (words.empty()) {
    int hi = lo, per = cfg.per_length;
    ranges_for(d, lo, &hi, &per);
    std::vector<int> lengths;
    for (int l = lo; l <= hi; ++l) lengths.push_back(l);
    GenerateResult gen = generate_cstar_words(cfg.lambda, lengths, per, cfg.seed, 2,
                                              /*retry_budget=*/1200);
    if (!gen.complete()) {
      std::ostringstream os;
      os << "eo: word generation shortfall at lengths";
      for (const auto& s : gen.shortfalls) os << ' ' << s.length;
      throw std::runtime_error(os.str());
    }
    words = std::move(gen.words);
  }

  // fast sequence against the actual supply
  FastSeqResult fs = fast_sequence_impl(graphs, numbers, cfg.zeta, words, cfg.growth, eps);
  if (!cfg.d_seq.empty())
    fs.d = cfg.d_seq;  // caller-pinned d; certificate still refers to the derived one
  for (std::size_t i = 0; i < fs.d.size() && cfg.d_seq.empty(); ++i)
    if (fs.d[i] < d[i]) fs.d[i] = d[i];
  d = fs.d;
  out.fast_seq_certificate = fs.certificate;

  // stages: edge words and relations
  std::set<Word> all_relators;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    StageDiagnostics diag;
    diag.stage = numbers[i];
    diag.space_index = space_of[numbers[i]];
    diag.net_size = static_cast<int>(graphs[i]->verts.size());
    diag.edge_count = graphs[i]->edge_count();
    diag.d_n = d[i];
    if (graphs[i]->edge_count() > 0) {
      EdgeLabeling lab =
          assign_edge_words(*graphs[i], words, d[i], cfg.seed + 1000 + numbers[i]);
      std::vector<std::pair<long long, long long>> audit;
      WordSet rel = build_relations_audited(*graphs[i], lab, cfg.cycle_bound, &audit);
      diag.relators = static_cast<int>(rel.size());
      diag.length_audit = std::move(audit);
      for (const Word& r : rel.words()) all_relators.insert(r);
    }
    out.stages.push_back(std::move(diag));
  }

  out.presentation.relators.assign(all_relators.begin(), all_relators.end());
  out.words_used = words;
  out.word_profile = cstar_profile(words);
  if (!out.presentation.relators.empty()) {
    CPrimeResult cp = check_c_prime(WordSet(out.presentation.relators), Rat(1, 10));
    out.cprime_lambda_measured = cp.report.lambda_measured;
  }
  return out;
}

}  // namespace relgeo
