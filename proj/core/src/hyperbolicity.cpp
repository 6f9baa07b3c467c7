#include "relgeo/hyperbolicity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>

#include <json.hpp>

#include "relgeo/parallel.hpp"
#include "relgeo/relhyp.hpp"

namespace relgeo {

namespace {

// vertices of the subball around the identity
int core_size(const BallGraph& ball, int core_radius) {
  int n = 0;
  for (int v = 0; v < ball.size(); ++v)
    if (ball.dist(0, v) <= core_radius) ++n;
  return n;  // ids are BFS order, so the core is a prefix
}

}  // namespace

// ---------------------------------------------------------------------------
// Thin triangles
// ---------------------------------------------------------------------------

namespace {

template <class SideFn>
double thin_scan(int n, int n_core, int random_triples, std::uint64_t seed, bool exhaustive,
                 const BallGraph& s_metric, SideFn&& side) {
  std::mutex mu;
  double delta = 0.0;

  auto triangle_delta = [&](int u, int v, int w) -> double {
    std::array<std::vector<int>, 3> sides = {side(u, v), side(v, w), side(u, w)};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& a = sides[i];
      const auto& b = sides[(i + 1) % 3];
      const auto& c = sides[(i + 2) % 3];
      for (int z : a) {
        int best = kUnreachable;
        for (int y : b) best = std::min(best, s_metric.dist(z, y));
        for (int y : c) best = std::min(best, s_metric.dist(z, y));
        worst = std::max(worst, static_cast<double>(best));
      }
    }
    return worst;
  };

  int limit = exhaustive ? n : n_core;
  parallel_for(static_cast<std::size_t>(limit), [&](std::size_t lo, std::size_t hi) {
    double local = 0.0;
    for (std::size_t u = lo; u < hi; ++u)
      for (int v = static_cast<int>(u) + 1; v < limit; ++v)
        for (int w = v + 1; w < limit; ++w)
          local = std::max(local, triangle_delta(static_cast<int>(u), v, w));
    std::lock_guard<std::mutex> lock(mu);
    delta = std::max(delta, local);
  });

  if (!exhaustive) {
    std::mt19937_64 rng(seed);
    std::vector<std::array<int, 3>> triples(static_cast<std::size_t>(random_triples));
    for (auto& t : triples)
      t = {static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n))),
           static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n))),
           static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)))};
    parallel_for(triples.size(), [&](std::size_t lo, std::size_t hi) {
      double local = 0.0;
      for (std::size_t i = lo; i < hi; ++i)
        local = std::max(local, triangle_delta(triples[i][0], triples[i][1], triples[i][2]));
      std::lock_guard<std::mutex> lock(mu);
      delta = std::max(delta, local);
    });
  }
  return delta;
}

}  // namespace

double thin_triangle_delta(const BallGraph& ball, const ScanPolicy& policy) {
  int nc = core_size(ball, policy.core_radius);
  return thin_scan(ball.size(), nc, policy.random_triples, policy.seed, policy.exhaustive,
                   ball, [&](int u, int v) { return chosen_geodesic(ball, u, v); });
}

double thin_triangle_delta(const RelBallGraph& rel, const ScanPolicy& policy) {
  int nc = core_size(rel.ball, policy.core_radius);
  return thin_scan(rel.size(), nc, policy.random_triples, policy.seed, policy.exhaustive,
                   rel.ball, [&](int u, int v) { return chosen_rel_geodesic(rel, u, v); });
}

// ---------------------------------------------------------------------------
// LineSystem
// ---------------------------------------------------------------------------

LineSystem::LineSystem(const RelBallGraph& rel, Rat kappa0, Rat mu0)
    : rel_(rel), kappa0_(kappa0), mu0_(mu0) {
  if (kappa0_ < mu0_)
    throw std::invalid_argument("LineSystem: kappa0 must be >= mu0");
}

int LineSystem::Line::position_of(int vertex) const {
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (verts[i] == vertex) return pos[i];
  return -1;
}

const LineSystem::Line& LineSystem::line(int u, int v) const {
  int a = std::min(u, v), b = std::max(u, v);
  auto it = lines_.find({a, b});
  if (it != lines_.end()) return it->second;

  std::vector<int> geo = a == b ? std::vector<int>{a} : chosen_geodesic(rel_.ball, a, b);
  std::vector<int> sat = saturation(rel_, geo, mu0_);
  Line line;
  for (int x = 0; x < rel_.size(); ++x) {
    int d = kUnreachable;
    for (int s : sat) d = std::min(d, rel_.ball.dist(x, s));
    if (!le_scaled(d, kappa0_, 1)) continue;
    // projection: nearest position on the geodesic, ties to the earlier one
    int best_pos = 0, best_d = kUnreachable;
    for (std::size_t i = 0; i < geo.size(); ++i) {
      int dd = rel_.ball.dist(x, geo[i]);
      if (dd < best_d) {
        best_d = dd;
        best_pos = static_cast<int>(i);
      }
    }
    line.verts.push_back(x);
    line.pos.push_back(best_pos);
  }
  // sort by (position, id); verts were generated in id order already
  std::vector<std::size_t> order(line.verts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return line.pos[x] < line.pos[y]; });
  Line sorted;
  for (std::size_t i : order) {
    sorted.verts.push_back(line.verts[i]);
    sorted.pos.push_back(line.pos[i]);
  }
  return lines_.emplace(std::make_pair(a, b), std::move(sorted)).first->second;
}

std::vector<int> LineSystem::center_set(int u, int v, int w) const {
  const Line& luv = line(u, v);
  const Line& lvw = line(v, w);
  const Line& luw = line(u, w);
  std::vector<int> a = luv.verts, b = lvw.verts, c = luw.verts;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::sort(c.begin(), c.end());
  std::vector<int> ab, abc;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));
  std::set_intersection(ab.begin(), ab.end(), c.begin(), c.end(), std::back_inserter(abc));
  return abc;
}

int LineSystem::center_uncached(int u, int v, int w) const {
  std::array<int, 3> key{u, v, w};
  std::sort(key.begin(), key.end());
  auto ov = center_overrides_.find(key);
  if (ov != center_overrides_.end()) return ov->second;
  if (key[0] == key[1]) return key[0];
  if (key[1] == key[2]) return key[1];
  std::vector<int> cs = center_set(key[0], key[1], key[2]);
  if (cs.empty()) throw EmptyCenterSet(key[0], key[1], key[2]);
  return cs.front();
}

int LineSystem::center(int u, int v, int w) const {
  std::array<int, 3> key{u, v, w};
  std::sort(key.begin(), key.end());
  auto it = centers_.find(key);
  if (it != centers_.end()) return it->second;
  int c = center_uncached(u, v, w);
  centers_.emplace(key, c);
  return c;
}

void LineSystem::override_center(int u, int v, int w, int value) {
  std::array<int, 3> key{u, v, w};
  std::sort(key.begin(), key.end());
  center_overrides_[key] = value;
}

std::vector<int> LineSystem::interval(int u, int v, int x, int y) const {
  const Line& l = line(u, v);
  int px = l.position_of(x), py = l.position_of(y);
  if (px < 0 || py < 0)
    throw std::logic_error("LineSystem::interval: endpoint not on the line");
  int lo = std::min(px, py), hi = std::max(px, py);
  std::vector<int> out;
  for (std::size_t i = 0; i < l.verts.size(); ++i)
    if (l.pos[i] >= lo && l.pos[i] <= hi) out.push_back(l.verts[i]);
  return out;
}

int LineSystem::center_set_diameter(int u, int v, int w) const {
  std::vector<int> cs = center_set(u, v, w);
  int diam = 0;
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b)
      diam = std::max(diam, rel_.rel_dist(cs[a], cs[b]));
  return diam;
}

void LineSystem::validate_axioms(const std::vector<std::array<int, 3>>& triples) const {
  for (const auto& t : triples) {
    auto [u, v, w] = t;
    int c1 = center(u, v, w);
    if (center(v, w, u) != c1 || center(w, u, v) != c1)
      throw std::logic_error("LineSystem: (c1) symmetry violated");
    if (center(u, u, v) != u) throw std::logic_error("LineSystem: (c2) violated");
    if (line(u, v).position_of(c1) < 0 || line(v, w).position_of(c1) < 0 ||
        line(u, w).position_of(c1) < 0)
      throw std::logic_error("LineSystem: (c3) violated: center off a line");
    // (l3): one canonical orientation per pair makes Lambda_uv == Lambda_vu
    if (line(u, v).verts.size() != line(v, u).verts.size())
      throw std::logic_error("LineSystem: (l3) violated");
  }
}

LineSystem build_lines_centers(const RelBallGraph& rel, const Rat& kappa0, const Rat& mu0) {
  return LineSystem(rel, kappa0, mu0);
}

// ---------------------------------------------------------------------------
// Bowditch constants
// ---------------------------------------------------------------------------

namespace {

int hausdorff_rel_sets(const RelBallGraph& rel, const std::vector<int>& a,
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

int diam_rel_set(const RelBallGraph& rel, const std::vector<int>& a) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      d = std::max(d, rel.rel_dist(a[i], a[j]));
  return d;
}

// centers computed without the global memo (overrides honored); keeps the
// parallel scan free of cache writes
int raw_center(const LineSystem& ls, int u, int v, int w) {
  return ls.center_uncached(u, v, w);
}

}  // namespace

BowditchReport bowditch_K(const RelBallGraph& rel, const LineSystem& ls,
                          const ScanPolicy& policy) {
  const int n = rel.size();
  const int limit = policy.exhaustive ? n : core_size(rel.ball, policy.core_radius);

  {
    // structural validation on a deterministic sample of scanned triples
    std::vector<std::array<int, 3>> sample;
    int step = std::max(1, limit / 8);
    for (int u = 0; u < limit; u += step)
      for (int v = u; v < limit; v += step)
        for (int w = v; w < limit; w += step) sample.push_back({u, v, w});
    ls.validate_axioms(sample);
  }

  BowditchReport rep;
  rep.radius = rel.ball.radius;
  rep.sampled = !policy.exhaustive;

  std::mutex mu;
  double kI = 0, kII = 0, kIII = 0;

  // (II) is measured on the open interval (strictly between the two center
  // positions): the closed interval has diameter >= 1 whenever adjacent
  // vertices get adjacent centers, which would put even trees above zero.
  auto scan_pair = [&](int u, int v, double& local_II, double& local_III) {
    const LineSystem::Line& l = ls.line(u, v);
    std::map<std::tuple<int, int, bool>, int> window_diam;
    auto window = [&](int plo, int phi, bool open) {
      if (plo > phi) std::swap(plo, phi);
      auto key = std::make_tuple(plo, phi, open);
      auto it = window_diam.find(key);
      if (it != window_diam.end()) return it->second;
      std::vector<int> in;
      for (std::size_t i = 0; i < l.verts.size(); ++i) {
        bool inside = open ? (l.pos[i] > plo && l.pos[i] < phi)
                           : (l.pos[i] >= plo && l.pos[i] <= phi);
        if (inside) in.push_back(l.verts[i]);
      }
      int d = diam_rel_set(rel, in);
      window_diam.emplace(key, d);
      return d;
    };

    // (II): rel-edges (p,q)
    for (int p = 0; p < limit; ++p) {
      int cp = raw_center(ls, u, v, p);
      int pp = l.position_of(cp);
      for (int q : rel_neighbors(rel, p)) {
        if (q >= limit) continue;
        int cq = raw_center(ls, u, v, q);
        int pq = l.position_of(cq);
        local_II = std::max(local_II, static_cast<double>(window(pp, pq, true)));
      }
    }
    // (III): w over the whole line
    for (int w : l.verts) {
      int c = raw_center(ls, u, v, w);
      local_III = std::max(
          local_III, static_cast<double>(window(l.position_of(w), l.position_of(c), false)));
    }
  };

  auto scan_I = [&](int u, int v, int w) -> double {
    int c = raw_center(ls, u, v, w);
    std::vector<int> a = ls.interval(u, v, u, c);
    std::vector<int> b = ls.interval(u, w, u, c);
    return static_cast<double>(hausdorff_rel_sets(rel, a, b));
  };

  // lines are lazily built under a shared cache; prebuild serially to keep
  // the scan threads read-only
  for (int u = 0; u < limit; ++u)
    for (int v = u; v < limit; ++v) ls.line(u, v);

  parallel_for(static_cast<std::size_t>(limit), [&](std::size_t lo, std::size_t hi) {
    double lI = 0, lII = 0, lIII = 0;
    for (std::size_t u = lo; u < hi; ++u) {
      for (int v = static_cast<int>(u); v < limit; ++v) {
        scan_pair(static_cast<int>(u), v, lII, lIII);
        for (int w = v; w < limit; ++w) {
          lI = std::max(lI, scan_I(static_cast<int>(u), v, w));
          lI = std::max(lI, scan_I(v, static_cast<int>(u), w));
          lI = std::max(lI, scan_I(w, static_cast<int>(u), v));
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    kI = std::max(kI, lI);
    kII = std::max(kII, lII);
    kIII = std::max(kIII, lIII);
  });

  if (!policy.exhaustive) {
    std::mt19937_64 rng(policy.seed);
    for (int t = 0; t < policy.random_triples; ++t) {
      int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
      int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
      int w = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
      kI = std::max(kI, scan_I(u, v, w));
      kI = std::max(kI, scan_I(v, u, w));
      kI = std::max(kI, scan_I(w, u, v));
      // (III) with the random w against the pair (u,v)
      const auto& l = ls.line(u, v);
      if (!l.verts.empty()) {
        int wi = l.verts[uniform_index(rng, l.verts.size())];
        int c = raw_center(ls, u, v, wi);
        std::vector<int> seg = ls.interval(u, v, wi, c);
        kIII = std::max(kIII, static_cast<double>(diam_rel_set(rel, seg)));
      }
      // (II) with a random rel-edge, open interval as in the exhaustive scan
      auto ns = rel_neighbors(rel, w);
      if (!ns.empty()) {
        int q = ns[uniform_index(rng, ns.size())];
        int cp = raw_center(ls, u, v, w);
        int cq = raw_center(ls, u, v, q);
        const auto& l = ls.line(u, v);
        int plo = l.position_of(cp), phi = l.position_of(cq);
        if (plo > phi) std::swap(plo, phi);
        std::vector<int> seg;
        for (std::size_t i = 0; i < l.verts.size(); ++i)
          if (l.pos[i] > plo && l.pos[i] < phi) seg.push_back(l.verts[i]);
        kII = std::max(kII, static_cast<double>(diam_rel_set(rel, seg)));
      }
    }
  }

  rep.K_I = kI;
  rep.K_II = kII;
  rep.K_III = kIII;
  rep.K = std::max({kI, kII, kIII});
  return rep;
}

std::string BowditchReport::to_json(const Rat& kappa0, const Rat& mu0) const {
  nlohmann::json j;
  j["K_I"] = K_I;
  j["K_II"] = K_II;
  j["K_III"] = K_III;
  j["K"] = K;
  j["radius"] = radius;
  j["kappa0"] = kappa0.str();
  j["mu0"] = mu0.str();
  j["sampled"] = sampled;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Appendix-style bounds
// ---------------------------------------------------------------------------

double log_distortion_check(const RelBallGraph& rel, const std::vector<int>& p,
                            const RelPath& q) {
  q.validate(rel);
  if (p.empty()) throw std::invalid_argument("log_distortion_check: empty path");
  if (p.front() != q.vertices.front() || p.back() != q.vertices.back())
    throw std::invalid_argument("log_distortion_check: endpoints differ");
  if (q.length() != rel.rel_dist(q.vertices.front(), q.vertices.back()))
    throw std::invalid_argument("log_distortion_check: q is not a rel-geodesic");
  int worst = 0;
  for (int v : q.vertices) {
    int best = kUnreachable;
    for (int u : p) best = std::min(best, rel.ball.dist(u, v));
    worst = std::max(worst, best);
  }
  return static_cast<double>(worst);
}

IsolatedAlphaResult isolated_component_alpha(const RelBallGraph& rel,
                                             const std::vector<RelPath>& cycles) {
  IsolatedAlphaResult res;
  for (const RelPath& cyc : cycles) {
    if (cyc.vertices.empty() || cyc.vertices.front() != cyc.vertices.back())
      throw std::invalid_argument("isolated_component_alpha: path is not a cycle");
    if (cyc.length() == 0) continue;
    PathAnalysis an = analyze_path(cyc, rel);

    std::vector<PathComponent> comps;
    for (const auto& c : an.components)
      if (c.coset_component) comps.push_back(c);
    // wrap-around: first and last coset components in the same coset are one
    // cyclic component
    if (comps.size() >= 2 && an.components.front().coset_component &&
        an.components.back().coset_component &&
        comps.front().parabolic == comps.back().parabolic &&
        comps.front().coset == comps.back().coset) {
      comps.front().start_vertex = comps.back().start_vertex;
      comps.pop_back();
    }

    double total = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      bool isolated = true;
      for (std::size_t j = 0; j < comps.size(); ++j)
        if (j != i && comps[j].parabolic == comps[i].parabolic &&
            comps[j].coset == comps[i].coset)
          isolated = false;
      if (isolated)
        total += static_cast<double>(rel.ball.dist(comps[i].start_vertex, comps[i].end_vertex));
    }
    res.alpha = std::max(res.alpha, total / static_cast<double>(cyc.length()));
    ++res.cycles_scanned;
  }
  return res;
}

std::pair<double, double> center_choice_sensitivity(const RelBallGraph& rel, const Rat& kappa0,
                                                    const Rat& mu0, int choices,
                                                    const ScanPolicy& policy) {
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = 0.0;
  const int limit = policy.exhaustive ? rel.size() : core_size(rel.ball, policy.core_radius);
  for (int j = 0; j < choices; ++j) {
    LineSystem ls(rel, kappa0, mu0);
    for (int u = 0; u < limit; ++u)
      for (int v = u + 1; v < limit; ++v)
        for (int w = v + 1; w < limit; ++w) {
          std::vector<int> cs = ls.center_set(u, v, w);
          if (cs.size() > 1)
            ls.override_center(u, v, w, cs[static_cast<std::size_t>(j) % cs.size()]);
        }
    BowditchReport rep = bowditch_K(rel, ls, policy);
    kmin = std::min(kmin, rep.K);
    kmax = std::max(kmax, rep.K);
  }
  if (kmin == std::numeric_limits<double>::infinity()) kmin = 0.0;
  return {kmin, kmax};
}

}  // namespace relgeo
