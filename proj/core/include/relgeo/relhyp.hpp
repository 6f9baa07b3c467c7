#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relgeo/cayley.hpp"
#include "relgeo/rat.hpp"
#include "relgeo/report.hpp"

namespace relgeo {

// Parameters for saturations; M is the measured stand-in for the paper-style
// quasi-geodesic constant, not a derived one.
struct SatParams {
  Rat L{1, 1};
  Rat C{0, 1};
  Rat mu{0, 1};
  Rat M{0, 1};
};

struct FatParams {
  Rat theta{1, 1};
  Rat sigma{2, 1};
  Rat nu{8, 1};
  FatParams() = default;
  FatParams(Rat t, Rat s, Rat n);  // validates theta > 0, sigma >= 1, nu >= 4*sigma
};

// One ball-restricted left coset: the vertex set of (parabolic, coset id).
struct CosetRef {
  int parabolic = 0;
  int coset = 0;
  const std::vector<int>* members = nullptr;
};
// Deterministic order: by (parabolic, coset id).
std::vector<CosetRef> ball_cosets(const RelBallGraph& rel);

// Vertices of q plus every coset whose mu-neighborhood (S metric) meets q.
std::vector<int> saturation(const RelBallGraph& rel, const std::vector<int>& q, const Rat& mu);

// (alpha_1): max over distinct coset pairs of diam(N_delta(A) cap N_delta(B)).
// Requires at least two cosets.
AlphaReport alpha1_report(const RelBallGraph& rel, const Rat& delta);

// (alpha_2): smallest M such that every enumerated in-ball geodesic of length
// l with endpoints in N_{theta*l}(A) meets N_M(A); per-length breakdown in
// the witnesses. theta in [0, 1/2).
AlphaReport alpha2_report(const RelBallGraph& rel, const Rat& theta,
                          std::size_t geodesic_cap = 200);

struct Polygon {
  // edges[i] is a vertex path from corner i to corner i+1 (mod k)
  std::vector<std::vector<int>> edges;
  int corners() const { return static_cast<int>(edges.size()); }
  int corner(int i) const { return edges[i].front(); }
};

struct FatResult {
  bool fat = false;
  double margin = 0.0;  // min slack over all (F1)/(F2) constraints
};
// (F1): every edge minus the sigma*theta-neighborhood of its endpoints stays
// >= theta away from the rest of the polygon; (F2): every corner is >=
// nu*theta away from the union of its non-incident edges. Throws on a
// non-geodesic edge.
FatResult is_fat_polygon(const BallGraph& ball, const Polygon& p, const FatParams& fp);

// (alpha_3) over sampled k-gons with geodesic edges: for the fat ones,
// chi(P) = min over cosets A of max_{x in P} dist_S(x, A); reports the max.
// A radius with no fat polygon is an explicit vacuous result, never a pass.
AlphaReport alpha3_report(const RelBallGraph& rel, const FatParams& fp, int k,
                          int samples, std::uint64_t seed);

// BCP measurement over pairs of lambda-bi-Lipschitz backtracking-free paths
// anchored at the ball center with dist_S(p_+, q_+) <= 1 and length <=
// len_cap:
//   a1 = max dist_S(s_-, s_+) over coset components of p unmatched in q,
//   a2 = max endpoint deviation over same-coset component pairs.
AlphaReport bcp_report(const RelBallGraph& rel, const Rat& lambda, int len_cap,
                       std::size_t path_cap = 2000000);

// Morse diagnostics for a geodesic g, an (L,C)-quasi-geodesic q (verified),
// and a rel-geodesic p, all sharing endpoints:
//  tau1: q inside the tube around Sat_M(g),
//  delta: endpoint deviation of coset-to-coset sub-quasi-geodesics of q,
//  tau3: rel-metric Hausdorff distance between q and p,
//  tau4: both containment radii between q and the M-saturation of a lift of p.
AlphaReport morse_report(const RelBallGraph& rel, const std::vector<int>& g,
                         const std::vector<int>& q, const RelPath& p, const SatParams& sp);

// Measured quasi-convexity constant: max over cosets A and enumerated
// geodesics joining two points of N_d(A) of max dist(-, A) / d.
double quasiconvexity_t(const RelBallGraph& rel, const Rat& d, std::size_t geodesic_cap = 50);

// Random (L,C)-quasi-geodesic with the given endpoints, built from geodesic
// detours through sampled waypoints and verified against the definition;
// nullopt when no sample passes.
std::optional<std::vector<int>> sample_quasigeodesic(const BallGraph& ball, int u, int v,
                                                     const Rat& L, const Rat& C,
                                                     std::uint64_t seed, int attempts = 64);

bool is_quasigeodesic(const BallGraph& ball, const std::vector<int>& path, const Rat& L,
                      const Rat& C);

}  // namespace relgeo
