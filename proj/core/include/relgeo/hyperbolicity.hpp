#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "relgeo/cayley.hpp"
#include "relgeo/rat.hpp"
#include "relgeo/report.hpp"

namespace relgeo {

// Triple scan policy. Exhaustive is Theta(V^3); sampled mode runs an
// exhaustive core over the subball of the given radius plus seeded random
// triples, so it can under-report a maximum but never invent one.
struct ScanPolicy {
  bool exhaustive = true;
  int core_radius = 3;
  int random_triples = 20000;
  std::uint64_t seed = 1;

  static ScanPolicy Exhaustive() { return {}; }
  static ScanPolicy Sampled(int core_radius, int random_triples, std::uint64_t seed) {
    return {false, core_radius, random_triples, seed};
  }
};

// Max over scanned geodesic triangles (chosen-geodesic sides) and vertices on
// one side of the min S-distance to the union of the other two sides.
double thin_triangle_delta(const BallGraph& ball, const ScanPolicy& policy);
// Relative version: sides are rel-geodesics, the vertex distance stays in the
// S metric.
double thin_triangle_delta(const RelBallGraph& rel, const ScanPolicy& policy);

struct EmptyCenterSet : std::runtime_error {
  int u, v, w;
  EmptyCenterSet(int u_, int v_, int w_)
      : std::runtime_error("empty center set; increase kappa0"), u(u_), v(v_), w(w_) {}
};

// Lines-and-centers system: Lambda_uv is the kappa0-neighborhood of the
// mu0-saturation of the chosen geodesic [u,v], preordered by projection to
// [u,v] (nearest position, ties to the earlier position); centers are the
// least-id vertex of the triple intersection. Lines and centers are computed
// lazily and memoized.
class LineSystem {
 public:
  LineSystem(const RelBallGraph& rel, Rat kappa0, Rat mu0);

  struct Line {
    std::vector<int> verts;  // sorted by (position, id)
    std::vector<int> pos;    // projection position along [u,v]
    int position_of(int vertex) const;  // -1 if absent
  };

  const Line& line(int u, int v) const;  // Lambda_uv; (v,u) is the reverse view
  int center(int u, int v, int w) const;  // throws EmptyCenterSet
  // same result, no memo write; safe to call concurrently once the needed
  // lines are built
  int center_uncached(int u, int v, int w) const;
  // rel-metric interval Lambda_uv[x, y]
  std::vector<int> interval(int u, int v, int x, int y) const;

  // Structural axioms on a set of triples; throws std::logic_error naming the
  // violated axiom.
  void validate_axioms(const std::vector<std::array<int, 3>>& triples) const;

  // test hook: force a center value
  void override_center(int u, int v, int w, int value);

  const RelBallGraph& rel() const { return rel_; }
  Rat kappa0() const { return kappa0_; }
  Rat mu0() const { return mu0_; }

  // rel-metric diameter of the center set of a triple
  int center_set_diameter(int u, int v, int w) const;
  std::vector<int> center_set(int u, int v, int w) const;

 private:
  const RelBallGraph& rel_;
  Rat kappa0_, mu0_;
  mutable std::map<std::pair<int, int>, Line> lines_;       // key u < v
  mutable std::map<std::array<int, 3>, int> centers_;       // key sorted
  std::map<std::array<int, 3>, int> center_overrides_;
};

LineSystem build_lines_centers(const RelBallGraph& rel, const Rat& kappa0, const Rat& mu0);

struct BowditchReport {
  double K_I = 0, K_II = 0, K_III = 0, K = 0;
  int radius = 0;
  bool sampled = false;
  std::string to_json(const Rat& kappa0, const Rat& mu0) const;
};

// Minimal constants for conditions (I), (II), (III) over the scanned triples
// (diameters and Hausdorff distances in the rel metric). Validates the
// structural axioms on the scanned triples first.
BowditchReport bowditch_K(const RelBallGraph& rel, const LineSystem& ls,
                          const ScanPolicy& policy);

// Max over vertices of the rel-geodesic q of min S-distance to p; compare
// with (1+nu)*log2(|p|) externally.
double log_distortion_check(const RelBallGraph& rel, const std::vector<int>& p,
                            const RelPath& q);

struct IsolatedAlphaResult {
  double alpha = 0.0;
  int cycles_scanned = 0;
};
// Max over cycles of (sum of S-lengths of isolated coset components) / |q|;
// isolated = no other component of the cycle in the same coset.
IsolatedAlphaResult isolated_component_alpha(const RelBallGraph& rel,
                                             const std::vector<RelPath>& cycles);

// min/max Bowditch K over a sample of center choices (the j-th element of
// each center set instead of the least); reports sensitivity, does not
// resolve it.
std::pair<double, double> center_choice_sensitivity(const RelBallGraph& rel, const Rat& kappa0,
                                                    const Rat& mu0, int choices,
                                                    const ScanPolicy& policy);

}  // namespace relgeo
