#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relgeo/oracle.hpp"
#include "relgeo/word.hpp"

namespace relgeo {

// Distances are stored as bytes (radii are small, matrices are V^2).
inline constexpr int kUnreachable = 255;

struct BallCapExceeded : std::runtime_error {
  std::size_t count;
  explicit BallCapExceeded(std::size_t n)
      : std::runtime_error("ball size cap exceeded at " + std::to_string(n) + " vertices"),
        count(n) {}
};

// Radius-r ball of Cayley(G,S). Vertex ids are BFS-shortlex enumeration
// order, so id 0 is the identity and ids are stable across runs. dist is the
// graph metric of the ball; true_dist the group metric (they differ only for
// pairs whose every geodesic leaves the ball, which are stored sparsely).
class BallGraph {
 public:
  int radius = 0;
  int generator_count = 0;
  std::vector<Word> vertices;
  std::vector<std::vector<std::pair<int, Letter>>> adj;  // (neighbor, generator)

  int size() const { return static_cast<int>(vertices.size()); }
  int index_of(const Word& w) const;  // -1 if absent
  int dist(int u, int v) const { return dist_[u][v]; }
  int true_dist(int u, int v) const;
  bool dist_exact(int u, int v) const {
    std::size_t bit = static_cast<std::size_t>(u) * vertices.size() + v;
    return (exact_bits_[bit / 64] >> (bit % 64)) & 1;
  }
  // neighbor along a generator, -1 when it leaves the ball
  int step(int u, Letter g) const;

  std::string export_text(const std::vector<std::string>& names) const;

  friend BallGraph enumerate_ball(const GroupOracle&, int, std::size_t);

 private:
  std::unordered_map<Word, int, WordHash> index_;
  std::vector<std::vector<std::uint8_t>> dist_;
  std::vector<std::uint64_t> exact_bits_;
  std::map<std::pair<int, int>, int> true_diff_;  // pairs where true < ball dist
};

BallGraph enumerate_ball(const GroupOracle& oracle, int r, std::size_t cap = 500000);

struct GeodesicSet {
  std::vector<std::vector<int>> paths;  // vertex sequences u..v, lexicographic
  bool truncated = false;
};

// All geodesics between u and v whose vertices stay in the ball, in
// lexicographic vertex-id order, capped. Distances are ball distances; for
// pairs with dist_exact(u,v) == false the enumeration is ball-relative.
GeodesicSet geodesics_between(const BallGraph& ball, int u, int v, std::size_t cap = 10000);
// First geodesic in the deterministic order.
std::vector<int> chosen_geodesic(const BallGraph& ball, int u, int v);

// ---------------------------------------------------------------------------
// Relative ball
// ---------------------------------------------------------------------------

// The ball with H-edges added: u,v share an H_i coset iff the oracle decides
// u^-1 v in H_i; every same-coset pair is one edge. Coset ids are
// ball-certified: the membership test is exact but only pairs inside the ball
// are classified.
class RelBallGraph {
 public:
  BallGraph ball;
  int parabolic_count = 0;
  // coset_of[i][v]: coset id of vertex v for parabolic i
  std::vector<std::vector<int>> coset_of;
  // members[i][c]: sorted vertex ids
  std::vector<std::vector<std::vector<int>>> members;

  int size() const { return ball.size(); }
  int rel_dist(int u, int v) const { return rel_dist_[u][v]; }
  bool same_coset(int parabolic, int u, int v) const {
    return coset_of[parabolic][u] == coset_of[parabolic][v];
  }

  std::string export_text(const std::vector<std::string>& names) const;

  friend RelBallGraph build_relative_ball(BallGraph, const GroupOracle&);
  friend RelBallGraph plain_relative_ball(BallGraph);

 private:
  std::vector<std::vector<std::uint8_t>> rel_dist_;
  void compute_rel_dist();
};

RelBallGraph build_relative_ball(BallGraph ball, const GroupOracle& oracle);
// No parabolics: rel metric equals the ball metric. For plain hyperbolic
// baselines (trees) that reuse the relative machinery.
RelBallGraph plain_relative_ball(BallGraph ball);

// Neighbors in Cayley(G, S u H): S-neighbors plus coset mates, sorted.
std::vector<int> rel_neighbors(const RelBallGraph& rel, int u);
// First rel-geodesic in least-neighbor order.
std::vector<int> chosen_rel_geodesic(const RelBallGraph& rel, int u, int v);

// ---------------------------------------------------------------------------
// Paths in the relative graph
// ---------------------------------------------------------------------------

struct RelEdge {
  enum Kind { S, H } kind = S;
  Letter gen = 0;      // S edges
  int parabolic = -1;  // H edges
  int coset = -1;
};

struct RelPath {
  std::vector<int> vertices;
  std::vector<RelEdge> edges;  // edges.size() + 1 == vertices.size(), or both empty

  int length() const { return static_cast<int>(edges.size()); }
  void validate(const RelBallGraph& rel) const;  // throws std::invalid_argument
};

// Builds a RelPath from a vertex sequence, preferring S edges when both an
// S edge and a coset jump connect consecutive vertices.
RelPath rel_path_from_vertices(const RelBallGraph& rel, const std::vector<int>& vertices);

struct PathComponent {
  int first_edge = 0;
  int last_edge = 0;          // inclusive
  bool coset_component = false;
  int parabolic = -1;
  int coset = -1;
  int start_vertex = 0, end_vertex = 0;
};

struct PathAnalysis {
  std::vector<PathComponent> components;
  bool backtracking = false;
  std::optional<std::pair<int, int>> backtrack_witness;  // component indices
};

// Maximal runs of edges lying in one left coset (S runs whose endpoints stay
// in the coset included), interleaved with plain runs; backtracking = two
// distinct coset components in the same (parabolic, coset).
PathAnalysis analyze_path(const RelPath& p, const RelBallGraph& rel);

struct LiftError : std::runtime_error {
  int edge_index;
  LiftError(int e, const std::string& why)
      : std::runtime_error("cannot lift H-edge #" + std::to_string(e) + ": " + why),
        edge_index(e) {}
};

// Replaces every H edge by the chosen geodesic in the base ball; S edges are
// kept. Throws LiftError when the needed geodesic is not certified inside the
// ball.
std::vector<int> lift_path(const RelPath& p, const RelBallGraph& rel);

}  // namespace relgeo
