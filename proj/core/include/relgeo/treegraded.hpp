#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relgeo/word.hpp"

namespace relgeo {

// Finite graph model of a tree-graded space: a connected weighted graph with
// declared pieces. All metric properties are stated at vertex resolution.
struct WeightedGraph {
  int n = 0;
  struct Edge {
    int u = 0, v = 0;
    double len = 1.0;
  };
  std::vector<Edge> edges;

  void add_edge(int u, int v, double len = 1.0) { edges.push_back({u, v, len}); }
};

class PieceSpace {
 public:
  PieceSpace(WeightedGraph g, std::vector<std::vector<int>> pieces);

  const WeightedGraph& graph() const { return g_; }
  const std::vector<std::vector<int>>& pieces() const { return pieces_; }
  int size() const { return g_.n; }
  double dist(int u, int v) const { return dist_[u][v]; }
  const std::vector<std::vector<std::pair<int, double>>>& adjacency() const { return adj_; }

  std::string to_json() const;
  static PieceSpace from_json(const std::string& text);

 private:
  void validate() const;  // connected; pieces connected and geodesic

  WeightedGraph g_;
  std::vector<std::vector<int>> pieces_;  // sorted vertex lists
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<std::vector<double>> dist_;
};

struct T1Result {
  bool ok = true;
  int piece_a = -1, piece_b = -1;
  std::vector<int> intersection;
};
T1Result check_t1(const PieceSpace& x);

struct T2Result {
  bool ok = true;
  int cycle_cap = 0;  // certificate is relative to this cap
  std::vector<int> offending_cycle;
};
// Enumerates simple cycles of combinatorial length <= cycle_cap and demands
// each lies inside one piece.
T2Result check_t2(const PieceSpace& x, int cycle_cap);

struct NonUniqueProjection : std::runtime_error {
  int witness_a, witness_b;
  NonUniqueProjection(int a, int b)
      : std::runtime_error("nearest point in piece is not unique"), witness_a(a), witness_b(b) {}
};

struct ProjectResult {
  int vertex = -1;
  // true when every enumerated geodesic from x to each piece vertex passes
  // through the projection
  bool geodesics_verified = true;
  bool enumeration_truncated = false;
};
ProjectResult project_to_piece(const PieceSpace& x, int vertex, int piece,
                               std::size_t geodesic_cap = 10000);

// Blocks of the graph (maximal subgraphs without a cut vertex): every
// biconnected component is one piece, bridges become 2-vertex pieces.
PieceSpace canonical_pieces(const WeightedGraph& g);

// Replaces the selected pieces by their union; the union must be connected.
PieceSpace glue_pieces(const PieceSpace& x, const std::vector<int>& selection, int recheck_cap);

// Splits one piece at a cut vertex of its induced subgraph into the
// components through that vertex.
PieceSpace split_bouquet(const PieceSpace& x, int piece, int cut_vertex, int recheck_cap);

// Weighted geodesics between two vertices (all shortest paths), lexicographic.
std::vector<std::vector<int>> weighted_geodesics(const PieceSpace& x, int u, int v,
                                                 std::size_t cap, bool* truncated);

}  // namespace relgeo
