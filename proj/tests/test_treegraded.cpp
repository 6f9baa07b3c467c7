#include <doctest.h>

#include <random>
#include <set>

#include "relgeo/parallel.hpp"
#include "relgeo/treegraded.hpp"

using namespace relgeo;

namespace {

WeightedGraph cycle_graph(int n) {
  WeightedGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

// two triangles sharing vertex 0
PieceSpace two_triangles() {
  WeightedGraph g;
  g.n = 5;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(0, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 0);
  return PieceSpace(g, {{0, 1, 2}, {0, 3, 4}});
}

// Random cactus: tree of cycles and bridges hanging off existing vertices.
struct Cactus {
  WeightedGraph g;
  std::vector<std::vector<int>> expected_pieces;  // cycles and bridge edges
};

Cactus random_cactus(std::mt19937_64& rng, int max_vertices) {
  Cactus c;
  c.g.n = 1;
  while (c.g.n < max_vertices) {
    int attach = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(c.g.n)));
    bool bridge = uniform_index(rng, 3) == 0;
    if (bridge) {
      int v = c.g.n++;
      c.g.add_edge(attach, v);
      c.expected_pieces.push_back({attach, v});
    } else {
      int len = 3 + static_cast<int>(uniform_index(rng, 4));
      if (c.g.n + len - 1 > max_vertices) break;
      std::vector<int> cyc{attach};
      int prev = attach;
      for (int i = 0; i < len - 1; ++i) {
        int v = c.g.n++;
        c.g.add_edge(prev, v);
        cyc.push_back(v);
        prev = v;
      }
      c.g.add_edge(prev, attach);
      std::sort(cyc.begin(), cyc.end());
      c.expected_pieces.push_back(cyc);
    }
  }
  std::sort(c.expected_pieces.begin(), c.expected_pieces.end());
  return c;
}

}  // namespace

TEST_CASE("check_t1") {
  CHECK(check_t1(two_triangles()).ok);

  // two 4-cycles sharing an edge
  WeightedGraph g;
  g.n = 6;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 0);
  g.add_edge(2, 4);
  g.add_edge(4, 5);
  g.add_edge(5, 3);
  PieceSpace shared(g, {{0, 1, 2, 3}, {2, 3, 4, 5}});
  auto t1 = check_t1(shared);
  CHECK_FALSE(t1.ok);
  CHECK(t1.intersection == std::vector<int>{2, 3});

  PieceSpace single(cycle_graph(4), {{0, 1, 2, 3}});
  CHECK(check_t1(single).ok);
}

TEST_CASE("check_t2") {
  CHECK(check_t2(two_triangles(), 10).ok);

  // 4-cycle whose declared pieces are two opposite edges
  PieceSpace bad(cycle_graph(4), {{0, 1}, {2, 3}});
  auto t2 = check_t2(bad, 8);
  CHECK_FALSE(t2.ok);
  CHECK(t2.offending_cycle.size() == 4);

  // a tree has no cycles at all
  WeightedGraph tree;
  tree.n = 4;
  tree.add_edge(0, 1);
  tree.add_edge(1, 2);
  tree.add_edge(1, 3);
  PieceSpace t(tree, {{0}, {1}, {2}, {3}});
  CHECK(check_t2(t, 10).ok);
}

TEST_CASE("project_to_piece") {
  PieceSpace x = two_triangles();
  // from cycle A to piece B the projection is the shared vertex
  auto pr = project_to_piece(x, 1, 1);
  CHECK(pr.vertex == 0);
  CHECK(pr.geodesics_verified);

  // a point of the piece projects to itself
  CHECK(project_to_piece(x, 3, 1).vertex == 3);

  // cycle with piece = one edge and an opposite vertex equidistant from both
  // endpoints (5-cycle: vertex 3 against edge {0,1} at vertex resolution)
  PieceSpace amb(cycle_graph(5), {{0, 1}});
  CHECK(project_to_piece(amb, 0, 0).vertex == 0);
  CHECK_THROWS_AS(project_to_piece(amb, 3, 0), NonUniqueProjection);
}

TEST_CASE("canonical_pieces examples") {
  // figure-eight: two cycles at a vertex
  PieceSpace fig8 = canonical_pieces(two_triangles().graph());
  REQUIRE(fig8.pieces().size() == 2);
  CHECK(fig8.pieces()[0] == std::vector<int>{0, 1, 2});
  CHECK(fig8.pieces()[1] == std::vector<int>{0, 3, 4});

  // tree: every edge is a block
  WeightedGraph tree;
  tree.n = 4;
  tree.add_edge(0, 1);
  tree.add_edge(1, 2);
  tree.add_edge(1, 3);
  PieceSpace t = canonical_pieces(tree);
  CHECK(t.pieces().size() == 3);
  for (const auto& p : t.pieces()) CHECK(p.size() == 2);

  // cycle: one block
  PieceSpace c = canonical_pieces(cycle_graph(5));
  REQUIRE(c.pieces().size() == 1);
  CHECK(c.pieces()[0].size() == 5);
}

TEST_CASE("canonical_pieces on random cacti matches the built cycles and bridges") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 30; ++t) {
    Cactus c = random_cactus(rng, 30);
    if (c.expected_pieces.empty()) continue;
    PieceSpace x = canonical_pieces(c.g);
    CHECK(x.pieces() == c.expected_pieces);
    CHECK(check_t1(x).ok);
    CHECK(check_t2(x, 12).ok);
  }
}

TEST_CASE("glue then split recovers the canonical piece count on cacti") {
  std::mt19937_64 rng(5150);
  for (int t = 0; t < 10; ++t) {
    Cactus c = random_cactus(rng, 18);
    if (c.expected_pieces.size() < 2) continue;
    PieceSpace x = canonical_pieces(c.g);
    for (std::size_t i = 0; i < x.pieces().size(); ++i) {
      for (std::size_t j = i + 1; j < x.pieces().size(); ++j) {
        std::vector<int> inter;
        std::set_intersection(x.pieces()[i].begin(), x.pieces()[i].end(),
                              x.pieces()[j].begin(), x.pieces()[j].end(),
                              std::back_inserter(inter));
        if (inter.size() != 1) continue;
        PieceSpace glued = glue_pieces(x, {static_cast<int>(i), static_cast<int>(j)}, 12);
        PieceSpace resplit = split_bouquet(glued, 0, inter[0], 12);
        CHECK(resplit.pieces().size() == x.pieces().size());
      }
    }
  }
}

TEST_CASE("glue_pieces") {
  PieceSpace x = two_triangles();
  PieceSpace glued = glue_pieces(x, {0, 1}, 10);
  REQUIRE(glued.pieces().size() == 1);
  CHECK(glued.pieces()[0].size() == 5);

  // singleton selection is the identity transform
  PieceSpace same = glue_pieces(x, {0}, 10);
  CHECK(same.pieces() == x.pieces());

  // chain of 3 cycles: gluing the first two leaves 2 pieces
  WeightedGraph g;
  g.n = 7;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  g.add_edge(4, 5);
  g.add_edge(5, 6);
  g.add_edge(6, 4);
  PieceSpace chain = canonical_pieces(g);
  REQUIRE(chain.pieces().size() == 3);
  PieceSpace two = glue_pieces(chain, {0, 1}, 12);
  CHECK(two.pieces().size() == 2);
  CHECK(check_t1(two).ok);
  CHECK(check_t2(two, 12).ok);

  // disconnected selection refused
  CHECK_THROWS_AS(glue_pieces(chain, {0, 2}, 12), std::invalid_argument);
}

TEST_CASE("split_bouquet") {
  // one piece = figure eight, cut at the center
  WeightedGraph g = two_triangles().graph();
  PieceSpace whole(g, {{0, 1, 2, 3, 4}});
  PieceSpace split = split_bouquet(whole, 0, 0, 10);
  CHECK(split.pieces().size() == 2);
  CHECK(check_t1(split).ok);
  CHECK(check_t2(split, 10).ok);

  // a plain cycle has no cut vertex
  PieceSpace c(cycle_graph(5), {{0, 1, 2, 3, 4}});
  CHECK_THROWS_AS(split_bouquet(c, 0, 2, 10), std::invalid_argument);
}

TEST_CASE("piece geodesicity is validated at construction") {
  // a piece whose two ends are connected strictly shorter outside it is
  // rejected
  WeightedGraph g;
  g.n = 4;
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(1, 0, 0.3);
  g.add_edge(0, 3, 0.3);
  CHECK_THROWS_AS(PieceSpace(g, {{1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("alternating piece-geodesic concatenations are geodesics (cactus)") {
  WeightedGraph g;
  g.n = 6;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.add_edge(5, 3);
  PieceSpace x = canonical_pieces(g);
  // geodesic 1 -> 2 inside a cycle, bridge 2 -> 3, geodesic 3 -> 4 beyond
  double len = x.dist(1, 2) + x.dist(2, 3) + x.dist(3, 4);
  CHECK(len == doctest::Approx(x.dist(1, 4)));
}

TEST_CASE("connected set meeting a piece in one vertex projects to one point") {
  std::mt19937_64 rng(808);
  for (int t = 0; t < 10; ++t) {
    Cactus c = random_cactus(rng, 16);
    if (c.expected_pieces.size() < 2) continue;
    PieceSpace x = canonical_pieces(c.g);
    const auto& target = x.pieces()[0];
    const auto& probe = x.pieces()[1];
    std::vector<int> inter;
    std::set_intersection(target.begin(), target.end(), probe.begin(), probe.end(),
                          std::back_inserter(inter));
    if (inter.size() > 1) continue;
    std::set<int> projections;
    for (int v : probe) projections.insert(project_to_piece(x, v, 0).vertex);
    CHECK(projections.size() == 1);
  }
}

TEST_CASE("PieceSpace JSON round trip") {
  PieceSpace x = two_triangles();
  std::string json = x.to_json();
  PieceSpace y = PieceSpace::from_json(json);
  CHECK(y.pieces() == x.pieces());
  CHECK(y.size() == x.size());
  CHECK(y.to_json() == json);
}
