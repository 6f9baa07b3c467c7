#include <doctest.h>

#include <random>

#include "relgeo/relhyp.hpp"
#include "test_helpers.hpp"

using namespace relgeo;

namespace {

Word w(std::vector<Letter> ls) { return Word(std::move(ls)); }

RelBallGraph make_rel(const char* name, int r) {
  auto oracle = make_registry_oracle(name);
  return build_relative_ball(enumerate_ball(*oracle, r), *oracle);
}

// brute-force alpha1: literal double loop over coset pairs and vertex pairs
int alpha1_brute(const RelBallGraph& rel, int delta) {
  auto cosets = ball_cosets(rel);
  int best = 0;
  auto dist_to = [&](int v, const CosetRef& c) {
    int d = kUnreachable;
    for (int m : *c.members) d = std::min(d, rel.ball.dist(v, m));
    return d;
  };
  for (std::size_t a = 0; a < cosets.size(); ++a)
    for (std::size_t b = a + 1; b < cosets.size(); ++b) {
      std::vector<int> inter;
      for (int v = 0; v < rel.size(); ++v)
        if (dist_to(v, cosets[a]) <= delta && dist_to(v, cosets[b]) <= delta)
          inter.push_back(v);
      for (std::size_t i = 0; i < inter.size(); ++i)
        for (std::size_t j = i + 1; j < inter.size(); ++j)
          best = std::max(best, rel.ball.dist(inter[i], inter[j]));
    }
  return best;
}

}  // namespace

TEST_CASE("saturation on F2 rel <a>") {
  RelBallGraph rel = make_rel("free-rel-a", 3);
  int b = rel.ball.index_of(w({2}));
  int bb = rel.ball.index_of(w({2, 2}));

  std::vector<int> sat0 = saturation(rel, {0, b, bb}, Rat(0));
  // contains the path and the full <a>-cosets of 1, b, bb
  for (int v : {0, b, bb}) CHECK(std::binary_search(sat0.begin(), sat0.end(), v));
  int a = rel.ball.index_of(w({1}));
  int ba = rel.ball.index_of(w({2, 1}));
  CHECK(std::binary_search(sat0.begin(), sat0.end(), a));
  CHECK(std::binary_search(sat0.begin(), sat0.end(), ba));
  // but not vertices whose coset misses the path
  int ab = rel.ball.index_of(w({1, 2}));
  CHECK_FALSE(std::binary_search(sat0.begin(), sat0.end(), ab));

  // huge mu swallows the whole ball
  std::vector<int> sat_all = saturation(rel, {0}, Rat(2 * rel.ball.radius));
  CHECK(static_cast<int>(sat_all.size()) == rel.size());

  // monotone in mu
  std::vector<int> sat1 = saturation(rel, {0, b, bb}, Rat(1));
  CHECK(std::includes(sat1.begin(), sat1.end(), sat0.begin(), sat0.end()));
}

TEST_CASE("alpha1 matches brute force and needs two cosets") {
  RelBallGraph rel = make_rel("free-rel-a", 3);
  AlphaReport rep = alpha1_report(rel, Rat(1));
  CHECK(rep.value(3, "diameter") == doctest::Approx(alpha1_brute(rel, 1)));

  RelBallGraph z2 = make_rel("abelian-2-rel-a", 3);
  AlphaReport zrep = alpha1_report(z2, Rat(1));
  CHECK(zrep.value(3, "diameter") == doctest::Approx(alpha1_brute(z2, 1)));

  // single-coset input: a ball of radius 0 has one coset only
  RelBallGraph tiny = make_rel("free-rel-a", 0);
  CHECK_THROWS_AS(alpha1_report(tiny, Rat(1)), std::invalid_argument);
}

TEST_CASE("alpha1 negative control grows on Z^2 rel <a>") {
  int prev = -1;
  for (int r = 3; r <= 5; ++r) {
    RelBallGraph rel = make_rel("abelian-2-rel-a", r);
    int d = static_cast<int>(alpha1_report(rel, Rat(1)).value(r, "diameter"));
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("alpha2 stays small on the tree control, theta validated") {
  RelBallGraph rel = make_rel("free-rel-a", 4);
  AlphaReport rep = alpha2_report(rel, Rat(1, 3));
  CHECK(rep.value(4, "M") <= 1.0);  // geodesics track the coset fiber
  CHECK_THROWS_AS(alpha2_report(rel, Rat(1, 2)), std::invalid_argument);
}

TEST_CASE("fat polygon checks") {
  auto z2 = make_registry_oracle("abelian-2");
  BallGraph ball = enumerate_ball(*z2, 12);
  auto at = [&](int x, int y) {
    std::vector<Letter> ls;
    for (int i = 0; i < std::abs(x); ++i) ls.push_back(x > 0 ? 1 : -1);
    for (int i = 0; i < std::abs(y); ++i) ls.push_back(y > 0 ? 2 : -2);
    int v = ball.index_of(w(ls));
    REQUIRE(v >= 0);
    return v;
  };

  // axis-aligned square of side 10 centered at the origin
  std::vector<std::pair<int, int>> corners{{-5, -5}, {5, -5}, {5, 5}, {-5, 5}};
  Polygon square;
  for (int i = 0; i < 4; ++i) {
    int u = at(corners[i].first, corners[i].second);
    int v = at(corners[(i + 1) % 4].first, corners[(i + 1) % 4].second);
    square.edges.push_back(chosen_geodesic(ball, u, v));
  }
  FatParams fp(Rat(1), Rat(2), Rat(8));
  FatResult fr = is_fat_polygon(ball, square, fp);
  CHECK(fr.fat);
  CHECK(fr.margin >= 0);

  // tiny triangle: corners too close for (F2)
  Polygon tiny;
  tiny.edges.push_back(chosen_geodesic(ball, at(0, 0), at(1, 0)));
  tiny.edges.push_back(chosen_geodesic(ball, at(1, 0), at(0, 1)));
  tiny.edges.push_back(chosen_geodesic(ball, at(0, 1), at(0, 0)));
  CHECK_FALSE(is_fat_polygon(ball, tiny, fp).fat);

  // degenerate 2-gon with coincident edges: interior points touch the other
  // side at distance zero
  Polygon bigon;
  bigon.edges.push_back(chosen_geodesic(ball, at(0, 0), at(10, 0)));
  bigon.edges.push_back(chosen_geodesic(ball, at(10, 0), at(0, 0)));
  CHECK_FALSE(is_fat_polygon(ball, bigon, fp).fat);

  // a non-geodesic edge is rejected
  Polygon crooked;
  std::vector<int> detour{at(0, 0), at(1, 0), at(1, 1), at(0, 1)};
  crooked.edges.push_back(detour);
  crooked.edges.push_back(chosen_geodesic(ball, at(0, 1), at(0, 0)));
  CHECK_THROWS_AS(is_fat_polygon(ball, crooked, fp), std::invalid_argument);

  CHECK_THROWS_AS(FatParams(Rat(1), Rat(2), Rat(7)), std::invalid_argument);  // nu < 4 sigma
}

TEST_CASE("alpha3 is vacuous on trees and reports fat polygons on Z^2") {
  RelBallGraph tree = make_rel("free-rel-a", 4);
  AlphaReport rep = alpha3_report(tree, FatParams(Rat(1), Rat(2), Rat(8)), 3, 2000, 11);
  CHECK(rep.verdict == "vacuous");
  CHECK(rep.per_radius[0].vacuous);

  RelBallGraph z2 = make_rel("abelian-2-rel-a", 5);
  AlphaReport z = alpha3_report(z2, FatParams(Rat(1), Rat(1), Rat(4)), 4, 30000, 11);
  // at this radius fat 4-gons exist and sampling finds them
  CHECK(z.per_radius[0].measured.at("fat_polygons") > 0);
  CHECK(z.per_radius[0].measured.at("chi") > 0);
}

TEST_CASE("bcp on the positive and negative controls") {
  RelBallGraph f2 = make_rel("free-rel-a", 4);
  AlphaReport rep = bcp_report(f2, Rat(1), 6);
  CHECK_FALSE(rep.per_radius[0].truncated);
  CHECK(rep.value(4, "a1") <= 1.0);
  CHECK(rep.value(4, "a2") <= 2.0);

  // Z^2 rel <a>: a2 jumps as soon as the cap admits the H-b-H zigzag, and at
  // that cap it grows with the radius (the designed BCP failure)
  RelBallGraph z2 = make_rel("abelian-2-rel-a", 6);
  double cap2 = bcp_report(z2, Rat(3, 2), 2).value(6, "a2");
  double cap3 = bcp_report(z2, Rat(3, 2), 3).value(6, "a2");
  CHECK(cap2 < cap3);
  double prev = -1;
  for (int r : {3, 4, 5}) {
    double a2 = bcp_report(make_rel("abelian-2-rel-a", r), Rat(3, 2), 3).value(r, "a2");
    CHECK(a2 > prev);
    prev = a2;
  }

  CHECK_THROWS_AS(bcp_report(f2, Rat(1, 2), 4), std::invalid_argument);
}

TEST_CASE("morse identity case and a detour") {
  RelBallGraph rel = make_rel("free-rel-a", 4);
  int b3 = rel.ball.index_of(w({2, 2, 2}));
  std::vector<int> g = chosen_geodesic(rel.ball, 0, b3);
  RelPath p = rel_path_from_vertices(rel, g);  // b-path is also rel-geodesic

  SatParams sp;
  sp.L = Rat(2);
  sp.C = Rat(0);
  sp.M = Rat(1);
  AlphaReport same = morse_report(rel, g, g, p, sp);
  CHECK(same.value(4, "tau1") == 0.0);
  CHECK(same.value(4, "tau3") == 0.0);
  CHECK(same.value(4, "tau4_fwd") == 0.0);

  // a (2,0)-quasi-geodesic detour stays within measured tau of the saturation
  auto q = sample_quasigeodesic(rel.ball, 0, b3, Rat(2), Rat(0), 3);
  REQUIRE(q.has_value());
  AlphaReport det = morse_report(rel, g, *q, p, sp);
  CHECK(det.value(4, "tau1") <= 4.0);

  // endpoint mismatch and non-quasi-geodesic input are rejected
  CHECK_THROWS_AS(morse_report(rel, g, {0}, p, sp), std::invalid_argument);
}

TEST_CASE("quasiconvexity constant is radius-stable for F2 rel <a>") {
  double t3 = quasiconvexity_t(make_rel("free-rel-a", 3), Rat(1));
  double t4 = quasiconvexity_t(make_rel("free-rel-a", 4), Rat(1));
  CHECK(t3 == doctest::Approx(t4));
}

TEST_CASE("sampled quasi-geodesics satisfy the definition") {
  RelBallGraph rel = make_rel("zz-free-product", 3);
  std::mt19937_64 rng(4);
  int hits = 0;
  for (int t = 0; t < 20; ++t) {
    int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(rel.size())));
    int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(rel.size())));
    auto q = sample_quasigeodesic(rel.ball, u, v, Rat(2), Rat(0), 1000 + t);
    if (!q) continue;
    ++hits;
    CHECK(is_quasigeodesic(rel.ball, *q, Rat(2), Rat(0)));
    CHECK(q->front() == u);
    CHECK(q->back() == v);
  }
  CHECK(hits > 10);
}
