#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "relgeo/netapprox.hpp"
#include "test_helpers.hpp"

using namespace relgeo;

TEST_CASE("torus distances") {
  TorusBouquetSample t1({1}, 4);
  // points: base(0), 0.25, 0.5, 0.75
  CHECK(t1.size() == 4);
  CHECK(t1.dist(0, 3) == doctest::Approx(0.25));  // 0 to 0.75 wraps

  TorusBouquetSample t2({2}, 2);
  // 0 to (0.5, 0.5)
  int far = -1;
  for (int i = 0; i < t2.size(); ++i)
    if (t2.point_label(i) == "T0:(0.5,0.5)") far = i;
  REQUIRE(far >= 0);
  CHECK(t2.dist(0, far) == doctest::Approx(std::sqrt(2.0) / 2.0));

  // bouquet: through the cut point
  TorusBouquetSample bq({1, 2}, 10);
  int x = -1, y = -1;
  for (int i = 0; i < bq.size(); ++i) {
    if (bq.point_label(i) == "T0:(0.3)") x = i;
    if (bq.point_label(i) == "T1:(0.4,0)") y = i;
  }
  REQUIRE(x >= 0);
  REQUIRE(y >= 0);
  CHECK(bq.dist(x, y) == doctest::Approx(0.7));

  CHECK_FALSE(bq.validate_metric(500, 9).has_value());
}

TEST_CASE("greedy_snet basics") {
  TorusBouquetSample t1({1}, 8);
  std::vector<int> domain;
  for (int i = 0; i < t1.size(); ++i) domain.push_back(i);

  std::vector<int> single = greedy_snet(t1, {0}, 0.5);
  CHECK(single == std::vector<int>{0});

  std::vector<int> net = greedy_snet(t1, domain, 0.25);
  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = a + 1; b < net.size(); ++b)
      CHECK(t1.dist(net[a], net[b]) >= 0.25 - 1e-9);
  for (int p : domain) {
    double best = 1e9;
    for (int q : net) best = std::min(best, t1.dist(p, q));
    CHECK(best < 0.25 + 1e-9);
  }

  // delta larger than the diameter: one point
  CHECK(greedy_snet(t1, domain, 10.0).size() == 1);
  CHECK_THROWS_AS(greedy_snet(t1, {}, 0.5), std::invalid_argument);
}

TEST_CASE("gamma_graph") {
  std::vector<std::vector<double>> d{{0, 1, 3}, {1, 0, 3}, {3, 3, 0}};
  ExplicitMetric m(d);
  GammaGraph close = gamma_graph(m, {0, 1, 2}, 1.0);
  CHECK(close.edge_count() == 1);
  CHECK_FALSE(close.connected);

  GammaGraph all = gamma_graph(m, {0, 1, 2}, 3.0);
  CHECK(all.connected);
  CHECK(all.edge_count() == 3);
  CHECK(all.path_dist[0][2] == doctest::Approx(3.0));

  // exactly at kappa counts as an edge
  GammaGraph exact = gamma_graph(m, {0, 1}, 1.0);
  CHECK(exact.edge_count() == 1);
  CHECK(exact.path_dist[0][1] == doctest::Approx(1.0));
}

TEST_CASE("nested_snets nest, verify, and respect stage numbering") {
  TorusBouquetSample t2({2}, 8);
  SnetChain chain = nested_snets(t2, {1, 2, 3, 4}, {0.5, 0.25, 0.125, 0.0625}, 0.5);
  REQUIRE(chain.stages() == 4);
  for (int s = 1; s < chain.stages(); ++s) {
    CHECK(chain.nets[s].size() >= chain.nets[s - 1].size());
    for (int p : chain.nets[s - 1])
      CHECK(std::find(chain.nets[s].begin(), chain.nets[s].end(), p) != chain.nets[s].end());
  }
  CHECK(chain.gammas[0].kappa == doctest::Approx(1.0));     // zeta^0
  CHECK(chain.gammas[3].kappa == doctest::Approx(0.25));    // zeta^2

  CHECK_THROWS_AS(nested_snets(t2, {1, 2}, {0.5, 0.5}, 0.5), std::invalid_argument);
}

TEST_CASE("net metric bounds on a small T^2 chain") {
  TorusBouquetSample t2({2}, 16);
  SnetChain chain =
      nested_snets(t2, {2, 3, 4}, {0.25, 0.125, 0.0625}, 0.5, {}, {2, 3, 4});
  NetBoundsReport rep = net_metric_bounds_check(chain, 0.5);
  CHECK(rep.ok);
  CHECK(rep.pairs_checked > 0);
  CHECK(rep.max_rel_slack <= 1.0);

  SnetChain one = nested_snets(t2, {1}, {0.5}, 0.5);
  CHECK_THROWS_AS(net_metric_bounds_check(one, 0.5), std::invalid_argument);
}

TEST_CASE("fast_sequence solves the finite proxies stagewise") {
  TorusBouquetSample t1({1}, 4);
  SnetChain chain = nested_snets(t1, {1, 2}, {0.5, 0.25}, 0.5);
  auto gen = generate_cstar_words(Rat(1, 4), [] {
        std::vector<int> ls;
        for (int l = 40; l <= 140; ++l) ls.push_back(l);
        return ls;
      }(), 4, 3);
  REQUIRE(gen.complete());

  FastSeqResult fs = fast_sequence(chain, 0.5, gen.words, 0.25, {0.5, 0.5});
  REQUIRE(fs.d.size() == 2);
  CHECK(fs.d[0] < fs.d[1]);
  // (2'): zeta^2 d_2 / d_1 >= growth * 2
  CHECK(0.25 * fs.d[1] / fs.d[0] >= 0.5 - 1e-9);
  // (3')
  CHECK(chain.gammas[1].edge_count() / (0.25 * fs.d[1]) <= 0.5 + 1e-9);
  CHECK_FALSE(fs.certificate.empty());

  // a word range too small to satisfy (1) errors with the deficient length
  auto small = generate_cstar_words(Rat(1, 4), {40, 41, 42}, 2, 3);
  CHECK_THROWS_AS(fast_sequence(chain, 0.5, small.words, 0.25, {0.5, 0.5}), FastSeqError);
}

TEST_CASE("assign_edge_words is injective, inverse-compatible, deterministic") {
  TorusBouquetSample t1({1}, 4);
  SnetChain chain = nested_snets(t1, {1, 2}, {0.5, 0.25}, 0.5);
  const GammaGraph& g = chain.gammas[1];
  REQUIRE(g.edge_count() > 0);

  std::vector<int> lengths;
  for (int l = 40; l <= 140; ++l) lengths.push_back(l);
  auto gen = generate_cstar_words(Rat(1, 4), lengths, 8, 3);
  REQUIRE(gen.complete());

  long long d = 200;
  EdgeLabeling lab = assign_edge_words(g, gen.words, d, 42);
  CHECK(lab.injective_with_inverses());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    CHECK(static_cast<long long>(lab.word[e].size()) ==
          static_cast<long long>(std::floor(d * g.edges[e].len + 1e-9)));

  EdgeLabeling again = assign_edge_words(g, gen.words, d, 42);
  for (std::size_t e = 0; e < g.edges.size(); ++e) CHECK(again.word[e] == lab.word[e]);

  // starving the supply names the missing length
  auto tiny = generate_cstar_words(Rat(1, 4), {60}, 1, 3);
  bool threw = false;
  try {
    assign_edge_words(g, tiny.words, d, 42);
  } catch (const SupplyShortfall& s) {
    threw = true;
    CHECK(s.length > 0);
  }
  CHECK(threw);
}

TEST_CASE("build_relations on a tree, a cycle, and a theta graph") {
  std::vector<int> lengths;
  for (int l = 40; l <= 100; ++l) lengths.push_back(l);
  auto gen = generate_cstar_words(Rat(1, 4), lengths, 6, 3);
  REQUIRE(gen.complete());

  // tree: no cycles, no relators
  GammaGraph tree;
  tree.verts = {0, 1, 2};
  tree.edges = {{0, 1, 0.2}, {1, 2, 0.2}};
  EdgeLabeling lt = assign_edge_words(tree, gen.words, 200, 7);
  CHECK(build_relations(tree, lt, 6).empty());

  // triangle: one basis relator; the simple cycle duplicates it
  GammaGraph tri;
  tri.verts = {0, 1, 2};
  tri.edges = {{0, 1, 0.2}, {1, 2, 0.2}, {0, 2, 0.2}};
  EdgeLabeling ltri = assign_edge_words(tri, gen.words, 200, 7);
  WordSet rel = build_relations(tri, ltri, 3);
  CHECK(rel.size() == 1);
  CHECK(is_cyclically_reduced(rel.words()[0]));

  // theta graph: two vertices, three parallel edges -> basis of 2; the third
  // simple cycle appears only when the cap admits it
  GammaGraph theta;
  theta.verts = {0, 1};
  theta.edges = {{0, 1, 0.2}, {0, 1, 0.25}, {0, 1, 0.3}};
  EdgeLabeling lth = assign_edge_words(theta, gen.words, 200, 7);
  WordSet basis_only = build_relations(theta, lth, 0);
  CHECK(basis_only.size() == 2);
  WordSet with_cycles = build_relations(theta, lth, 2);
  CHECK(with_cycles.size() == 3);
}

TEST_CASE("eo pipeline: zero stages gives the free group") {
  EOConfig cfg;
  cfg.stage_max = 0;
  cfg.spaces.push_back({{1}, 4});
  EOBuildResult res = build_eo_presentation(cfg);
  CHECK(res.presentation.generator_count == 2);
  CHECK(res.presentation.relators.empty());
}

TEST_CASE("eo pipeline: two tiny stages emit audited relators") {
  EOConfig cfg;
  cfg.zeta = 0.5;
  cfg.lambda = Rat(1, 6);
  cfg.stage_max = 2;
  cfg.growth = 0.5;
  cfg.eps = {0.5, 0.5};
  cfg.cycle_bound = 3;
  cfg.seed = 7;
  cfg.spaces.push_back({{1}, 3});

  EOBuildResult res = build_eo_presentation(cfg);
  CHECK_FALSE(res.presentation.relators.empty());
  CHECK(res.presentation.generator_count == 2);
  REQUIRE(res.stages.size() == 2);
  CHECK(res.stages[1].edge_count > 0);
  // audited lengths: actual = sum of targets - cancellation >= 0
  for (const auto& [target, actual] : res.stages[1].length_audit) {
    CHECK(actual <= target);
    CHECK(actual > 0);
  }
  CHECK_FALSE(res.fast_seq_certificate.empty());
  CHECK(res.cprime_lambda_measured >= 0.0);
  CHECK_FALSE(res.word_profile.kappa_n.empty());

  // config round trip
  EOConfig parsed = EOConfig::from_json(cfg.to_json());
  CHECK(parsed.stage_max == cfg.stage_max);
  CHECK(parsed.lambda == cfg.lambda);
  CHECK(parsed.spaces.size() == 1);
}
