#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relgeo/rat.hpp"
#include "relgeo/smallcancel.hpp"
#include "relgeo/word.hpp"

namespace relgeo {

// Finite metric space with oracle distances and a basepoint.
class MetricSample {
 public:
  virtual ~MetricSample() = default;
  virtual int size() const = 0;
  virtual double dist(int i, int j) const = 0;
  virtual int basepoint() const { return 0; }
  virtual std::string point_label(int i) const { return std::to_string(i); }

  // Spot-checks symmetry, d(p,p)=0 and sampled triangle inequalities; returns
  // a description of the first violation.
  std::optional<std::string> validate_metric(int samples, std::uint64_t seed) const;
};

class ExplicitMetric final : public MetricSample {
 public:
  ExplicitMetric(std::vector<std::vector<double>> d, int base = 0)
      : d_(std::move(d)), base_(base) {}
  int size() const override { return static_cast<int>(d_.size()); }
  double dist(int i, int j) const override { return d_[i][j]; }
  int basepoint() const override { return base_; }

 private:
  std::vector<std::vector<double>> d_;
  int base_;
};

// Bouquet of flat tori sampled on per-coordinate grids; all tori share the
// basepoint (the origin), inter-torus distances run through it. Intra-torus
// distance is Euclidean with per-coordinate wrap-around.
class TorusBouquetSample final : public MetricSample {
 public:
  TorusBouquetSample(std::vector<int> dims, int grid);
  int size() const override { return static_cast<int>(points_.size()); }
  double dist(int i, int j) const override;
  int basepoint() const override { return 0; }
  std::string point_label(int i) const override;

  const std::vector<int>& dims() const { return dims_; }

 private:
  struct Point {
    int torus;                  // index into dims_; basepoint has torus = -1
    std::vector<double> coord;  // in [0,1)^dim
  };
  double intra(const Point& a, const Point& b) const;

  std::vector<int> dims_;
  int grid_;
  std::vector<Point> points_;
};

std::unique_ptr<TorusBouquetSample> torus_bouquet_space(const std::vector<int>& dims, int grid);

// Greedy maximal delta-separated subset of the domain, taken in seed_order
// (indices into domain). Verifies separation and coverage before returning.
std::vector<int> greedy_snet(const MetricSample& space, const std::vector<int>& domain,
                             double delta, const std::vector<int>& seed_order = {});

struct GammaGraph {
  std::vector<int> verts;  // sample point ids
  struct Edge {
    int a, b;  // indices into verts
    double len;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<float>> path_dist;  // graph metric on verts
  bool connected = false;
  double kappa = 0;

  int edge_count() const { return static_cast<int>(edges.size()); }
  double max_edge_len() const;
  double min_edge_len() const;
};

// Metric graph on A with an edge for every pair at distance in (0, kappa],
// edge length = distance.
GammaGraph gamma_graph(const MetricSample& space, const std::vector<int>& A, double kappa);

struct SnetChain {
  // slot i holds stage number stage_numbers[i] (global n), net nets[i] with
  // separation deltas[i], and gamma graph at kappa = zeta^{floor(n/2)}
  std::vector<std::vector<int>> nets;
  std::vector<double> deltas;
  std::vector<int> stage_numbers;
  std::vector<GammaGraph> gammas;
  double zeta = 0.5;
  const MetricSample* space = nullptr;

  int stages() const { return static_cast<int>(nets.size()); }
};

// Nested snets: slot i extends slot i-1 greedily inside the ball of radius
// radii[i] around the basepoint; per-slot separation/coverage and nesting are
// verified (violations throw with a witness). stage_numbers defaults to
// 1,2,... and sets the gamma radius zeta^{floor(n/2)} of each slot.
SnetChain nested_snets(const MetricSample& space, const std::vector<double>& radii,
                       const std::vector<double>& deltas, double zeta,
                       const std::vector<int>& seed_order = {},
                       std::vector<int> stage_numbers = {});

struct NetBoundsReport {
  bool ok = true;
  double max_rel_slack = 0.0;  // upper-bound slack used, as a fraction
  struct Violation {
    int stage;
    int x, y;  // sample point ids
    double lower, upper, dist_n, dist;
  };
  std::vector<Violation> violations;
  int pairs_checked = 0;
};

// Checks dist <= dist_n <= (1+6 z^k)(dist + 2 z^k) + 2 z^k with k = floor(n/2)
// for every vertex pair of every stage n >= 2.
NetBoundsReport net_metric_bounds_check(const SnetChain& chain, double zeta);

// ---------------------------------------------------------------------------
// Fast sequences and edge words
// ---------------------------------------------------------------------------

struct FastSeqResult {
  std::vector<long long> d;
  std::vector<std::string> certificate;  // one line per verified inequality
};

struct FastSeqError : std::runtime_error {
  int deficient_length;
  FastSeqError(const std::string& msg, int len)
      : std::runtime_error(msg), deficient_length(len) {}
};

// Greedy stagewise-minimal increasing d with the finite proxies:
//  (1) kappa(i) >= E_n for every i in [floor(zeta^n d_n), max word length],
//      and the longest edge demand floor(d_n * max|e|) stays in range;
//  (2') zeta^n d_n / d_{n-1} >= growth * n   (n >= 2);
//  (3') E_n / (zeta^n d_n) <= eps[n-1].
FastSeqResult fast_sequence(const SnetChain& chain, double zeta, const WordSet& words,
                            double growth, const std::vector<double>& eps);

struct EdgeLabeling {
  // per undirected edge (index into gamma.edges): the attached word; the
  // reverse edge carries the inverse
  std::vector<Word> word;
  std::vector<int> target_len;

  bool injective_with_inverses() const;
};

struct SupplyShortfall : std::runtime_error {
  int length;
  SupplyShortfall(int len)
      : std::runtime_error("not enough word orbits of length " + std::to_string(len)),
        length(len) {}
};

// Assigns to every edge a word of length floor(d_n |e|) from a distinct
// rotation/inversion orbit of W, seeded-shuffled; inverse edges get inverse
// words. Throws SupplyShortfall naming the deficient length.
EdgeLabeling assign_edge_words(const GammaGraph& gamma, const WordSet& words, long long d_n,
                               std::uint64_t seed);

// Relators of one stage: the free reductions of the edge-word products over a
// fundamental cycle basis plus all simple cycles of combinatorial length <=
// cycle_bound, cyclically normalized and deduplicated; empty reductions drop.
WordSet build_relations(const GammaGraph& gamma, const EdgeLabeling& labeling, int cycle_bound);
// Same with the BFS spanning tree rooted elsewhere (basis invariance checks).
WordSet build_relations_rooted(const GammaGraph& gamma, const EdgeLabeling& labeling,
                               int cycle_bound, int root);

// ---------------------------------------------------------------------------
// End-to-end pipeline
// ---------------------------------------------------------------------------

struct SpaceSpec {
  std::vector<int> dims;
  int grid = 4;
};

struct EOConfig {
  double zeta = 0.5;
  Rat lambda{1, 500};
  int stage_max = 2;
  double growth = 1.0;
  std::vector<double> eps;          // per stage; last value repeats
  std::vector<long long> d_seq;     // empty = derive via fast_sequence
  int cycle_bound = 6;
  std::uint64_t seed = 1;
  int per_length = 1;               // orbits per word length when generating W
  std::vector<SpaceSpec> spaces;
  WordSet words;                    // empty = generate

  static EOConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct StageDiagnostics {
  int stage = 0;
  int space_index = 0;
  int net_size = 0;
  int edge_count = 0;
  long long d_n = 0;
  int relators = 0;
  // per relator: (sum of floor(d|e|) over the cycle, actual length)
  std::vector<std::pair<long long, long long>> length_audit;
};

struct EOBuildResult {
  Presentation presentation;  // two generators a,b
  std::vector<StageDiagnostics> stages;
  std::vector<std::string> fast_seq_certificate;
  CStarProfile word_profile;
  double cprime_lambda_measured = 0.0;  // of the emitted relator set, when nonempty
  WordSet words_used;
};

// Runs the stage pipeline: per-space nested snets on the interleaved stage
// schedule (stage n uses spaces[v2(n) mod #spaces], the dyadic interleaving),
// gamma graphs, fast sequence, edge words, relations.
EOBuildResult build_eo_presentation(const EOConfig& cfg);

}  // namespace relgeo
