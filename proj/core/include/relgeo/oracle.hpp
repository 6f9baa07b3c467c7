#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "relgeo/smallcancel.hpp"
#include "relgeo/word.hpp"

namespace relgeo {

// Decision procedure for a finitely generated group. The word problem is
// delegated here because the ball builders work for arbitrary groups; the
// built-ins below cover the worked control examples.
//
// normal_form must return the shortlex-least geodesic spelling of the
// element, so that |normal_form(w)| = dist_S(1, w); it is idempotent and two
// words get equal normal forms iff they represent the same element.
//
// in_parabolic(w, i) decides membership of w in the i-th parabolic subgroup.
// For the syntactic oracles membership is "normal form supported on the
// parabolic generators", which is sound exactly when those generators span
// the subgroup geodesically (true for all built-ins here); the Dehn oracle
// inherits the same convention and its caller asserts that the parabolic
// generators embed freely.
class GroupOracle {
 public:
  virtual ~GroupOracle() = default;
  virtual Word normal_form(const Word& w) const = 0;
  virtual bool in_parabolic(const Word& w, int parabolic_index) const;
  virtual const Presentation& presentation() const = 0;

  // |u^-1 v| for canonical u, v. The default concatenates and normalizes;
  // the built-ins override with allocation-free computations (this runs
  // O(ball^2) times during enumeration).
  virtual int distance(const Word& u_canonical, const Word& v_canonical) const;

  // Canonical key of the left coset w * H_i, or nullopt when the oracle has
  // no syntactic form for it (the ball builder then falls back to pairwise
  // in_parabolic tests). Two canonical words get equal keys iff they lie in
  // the same coset.
  virtual std::optional<Word> coset_key(const Word& canonical, int parabolic_index) const {
    (void)canonical;
    (void)parabolic_index;
    return std::nullopt;
  }

  bool equal(const Word& a, const Word& b) const {
    return normal_form(a) == normal_form(b);
  }
  bool is_trivial(const Word& w) const { return normal_form(w).empty(); }
};

// Free group on the presentation's generators.
std::unique_ptr<GroupOracle> make_free_oracle(Presentation p);

// Free abelian group on the presentation's generators.
std::unique_ptr<GroupOracle> make_abelian_oracle(Presentation p);

// Finite group given by a full multiplication action: table[e][k] is the
// element reached from element e by the k-th signed generator (order
// +1,-1,+2,-2,...); element 0 is the identity.
std::unique_ptr<GroupOracle> make_finite_table_oracle(Presentation p,
                                                      std::vector<std::vector<int>> table);

// Free product of factor oracles; factor k owns a consecutive block of
// generators and its parabolic structure is flattened into the product.
std::unique_ptr<GroupOracle> make_free_product_oracle(
    Presentation p, std::vector<std::unique_ptr<GroupOracle>> factors,
    std::vector<std::vector<int>> factor_generators);

// Word problem by Dehn's algorithm; requires C'(1/6) relators (verified at
// construction). Normal forms are found by shortlex search with memoization,
// so this oracle is for small radii only.
std::unique_ptr<GroupOracle> make_dehn_oracle(Presentation p);

// Registry used by the CLI and the acceptance suite:
//   free            F2, no parabolics
//   free-rel-a      F2 relative to <a>
//   abelian-2       Z^2, no parabolics
//   abelian-2-rel-a Z^2 relative to <a>   (designed negative control)
//   surface         genus-2 surface group, no parabolics
//   zz-free-product Z^2 * Z^2 relative to the two factors
std::unique_ptr<GroupOracle> make_registry_oracle(const std::string& name);

}  // namespace relgeo
