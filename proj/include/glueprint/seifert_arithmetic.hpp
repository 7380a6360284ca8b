#pragma once

// Closed Seifert invariants over orientable bases, the torsion and Euler
// arithmetic, the domination torsion bound and the distortion budget.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glueprint/numeric.hpp"

namespace glueprint::seifert {

/// Sigma(g; b0, b1/a1, ..., bs/as); normalized when 0 < b_i < a_i, coprime.
struct SeifertInvariants {
  unsigned g = 0;
  Integer b0 = 0;
  std::vector<std::pair<Integer, Integer>> pairs;  // (a_i, b_i)

  friend bool operator==(const SeifertInvariants&, const SeifertInvariants&) = default;
  std::string to_string() const;
};

/// Reduces each b_i into (0, a_i), moving the integer part into b0, and
/// sorts the pairs. Throws ValidationError for a_i < 2 or gcd(a_i, b_i) != 1.
SeifertInvariants normalize(unsigned g, const Integer& b0, const std::vector<std::pair<Integer, Integer>>& raw);

bool is_normalized(const SeifertInvariants& s);

Rational chi(unsigned g, const std::vector<Integer>& cone_orders);
Rational chi(const SeifertInvariants& s);

/// e = -b0 - sum b_i / a_i.
Rational euler_number(const SeifertInvariants& s);

/// |e| * prod a_i; FormulaInapplicableError when e = 0.
Integer torsion_order(const SeifertInvariants& s);

/// d * |H_1(M; Z_d)| * |Tor H_1(M)|.
Integer torsion_bound(const Integer& d, const Integer& h1_mod_d_order, const Integer& tor_m_order);

/// Coefficient of pi in A(n) = 27^n (9 n^2 + 4 n) pi.
Integer area_constant(unsigned long n);

struct DominationBudget {
  unsigned long t = 1;
  unsigned long h = 1;
  Rational eps3 = Rational(1, 10);
  std::optional<Rational> sv_m;
  std::optional<Integer> d;
};

/// Rigorous decimal enclosure.
struct Interval {
  std::string lower;
  std::string upper;
  double lower_value = 0;
  double upper_value = 0;
  double relative_width = 0;  // (upper - lower) / lower, rounded up
};

struct BudgetReport {
  Integer area_coefficient;  // A(2t) / pi
  Interval sinh_half_eps;    // sinh(eps3 / 2)
  Interval vertex_budget;    // A(2t) / (4 sinh(eps3 / 2))
  unsigned long max_pieces = 0;
  unsigned long max_tori = 0;
};

BudgetReport distortion_budget(const DominationBudget& budget);

struct TargetQuery {
  Integer d = 1;
  Integer torsion_bound = 1;
  std::optional<Rational> sv_m;
  /// Cap on |pi_1| of the lens quotient of a prism manifold.
  std::optional<Integer> lens_cap;
  unsigned long long max_candidates = 200000;
};

struct TargetCandidate {
  std::string family;  // lens, platonic, prism, euclidean, hyperbolic-base
  SeifertInvariants invariants;
  Rational chi;
  Rational e;
  Integer torsion;
  std::optional<Rational> e_floor;  // d chi^2 / sv_M in the hyperbolic-base case
};

struct TargetReport {
  Integer torsion_bound;
  std::vector<TargetCandidate> candidates;
  bool lens_coarse = true;        // lens list is by torsion order only
  bool prism_bounded = false;     // false without a lens cap
  bool hyperbolic_bounded = false;  // false without sv_M
  std::vector<std::string> notes;
};

/// Candidate targets by sign of chi. Throws ResourceCapError beyond
/// max_candidates.
TargetReport enumerate_targets(const TargetQuery& query);

/// The five closed orientable Euclidean bases: T^2 and S^2 with cone orders
/// (2,3,6), (2,4,4), (3,3,3), (2,2,2,2).
std::vector<std::pair<unsigned, std::vector<Integer>>> euclidean_bases();

}  // namespace glueprint::seifert
