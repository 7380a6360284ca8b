#pragma once

// Independent brute-force references used by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "glueprint/exact_lattice.hpp"
#include "glueprint/torus_mapping_class.hpp"

namespace glueprint::oracle {

/// Primitive vectors w (first nonzero entry positive) with q(w) < bound,
/// found by scanning the box |w_i| <= box.
std::vector<IntVector> primitive_lines(const lattice::QForm& q, const Rational& bound, std::int64_t box);

/// Every element of SL(2,Z) with |entries| <= box.
std::vector<torus::TorusAuto> sl2_box(std::int64_t box);

struct CosetClass {
  std::vector<torus::TorusAuto> members;  // sorted
  Rational delta;
};

/// Elements s of SL(2,Z) with |entries| <= box and 0 < det(s^T G s + G') < bound,
/// grouped by union-find under left multiplication by the stabilizer
/// generators of q, right multiplication by those of qp, their inverses and -I.
std::vector<CosetClass> brute_double_cosets(const lattice::QForm& q, const lattice::QForm& qp, const Rational& bound,
                                            std::int64_t box);

/// Index of the class containing s, or -1.
int class_of(const std::vector<CosetClass>& classes, const torus::TorusAuto& s);

/// Smith normal form diagonal of an integer matrix (nonzero entries only).
std::vector<Integer> smith_diagonal(IntMatrix m);

}  // namespace glueprint::oracle
