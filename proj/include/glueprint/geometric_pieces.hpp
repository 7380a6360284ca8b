#pragma once

// Geometric pieces at the vertices: hyperbolic cusp data and Seifert
// boundary data, with the boundary forms and boundary-lattice images they
// determine.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "glueprint/exact_lattice.hpp"

namespace glueprint::pieces {

/// Cusp shapes and the image of H_2(J, dJ) in the boundary, both supplied
/// by the user. Torus t occupies coordinates 2t, 2t+1.
struct HyperbolicPieceData {
  std::vector<lattice::QForm> cusp_forms;
  lattice::Sublattice del_h2;
};

/// Boundary torus of a Seifert piece in its declared basis (x, lambda),
/// lambda the fiber and <x, lambda> = +1. mu = mu_x * x + mu_lambda * lambda.
struct SeifertTorus {
  Integer divisibility = 1;
  Integer mu_x = 1;
  Integer mu_lambda = 0;
};

struct SeifertPieceData {
  bool base_orientable = true;
  unsigned genus = 0;
  std::vector<Integer> cone_orders;
  std::vector<SeifertTorus> tori;
};

using Piece = std::variant<HyperbolicPieceData, SeifertPieceData>;

bool is_seifert(const Piece& p);
bool is_hyperbolic(const Piece& p);
/// Seifert with non-orientable base.
bool needs_orientation_cover(const Piece& p);
std::size_t torus_count(const Piece& p);

/// Throws ValidationError with field paths below `path`.
void validate(const Piece& p, const std::string& path = "piece");

Rational orbifold_euler_characteristic(const SeifertPieceData& s);

/// m_v = lcm of the cone orders (1 without cone points).
Integer fiber_multiplicity(const SeifertPieceData& s);

/// Form of torus t alone: the cusp form, or diag(d^2, 0).
RatMatrix torus_form(const Piece& p, std::size_t t);

/// Block-diagonal over the boundary tori.
lattice::QForm boundary_form(const Piece& p);

/// Hyperbolic: the stored basis. Seifert (orientable base): differences
/// lambda_i - lambda_{i+1} followed by mu_v = sum of mu_i.
lattice::Sublattice del_h2_lattice(const Piece& p);

/// Fiber-centralizer double cover of a Seifert piece over a non-orientable
/// base: each torus t lifts to t (copy 0) and n + t (copy 1) with identical
/// declarations; cone orders doubled; orientable genus g - 1.
SeifertPieceData piece_double_cover(const SeifertPieceData& s);

}  // namespace glueprint::pieces
