#pragma once

// Preglue graphs, gluings, the form q_phi and the average distortions.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "glueprint/decomposition_graph.hpp"
#include "glueprint/exact_lattice.hpp"
#include "glueprint/geometric_pieces.hpp"
#include "glueprint/torus_mapping_class.hpp"

namespace glueprint::gluing {

struct PreglueGraph {
  graph::DecompGraph graph;
  std::vector<pieces::Piece> pieces;      // per vertex
  std::vector<std::size_t> torus_of_end;  // end -> torus of the piece at that end
};

/// Throws ValidationError with a field path.
void validate(const PreglueGraph& pg);

/// Per-end maps T_d -> T_{opposite(d)} in the declared bases.
struct Gluing {
  std::vector<torus::TorusAuto> maps;
};

/// det = -1 everywhere and phi at the opposite end is the inverse.
void validate(const PreglueGraph& pg, const Gluing& phi);

/// Form of the piece at `end` restricted to that end's torus.
RatMatrix side_form(const PreglueGraph& pg, std::size_t end);

/// q_J|T_d + phi_d^T q_J'|T_dbar phi_d.
RatMatrix end_block(const PreglueGraph& pg, const Gluing& phi, std::size_t end);

/// Block-diagonal over all ends in end order.
lattice::QForm build_qphi(const PreglueGraph& pg, const Gluing& phi);

/// Fiber-match test: nondegenerate iff no end between two Seifert pieces
/// sends the fiber to plus or minus the far fiber.
bool is_nondegenerate(const PreglueGraph& pg, const Gluing& phi);

/// True iff every block of q_phi has positive determinant.
bool blocks_positive_definite(const PreglueGraph& pg, const Gluing& phi);

/// delta^(1/root), kept symbolic; zero when delta = 0.
struct DistortionValue {
  Rational delta = 0;
  unsigned root = 4;

  bool is_zero() const { return delta == 0; }
  /// Decimal enclosure [lo, hi] of delta^(1/root) with `digits` significant digits.
  std::string enclosure(int digits = 12) const;
  double approx() const;
};

bool operator<(const DistortionValue& a, const DistortionValue& b);
bool operator==(const DistortionValue& a, const DistortionValue& b);
inline bool operator>(const DistortionValue& a, const DistortionValue& b) { return b < a; }
inline bool operator<=(const DistortionValue& a, const DistortionValue& b) { return !(b < a); }
inline bool operator>=(const DistortionValue& a, const DistortionValue& b) { return !(a < b); }

/// True iff the value is strictly below the rational budget c, i.e. delta < c^root.
bool below(const DistortionValue& v, const Rational& c);

DistortionValue edge_distortion(const PreglueGraph& pg, const Gluing& phi, std::size_t edge);
DistortionValue vertex_distortion(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex);
DistortionValue primary_distortion(const PreglueGraph& pg, const Gluing& phi);

struct DistortionReport {
  std::vector<DistortionValue> vertices;
  std::vector<DistortionValue> edges;
  DistortionValue primary;
};

DistortionReport distortion_report(const PreglueGraph& pg, const Gluing& phi);

/// Gram of q_phi on the boundary coordinates of a vertex, torus by torus.
RatMatrix vertex_gram(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex);

/// Piece whose boundary image carries the vertex distortion: the piece
/// itself, or its fiber-centralizer double cover for a semi-vertex; the
/// matching Gram repeats the vertex blocks for both lifted copies.
pieces::Piece distortion_piece(const PreglueGraph& pg, std::size_t vertex);
RatMatrix distortion_gram(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex);

struct AtoroidalReport {
  DistortionValue vertex;
  std::vector<DistortionValue> adjacent_edges;  // one per end at the vertex
  /// (D_v / (prod D_e)^(2/n))^(2n) = delta_v / prod delta_e, when all
  /// adjacent edges are nondegenerate.
  std::optional<DistortionValue> ratio;
  bool blockwise_domination = false;
  bool discriminant_monotone = false;
};

/// Requires a hyperbolic vertex.
AtoroidalReport atoroidal_vertex_bound_check(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex);

/// Index k of a vector with q(alpha_k)^n >= disc(W, q), where the alphas
/// span W over Q (n = rank W); nullopt when none does or the alphas do not span.
std::optional<std::size_t> large_generator_witness(const lattice::QForm& q, const lattice::Sublattice& w,
                                                   const std::vector<IntVector>& alphas);

/// Preglue graph and gluing lifted to a cover of the underlying graph.
struct LiftedInstance {
  PreglueGraph pg;
  Gluing phi;
  graph::CoveringMap map;
};

/// Semi-vertices receive the fiber-centralizer double cover of their piece.
LiftedInstance lift_through_cover(const PreglueGraph& pg, const Gluing& phi, const graph::Cover& cover);

LiftedInstance entire_cover(const PreglueGraph& pg, const Gluing& phi, std::size_t component = 0);
LiftedInstance loopless_cover(const PreglueGraph& pg, const Gluing& phi, std::size_t component = 0);

}  // namespace glueprint::gluing
