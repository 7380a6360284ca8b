#pragma once

// Fiber-shearings, index bounds, and enumeration of nondegenerate gluings
// under a distortion budget.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glueprint/gluing_engine.hpp"

namespace glueprint::shearing {

/// Per-end twist counts along the fiber; zero at ends of hyperbolic pieces.
struct FiberShearing {
  std::vector<std::int64_t> twists;
};

/// Throws ValidationError on a wrong length or a twist at a hyperbolic end.
void validate(const gluing::PreglueGraph& pg, const FiberShearing& tau);

/// (phi^tau)_d = tau_dbar^-1 phi_d tau_d with tau_d the k_d-th fiber twist.
gluing::Gluing apply_shearing(const gluing::PreglueGraph& pg, const gluing::Gluing& phi, const FiberShearing& tau);

/// Sum of the twists at the ends of v; PreconditionError for hyperbolic v.
std::int64_t shearing_index(const gluing::PreglueGraph& pg, const FiberShearing& tau, std::size_t vertex);

/// Same index vector, all twisting at each Seifert vertex on its lowest end.
FiberShearing canonical_shearing_form(const gluing::PreglueGraph& pg, const FiberShearing& tau);

/// Canonical shearing with the given per-vertex indices (ignored at
/// hyperbolic or isolated vertices).
FiberShearing shearing_with_indices(const gluing::PreglueGraph& pg, const std::vector<std::int64_t>& indices);

struct IndexBound {
  Integer bound;         // K: every |k_v| >= K gives D_v >= C
  Integer cover_bound;   // bound for the doubled index on the double cover (semi vertices)
  Rational r;            // min q_phi(lambda)
  Rational R;            // max q_phi(mu)
  Rational S;            // sum q_phi(mu)
  Rational delta_l;      // disc of the lambda-difference lattice
  Integer m;             // fiber multiplicity
  std::size_t ends = 0;  // tori entering the estimate
  bool semi = false;
};

/// Smallest K >= 1 with delta_l * (r m^2 K^2 / (2n) - S) >= C^(2n).
IndexBound index_bound(const gluing::PreglueGraph& pg, const gluing::Gluing& phi, std::size_t vertex,
                       const Rational& c);

/// One twist class of gluing maps across an edge, written at the edge's slot-0 end.
struct EdgeClass {
  torus::TorusAuto phi;
  torus::TorusAuto coset_rep;
  Rational delta;
};

/// Canonical twist-class representatives with edge discriminant below bound.
/// A nonzero candidate_cap bounds the double-coset search.
std::vector<EdgeClass> edge_classes(const gluing::PreglueGraph& pg, std::size_t edge, const Rational& bound,
                                    std::uint64_t candidate_cap = 0);

struct EnumerationOptions {
  unsigned long long cap = 1000000;
  unsigned threads = 0;  // 0: GLUEPRINT_THREADS, else hardware concurrency
};

struct GluingRecord {
  gluing::Gluing phi;
  gluing::DistortionReport report;
  std::vector<std::size_t> edge_class;  // per edge, index into EnumerationResult::classes
  std::vector<std::int64_t> indices;    // per vertex, zero where undefined
};

struct EnumerationResult {
  std::vector<std::vector<EdgeClass>> classes;  // per edge
  std::vector<GluingRecord> gluings;
  unsigned long long cells = 0;
};

/// Nondegenerate gluings with primary distortion < c, one per class of the
/// zero-index fiber-shearing relation. Throws ResourceCapError when the
/// double-coset search per edge or the sweep would exceed options.cap.
EnumerationResult enumerate_gluings(const gluing::PreglueGraph& pg, const Rational& c,
                                    const EnumerationOptions& options = {});

}  // namespace glueprint::shearing
