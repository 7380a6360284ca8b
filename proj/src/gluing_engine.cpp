#include "glueprint/gluing_engine.hpp"

#include <mpfr.h>

#include <numeric>

#include "glueprint/errors.hpp"

namespace glueprint::gluing {

namespace {

Rational det2(const RatMatrix& g) { return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0); }

Rational restricted_determinant(const lattice::Sublattice& w, const RatMatrix& gram) {
  if (w.rank() == 0) return 1;
  const RatMatrix b = to_rational(w.basis());
  return determinant(multiply(multiply(b, gram), b.transpose()));
}

std::string end_path(std::size_t end) { return "gluing[" + std::to_string(end) + "]"; }

}  // namespace

void validate(const PreglueGraph& pg) {
  const auto& g = pg.graph;
  if (pg.pieces.size() != g.vertices().size())
    throw ValidationError("pieces", "expected " + std::to_string(g.vertices().size()) + " pieces, got " +
                                        std::to_string(pg.pieces.size()));
  if (pg.torus_of_end.size() != g.ends().size())
    throw ValidationError("torus_of_end", "expected one torus per end (" + std::to_string(g.ends().size()) + ")");
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const std::string path = "pieces[" + std::to_string(v) + "]";
    pieces::validate(pg.pieces[v], path);
    const std::size_t n = pieces::torus_count(pg.pieces[v]);
    if (g.valence(v) != n)
      throw ValidationError(path, "vertex " + std::to_string(v) + " has valence " + std::to_string(g.valence(v)) +
                                      " but its piece has " + std::to_string(n) + " boundary tori");
    const bool semi = g.vertices()[v].kind == graph::Kind::semi;
    if (semi != pieces::needs_orientation_cover(pg.pieces[v]))
      throw ValidationError(path, semi ? "a semi-vertex needs a Seifert piece over a non-orientable base"
                                       : "a Seifert piece over a non-orientable base must sit at a semi-vertex");
    std::vector<bool> used(n, false);
    for (std::size_t d : g.ends_at(v)) {
      const std::size_t t = pg.torus_of_end[d];
      const std::string ep = "edges[" + std::to_string(g.ends()[d].edge) + "].ends[" +
                             std::to_string(g.ends()[d].slot) + "].torus";
      if (t >= n) throw ValidationError(ep, "torus " + std::to_string(t) + " does not exist");
      if (used[t]) throw ValidationError(ep, "torus " + std::to_string(t) + " is assigned to two ends");
      used[t] = true;
    }
  }
}

void validate(const PreglueGraph& pg, const Gluing& phi) {
  const auto& g = pg.graph;
  if (phi.maps.size() != g.ends().size())
    throw ValidationError("gluing", "expected one map per end (" + std::to_string(g.ends().size()) + "), got " +
                                        std::to_string(phi.maps.size()));
  for (std::size_t d = 0; d < phi.maps.size(); ++d)
    if (phi.maps[d].det() != -1)
      throw ValidationError(end_path(d) + ".matrix", "gluing map at end " + std::to_string(d) +
                                                         " must reverse orientation (det -1)");
  for (std::size_t d = 0; d < phi.maps.size(); ++d) {
    const std::size_t o = g.opposite(d);
    if (!(phi.maps[o] * phi.maps[d] == torus::TorusAuto::identity())) {
      if (o == d)
        throw ValidationError(end_path(d) + ".matrix",
                              "map on semi-edge end " + std::to_string(d) + " must be an involution");
      throw ValidationError(end_path(d) + ".matrix", "maps at ends " + std::to_string(d) + " and " +
                                                         std::to_string(o) + " must be mutually inverse (phi at the opposite end must be phi^-1)");
    }
  }
}

RatMatrix side_form(const PreglueGraph& pg, std::size_t end) {
  const auto& d = pg.graph.ends().at(end);
  return pieces::torus_form(pg.pieces[d.vertex], pg.torus_of_end[end]);
}

RatMatrix end_block(const PreglueGraph& pg, const Gluing& phi, std::size_t end) {
  return add(side_form(pg, end), torus::pullback_gram(side_form(pg, pg.graph.opposite(end)), phi.maps.at(end)));
}

lattice::QForm build_qphi(const PreglueGraph& pg, const Gluing& phi) {
  std::vector<RatMatrix> blocks;
  for (std::size_t d = 0; d < pg.graph.ends().size(); ++d) blocks.push_back(end_block(pg, phi, d));
  return lattice::QForm::from_gram(direct_sum(blocks));
}

bool is_nondegenerate(const PreglueGraph& pg, const Gluing& phi) {
  const auto& g = pg.graph;
  for (std::size_t d = 0; d < g.ends().size(); ++d) {
    const std::size_t o = g.opposite(d);
    if (!pieces::is_seifert(pg.pieces[g.ends()[d].vertex]) || !pieces::is_seifert(pg.pieces[g.ends()[o].vertex]))
      continue;
    // The fiber is e2 on both sides; phi(e2) = +-e2 exactly when entry (0,1) vanishes.
    if (phi.maps[d](0, 1) == 0) return false;
  }
  return true;
}

bool blocks_positive_definite(const PreglueGraph& pg, const Gluing& phi) {
  for (std::size_t d = 0; d < pg.graph.ends().size(); ++d)
    if (det2(end_block(pg, phi, d)) <= 0) return false;
  return true;
}

bool operator<(const DistortionValue& a, const DistortionValue& b) {
  if (a.is_zero()) return !b.is_zero();
  if (b.is_zero()) return false;
  const unsigned l = std::lcm(a.root, b.root);
  return power(a.delta, l / a.root) < power(b.delta, l / b.root);
}

bool operator==(const DistortionValue& a, const DistortionValue& b) { return !(a < b) && !(b < a); }

bool below(const DistortionValue& v, const Rational& c) { return v.delta < power(c, v.root); }

std::string DistortionValue::enclosure(int digits) const {
  mpfr_t lo, hi;
  mpfr_init2(lo, 160);
  mpfr_init2(hi, 160);
  mpfr_set_q(lo, delta.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi, delta.get_mpq_t(), MPFR_RNDU);
  mpfr_rootn_ui(lo, lo, root, MPFR_RNDD);
  mpfr_rootn_ui(hi, hi, root, MPFR_RNDU);
  char* a = nullptr;
  char* b = nullptr;
  mpfr_asprintf(&a, "%.*RDe", digits - 1, lo);
  mpfr_asprintf(&b, "%.*RUe", digits - 1, hi);
  std::string out = std::string("[") + a + ", " + b + "]";
  mpfr_free_str(a);
  mpfr_free_str(b);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return out;
}

double DistortionValue::approx() const {
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_set_q(x, delta.get_mpq_t(), MPFR_RNDN);
  mpfr_rootn_ui(x, x, root, MPFR_RNDN);
  const double r = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return r;
}

DistortionValue edge_distortion(const PreglueGraph& pg, const Gluing& phi, std::size_t edge) {
  const std::size_t d0 = pg.graph.end_id(edge, 0);
  const Rational delta = det2(end_block(pg, phi, d0));
  const std::size_t d1 = pg.graph.opposite(d0);
  if (d1 != d0 && det2(end_block(pg, phi, d1)) != delta)
    throw Error("edge " + std::to_string(edge) + ": discriminants at its two ends differ");
  return {delta, 4};
}

RatMatrix vertex_gram(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex) {
  const std::size_t n = pg.graph.valence(vertex);
  std::vector<RatMatrix> blocks(n);
  for (std::size_t d : pg.graph.ends_at(vertex)) blocks[pg.torus_of_end[d]] = end_block(pg, phi, d);
  return direct_sum(blocks);
}

pieces::Piece distortion_piece(const PreglueGraph& pg, std::size_t vertex) {
  const auto& p = pg.pieces.at(vertex);
  if (pieces::needs_orientation_cover(p)) return pieces::piece_double_cover(std::get<pieces::SeifertPieceData>(p));
  return p;
}

RatMatrix distortion_gram(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex) {
  const RatMatrix g = vertex_gram(pg, phi, vertex);
  if (pieces::needs_orientation_cover(pg.pieces.at(vertex))) return direct_sum({g, g});
  return g;
}

DistortionValue vertex_distortion(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex) {
  if (pg.graph.valence(vertex) == 0) return {0, 2};
  const lattice::Sublattice w = pieces::del_h2_lattice(distortion_piece(pg, vertex));
  return {restricted_determinant(w, distortion_gram(pg, phi, vertex)), static_cast<unsigned>(2 * w.rank())};
}

DistortionReport distortion_report(const PreglueGraph& pg, const Gluing& phi) {
  DistortionReport r;
  r.primary = {0, 4};
  for (std::size_t v = 0; v < pg.graph.vertices().size(); ++v) {
    r.vertices.push_back(vertex_distortion(pg, phi, v));
    if (r.primary < r.vertices.back()) r.primary = r.vertices.back();
  }
  for (std::size_t e = 0; e < pg.graph.edges().size(); ++e) {
    r.edges.push_back(edge_distortion(pg, phi, e));
    if (r.primary < r.edges.back()) r.primary = r.edges.back();
  }
  return r;
}

DistortionValue primary_distortion(const PreglueGraph& pg, const Gluing& phi) {
  return distortion_report(pg, phi).primary;
}

AtoroidalReport atoroidal_vertex_bound_check(const PreglueGraph& pg, const Gluing& phi, std::size_t vertex) {
  if (!pieces::is_hyperbolic(pg.pieces.at(vertex)))
    throw PreconditionError("atoroidal bound check needs a hyperbolic vertex");
  AtoroidalReport r;
  r.vertex = vertex_distortion(pg, phi, vertex);
  Rational product = 1;
  bool all_positive = true;
  r.blockwise_domination = true;
  for (std::size_t d : pg.graph.ends_at(vertex)) {
    r.adjacent_edges.push_back(edge_distortion(pg, phi, pg.graph.ends()[d].edge));
    product *= r.adjacent_edges.back().delta;
    all_positive = all_positive && !r.adjacent_edges.back().is_zero();
    const auto block = lattice::QForm::from_gram(end_block(pg, phi, d));
    const auto own = lattice::QForm::from_gram(side_form(pg, d));
    r.blockwise_domination = r.blockwise_domination && lattice::dominates(block, own);
  }
  const std::size_t n = pg.graph.valence(vertex);
  if (n > 0 && all_positive) r.ratio = DistortionValue{r.vertex.delta / product, static_cast<unsigned>(2 * n)};
  const lattice::Sublattice w = pieces::del_h2_lattice(pg.pieces[vertex]);
  r.discriminant_monotone = restricted_determinant(w, vertex_gram(pg, phi, vertex)) >=
                            restricted_determinant(w, pieces::boundary_form(pg.pieces[vertex]).gram());
  return r;
}

std::optional<std::size_t> large_generator_witness(const lattice::QForm& q, const lattice::Sublattice& w,
                                                   const std::vector<IntVector>& alphas) {
  const std::size_t n = w.rank();
  if (alphas.empty()) return std::nullopt;
  IntMatrix a(alphas.size(), w.ambient_rank());
  IntMatrix both(alphas.size() + n, w.ambient_rank());
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = 0; j < w.ambient_rank(); ++j) both(i, j) = a(i, j) = alphas[i].at(j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < w.ambient_rank(); ++j) both(alphas.size() + i, j) = w.basis()(i, j);
  if (lattice::rational_rank(to_rational(a)) != n || lattice::rational_rank(to_rational(both)) != n)
    return std::nullopt;
  const Rational disc = lattice::discriminant(w, q);
  for (std::size_t k = 0; k < alphas.size(); ++k)
    if (power(q.value(alphas[k]), static_cast<unsigned long>(n)) >= disc) return k;
  return std::nullopt;
}

LiftedInstance lift_through_cover(const PreglueGraph& pg, const Gluing& phi, const graph::Cover& cover) {
  LiftedInstance out;
  out.map = cover.map;
  out.pg.graph = cover.graph;
  for (std::size_t v = 0; v < cover.graph.vertices().size(); ++v) {
    const std::size_t base = cover.map.vertex[v];
    if (pieces::needs_orientation_cover(pg.pieces[base]))
      out.pg.pieces.emplace_back(pieces::piece_double_cover(std::get<pieces::SeifertPieceData>(pg.pieces[base])));
    else
      out.pg.pieces.push_back(pg.pieces[base]);
  }
  for (std::size_t d = 0; d < cover.graph.ends().size(); ++d) {
    const std::size_t base_end = cover.map.end[d];
    const std::size_t base_vertex = pg.graph.ends()[base_end].vertex;
    std::size_t t = pg.torus_of_end[base_end];
    if (pieces::needs_orientation_cover(pg.pieces[base_vertex]))
      t += cover.map.end_copy[d] * pieces::torus_count(pg.pieces[base_vertex]);
    out.pg.torus_of_end.push_back(t);
    out.phi.maps.push_back(phi.maps[base_end]);
  }
  return out;
}

LiftedInstance entire_cover(const PreglueGraph& pg, const Gluing& phi, std::size_t component) {
  return lift_through_cover(pg, phi, graph::restrict_to_component(graph::entire_double_cover(pg.graph), component));
}

LiftedInstance loopless_cover(const PreglueGraph& pg, const Gluing& phi, std::size_t component) {
  return lift_through_cover(pg, phi, graph::restrict_to_component(graph::loopless_double_cover(pg.graph), component));
}

}  // namespace glueprint::gluing
