#include "instances.hpp"

#include <algorithm>
#include <numeric>

#include "glueprint/errors.hpp"

namespace glueprint::props {

using pieces::HyperbolicPieceData;
using pieces::SeifertPieceData;

lattice::QForm cusp_form(Gen& gen) {
  // [[1, b/2], [b/2, c]] with b in {0, 1} and c >= 1 is reduced, so its
  // shortest primitive value is 1.
  Rational b(gen.uniform(0, 1), 2), c(gen.uniform(2, 6), 2);
  b.canonicalize();
  c.canonicalize();
  return lattice::QForm::from_gram(RatMatrix{{1, b}, {b, c}});
}

namespace {

pieces::Piece hyperbolic_piece(Gen& gen, std::size_t n) {
  HyperbolicPieceData h;
  for (std::size_t t = 0; t < n; ++t) h.cusp_forms.push_back(cusp_form(gen));
  while (true) {
    std::vector<IntVector> rows(n, IntVector(2 * n));
    for (auto& r : rows)
      for (auto& x : r) x = gen.uniform(-1, 1);
    try {
      h.del_h2 = lattice::Sublattice::from_rows(2 * n, rows);
      return h;
    } catch (const ValidationError&) {
    }
  }
}

pieces::Piece seifert_piece(Gen& gen, std::size_t n, bool orientable) {
  SeifertPieceData s;
  s.base_orientable = orientable;
  s.genus = static_cast<unsigned>(orientable ? gen.uniform(0, 1) : gen.uniform(1, 2));
  const auto cones = gen.uniform(0, 2);
  for (int i = 0; i < cones; ++i) s.cone_orders.push_back(gen.uniform(2, 3));
  s.tori.resize(n);
  while (pieces::orbifold_euler_characteristic(s) >= 0) ++s.genus;
  const Integer m = pieces::fiber_multiplicity(s);
  for (auto& t : s.tori) {
    t.divisibility = gen.uniform(1, 2);
    t.mu_x = m;
    t.mu_lambda = gen.uniform(-2, 2);
  }
  return s;
}

torus::TorusAuto reversing_involution(Gen& gen, int length) {
  const auto u = gen.sl2(length);
  const auto psi = gen.coin() ? torus::TorusAuto::from_entries(1, 0, 0, -1) : torus::TorusAuto::from_entries(0, 1, 1, 0);
  return u * psi * u.inverse();
}

}  // namespace

gluing::Gluing random_gluing(Gen& gen, const gluing::PreglueGraph& pg, int word_length) {
  const auto& g = pg.graph;
  gluing::Gluing phi{std::vector<torus::TorusAuto>(g.ends().size())};
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const std::size_t d0 = g.end_id(e, 0);
    const std::size_t d1 = g.opposite(d0);
    if (d0 == d1) {
      phi.maps[d0] = reversing_involution(gen, word_length);
    } else {
      phi.maps[d0] = gen.reversing(word_length);
      phi.maps[d1] = phi.maps[d0].inverse();
    }
  }
  return phi;
}

Instance random_instance(Gen& gen, const InstanceShape& shape) {
  std::size_t verts = static_cast<std::size_t>(gen.uniform(1, static_cast<std::int64_t>(shape.max_vertices)));
  if (verts == 1 && !shape.semi && !shape.loops) verts = 2;
  std::vector<bool> hyperbolic(verts), semi(verts, false);
  for (std::size_t v = 0; v < verts; ++v) {
    hyperbolic[v] = shape.hyperbolic && (!shape.seifert || gen.coin());
    if (!hyperbolic[v] && shape.semi) semi[v] = gen.uniform(0, 2) == 0;
  }

  std::vector<graph::Edge> edges;
  for (std::size_t v = 1; v < verts; ++v)
    edges.push_back({graph::Kind::entire, {static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(v) - 1)), v}});
  const std::size_t extra_cap = shape.max_edges > edges.size() ? shape.max_edges - edges.size() : 0;
  std::size_t extra = static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(extra_cap)));
  if (edges.empty() && extra == 0) extra = 1;
  for (std::size_t i = 0; i < extra; ++i) {
    const auto a = static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(verts) - 1));
    if (shape.semi && gen.coin()) {
      edges.push_back({graph::Kind::semi, {a}});
      continue;
    }
    auto b = static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(verts) - 1));
    if (a == b && !shape.loops) {
      if (verts == 1) {
        edges.push_back({graph::Kind::semi, {a}});
        continue;
      }
      b = (a + 1) % verts;
    }
    edges.push_back({graph::Kind::entire, {a, b}});
  }

  std::vector<graph::Vertex> vs(verts);
  for (std::size_t v = 0; v < verts; ++v) vs[v].kind = semi[v] ? graph::Kind::semi : graph::Kind::entire;
  Instance out;
  out.pg.graph = graph::DecompGraph(vs, edges);
  const auto& g = out.pg.graph;
  out.pg.torus_of_end.assign(g.ends().size(), 0);
  for (std::size_t v = 0; v < verts; ++v) {
    const std::size_t n = g.valence(v);
    out.pg.pieces.push_back(hyperbolic[v] ? hyperbolic_piece(gen, n) : seifert_piece(gen, n, !semi[v]));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    for (std::size_t i = 0; i < n; ++i) out.pg.torus_of_end[g.ends_at(v)[i]] = perm[i];
  }
  out.phi = random_gluing(gen, out.pg, shape.word_length);
  gluing::validate(out.pg);
  gluing::validate(out.pg, out.phi);
  return out;
}

Instance square_twist(std::int64_t k) {
  Instance out;
  out.pg.graph = graph::DecompGraph({{}, {}}, {{graph::Kind::entire, {0, 1}}});
  HyperbolicPieceData h;
  h.cusp_forms = {lattice::QForm::identity(2)};
  h.del_h2 = lattice::Sublattice::from_rows(2, {{1, 0}});
  out.pg.pieces = {h, h};
  out.pg.torus_of_end = {0, 0};
  const auto phi = torus::TorusAuto::from_entries(0, 1, 1, k);
  out.phi.maps = {phi, phi.inverse()};
  return out;
}

}  // namespace glueprint::props
