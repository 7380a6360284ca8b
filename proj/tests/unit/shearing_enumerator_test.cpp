#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "glueprint/errors.hpp"
#include "glueprint/shearing_enumerator.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace glueprint;
using namespace glueprint::shearing;
using gluing::Gluing;
using gluing::PreglueGraph;
using pieces::SeifertPieceData;
using pieces::SeifertTorus;
using torus::TorusAuto;

namespace {

SeifertPieceData seifert(std::size_t n) {
  SeifertPieceData s;
  s.genus = 1;
  s.tori.assign(n, SeifertTorus{});
  return s;
}

// One Seifert vertex with `n` ends, each joined to its own square-cusp
// hyperbolic piece.
PreglueGraph star(std::size_t n) {
  PreglueGraph pg;
  std::vector<graph::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({graph::Kind::entire, {0, i + 1}});
  pg.graph = graph::DecompGraph(std::vector<graph::Vertex>(n + 1), edges);
  pg.pieces.push_back(seifert(n));
  pieces::HyperbolicPieceData h;
  h.cusp_forms = {lattice::QForm::identity(2)};
  h.del_h2 = lattice::Sublattice::from_rows(2, {{1, 0}});
  for (std::size_t i = 0; i < n; ++i) pg.pieces.push_back(h);
  pg.torus_of_end.assign(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) pg.torus_of_end[2 * i] = i;
  return pg;
}

PreglueGraph seifert_pair() {
  PreglueGraph pg;
  pg.graph = graph::DecompGraph({{}, {}}, {{graph::Kind::entire, {0, 1}}});
  pg.pieces = {seifert(1), seifert(1)};
  pg.torus_of_end = {0, 0};
  return pg;
}

Gluing single_edge(const TorusAuto& f) { return Gluing{{f, f.inverse()}}; }

FiberShearing random_shearing(props::Gen& gen, const PreglueGraph& pg, std::int64_t spread) {
  FiberShearing tau{std::vector<std::int64_t>(pg.graph.ends().size(), 0)};
  for (std::size_t d = 0; d < tau.twists.size(); ++d)
    if (pieces::is_seifert(pg.pieces[pg.graph.ends()[d].vertex])) tau.twists[d] = gen.uniform(-spread, spread);
  return tau;
}

// Moves every vertex's index onto its lowest end with the opposite sign, so
// the result has index zero everywhere.
FiberShearing zero_index(const PreglueGraph& pg, FiberShearing tau) {
  for (std::size_t v = 0; v < pg.graph.vertices().size(); ++v) {
    if (!pieces::is_seifert(pg.pieces[v]) || pg.graph.valence(v) == 0) continue;
    tau.twists[pg.graph.ends_at(v).front()] -= shearing_index(pg, tau, v);
  }
  return tau;
}

// Every gluing of a one-edge graph with entries in the box, filtered by the
// definition: nondegenerate and primary distortion below c.
std::set<TorusAuto> brute_gluings(const PreglueGraph& pg, const Rational& c, std::int64_t box) {
  std::set<TorusAuto> out;
  const auto psi = TorusAuto::from_entries(1, 0, 0, -1);
  for (const auto& s : oracle::sl2_box(box)) {
    const Gluing phi = single_edge(psi * s);
    if (!gluing::is_nondegenerate(pg, phi)) continue;
    if (gluing::below(gluing::primary_distortion(pg, phi), c)) out.insert(phi.maps[0]);
  }
  return out;
}

std::int64_t max_entry(const TorusAuto& f) {
  std::int64_t m = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(f(i, j)));
  return m;
}

}  // namespace

TEST(ShearingIndex, Examples) {
  const PreglueGraph two = star(2), three = star(3);
  FiberShearing a{{2, 0, -2, 0}};
  EXPECT_EQ(shearing_index(two, a, 0), 0);
  FiberShearing b{{1, 0, 2, 0, 3, 0}};
  EXPECT_EQ(shearing_index(three, b, 0), 6);
  EXPECT_THROW(shearing_index(three, b, 1), PreconditionError);
  EXPECT_THROW(validate(two, FiberShearing{{0, 1, 0, 0}}), ValidationError);
  EXPECT_THROW(validate(two, FiberShearing{{0, 0}}), ValidationError);

  FiberShearing c{{1, 0, 2, 0}};
  EXPECT_EQ(canonical_shearing_form(two, c).twists, (std::vector<std::int64_t>{3, 0, 0, 0}));
}

TEST(ShearingIndex, Additive) {
  props::Gen gen(43);
  props::InstanceShape shape;
  shape.semi = true;
  shape.loops = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = props::random_instance(gen, shape);
    const auto t1 = random_shearing(gen, inst.pg, 3), t2 = random_shearing(gen, inst.pg, 3);
    FiberShearing sum = t1;
    for (std::size_t d = 0; d < sum.twists.size(); ++d) sum.twists[d] += t2.twists[d];
    for (std::size_t v = 0; v < inst.pg.pieces.size(); ++v) {
      if (!pieces::is_seifert(inst.pg.pieces[v])) continue;
      EXPECT_EQ(shearing_index(inst.pg, sum, v), shearing_index(inst.pg, t1, v) + shearing_index(inst.pg, t2, v));
    }
    // Twists commute, so applying in two steps equals applying the sum.
    const Gluing two_step = apply_shearing(inst.pg, apply_shearing(inst.pg, inst.phi, t1), t2);
    EXPECT_EQ(two_step.maps, apply_shearing(inst.pg, inst.phi, sum).maps);
    EXPECT_NO_THROW(gluing::validate(inst.pg, two_step));
  }
}

TEST(ShearingIndex, ZeroIndexPreservesDistortion) {
  props::Gen gen(47);
  props::InstanceShape shape;
  shape.semi = true;
  shape.loops = true;
  shape.max_edges = 4;
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = props::random_instance(gen, shape);
    const auto tau = zero_index(inst.pg, random_shearing(gen, inst.pg, 4));
    const Gluing sheared = apply_shearing(inst.pg, inst.phi, tau);
    EXPECT_EQ(gluing::is_nondegenerate(inst.pg, sheared), gluing::is_nondegenerate(inst.pg, inst.phi));
    const auto a = gluing::distortion_report(inst.pg, inst.phi);
    const auto b = gluing::distortion_report(inst.pg, sheared);
    EXPECT_EQ(a.primary, b.primary);
    EXPECT_EQ(a.vertices, b.vertices);
    EXPECT_EQ(a.edges, b.edges);
  }
}

TEST(IndexBound, SoundAtAndBeyondBound) {
  props::Gen gen(53);
  props::InstanceShape shape;
  shape.semi = true;
  shape.loops = true;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = props::random_instance(gen, shape);
    if (!gluing::is_nondegenerate(inst.pg, inst.phi)) continue;
    const Rational c(gen.uniform(2, 5));
    for (std::size_t v = 0; v < inst.pg.pieces.size(); ++v) {
      if (!pieces::is_seifert(inst.pg.pieces[v])) continue;
      const auto ib = index_bound(inst.pg, inst.phi, v, c);
      ASSERT_TRUE(ib.bound.fits_slong_p());
      const std::int64_t k = ib.bound.get_si();
      for (std::int64_t idx : {k, -k, k + 1, -k - 2, 2 * k + 5}) {
        std::vector<std::int64_t> indices(inst.pg.pieces.size(), 0);
        indices[v] = idx;
        const Gluing phi = apply_shearing(inst.pg, inst.phi, shearing_with_indices(inst.pg, indices));
        EXPECT_FALSE(gluing::below(gluing::vertex_distortion(inst.pg, phi, v), c))
            << "vertex " << v << " index " << idx << " bound " << k;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(EdgeClasses, TwistCanonicalAndDistinct) {
  const PreglueGraph pg = star(1);
  const auto classes = edge_classes(pg, 0, 50);
  ASSERT_FALSE(classes.empty());
  std::set<TorusAuto> seen;
  for (const auto& cls : classes) {
    EXPECT_EQ(cls.phi.det(), -1);
    EXPECT_TRUE(seen.insert(cls.phi).second);
    const Gluing phi = single_edge(cls.phi);
    EXPECT_EQ(determinant(gluing::end_block(pg, phi, 0)), cls.delta);
    EXPECT_LT(cls.delta, 50);
    // Twisting at the Seifert end stays in the class's discriminant.
    const Gluing twisted = single_edge(cls.phi * torus::fiber_twist(7));
    EXPECT_EQ(determinant(gluing::end_block(pg, twisted, 0)), cls.delta);
  }
}

TEST(Enumerate, MatchesBruteForceSeifertHyperbolic) {
  const PreglueGraph pg = star(1);
  for (const Rational c : {Rational(3, 2), Rational(2), Rational(5, 2)}) {
    const auto result = enumerate_gluings(pg, c);
    std::set<TorusAuto> found;
    std::int64_t box = 0;
    for (const auto& rec : result.gluings) {
      EXPECT_TRUE(gluing::below(rec.report.primary, c));
      EXPECT_TRUE(gluing::is_nondegenerate(pg, rec.phi));
      EXPECT_TRUE(found.insert(rec.phi.maps[0]).second);
      box = std::max(box, max_entry(rec.phi.maps[0]));
    }
    ASSERT_FALSE(found.empty());
    // One end per Seifert vertex: zero-index shearings are trivial, so the
    // classes are single gluings.
    EXPECT_EQ(found, brute_gluings(pg, c, box + 3)) << "budget " << to_string(c);
  }
}

TEST(Enumerate, MatchesBruteForceSeifertPair) {
  const PreglueGraph pg = seifert_pair();
  const Rational c(2);
  const auto result = enumerate_gluings(pg, c);
  std::set<TorusAuto> found;
  std::int64_t box = 0;
  for (const auto& rec : result.gluings) {
    found.insert(rec.phi.maps[0]);
    box = std::max(box, max_entry(rec.phi.maps[0]));
  }
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found, brute_gluings(pg, c, box + 3));
}

TEST(Enumerate, ZeroIndexClassesAreDistinct) {
  // A Seifert vertex with two ends: zero-index shearings move gluings
  // within a class, so records must differ by more than such a shearing.
  const PreglueGraph pg = star(2);
  const auto result = enumerate_gluings(pg, 2);
  ASSERT_FALSE(result.gluings.empty());
  std::set<std::vector<TorusAuto>> canonical;
  for (const auto& rec : result.gluings) {
    // Push all twisting onto the lowest end: this normal form identifies
    // gluings related by a zero-index shearing.
    FiberShearing tau{std::vector<std::int64_t>(pg.graph.ends().size(), 0)};
    const auto& f = rec.phi.maps[2];
    // f L^k adds k times column 2 to column 1.
    const int row = f(0, 1) != 0 ? 0 : 1;
    const std::int64_t step = std::abs(f(row, 1));
    const std::int64_t k = (((f(row, 0) % step) + step) % step - f(row, 0)) / f(row, 1);
    tau.twists[2] = k;
    tau.twists[0] = -k;
    const auto normal = apply_shearing(pg, rec.phi, tau);
    EXPECT_TRUE(canonical.insert(normal.maps).second);
    EXPECT_TRUE(gluing::below(rec.report.primary, 2));
  }
}

TEST(Enumerate, EmptyCases) {
  // Fiber-matched maps are the only ones with edge discriminant below 1.
  EXPECT_TRUE(enumerate_gluings(seifert_pair(), 1).gluings.empty());
  // Square cusps give a vertex term of sqrt 2.
  EXPECT_TRUE(enumerate_gluings(props::square_twist(0).pg, Rational(7, 5)).gluings.empty());
  EXPECT_FALSE(enumerate_gluings(props::square_twist(0).pg, Rational(3, 2)).gluings.empty());
  EXPECT_THROW(enumerate_gluings(star(1), 0), PreconditionError);
}

TEST(Enumerate, CapIsEnforced) {
  EnumerationOptions options;
  options.cap = 3;
  EXPECT_THROW(enumerate_gluings(star(2), 3, options), ResourceCapError);
  options.cap = 10;
  EXPECT_THROW(enumerate_gluings(props::square_twist(0).pg, 50, options), ResourceCapError);
}

TEST(Enumerate, ThreadCountDoesNotChangeResult) {
  const PreglueGraph pg = star(2);
  EnumerationOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = enumerate_gluings(pg, Rational(5, 2), one);
  const auto b = enumerate_gluings(pg, Rational(5, 2), four);
  ASSERT_EQ(a.gluings.size(), b.gluings.size());
  for (std::size_t i = 0; i < a.gluings.size(); ++i) EXPECT_EQ(a.gluings[i].phi.maps, b.gluings[i].phi.maps);
}
