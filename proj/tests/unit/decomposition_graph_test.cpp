#include <gtest/gtest.h>

#include "generators.hpp"
#include "glueprint/decomposition_graph.hpp"
#include "glueprint/errors.hpp"

using namespace glueprint;
using namespace glueprint::graph;

namespace {

Edge entire(std::size_t a, std::size_t b) { return {Kind::entire, {a, b}}; }
Edge semi_edge(std::size_t a) { return {Kind::semi, {a}}; }

// Seven pieces, eight tori, one Klein bottle: vertex 6 is the semi-vertex
// (valence 2) and the semi-edge sits at vertex 0.
DecompGraph orbigraph() {
  std::vector<Vertex> vs(7);
  vs[6].kind = Kind::semi;
  return DecompGraph(vs, {entire(0, 1), entire(1, 2), entire(2, 3), entire(3, 4), entire(4, 5), entire(5, 1),
                          entire(2, 6), entire(6, 4), semi_edge(0)});
}

std::size_t parallel_edges(const DecompGraph& g, std::size_t a, std::size_t b) {
  std::size_t n = 0;
  for (const auto& e : g.edges())
    if (e.endpoints.size() == 2 && ((e.endpoints[0] == a && e.endpoints[1] == b) ||
                                    (e.endpoints[0] == b && e.endpoints[1] == a)))
      ++n;
  return n;
}

void check_covering_map(const DecompGraph& base, const Cover& c) {
  const auto& g = c.graph;
  ASSERT_EQ(c.map.end.size(), g.ends().size());
  for (std::size_t d = 0; d < g.ends().size(); ++d) {
    const std::size_t b = c.map.end[d];
    EXPECT_EQ(base.ends()[b].vertex, c.map.vertex[g.ends()[d].vertex]);
    EXPECT_EQ(base.ends()[b].edge, c.map.edge[g.ends()[d].edge]);
    // Opposite ends map to opposite ends.
    EXPECT_EQ(c.map.end[g.opposite(d)], base.opposite(b));
  }
  EXPECT_TRUE(g.is_entire());
}

}  // namespace

TEST(DecompGraph, EndsAndValence) {
  const DecompGraph g({{}, {}}, {entire(0, 1), semi_edge(1), entire(0, 0)});
  EXPECT_EQ(g.ends().size(), 5u);
  EXPECT_EQ(g.valence(0), 3u);
  EXPECT_EQ(g.valence(1), 2u);
  for (std::size_t d = 0; d < g.ends().size(); ++d) EXPECT_EQ(g.opposite(g.opposite(d)), d);
  const std::size_t s = g.end_id(1, 0);
  EXPECT_EQ(g.opposite(s), s);
  EXPECT_TRUE(g.is_loop(2));
  EXPECT_FALSE(g.is_loop(1));
  EXPECT_FALSE(g.is_entire());
}

TEST(DecompGraph, RejectsBadEndpoints) {
  EXPECT_THROW(DecompGraph({{}}, {Edge{Kind::semi, {0, 0}}}), ValidationError);
  EXPECT_THROW(DecompGraph({{}}, {Edge{Kind::entire, {0}}}), ValidationError);
  try {
    DecompGraph({{}}, {entire(0, 3)});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "edges[0].endpoints");
  }
}

TEST(DecompGraph, ComponentsByLowestVertex) {
  const DecompGraph g({{}, {}, {}, {}}, {entire(2, 3), entire(0, 2)});
  EXPECT_EQ(g.component_labels(), (std::vector<std::size_t>{0, 1, 0, 0}));
  EXPECT_EQ(g.component_count(), 2u);
}

TEST(EntireCover, SemiEdgeUnfolds) {
  const DecompGraph g({{}}, {semi_edge(0)});
  const Cover c = restrict_to_component(entire_double_cover(g), 0);
  EXPECT_EQ(c.graph.vertices().size(), 2u);
  ASSERT_EQ(c.graph.edges().size(), 1u);
  EXPECT_EQ(parallel_edges(c.graph, 0, 1), 1u);
  check_covering_map(g, c);
}

TEST(EntireCover, EntireGraphGivesTwoCopies) {
  const DecompGraph g({{}, {}}, {entire(0, 1)});
  const Cover c = entire_double_cover(g);
  EXPECT_EQ(c.graph.vertices().size(), 4u);
  EXPECT_EQ(c.graph.edges().size(), 2u);
  EXPECT_EQ(c.graph.component_count(), 2u);
  check_covering_map(g, c);
}

TEST(EntireCover, OrbigraphCounts) {
  const DecompGraph g = orbigraph();
  const Cover c = entire_double_cover(g);
  // Six entire vertices doubled, the semi-vertex lifts once; sixteen lifts
  // of entire edges plus one lift of the semi-edge.
  EXPECT_EQ(c.graph.vertices().size(), 13u);
  EXPECT_EQ(c.graph.edges().size(), 17u);
  EXPECT_EQ(c.graph.ends().size(), 34u);
  EXPECT_EQ(c.graph.component_count(), 1u);
  // The lifted semi-vertex keeps both copies of each of its ends.
  std::size_t lifted = c.graph.vertices().size();
  for (std::size_t v = 0; v < c.graph.vertices().size(); ++v)
    if (c.map.vertex[v] == 6) lifted = v;
  ASSERT_LT(lifted, c.graph.vertices().size());
  EXPECT_EQ(c.graph.valence(lifted), 4u);
  check_covering_map(g, c);
}

TEST(EntireCover, RandomGraphsAreEntireCovers) {
  props::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform(1, 4));
    std::vector<Vertex> vs(n);
    for (auto& v : vs) v.kind = gen.uniform(0, 3) == 0 ? Kind::semi : Kind::entire;
    std::vector<Edge> es;
    for (int i = 0; i < gen.uniform(1, 5); ++i) {
      const auto a = static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(n) - 1));
      const auto b = static_cast<std::size_t>(gen.uniform(0, static_cast<std::int64_t>(n) - 1));
      es.push_back(gen.coin() ? semi_edge(a) : entire(a, b));
    }
    const DecompGraph g(vs, es);
    const Cover c = entire_double_cover(g);
    check_covering_map(g, c);
    std::size_t semis = 0, semi_edges = 0;
    for (const auto& v : g.vertices()) semis += v.kind == Kind::semi;
    for (const auto& e : g.edges()) semi_edges += e.kind == Kind::semi;
    EXPECT_EQ(c.graph.vertices().size(), 2 * n - semis);
    EXPECT_EQ(c.graph.edges().size(), 2 * (g.edges().size() - semi_edges) + semi_edges);
    EXPECT_EQ(c.graph.ends().size(), 2 * g.ends().size());
    for (std::size_t k = 0; k < c.graph.component_count(); ++k) check_covering_map(g, restrict_to_component(c, k));
  }
}

TEST(LooplessCover, OneLoop) {
  const DecompGraph g({{}}, {entire(0, 0)});
  const Cover c = loopless_double_cover(g);
  EXPECT_EQ(c.graph.vertices().size(), 2u);
  EXPECT_EQ(parallel_edges(c.graph, 0, 1), 2u);
  EXPECT_FALSE(c.graph.has_loops());
  check_covering_map(g, c);
}

TEST(LooplessCover, TwoLoops) {
  const DecompGraph g({{}}, {entire(0, 0), entire(0, 0)});
  const Cover c = loopless_double_cover(g);
  EXPECT_EQ(c.graph.vertices().size(), 2u);
  EXPECT_EQ(parallel_edges(c.graph, 0, 1), 4u);
  check_covering_map(g, c);
}

TEST(LooplessCover, LooplessGivesTwoCopies) {
  const DecompGraph g({{}, {}, {}}, {entire(0, 1), entire(1, 2)});
  const Cover c = loopless_double_cover(g);
  EXPECT_EQ(c.graph.component_count(), 2u);
  EXPECT_EQ(c.graph.vertices().size(), 6u);
  const Cover first = restrict_to_component(c, 0);
  EXPECT_EQ(first.graph.vertices().size(), 3u);
  EXPECT_EQ(first.graph.edges().size(), 2u);
}

TEST(LooplessCover, RejectsSemiObjects) {
  EXPECT_THROW(loopless_double_cover(DecompGraph({{}}, {semi_edge(0)})), PreconditionError);
}

TEST(Covers, CompositeIndexAtMostFour) {
  // Unfolding semi-objects then loops: each stage doubles ends.
  const DecompGraph g = orbigraph();
  const Cover a = restrict_to_component(entire_double_cover(g), 0);
  const Cover b = restrict_to_component(loopless_double_cover(a.graph), 0);
  EXPECT_FALSE(b.graph.has_loops());
  EXPECT_TRUE(b.graph.is_entire());
  EXPECT_LE(b.graph.ends().size(), 4 * g.ends().size());
}
