#include "glueprint/decomposition_graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "glueprint/errors.hpp"

namespace glueprint::graph {

DecompGraph::DecompGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  ends_at_.assign(vertices_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const std::string path = "edges[" + std::to_string(e) + "]";
    const std::size_t want = edge.kind == Kind::semi ? 1 : 2;
    if (edge.endpoints.size() != want)
      throw ValidationError(path + ".endpoints", std::string(edge.kind == Kind::semi ? "a semi-edge" : "an entire edge") +
                                                     " needs exactly " + std::to_string(want) + " endpoint(s)");
    first_end_.push_back(ends_.size());
    for (std::size_t slot = 0; slot < want; ++slot) {
      const std::size_t v = edge.endpoints[slot];
      if (v >= vertices_.size()) throw ValidationError(path + ".endpoints", "unknown vertex " + std::to_string(v));
      ends_at_[v].push_back(ends_.size());
      ends_.push_back({e, slot, v});
    }
  }
}

std::size_t DecompGraph::end_id(std::size_t edge, std::size_t slot) const {
  if (edge >= edges_.size()) throw DimensionError("edge id out of range");
  const std::size_t n = edges_[edge].kind == Kind::semi ? 1 : 2;
  if (slot >= n) throw DimensionError("end slot out of range");
  return first_end_[edge] + slot;
}

std::size_t DecompGraph::opposite(std::size_t end) const {
  const End& d = ends_.at(end);
  if (edges_[d.edge].kind == Kind::semi) return end;
  return first_end_[d.edge] + (1 - d.slot);
}

bool DecompGraph::is_entire() const {
  for (const auto& v : vertices_)
    if (v.kind == Kind::semi) return false;
  for (const auto& e : edges_)
    if (e.kind == Kind::semi) return false;
  return true;
}

bool DecompGraph::is_loop(std::size_t edge) const {
  const Edge& e = edges_.at(edge);
  return e.kind == Kind::entire && e.endpoints[0] == e.endpoints[1];
}

bool DecompGraph::has_loops() const {
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (is_loop(e)) return true;
  return false;
}

std::vector<std::size_t> DecompGraph::component_labels() const {
  std::vector<std::size_t> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_)
    if (e.endpoints.size() == 2) {
      const std::size_t a = find(e.endpoints[0]), b = find(e.endpoints[1]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::size_t> label(vertices_.size());
  std::vector<std::size_t> root_label(vertices_.size(), vertices_.size());
  std::size_t next = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const std::size_t r = find(v);
    if (root_label[r] == vertices_.size()) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

std::size_t DecompGraph::component_count() const {
  std::size_t count = 0;
  for (auto l : component_labels()) count = std::max(count, l + 1);
  return count;
}

namespace {

// Fills the end-level map once the cover's edges are known; `edge_end` gives
// the base end and copy for each (cover edge, slot).
void fill_end_map(Cover& c, const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& edge_end) {
  c.map.end.assign(c.graph.ends().size(), 0);
  c.map.end_copy.assign(c.graph.ends().size(), 0);
  for (std::size_t id = 0; id < c.graph.ends().size(); ++id) {
    const End& d = c.graph.ends()[id];
    c.map.end[id] = edge_end[d.edge][d.slot].first;
    c.map.end_copy[id] = edge_end[d.edge][d.slot].second;
  }
}

}  // namespace

Cover entire_double_cover(const DecompGraph& g) {
  Cover c;
  const std::size_t n = g.vertices().size();
  constexpr std::size_t unlifted = static_cast<std::size_t>(-1);
  std::vector<std::size_t> lift1(n, unlifted);
  std::vector<Vertex> verts(n);
  c.map.vertex.resize(n);
  std::iota(c.map.vertex.begin(), c.map.vertex.end(), 0);
  c.map.vertex_copy.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (g.vertices()[v].kind == Kind::entire) {
      lift1[v] = verts.size();
      verts.push_back({});
      c.map.vertex.push_back(v);
      c.map.vertex_copy.push_back(1);
    }
  auto lift = [&](std::size_t v, std::size_t copy) { return copy == 0 || lift1[v] == unlifted ? v : lift1[v]; };

  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edge_end;
  for (std::size_t copy = 0; copy < 2; ++copy)
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const Edge& be = g.edges()[e];
      if (be.kind == Kind::semi) continue;
      edges.push_back({Kind::entire, {lift(be.endpoints[0], copy), lift(be.endpoints[1], copy)}});
      edge_end.push_back({{g.end_id(e, 0), copy}, {g.end_id(e, 1), copy}});
      c.map.edge.push_back(e);
    }
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& be = g.edges()[e];
    if (be.kind != Kind::semi) continue;
    const std::size_t v = be.endpoints[0];
    edges.push_back({Kind::entire, {lift(v, 0), lift(v, 1)}});
    edge_end.push_back({{g.end_id(e, 0), 0}, {g.end_id(e, 0), 1}});
    c.map.edge.push_back(e);
  }
  c.graph = DecompGraph(std::move(verts), std::move(edges));
  fill_end_map(c, edge_end);
  return c;
}

Cover loopless_double_cover(const DecompGraph& g) {
  if (!g.is_entire()) throw PreconditionError("loopless double cover needs an entire graph");
  Cover c;
  const std::size_t n = g.vertices().size();
  std::vector<Vertex> verts(2 * n);
  for (std::size_t copy = 0; copy < 2; ++copy)
    for (std::size_t v = 0; v < n; ++v) {
      c.map.vertex.push_back(v);
      c.map.vertex_copy.push_back(copy);
    }
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edge_end;
  for (std::size_t copy = 0; copy < 2; ++copy)
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const Edge& be = g.edges()[e];
      // A loop is cut open: slot 1 of the lift lands in the other copy.
      const std::size_t other = g.is_loop(e) ? 1 - copy : copy;
      edges.push_back({Kind::entire, {be.endpoints[0] + copy * n, be.endpoints[1] + other * n}});
      edge_end.push_back({{g.end_id(e, 0), copy}, {g.end_id(e, 1), other}});
      c.map.edge.push_back(e);
    }
  c.graph = DecompGraph(std::move(verts), std::move(edges));
  fill_end_map(c, edge_end);
  return c;
}

Cover restrict_to_component(const Cover& cover, std::size_t component) {
  const auto labels = cover.graph.component_labels();
  if (component >= cover.graph.component_count())
    throw ValidationError("component", "no component " + std::to_string(component));
  const std::size_t none = cover.graph.vertices().size();
  std::vector<std::size_t> renumber(cover.graph.vertices().size(), none);
  Cover out;
  std::vector<Vertex> verts;
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (labels[v] == component) {
      renumber[v] = verts.size();
      verts.push_back(cover.graph.vertices()[v]);
      out.map.vertex.push_back(cover.map.vertex[v]);
      out.map.vertex_copy.push_back(cover.map.vertex_copy[v]);
    }
  std::vector<Edge> edges;
  std::vector<std::size_t> kept_edges;
  for (std::size_t e = 0; e < cover.graph.edges().size(); ++e) {
    const Edge& ce = cover.graph.edges()[e];
    if (renumber[ce.endpoints[0]] == none) continue;
    Edge ne = ce;
    for (auto& p : ne.endpoints) p = renumber[p];
    edges.push_back(std::move(ne));
    kept_edges.push_back(e);
    out.map.edge.push_back(cover.map.edge[e]);
  }
  out.graph = DecompGraph(std::move(verts), std::move(edges));
  for (std::size_t id = 0; id < out.graph.ends().size(); ++id) {
    const End& d = out.graph.ends()[id];
    const std::size_t old = cover.graph.end_id(kept_edges[d.edge], d.slot);
    out.map.end.push_back(cover.map.end[old]);
    out.map.end_copy.push_back(cover.map.end_copy[old]);
  }
  return out;
}

}  // namespace glueprint::graph
