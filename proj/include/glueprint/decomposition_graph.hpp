#pragma once

// Graphs with semi-edges and semi-vertices, their ends, and the two double
// covers that remove semi-objects and loops.

#include <cstddef>
#include <vector>

namespace glueprint::graph {

enum class Kind { entire, semi };

struct Vertex {
  Kind kind = Kind::entire;
};

struct Edge {
  Kind kind = Kind::entire;
  std::vector<std::size_t> endpoints;  // one vertex for a semi-edge, two otherwise
};

/// End of an edge: `slot` is 0 or 1 (always 0 for a semi-edge).
struct End {
  std::size_t edge = 0;
  std::size_t slot = 0;
  std::size_t vertex = 0;
};

class DecompGraph {
 public:
  DecompGraph() = default;

  /// Throws ValidationError naming the offending "edges[i]" entry.
  DecompGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<End>& ends() const { return ends_; }

  std::size_t end_id(std::size_t edge, std::size_t slot) const;
  /// Identity exactly on semi-edge ends.
  std::size_t opposite(std::size_t end) const;
  /// Ends at v in increasing id order.
  const std::vector<std::size_t>& ends_at(std::size_t v) const { return ends_at_[v]; }
  std::size_t valence(std::size_t v) const { return ends_at_[v].size(); }

  bool is_entire() const;
  bool has_loops() const;
  bool is_loop(std::size_t edge) const;

  /// Component label per vertex; components are numbered by lowest vertex id.
  std::vector<std::size_t> component_labels() const;
  std::size_t component_count() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<End> ends_;
  std::vector<std::size_t> first_end_;
  std::vector<std::vector<std::size_t>> ends_at_;
};

/// Cover-to-base correspondence. `end_copy` tells which of the two lifted
/// copies of the base end's torus a cover end uses.
struct CoveringMap {
  std::vector<std::size_t> vertex;
  std::vector<std::size_t> edge;
  std::vector<std::size_t> end;
  std::vector<std::size_t> vertex_copy;
  std::vector<std::size_t> end_copy;
};

struct Cover {
  DecompGraph graph;
  CoveringMap map;
};

/// Two copies cut along semi-objects and cross-glued. A semi-vertex lifts to
/// a single vertex (its piece is replaced by the fiber-centralizer double
/// cover); a semi-edge lifts to one entire edge joining the two copies of its
/// end. Copy-0 vertices come first. Already-entire graphs give two disjoint
/// copies.
Cover entire_double_cover(const DecompGraph& g);

/// Two copies of an entire graph with every loop cut and cross-glued.
/// Throws PreconditionError on semi-objects.
Cover loopless_double_cover(const DecompGraph& g);

/// Restriction of a cover to one connected component, relabeled in
/// increasing vertex and edge order.
Cover restrict_to_component(const Cover& cover, std::size_t component);

}  // namespace glueprint::graph
