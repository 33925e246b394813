#pragma once

// Undirected multigraphs, their doubles, finite presentations of locally
// finite infinite graphs, and black-and-white fragments.
//
// Naming: vertex and edge ids are opaque strings. The reverse of directed edge
// "x" is "x~". Generated vertices of attachments are "<id>@<k>" (rays) and
// "<id>@<i1>.<i2>..." (trees); the geometric edge leading to such a vertex is
// "<id>/<k>" resp. "<id>/<i1>.<i2>...", with k and every i counted from 1.
// User ids may not contain '@', '/', '~'.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhk/zlinalg.hpp"

namespace bhk {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using VertexSet = std::set<std::string>;

/// Suffix appended to an edge id to name its reverse.
inline constexpr char kBarSuffix = '~';

bool is_valid_user_id(const std::string& id);
std::string bar_id(const std::string& directed_id);
/// Geometric edge id underlying a directed edge id.
std::string geometric_id(const std::string& directed_id);

struct GeoEdge {
  std::string id;
  std::string u;
  std::string v;

  bool is_loop() const { return u == v; }
  const std::string& other(const std::string& w) const { return w == u ? v : u; }
  friend bool operator==(const GeoEdge&, const GeoEdge&) = default;
};

/// Finite undirected multigraph; loops and parallel edges allowed.
class Multigraph {
 public:
  void add_vertex(const std::string& v);
  void add_edge(const std::string& id, const std::string& u,
                const std::string& v);

  const VertexSet& vertices() const { return vertices_; }
  /// Edges ordered by id.
  const std::map<std::string, GeoEdge>& edges() const { return edges_; }

  bool has_vertex(const std::string& v) const { return vertices_.count(v) != 0; }
  const GeoEdge* find_edge(const std::string& id) const;
  std::vector<const GeoEdge*> incident(const std::string& v) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t component_count() const;
  bool is_connected() const { return component_count() == 1; }

  friend bool operator==(const Multigraph& a, const Multigraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  VertexSet vertices_;
  std::map<std::string, GeoEdge> edges_;
  std::map<std::string, std::vector<std::string>> incidence_;
};

/// d1 - d0 + (number of components); 0 for the empty graph.
std::size_t betti_finite(const Multigraph& g);

/// Contracts the non-loop geometric edge `edge_id`: the edge disappears and
/// its second endpoint is merged into the first.
Multigraph contract(const Multigraph& g, const std::string& edge_id);

struct DirectedEdge {
  std::string id;
  std::string source;
  std::string range;
  std::string bar;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Directed double of a multigraph: every geometric edge {u,v} becomes a pair
/// of opposite edges exchanged by the fixed-point-free involution `bar`.
class DoubleGraph {
 public:
  DoubleGraph() = default;
  /// Validates the double-graph invariants.
  DoubleGraph(VertexSet vertices, std::vector<DirectedEdge> edges);

  const VertexSet& vertices() const { return vertices_; }
  const std::map<std::string, DirectedEdge>& edges() const { return edges_; }
  const DirectedEdge& edge(const std::string& id) const;
  bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }

  /// Basis order of Z^(E^1): lexicographic by edge id.
  std::vector<std::string> edge_order() const;
  std::vector<const DirectedEdge*> out_edges(const std::string& v) const;

  friend bool operator==(const DoubleGraph&, const DoubleGraph&) = default;

 private:
  VertexSet vertices_;
  std::map<std::string, DirectedEdge> edges_;
};

DoubleGraph make_double(const Multigraph& g);

/// Contracts the non-loop directed edge `edge_id` together with its bar.
DoubleGraph contract_edge(const DoubleGraph& d, const std::string& edge_id);

// ---------------------------------------------------------------------------
// Infinite graphs in finite form.

struct RayAttachment {
  std::string id;
  std::string vertex;
  friend bool operator==(const RayAttachment&, const RayAttachment&) = default;
};

struct TreeAttachment {
  std::string id;
  std::string vertex;
  unsigned branching = 2;  // children per tree vertex, >= 2
  friend bool operator==(const TreeAttachment&, const TreeAttachment&) = default;
};

/// Finite connected core with infinite rays and uniformly branching trees
/// hanging off core vertices. The attachment vertex is the root of its tree.
struct Presentation {
  Multigraph core;
  std::vector<RayAttachment> rays;
  std::vector<TreeAttachment> trees;

  bool is_finite() const { return rays.empty() && trees.empty(); }
  /// Throws GraphError on a disconnected core, unknown attachment vertices,
  /// duplicate ids or branching < 2.
  void validate() const;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

Presentation finite_presentation(Multigraph g);

/// Contracts a non-loop core edge; attachments at the vanishing endpoint move
/// to the surviving one.
Presentation contract_core_edge(const Presentation& p, const std::string& edge_id);

/// Number of ends: the ray count, or omega if any tree is attached.
FreeRank branching_number(const Presentation& p);

/// Read-only view of the (possibly infinite) graph a presentation describes.
/// Neighbourhoods of generated vertices are produced on demand.
class AmbientGraph {
 public:
  explicit AmbientGraph(Presentation p);

  const Presentation& presentation() const { return p_; }
  bool has_vertex(const std::string& v) const;
  std::optional<GeoEdge> find_edge(const std::string& geo_id) const;
  std::vector<GeoEdge> incident(const std::string& v) const;
  /// Directed edges with source v, ordered by id.
  std::vector<DirectedEdge> out_edges(const std::string& v) const;
  std::optional<DirectedEdge> find_directed(const std::string& id) const;

  /// Core plus rays cut after `depth` edges and trees cut after `depth`
  /// levels (breadth-first). Depth 0 is the core alone.
  Multigraph truncation(std::size_t depth) const;

  /// Distance of a vertex from the core, 0 for core vertices.
  std::size_t level(const std::string& v) const;

 private:
  struct Generated {
    enum class Kind { ray, tree } kind;
    std::size_t index;            // into rays / trees
    std::vector<unsigned> path;   // ray: {k}; tree: child indices
  };
  std::optional<Generated> parse_generated(const std::string& v) const;
  std::string vertex_name(const Generated& g) const;
  std::string edge_name(const Generated& g) const;
  std::string parent_of(const Generated& g) const;

  Presentation p_;
  std::map<std::string, std::size_t> ray_index_;
  std::map<std::string, std::size_t> tree_index_;
};

/// Induced subgraph of the ambient graph on a finite vertex set.
Multigraph induced_subgraph(const AmbientGraph& amb, const VertexSet& vertices);

/// Adds every ambient edge incident to a vertex of `sub`, with endpoints.
Multigraph exhaustion_next(const AmbientGraph& amb, const Multigraph& sub);

struct BettiLimit {
  bool stabilized = false;
  std::size_t value = 0;
  std::size_t at_step = 0;
  std::vector<std::size_t> sequence;  // Betti number of each exhaustion stage
};

/// First Betti number by exhaustion from a connected seed. Stability is
/// certified once the stage holds the whole core: every later edge is a tree
/// edge leading to a new vertex.
BettiLimit betti_limit(const AmbientGraph& amb, const Multigraph& seed,
                       std::size_t max_steps);

enum class Color { black, white };

struct BwEdge {
  DirectedEdge edge;
  Color color;
  friend bool operator==(const BwEdge&, const BwEdge&) = default;
};

/// Finite black-and-white fragment around a vertex set omega: every edge with
/// an endpoint in omega, black when both endpoints are in omega.
struct BwDoubleGraph {
  VertexSet omega;
  std::map<std::string, BwEdge> edges;

  std::vector<std::string> edge_order() const;
  std::size_t black_count() const;
  friend bool operator==(const BwDoubleGraph&, const BwDoubleGraph&) = default;
};

BwDoubleGraph bw_subgraph(const AmbientGraph& amb, const VertexSet& omega);

/// Elementary morphism: omega grows by the far ends of the white edges.
BwDoubleGraph bw_extend(const AmbientGraph& amb, const BwDoubleGraph& b);

}  // namespace bhk
