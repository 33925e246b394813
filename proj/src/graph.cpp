#include "bhk/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>

namespace bhk {

bool is_valid_user_id(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == '@' || c == '/' || c == kBarSuffix || c == '#' ||
           static_cast<unsigned char>(c) <= ' ';
  });
}

std::string bar_id(const std::string& directed_id) {
  if (!directed_id.empty() && directed_id.back() == kBarSuffix) {
    return directed_id.substr(0, directed_id.size() - 1);
  }
  return directed_id + kBarSuffix;
}

std::string geometric_id(const std::string& directed_id) {
  if (!directed_id.empty() && directed_id.back() == kBarSuffix) {
    return directed_id.substr(0, directed_id.size() - 1);
  }
  return directed_id;
}

// ---------------------------------------------------------------------------
// Multigraph

void Multigraph::add_vertex(const std::string& v) {
  if (v.empty()) throw GraphError("empty vertex id");
  vertices_.insert(v);
}

void Multigraph::add_edge(const std::string& id, const std::string& u,
                          const std::string& v) {
  if (!has_vertex(u) || !has_vertex(v)) {
    throw GraphError("edge '" + id + "' references an unknown vertex");
  }
  if (edges_.count(id)) throw GraphError("duplicate edge id '" + id + "'");
  edges_.emplace(id, GeoEdge{id, u, v});
  incidence_[u].push_back(id);
  if (u != v) incidence_[v].push_back(id);
}

const GeoEdge* Multigraph::find_edge(const std::string& id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<const GeoEdge*> Multigraph::incident(const std::string& v) const {
  std::vector<const GeoEdge*> out;
  auto it = incidence_.find(v);
  if (it == incidence_.end()) return out;
  for (const auto& id : it->second) out.push_back(&edges_.at(id));
  std::sort(out.begin(), out.end(),
            [](const GeoEdge* a, const GeoEdge* b) { return a->id < b->id; });
  return out;
}

std::size_t Multigraph::component_count() const {
  VertexSet seen;
  std::size_t components = 0;
  for (const auto& start : vertices_) {
    if (seen.count(start)) continue;
    ++components;
    std::deque<std::string> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      const std::string v = queue.front();
      queue.pop_front();
      for (const GeoEdge* e : incident(v)) {
        const std::string& w = e->other(v);
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
  }
  return components;
}

std::size_t betti_finite(const Multigraph& g) {
  return g.edge_count() + g.component_count() - g.vertex_count();
}

Multigraph contract(const Multigraph& g, const std::string& edge_id) {
  const GeoEdge* e = g.find_edge(edge_id);
  if (!e) throw GraphError("unknown edge '" + edge_id + "'");
  if (e->is_loop()) throw GraphError("cannot contract loop '" + edge_id + "'");
  const std::string keep = e->u;
  const std::string gone = e->v;
  auto remap = [&](const std::string& x) { return x == gone ? keep : x; };

  Multigraph out;
  for (const auto& v : g.vertices())
    if (v != gone) out.add_vertex(v);
  for (const auto& [id, edge] : g.edges()) {
    if (id == edge_id) continue;
    out.add_edge(id, remap(edge.u), remap(edge.v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DoubleGraph

DoubleGraph::DoubleGraph(VertexSet vertices, std::vector<DirectedEdge> edges)
    : vertices_(std::move(vertices)) {
  for (auto& e : edges) {
    if (!vertices_.count(e.source) || !vertices_.count(e.range)) {
      throw GraphError("directed edge '" + e.id + "' has an unknown endpoint");
    }
    if (!edges_.emplace(e.id, e).second) {
      throw GraphError("duplicate directed edge '" + e.id + "'");
    }
  }
  for (const auto& [id, e] : edges_) {
    auto it = edges_.find(e.bar);
    if (e.bar == id || it == edges_.end()) {
      throw GraphError("edge '" + id + "' has no valid bar partner");
    }
    const DirectedEdge& b = it->second;
    if (b.bar != id || b.source != e.range || b.range != e.source) {
      throw GraphError("bar of '" + id + "' is not its reverse");
    }
  }
}

const DirectedEdge& DoubleGraph::edge(const std::string& id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw GraphError("unknown directed edge '" + id + "'");
  return it->second;
}

std::vector<std::string> DoubleGraph::edge_order() const {
  std::vector<std::string> order;
  order.reserve(edges_.size());
  for (const auto& [id, e] : edges_) order.push_back(id);
  return order;
}

std::vector<const DirectedEdge*> DoubleGraph::out_edges(
    const std::string& v) const {
  std::vector<const DirectedEdge*> out;
  for (const auto& [id, e] : edges_)
    if (e.source == v) out.push_back(&e);
  return out;
}

namespace {

void push_pair(std::vector<DirectedEdge>& out, const GeoEdge& e) {
  out.push_back({e.id, e.u, e.v, bar_id(e.id)});
  out.push_back({bar_id(e.id), e.v, e.u, e.id});
}

}  // namespace

DoubleGraph make_double(const Multigraph& g) {
  std::vector<DirectedEdge> edges;
  edges.reserve(2 * g.edge_count());
  for (const auto& [id, e] : g.edges()) push_pair(edges, e);
  return DoubleGraph(g.vertices(), std::move(edges));
}

DoubleGraph contract_edge(const DoubleGraph& d, const std::string& edge_id) {
  const DirectedEdge& e = d.edge(edge_id);
  if (e.source == e.range) {
    throw GraphError("cannot contract loop '" + edge_id + "'");
  }
  const std::string keep = e.source;
  const std::string gone = e.range;
  auto remap = [&](const std::string& x) { return x == gone ? keep : x; };

  VertexSet vertices = d.vertices();
  vertices.erase(gone);
  std::vector<DirectedEdge> edges;
  for (const auto& [id, x] : d.edges()) {
    if (id == e.id || id == e.bar) continue;
    edges.push_back({x.id, remap(x.source), remap(x.range), x.bar});
  }
  return DoubleGraph(std::move(vertices), std::move(edges));
}

// ---------------------------------------------------------------------------
// Presentations

void Presentation::validate() const {
  if (core.vertex_count() == 0) throw GraphError("core has no vertices");
  if (!core.is_connected()) throw GraphError("core graph is not connected");
  std::set<std::string> ids;
  for (const auto& r : rays) {
    if (!ids.insert(r.id).second) {
      throw GraphError("duplicate attachment id '" + r.id + "'");
    }
    if (!core.has_vertex(r.vertex)) {
      throw GraphError("ray '" + r.id + "' attached at unknown vertex '" +
                       r.vertex + "'");
    }
  }
  for (const auto& t : trees) {
    if (!ids.insert(t.id).second) {
      throw GraphError("duplicate attachment id '" + t.id + "'");
    }
    if (!core.has_vertex(t.vertex)) {
      throw GraphError("tree '" + t.id + "' attached at unknown vertex '" +
                       t.vertex + "'");
    }
    if (t.branching < 2) {
      throw GraphError("tree '" + t.id + "' needs branching >= 2");
    }
  }
}

Presentation finite_presentation(Multigraph g) {
  Presentation p;
  p.core = std::move(g);
  return p;
}

Presentation contract_core_edge(const Presentation& p,
                                const std::string& edge_id) {
  const GeoEdge* e = p.core.find_edge(edge_id);
  if (!e) throw GraphError("unknown core edge '" + edge_id + "'");
  Presentation q = p;
  q.core = contract(p.core, edge_id);
  for (auto& r : q.rays)
    if (r.vertex == e->v) r.vertex = e->u;
  for (auto& t : q.trees)
    if (t.vertex == e->v) t.vertex = e->u;
  return q;
}

FreeRank branching_number(const Presentation& p) {
  if (!p.trees.empty()) return FreeRank::omega();
  return FreeRank(p.rays.size());
}

// ---------------------------------------------------------------------------
// AmbientGraph

AmbientGraph::AmbientGraph(Presentation p) : p_(std::move(p)) {
  p_.validate();
  for (std::size_t i = 0; i < p_.rays.size(); ++i) ray_index_[p_.rays[i].id] = i;
  for (std::size_t i = 0; i < p_.trees.size(); ++i)
    tree_index_[p_.trees[i].id] = i;
}

namespace {

std::optional<unsigned> parse_uint(std::string_view s) {
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string join_path(const std::vector<unsigned>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

}  // namespace

std::optional<AmbientGraph::Generated> AmbientGraph::parse_generated(
    const std::string& v) const {
  const auto at = v.find('@');
  if (at == std::string::npos) return std::nullopt;
  const std::string id = v.substr(0, at);
  const std::string_view rest = std::string_view(v).substr(at + 1);
  if (auto it = ray_index_.find(id); it != ray_index_.end()) {
    auto k = parse_uint(rest);
    if (!k || *k == 0) return std::nullopt;
    return Generated{Generated::Kind::ray, it->second, {*k}};
  }
  if (auto it = tree_index_.find(id); it != tree_index_.end()) {
    const unsigned b = p_.trees[it->second].branching;
    Generated g{Generated::Kind::tree, it->second, {}};
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto dot = rest.find('.', start);
      if (dot == std::string_view::npos) dot = rest.size();
      auto idx = parse_uint(rest.substr(start, dot - start));
      if (!idx || *idx == 0 || *idx > b) return std::nullopt;
      g.path.push_back(*idx);
      start = dot + 1;
    }
    return g;
  }
  return std::nullopt;
}

std::string AmbientGraph::vertex_name(const Generated& g) const {
  if (g.kind == Generated::Kind::ray) {
    return p_.rays[g.index].id + "@" + std::to_string(g.path.front());
  }
  return p_.trees[g.index].id + "@" + join_path(g.path);
}

std::string AmbientGraph::edge_name(const Generated& g) const {
  if (g.kind == Generated::Kind::ray) {
    return p_.rays[g.index].id + "/" + std::to_string(g.path.front());
  }
  return p_.trees[g.index].id + "/" + join_path(g.path);
}

std::string AmbientGraph::parent_of(const Generated& g) const {
  if (g.kind == Generated::Kind::ray) {
    const unsigned k = g.path.front();
    if (k == 1) return p_.rays[g.index].vertex;
    return vertex_name({g.kind, g.index, {k - 1}});
  }
  if (g.path.size() == 1) return p_.trees[g.index].vertex;
  Generated parent = g;
  parent.path.pop_back();
  return vertex_name(parent);
}

bool AmbientGraph::has_vertex(const std::string& v) const {
  return p_.core.has_vertex(v) || parse_generated(v).has_value();
}

std::optional<GeoEdge> AmbientGraph::find_edge(const std::string& geo_id) const {
  if (const GeoEdge* e = p_.core.find_edge(geo_id)) return *e;
  const auto slash = geo_id.find('/');
  if (slash == std::string::npos) return std::nullopt;
  auto g = parse_generated(geo_id.substr(0, slash) + "@" +
                           geo_id.substr(slash + 1));
  if (!g) return std::nullopt;
  return GeoEdge{edge_name(*g), parent_of(*g), vertex_name(*g)};
}

std::vector<GeoEdge> AmbientGraph::incident(const std::string& v) const {
  std::vector<GeoEdge> out;
  auto push_child = [&](const Generated& child) {
    out.push_back({edge_name(child), v, vertex_name(child)});
  };
  if (p_.core.has_vertex(v)) {
    for (const GeoEdge* e : p_.core.incident(v)) out.push_back(*e);
    for (const auto& r : p_.rays)
      if (r.vertex == v)
        push_child({Generated::Kind::ray, ray_index_.at(r.id), {1}});
    for (const auto& t : p_.trees)
      if (t.vertex == v)
        for (unsigned i = 1; i <= t.branching; ++i)
          push_child({Generated::Kind::tree, tree_index_.at(t.id), {i}});
  } else if (auto g = parse_generated(v)) {
    out.push_back({edge_name(*g), parent_of(*g), v});
    if (g->kind == Generated::Kind::ray) {
      push_child({g->kind, g->index, {g->path.front() + 1}});
    } else {
      for (unsigned i = 1; i <= p_.trees[g->index].branching; ++i) {
        Generated child = *g;
        child.path.push_back(i);
        push_child(child);
      }
    }
  } else {
    throw GraphError("unknown vertex '" + v + "'");
  }
  return out;
}

std::vector<DirectedEdge> AmbientGraph::out_edges(const std::string& v) const {
  std::vector<DirectedEdge> out;
  for (const GeoEdge& e : incident(v)) {
    if (e.u == v) out.push_back({e.id, e.u, e.v, bar_id(e.id)});
    if (e.v == v) out.push_back({bar_id(e.id), e.v, e.u, e.id});
  }
  std::sort(out.begin(), out.end(),
            [](const DirectedEdge& a, const DirectedEdge& b) { return a.id < b.id; });
  return out;
}

std::optional<DirectedEdge> AmbientGraph::find_directed(
    const std::string& id) const {
  const std::string geo = geometric_id(id);
  auto e = find_edge(geo);
  if (!e) return std::nullopt;
  if (id == geo) return DirectedEdge{id, e->u, e->v, bar_id(id)};
  return DirectedEdge{id, e->v, e->u, geo};
}

Multigraph AmbientGraph::truncation(std::size_t depth) const {
  Multigraph g = p_.core;
  for (std::size_t i = 0; i < p_.rays.size(); ++i) {
    for (unsigned k = 1; k <= depth; ++k) {
      Generated x{Generated::Kind::ray, i, {k}};
      g.add_vertex(vertex_name(x));
      g.add_edge(edge_name(x), parent_of(x), vertex_name(x));
    }
  }
  for (std::size_t i = 0; i < p_.trees.size(); ++i) {
    const unsigned b = p_.trees[i].branching;
    std::vector<Generated> level{{Generated::Kind::tree, i, {}}};
    for (std::size_t d = 1; d <= depth; ++d) {
      std::vector<Generated> next;
      for (const auto& parent : level) {
        for (unsigned c = 1; c <= b; ++c) {
          Generated x = parent;
          x.path.push_back(c);
          g.add_vertex(vertex_name(x));
          g.add_edge(edge_name(x), parent_of(x), vertex_name(x));
          next.push_back(std::move(x));
        }
      }
      level = std::move(next);
    }
  }
  return g;
}

std::size_t AmbientGraph::level(const std::string& v) const {
  if (p_.core.has_vertex(v)) return 0;
  auto g = parse_generated(v);
  if (!g) throw GraphError("unknown vertex '" + v + "'");
  return g->kind == Generated::Kind::ray ? g->path.front() : g->path.size();
}

// ---------------------------------------------------------------------------
// Exhaustion

Multigraph induced_subgraph(const AmbientGraph& amb, const VertexSet& vertices) {
  Multigraph g;
  for (const auto& v : vertices) {
    if (!amb.has_vertex(v)) throw GraphError("unknown vertex '" + v + "'");
    g.add_vertex(v);
  }
  for (const auto& v : vertices)
    for (const GeoEdge& e : amb.incident(v))
      if (vertices.count(e.u) && vertices.count(e.v) && !g.find_edge(e.id))
        g.add_edge(e.id, e.u, e.v);
  return g;
}

namespace {

void require_subgraph(const AmbientGraph& amb, const Multigraph& sub) {
  for (const auto& v : sub.vertices())
    if (!amb.has_vertex(v))
      throw GraphError("not a subgraph: unknown vertex '" + v + "'");
  for (const auto& [id, e] : sub.edges()) {
    auto ambient = amb.find_edge(id);
    const bool same = ambient && ((ambient->u == e.u && ambient->v == e.v) ||
                                  (ambient->u == e.v && ambient->v == e.u));
    if (!same) throw GraphError("not a subgraph: edge '" + id + "'");
  }
}

}  // namespace

Multigraph exhaustion_next(const AmbientGraph& amb, const Multigraph& sub) {
  require_subgraph(amb, sub);
  Multigraph next = sub;
  for (const auto& v : sub.vertices()) {
    for (const GeoEdge& e : amb.incident(v)) {
      if (next.find_edge(e.id)) continue;
      next.add_vertex(e.u);
      next.add_vertex(e.v);
      next.add_edge(e.id, e.u, e.v);
    }
  }
  return next;
}

BettiLimit betti_limit(const AmbientGraph& amb, const Multigraph& seed,
                       std::size_t max_steps) {
  require_subgraph(amb, seed);
  if (!seed.is_connected()) throw GraphError("seed subgraph is not connected");
  const Multigraph& core = amb.presentation().core;
  auto holds_core = [&](const Multigraph& g) {
    return std::all_of(core.edges().begin(), core.edges().end(),
                       [&](const auto& kv) { return g.find_edge(kv.first); }) &&
           std::all_of(core.vertices().begin(), core.vertices().end(),
                       [&](const std::string& v) { return g.has_vertex(v); });
  };

  BettiLimit result;
  Multigraph stage = seed;
  for (std::size_t step = 0;; ++step) {
    result.sequence.push_back(betti_finite(stage));
    if (holds_core(stage)) {
      result.stabilized = true;
      result.value = result.sequence.back();
      result.at_step = step;
      return result;
    }
    if (step == max_steps) return result;
    stage = exhaustion_next(amb, stage);
  }
}

// ---------------------------------------------------------------------------
// Black-and-white fragments

std::vector<std::string> BwDoubleGraph::edge_order() const {
  std::vector<std::string> order;
  order.reserve(edges.size());
  for (const auto& [id, e] : edges) order.push_back(id);
  return order;
}

std::size_t BwDoubleGraph::black_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const auto& kv) {
        return kv.second.color == Color::black;
      }));
}

BwDoubleGraph bw_subgraph(const AmbientGraph& amb, const VertexSet& omega) {
  BwDoubleGraph b;
  b.omega = omega;
  for (const auto& v : omega) {
    if (!amb.has_vertex(v)) throw GraphError("unknown vertex '" + v + "'");
    for (const DirectedEdge& e : amb.out_edges(v)) {
      const bool black = omega.count(e.source) && omega.count(e.range);
      const Color c = black ? Color::black : Color::white;
      b.edges.emplace(e.id, BwEdge{e, c});
      b.edges.emplace(e.bar, BwEdge{{e.bar, e.range, e.source, e.id}, c});
    }
  }
  return b;
}

BwDoubleGraph bw_extend(const AmbientGraph& amb, const BwDoubleGraph& b) {
  VertexSet omega = b.omega;
  for (const auto& [id, e] : b.edges) {
    if (e.color != Color::white) continue;
    omega.insert(e.edge.source);
    omega.insert(e.edge.range);
  }
  return bw_subgraph(amb, omega);
}

}  // namespace bhk
