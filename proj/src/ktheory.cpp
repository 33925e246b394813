#include "bhk/ktheory.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace bhk {

namespace {

using IndexMap = std::unordered_map<std::string, std::size_t>;

IndexMap index_of(const std::vector<std::string>& order) {
  IndexMap idx;
  for (std::size_t i = 0; i < order.size(); ++i) idx.emplace(order[i], i);
  return idx;
}

std::map<std::string, std::vector<const DirectedEdge*>> out_table(
    const DoubleGraph& d) {
  std::map<std::string, std::vector<const DirectedEdge*>> out;
  for (const auto& [id, e] : d.edges()) out[e.source].push_back(&e);
  return out;
}

void require_edges(const DoubleGraph& d) {
  if (d.edges().empty()) throw GraphError("empty edge set");
}

KGroups k_groups_of(const DoubleGraph& d) {
  KGroups k;
  k.edge_order = d.edge_order();
  const IntMatrix t = identity_minus_phi(d);
  k.k0 = cokernel(t);
  k.k1_basis = kernel_basis(t);
  k.k1 = AbelianGroup::free(k.k1_basis.size());
  return k;
}

}  // namespace

PhiMatrix phi_matrix(const DoubleGraph& d) {
  require_edges(d);
  PhiMatrix phi{d.edge_order(), IntMatrix(d.edges().size(), d.edges().size())};
  const IndexMap idx = index_of(phi.edge_order);
  const auto out = out_table(d);
  // e -> -bar(e) + sum of e' with s(e') = r(e)
  for (const auto& [id, e] : d.edges()) {
    const std::size_t col = idx.at(id);
    phi.m(idx.at(e.bar), col) -= 1;
    if (auto it = out.find(e.range); it != out.end())
      for (const DirectedEdge* next : it->second) phi.m(idx.at(next->id), col) += 1;
  }
  return phi;
}

IntMatrix a_matrix(const DoubleGraph& d) {
  require_edges(d);
  const auto order = d.edge_order();
  const IndexMap idx = index_of(order);
  IntMatrix a(order.size(), order.size());
  for (const auto& [id, e] : d.edges())
    for (const auto& [id2, f] : d.edges())
      if (e.range == f.source && id2 != e.bar) a(idx.at(id), idx.at(id2)) = 1;
  return a;
}

IntMatrix identity_minus_phi(const DoubleGraph& d) {
  if (d.edges().empty()) return IntMatrix(0, 0);
  return IntMatrix::identity(d.edges().size()) - phi_matrix(d).m;
}

KGroups k_groups_finite(const Multigraph& g) {
  if (g.edge_count() == 0) throw GraphError("empty edge set");
  if (!g.is_connected()) throw GraphError("graph is not connected");
  return k_groups_of(make_double(g));
}

AbelianGroup k0_formula_finite(std::size_t beta) {
  if (beta == 0) return AbelianGroup::trivial();
  const Integer order = static_cast<unsigned long>(beta - 1);
  return AbelianGroup::from_cyclic(beta, std::span<const Integer>(&order, 1));
}

AbelianGroup k1_formula_finite(std::size_t beta) {
  return AbelianGroup::free(k0_formula_finite(beta).free_rank);
}

BwPresentation bw_group(const BwDoubleGraph& b) {
  BwPresentation pres;
  pres.generators = b.edge_order();
  const IndexMap idx = index_of(pres.generators);
  std::map<std::string, std::vector<const DirectedEdge*>> out;
  for (const auto& [id, e] : b.edges) {
    out[e.edge.source].push_back(&e.edge);
    if (e.color == Color::black) pres.black_edges.push_back(id);
  }
  pres.relations = IntMatrix(pres.generators.size(), pres.black_edges.size());
  for (std::size_t col = 0; col < pres.black_edges.size(); ++col) {
    const DirectedEdge& e = b.edges.at(pres.black_edges[col]).edge;
    pres.relations(idx.at(e.id), col) += 1;
    if (auto it = out.find(e.range); it != out.end())
      for (const DirectedEdge* next : it->second)
        if (next->id != e.bar) pres.relations(idx.at(next->id), col) -= 1;
  }
  pres.group = cokernel(pres.relations);
  return pres;
}

IntMatrix reduce_lemma(const IntMatrix& t,
                       std::span<const std::size_t> h_indices) {
  const std::size_t n = t.rows();
  if (t.cols() != n) throw DimensionError("reduce_lemma: matrix is not square");
  std::vector<bool> in_h(n, false);
  for (std::size_t h : h_indices) {
    if (h >= n || in_h[h]) {
      throw DimensionError("reduce_lemma: bad H index " + std::to_string(h));
    }
    in_h[h] = true;
  }
  // T x - x must lie in G for every H basis vector x.
  for (std::size_t h : h_indices)
    for (std::size_t r : h_indices)
      if (t(r, h) != (r == h ? 1 : 0))
        throw LemmaHypothesisError("lemma hypothesis fails at column " +
                                   std::to_string(h));

  std::vector<std::size_t> g;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_h[i]) g.push_back(i);

  IntMatrix reduced(g.size(), g.size());
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = 0; b < g.size(); ++b) {
      Integer x = t(g[a], g[b]);
      for (std::size_t h : h_indices)
        mpz_submul(x.get_mpz_t(), t(g[a], h).get_mpz_t(),
                   t(h, g[b]).get_mpz_t());
      reduced(a, b) = std::move(x);
    }
  }
  return reduced;
}

ContractionReport contract_and_compare(const Multigraph& g,
                                       const std::string& edge_id) {
  const GeoEdge* e = g.find_edge(edge_id);
  if (!e) throw GraphError("unknown edge '" + edge_id + "'");
  if (e->is_loop()) throw GraphError("cannot contract loop '" + edge_id + "'");

  ContractionReport report;
  report.edge = edge_id;
  report.before = k_groups_finite(g);
  const DoubleGraph contracted = contract_edge(make_double(g), edge_id);
  report.after = k_groups_of(contracted);
  report.groups_equal = report.before.k0 == report.after.k0 &&
                        report.before.k1 == report.after.k1;

  const auto order = report.before.edge_order;
  const IndexMap idx = index_of(order);
  const std::size_t h[] = {idx.at(edge_id), idx.at(bar_id(edge_id))};
  const IntMatrix t = identity_minus_phi(make_double(g));
  report.lemma_route_matches =
      reduce_lemma(t, h) == identity_minus_phi(contracted);
  return report;
}

Presentation canonical_reduce(const Presentation& p) {
  p.validate();
  Presentation q = p;
  auto has_attachment = [&q](const std::string& v) {
    return std::any_of(q.rays.begin(), q.rays.end(),
                       [&](const RayAttachment& r) { return r.vertex == v; }) ||
           std::any_of(q.trees.begin(), q.trees.end(),
                       [&](const TreeAttachment& t) { return t.vertex == v; });
  };

  // Finite pendant branches carry zero classes.
  for (bool pruned = true; pruned;) {
    pruned = false;
    if (q.core.vertex_count() <= 1) break;
    for (const auto& v : q.core.vertices()) {
      const auto inc = q.core.incident(v);
      if (inc.size() != 1 || inc.front()->is_loop() || has_attachment(v)) continue;
      Multigraph smaller;
      for (const auto& w : q.core.vertices())
        if (w != v) smaller.add_vertex(w);
      for (const auto& [id, edge] : q.core.edges())
        if (id != inc.front()->id) smaller.add_edge(id, edge.u, edge.v);
      q.core = std::move(smaller);
      pruned = true;
      break;
    }
  }

  for (;;) {
    auto it = std::find_if(q.core.edges().begin(), q.core.edges().end(),
                           [](const auto& kv) { return !kv.second.is_loop(); });
    if (it == q.core.edges().end()) break;
    q = contract_core_edge(q, it->first);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Infinite graphs

namespace {

void require_infinite(const Presentation& p) {
  p.validate();
  if (p.is_finite()) {
    throw GraphError(
        "finite graph given; use the finite K-group computation instead");
  }
}

}  // namespace

std::optional<AbelianGroup> K0Report::value() const {
  if (closed_form) return closed_form;
  if (trace && trace->verdict == Verdict::stabilized) return trace->value;
  return std::nullopt;
}

std::optional<AbelianGroup> K1Report::value() const {
  if (closed_form) return closed_form;
  if (kernel && kernel->verdict == Verdict::stabilized) return kernel->group;
  return std::nullopt;
}

K0Report k0_infinite(const Presentation& p, K0Method method,
                     const LimitOptions& opts, std::optional<VertexSet> seed) {
  require_infinite(p);
  K0Report report;
  const std::size_t beta = betti_finite(p.core);
  const FreeRank gamma = branching_number(p);
  if (method != K0Method::limit) {
    report.closed_form = AbelianGroup::free(
        gamma.is_omega() ? FreeRank::omega() : FreeRank(beta + gamma.value()));
  }
  if (method == K0Method::formula) return report;

  const AmbientGraph amb(p);
  report.trace = colimit_k0(amb, seed ? *seed : default_seed(p), opts);
  const LimitTrace& tr = *report.trace;
  if (tr.verdict == Verdict::diverging) {
    report.detail = "rank diverges, consistent with omega";
    report.agree = !report.closed_form || report.closed_form->free_rank.is_omega();
    if (!report.agree) report.detail = "colimit rank diverges but closed form is finite";
    return report;
  }
  if (tr.verdict == Verdict::inconclusive) {
    report.agree = false;
    report.detail = "colimit did not stabilize: " + tr.note;
    return report;
  }
  if (report.closed_form) {
    report.agree = *tr.value == *report.closed_form;
    report.detail = report.agree
                        ? "closed form and colimit agree"
                        : "closed form " + report.closed_form->to_string() +
                              " differs from colimit " + tr.value->to_string();
  } else {
    report.detail = "colimit stabilized at step " + std::to_string(tr.at_step);
  }
  return report;
}

K1Report k1_infinite(const Presentation& p, K1Method method,
                     const LimitOptions& opts) {
  require_infinite(p);
  K1Report report;
  if (method != K1Method::kernel) {
    report.closed_form = AbelianGroup::free(betti_finite(p.core));
  }
  if (method == K1Method::formula) return report;

  report.kernel = kernel_stable(AmbientGraph(p), opts);
  const StableKernel& k = *report.kernel;
  if (k.verdict != Verdict::stabilized) {
    report.agree = false;
    report.detail = "kernel did not stabilize";
    return report;
  }
  if (report.closed_form) {
    report.agree = k.group == *report.closed_form;
    report.detail = report.agree
                        ? "closed form and stable kernel agree"
                        : "closed form " + report.closed_form->to_string() +
                              " differs from stable kernel " + k.group.to_string();
  } else {
    report.detail = "kernel stabilized at depth " + std::to_string(k.at_depth);
  }
  return report;
}

}  // namespace bhk
