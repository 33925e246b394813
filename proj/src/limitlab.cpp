#include "bhk/limitlab.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "bhk/ktheory.hpp"

namespace bhk {

void LimitOptions::validate() const {
  if (window < 2) throw std::invalid_argument("window must be at least 2");
  if (max_depth > kMaxDepth) {
    throw std::invalid_argument("depth must be at most " +
                                std::to_string(kMaxDepth));
  }
  if (max_probe < 2) throw std::invalid_argument("max_probe must be at least 2");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stabilized: return "stabilized";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

VertexSet default_seed(const Presentation& p) {
  if (p.core.vertices().empty()) throw GraphError("core has no vertices");
  return {*p.core.vertices().begin()};
}

std::vector<BwDoubleGraph> functor_chain(const AmbientGraph& amb,
                                         const VertexSet& seed,
                                         std::size_t depth) {
  if (seed.empty()) throw GraphError("seed vertex set is empty");
  std::vector<BwDoubleGraph> chain{bw_subgraph(amb, seed)};
  for (std::size_t n = 0; n < depth; ++n) chain.push_back(bw_extend(amb, chain.back()));
  return chain;
}

namespace {

// Stages of the exhaustion chain with their presentations, built on demand.
class StageCache {
 public:
  StageCache(const AmbientGraph& amb, const VertexSet& seed, std::size_t budget)
      : amb_(amb), budget_(budget) {
    if (seed.empty()) throw GraphError("seed vertex set is empty");
    for (const auto& v : seed)
      if (!amb.presentation().core.has_vertex(v))
        throw GraphError("seed vertex '" + v + "' is not a core vertex");
    graphs_.push_back(bw_subgraph(amb, seed));
  }

  // Null when the stage would exceed the generator budget.
  const BwPresentation* get(std::size_t n) {
    while (graphs_.size() <= n) {
      if (graphs_.back().edges.size() > budget_) return nullptr;
      graphs_.push_back(bw_extend(amb_, graphs_.back()));
    }
    if (graphs_[n].edges.size() > budget_) return nullptr;
    while (presentations_.size() <= n) {
      presentations_.push_back(bw_group(graphs_[presentations_.size()]));
    }
    return &presentations_[n];
  }

  const BwDoubleGraph& graph(std::size_t n) const { return graphs_[n]; }

 private:
  const AmbientGraph& amb_;
  std::size_t budget_;
  std::deque<BwDoubleGraph> graphs_;
  std::deque<BwPresentation> presentations_;
};

AbelianGroup image_in(const BwPresentation& from, const BwPresentation& to) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < to.generators.size(); ++i)
    idx.emplace(to.generators[i], i);
  std::vector<IntVector> gens;
  gens.reserve(from.generators.size());
  for (const auto& g : from.generators) {
    IntVector unit(to.generators.size());
    unit[idx.at(g)] = 1;
    gens.push_back(std::move(unit));
  }
  return subgroup_invariants(to.relations, gens);
}

}  // namespace

LimitTrace colimit_k0(const AmbientGraph& amb, const VertexSet& seed,
                      const LimitOptions& opts) {
  opts.validate();
  StageCache stages(amb, seed, opts.max_generators);
  LimitTrace trace;
  const VertexSet& core = amb.presentation().core.vertices();
  auto covers_core = [&core](const BwDoubleGraph& g) {
    return std::includes(g.omega.begin(), g.omega.end(), core.begin(), core.end());
  };

  for (std::size_t n = 0; n <= opts.max_depth; ++n) {
    const BwPresentation* here = stages.get(n);
    if (!here) {
      trace.note = "stage " + std::to_string(n) + " exceeds the generator budget";
      break;
    }
    LimitStep step;
    step.index = n;
    step.omega_size = stages.graph(n).omega.size();
    step.generators = here->generators.size();
    step.black_relations = here->black_edges.size();
    step.group = here->group;

    bool budget_hit = false;
    for (std::size_t m = 1; m <= opts.max_probe; ++m) {
      const BwPresentation* later = stages.get(n + m);
      if (!later) {
        budget_hit = true;
        break;
      }
      step.images.push_back({m, image_in(*here, *later)});
      const auto& im = step.images;
      if (im.size() >= 2 && im[im.size() - 1].image == im[im.size() - 2].image) {
        step.image_settled = true;
        break;
      }
    }
    if (step.images.empty() || (budget_hit && !step.image_settled)) {
      trace.note = "images of stage " + std::to_string(n) +
                   " need stages beyond the generator budget";
      break;
    }
    trace.steps.push_back(std::move(step));
    trace.rank_lower_bounds.push_back(
        trace.steps.back().stable_image().free_rank.value());

    // Before the core is covered, cycles may still lie ahead of the frontier,
    // so equal images there prove nothing.
    const auto& steps = trace.steps;
    if (steps.size() >= opts.window &&
        covers_core(stages.graph(steps[steps.size() - opts.window].index))) {
      bool same = true;
      const std::size_t first = steps.size() - opts.window;
      for (std::size_t k = first; k < steps.size(); ++k) {
        same = same && steps[k].image_settled &&
               steps[k].stable_image() == steps[first].stable_image();
      }
      if (same) {
        trace.verdict = Verdict::stabilized;
        trace.value = steps[first].stable_image();
        trace.at_step = steps[first].index;
        return trace;
      }
    }
  }

  const auto& bounds = trace.rank_lower_bounds;
  if (bounds.size() >= opts.divergence_run) {
    bool increasing = true;
    for (std::size_t k = bounds.size() - opts.divergence_run + 1; k < bounds.size(); ++k)
      increasing = increasing && bounds[k] > bounds[k - 1];
    if (increasing) {
      trace.verdict = Verdict::diverging;
      return trace;
    }
  }
  if (trace.note.empty()) trace.note = "no stable window within the depth limit";
  return trace;
}

StableKernel kernel_stable(const AmbientGraph& amb, const LimitOptions& opts) {
  opts.validate();
  StableKernel result;
  std::vector<std::vector<EdgeChain>> history;

  for (std::size_t d = 0; d <= opts.max_depth; ++d) {
    const DoubleGraph cols = make_double(amb.truncation(d));
    if (cols.edges().size() > opts.max_generators) break;
    const DoubleGraph rows = make_double(amb.truncation(d + 1));
    const auto col_order = cols.edge_order();
    const auto row_order = rows.edge_order();
    std::unordered_map<std::string, std::size_t> row_idx;
    for (std::size_t i = 0; i < row_order.size(); ++i) row_idx.emplace(row_order[i], i);

    // Column e is (Id - Phi) e; every successor of e lives one level deeper
    // at most, so the rows of the next truncation see all of it.
    IntMatrix m(row_order.size(), col_order.size());
    for (std::size_t j = 0; j < col_order.size(); ++j) {
      const DirectedEdge& e = cols.edge(col_order[j]);
      m(row_idx.at(e.id), j) += 1;
      for (const DirectedEdge& next : amb.out_edges(e.range))
        if (next.id != e.bar) m(row_idx.at(next.id), j) -= 1;
    }

    std::vector<EdgeChain> basis;
    for (const IntVector& v : kernel_basis(m)) {
      EdgeChain chain;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (sgn(v[j]) != 0) chain.emplace(col_order[j], v[j]);
      basis.push_back(std::move(chain));
    }
    result.steps.push_back({d, col_order.size(), row_order.size(), basis.size()});
    history.push_back(std::move(basis));

    if (history.size() >= opts.window) {
      const std::size_t first = history.size() - opts.window;
      bool same = true;
      for (std::size_t k = first + 1; k < history.size(); ++k)
        same = same && history[k] == history[first];
      if (same) {
        result.verdict = Verdict::stabilized;
        result.at_depth = result.steps[first].depth;
        result.basis = history[first];
        result.group = AbelianGroup::free(result.basis.size());
        return result;
      }
    }
  }
  return result;
}

}  // namespace bhk
