// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bhk/cli.hpp"
#include "bhk/io.hpp"
#include "bhk/ktheory.hpp"
#include "bhk/limitlab.hpp"
#include "support.hpp"

using namespace bhk;
using bhk::testing::random_connected;
using bhk::testing::random_matrix;
using bhk::testing::rose_with_rays;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && passed) detail = why;
    passed = passed && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Json run_json(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = run_cli(args, out, err);
  return out.str().empty() ? Json() : Json::parse(out.str());
}

const Json* find_check(const Json& doc, const std::string& name) {
  for (const auto& c : doc["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

std::string write_graph(const std::string& name, const Presentation& p) {
  const auto dir = std::filesystem::temp_directory_path() / "bhk_acceptance";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << format_graph(p);
  return path.string();
}

// 1. Finite formula on random multigraphs.
Outcome finite_formula() {
  Outcome o;
  std::mt19937_64 rng(1001);
  const auto start = Clock::now();
  int graphs = 0, beta0 = 0, beta1 = 0;
  while (graphs < 60 || beta0 == 0 || beta1 == 0) {
    const Multigraph g = random_connected(rng, 10, 14);
    const std::size_t beta = betti_finite(g);
    const KGroups k = k_groups_finite(g);
    o.require(k.k0 == k0_formula_finite(beta),
              "K0 " + k.k0.to_string() + " vs formula at betti " + std::to_string(beta));
    o.require(k.k1.free_rank == k.k0.free_rank, "K1 rank differs from K0 free rank");
    beta0 += beta == 0;
    beta1 += beta == 1;
    ++graphs;
  }
  const double t = seconds_since(start);
  o.require(t < 10.0, "took " + fmt_seconds(t));
  if (o.passed)
    o.detail = std::to_string(graphs) + " graphs (" + std::to_string(beta0) + " with betti 0, " +
               std::to_string(beta1) + " with betti 1) in " + fmt_seconds(t);
  return o;
}

// 2. Contraction invariance with the lemma route.
Outcome contraction() {
  Outcome o;
  std::mt19937_64 rng(2002);
  const auto start = Clock::now();
  int pairs = 0;
  while (pairs < 120) {
    const Multigraph g = random_connected(rng, 10, 14);
    for (const auto& [id, e] : g.edges()) {
      if (e.is_loop()) continue;
      const ContractionReport r = contract_and_compare(g, id);
      o.require(r.groups_equal, "groups change when contracting " + id);
      o.require(r.lemma_route_matches, "lemma route differs for " + id);
      ++pairs;
    }
  }
  const double t = seconds_since(start);
  o.require(t < 10.0, "took " + fmt_seconds(t));
  if (o.passed) o.detail = std::to_string(pairs) + " (graph, edge) pairs in " + fmt_seconds(t);
  return o;
}

// 3. Lemma engine on random block matrices.
Outcome lemma_engine() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  int count = 0;
  for (; count < 250; ++count) {
    const std::size_t n = size(rng);
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < n; ++i)
      if (std::bernoulli_distribution(0.4)(rng)) h.push_back(i);
    IntMatrix t = random_matrix(rng, n, n, -5, 5);
    for (std::size_t a : h)
      for (std::size_t b : h) t(a, b) = a == b ? 1 : 0;
    const IntMatrix r = reduce_lemma(t, h);
    o.require(cokernel(r) == cokernel(t), "cokernel differs");
    o.require(kernel_basis(r).size() == kernel_basis(t).size(), "kernel rank differs");
  }
  if (o.passed) o.detail = std::to_string(count) + " matrices up to 8x8";
  return o;
}

LimitOptions acceptance_options() {
  LimitOptions opts;
  opts.max_depth = 8;
  opts.window = 3;
  return opts;
}

// 4. K0 of rose(m) + n rays by closed form and by colimit.
Outcome k0_rose_rays() {
  Outcome o;
  const auto start = Clock::now();
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::string tag = "rose(" + std::to_string(m) + ")+" + std::to_string(n) + " rays";
      const K0Report r = k0_infinite(rose_with_rays(m, n), K0Method::both, acceptance_options());
      o.require(r.closed_form == AbelianGroup::free(m + n), tag + ": closed form");
      o.require(r.trace->verdict == Verdict::stabilized, tag + ": no stable window by depth 8");
      o.require(r.agree, tag + ": " + r.detail);
      for (const auto& s : r.trace->steps)
        o.require(s.stable_image().torsion.empty(), tag + ": torsion in a stable image");
    }
  }
  const double t = seconds_since(start);
  o.require(t < 30.0, "took " + fmt_seconds(t));
  if (o.passed) o.detail = "16 presentations, all Z^(m+n), torsion-free, in " + fmt_seconds(t);
  return o;
}

// 5. K1 of the same family; kernel basis on petals, in the u - u~ lattice.
Outcome k1_rose_rays() {
  Outcome o;
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::string tag = "rose(" + std::to_string(m) + ")+" + std::to_string(n) + " rays";
      const K1Report r = k1_infinite(rose_with_rays(m, n), K1Method::both, acceptance_options());
      o.require(r.closed_form == AbelianGroup::free(m), tag + ": closed form");
      o.require(r.agree, tag + ": " + r.detail);
      o.require(r.kernel->basis.size() == m, tag + ": basis size");
      for (const auto& chain : r.kernel->basis) {
        for (const auto& [id, c] : chain) {
          const std::string geo = geometric_id(id);
          o.require(geo.size() >= 2 && geo[0] == 'u', tag + ": support leaves the petals");
          const auto partner = chain.find(bar_id(id));
          o.require(partner != chain.end() && partner->second == -c,
                    tag + ": vector not in the u - u~ lattice");
        }
      }
    }
  }
  if (o.passed) o.detail = "16 presentations, K1 = Z^m, bases supported on petals";
  return o;
}

// 6. Loop + ray: K0 = Z^2 but K1 = Z; finite inputs keep equality.
Outcome rank_gap() {
  Outcome o;
  const Presentation lr = rose_with_rays(1, 1);
  o.require(k0_infinite(lr, K0Method::both).value() == AbelianGroup::free(2), "K0 is not Z^2");
  o.require(k1_infinite(lr, K1Method::both).value() == AbelianGroup::free(1), "K1 is not Z");

  int code = 0;
  const Json d = run_json({"verify", write_graph("loop_ray.txt", lr)}, code);
  const Json* c = find_check(d, "k1_rank_vs_k0_free_rank");
  o.require(code == kExitOk && c && (*c)["passed"] == true, "verify does not report K1 < K0");

  std::mt19937_64 rng(6006);
  for (int i = 0; i < 20; ++i) {
    const Presentation p = finite_presentation(random_connected(rng, 6, 8));
    const Json f = run_json({"verify", write_graph("finite.txt", p)}, code);
    const Json* eq = find_check(f, "k1_rank_equals_k0_free_rank");
    o.require(eq && (*eq)["passed"] == true, "finite verify fails the rank equality");
    for (const auto& chk : f["checks"])
      o.require(chk["passed"] == true, "finite verify check " + chk["name"].get<std::string>() +
                                           " fails: " + chk["detail"].get<std::string>());
  }
  if (o.passed) o.detail = "K0 = Z^2, K1 = Z; verify reports 1 < 2; equality on 20 finite graphs";
  return o;
}

// 7. Seed independence across presentations and seeds.
Outcome seed_independence() {
  Outcome o;
  auto core = [](std::initializer_list<const char*> vs,
                 std::initializer_list<std::array<const char*, 3>> es) {
    Presentation p;
    for (const char* v : vs) p.core.add_vertex(v);
    for (const auto& e : es) p.core.add_edge(e[0], e[1], e[2]);
    return p;
  };
  std::vector<Presentation> ps;
  ps.push_back(core({"a", "b", "c"}, {{"l", "a", "a"}, {"x", "a", "b"}, {"y", "b", "c"}}));
  ps.back().rays.push_back({"r", "c"});
  ps.push_back(core({"a", "b", "c"}, {{"x", "a", "b"}, {"y", "b", "c"}, {"z", "c", "a"}}));
  ps.back().rays.push_back({"r", "a"});
  ps.back().rays.push_back({"s", "b"});
  ps.push_back(core({"a", "b", "c"}, {{"p", "a", "b"}, {"q", "a", "b"}, {"s", "b", "c"}}));
  ps.back().rays.push_back({"r", "c"});
  ps.push_back(core({"a", "b", "c", "d"},
                    {{"w", "a", "b"}, {"x", "b", "c"}, {"y", "c", "d"}, {"z", "d", "a"},
                     {"k", "a", "c"}}));
  ps.back().rays.push_back({"r", "d"});
  ps.back().rays.push_back({"s", "d"});
  ps.push_back(core({"a", "b", "c"}, {{"l", "a", "a"}, {"x", "a", "b"}, {"y", "b", "c"}}));
  ps.back().trees.push_back({"t", "c", 2});

  int runs = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const AmbientGraph amb(ps[i]);
    const std::vector<VertexSet> seeds = {{"a"}, {"b"}, {"c"}, {"a", "b"}};
    std::optional<std::tuple<std::size_t, Verdict, std::optional<AbelianGroup>, AbelianGroup,
                             std::vector<EdgeChain>>>
        first;
    for (const auto& seed : seeds) {
      const BettiLimit b = betti_limit(amb, induced_subgraph(amb, seed), 64);
      const LimitTrace tr = colimit_k0(amb, seed);
      const StableKernel k = kernel_stable(amb);
      auto now = std::make_tuple(b.value, tr.verdict, tr.value, k.group, k.basis);
      o.require(b.stabilized, "betti limit unstable");
      if (!first) first = now;
      o.require(*first == now, "presentation " + std::to_string(i + 1) + " depends on the seed");
      ++runs;
    }
  }
  if (o.passed) o.detail = std::to_string(ps.size()) + " presentations x 4 seeds (" +
                           std::to_string(runs) + " runs) agree";
  return o;
}

// 8. Operator consistency on random double graphs.
Outcome operator_consistency() {
  Outcome o;
  std::mt19937_64 rng(8008);
  int count = 0;
  for (; count < 120; ++count) {
    const DoubleGraph d = make_double(random_connected(rng, 10, 14));
    const PhiMatrix phi = phi_matrix(d);
    const IntMatrix a = a_matrix(d);
    o.require(phi.m == a.transpose(), "Phi differs from A transpose");
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j)
        o.require(a(i, j) == 0 || a(i, j) == 1, "A has an entry outside {0,1}");
      const auto& bar = d.edge(phi.edge_order[i]).bar;
      const auto j = std::find(phi.edge_order.begin(), phi.edge_order.end(), bar) -
                     phi.edge_order.begin();
      o.require(a(i, static_cast<std::size_t>(j)) == 0, "A[e][bar e] is nonzero");
    }
  }
  if (o.passed) o.detail = std::to_string(count) + " random double graphs";
  return o;
}

// 9. A binary tree makes the colimit rank diverge.
Outcome divergence() {
  Outcome o;
  Presentation p = rose_with_rays(1, 0);
  p.trees.push_back({"t", "v", 2});
  o.require(branching_number(p).is_omega(), "branching number is not omega");
  const LimitTrace tr = colimit_k0(AmbientGraph(p), {"v"});
  o.require(tr.verdict == Verdict::diverging, "verdict is " + to_string(tr.verdict));
  const auto& bounds = tr.rank_lower_bounds;
  o.require(bounds.size() >= 5, "fewer than 5 steps");
  // Each frontier subtree is one end: beta + b^(n+1) at step n.
  std::string list;
  for (std::size_t n = 0; n < bounds.size(); ++n) {
    if (n > 0) o.require(bounds[n] > bounds[n - 1], "bounds not strictly increasing");
    o.require(bounds[n] == 1 + (std::size_t{1} << (n + 1)), "bound differs from end count");
    list += (n ? "," : "") + std::to_string(bounds[n]);
  }
  if (o.passed) o.detail = "omega; diverging over " + std::to_string(bounds.size()) +
                           " steps, bounds " + list;
  return o;
}

// 10. SNF soundness.
Outcome snf_soundness() {
  Outcome o;
  std::mt19937_64 rng(10010);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  int count = 0, dets = 0;
  for (; count < 600; ++count) {
    const IntMatrix a = random_matrix(rng, dim(rng), dim(rng), -9, 9);
    const SnfResult r = snf(a);
    o.require(r.u * a * r.v == r.d, "u a v != d");
    o.require(rank(a) + kernel_basis(a).size() == a.cols(), "rank + nullity != cols");
    if (a.rows() == a.cols()) {
      const Integer det = determinant(a);
      if (det != 0) {
        o.require(cokernel(a).torsion_order() == abs(det), "|det| != torsion order");
        ++dets;
      }
    }
  }
  while (dets < 100) {
    const std::size_t n = dim(rng);
    const IntMatrix a = random_matrix(rng, n, n, -9, 9);
    const Integer det = determinant(a);
    if (det == 0) continue;
    o.require(cokernel(a).torsion_order() == abs(det), "|det| != torsion order");
    ++dets;
  }
  if (o.passed) o.detail = std::to_string(count) + " SNFs, " + std::to_string(dets) +
                           " determinant checks";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"finite formula reproduction", finite_formula},
      {"contraction invariance", contraction},
      {"lemma engine", lemma_engine},
      {"K0 of roses with rays", k0_rose_rays},
      {"K1 of roses with rays", k1_rose_rays},
      {"K1 rank below K0 rank for loop+ray", rank_gap},
      {"seed independence", seed_independence},
      {"operator consistency", operator_consistency},
      {"divergence detection", divergence},
      {"SNF soundness", snf_soundness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
              << criteria[i].first << " -- " << o.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
