#include "bhk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "bhk/graph.hpp"
#include "bhk/io.hpp"
#include "bhk/ktheory.hpp"
#include "bhk/limitlab.hpp"
#include "bhk/zlinalg.hpp"

namespace bhk {

namespace {

// Bad input or an unsupported flag combination; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Document {
 public:
  explicit Document(std::string command) {
    j_["command"] = std::move(command);
    for (const char* key : {"input", "betti", "gamma", "k0", "k1", "method"})
      j_[key] = nullptr;
    j_["checks"] = Json::array();
    j_["trace"] = nullptr;
  }

  Json& operator[](const char* key) { return j_[key]; }

  void check(std::string name, bool passed, std::string detail) {
    if (!passed && detail.empty()) detail = "check failed";
    j_["checks"].push_back(
        {{"name", name}, {"passed", passed}, {"detail", detail}});
    all_passed_ = all_passed_ && passed;
  }

  int emit(std::ostream& out) const {
    out << j_.dump(2) << '\n';
    return all_passed_ ? kExitOk : kExitCheckFailed;
  }

 private:
  Json j_;
  bool all_passed_ = true;
};

Json gamma_json(const FreeRank& g) {
  return g.is_omega() ? Json("omega") : Json(g.value());
}

Json input_summary(const std::string& path, const Presentation& p) {
  return {{"path", path},
          {"vertices", p.core.vertex_count()},
          {"edges", p.core.edge_count()},
          {"rays", p.rays.size()},
          {"trees", p.trees.size()},
          {"finite", p.is_finite()}};
}

VertexSet parse_seed(const std::string& text) {
  VertexSet seed;
  std::stringstream in(text);
  for (std::string v; std::getline(in, v, ',');)
    if (!v.empty()) seed.insert(v);
  if (seed.empty()) throw UsageError("--seed-omega needs at least one vertex");
  return seed;
}

struct Common {
  std::string file;
  std::string method = "both";
  std::size_t depth = 12;
  std::size_t window = 3;
  std::string seed_text;

  LimitOptions options() const {
    LimitOptions o;
    o.max_depth = depth;
    o.window = window;
    try {
      o.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return o;
  }

  std::optional<VertexSet> seed() const {
    if (seed_text.empty()) return std::nullopt;
    return parse_seed(seed_text);
  }
};

Presentation load_checked(const std::string& path) {
  Presentation p = load_graph(path);
  if (!p.is_finite()) p.validate();
  return p;
}

void require_k_ready(const Presentation& p) {
  if (p.core.edge_count() == 0 && p.is_finite()) throw UsageError("empty edge set");
  if (!p.core.is_connected()) throw UsageError("graph is not connected");
}

Json chains_json(const std::vector<std::string>& order,
                 const std::vector<IntVector>& basis) {
  Json out = Json::array();
  for (const auto& v : basis) {
    EdgeChain chain;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) chain.emplace(order[i], v[i]);
    out.push_back(to_json(chain));
  }
  return out;
}

std::size_t betti_of(const Presentation& p, const std::optional<VertexSet>& seed,
                     Document& doc) {
  if (p.is_finite()) return betti_finite(p.core);
  const AmbientGraph amb(p);
  const VertexSet start = seed ? *seed : default_seed(p);
  const Multigraph sub = induced_subgraph(amb, start);
  const BettiLimit lim = betti_limit(amb, sub, 4 * kMaxDepth);
  const std::size_t core_beta = betti_finite(p.core);
  doc.check("betti_limit_stabilized", lim.stabilized && lim.value == core_beta,
            lim.stabilized ? "exhaustion stabilized at step " +
                                 std::to_string(lim.at_step) + " with value " +
                                 std::to_string(lim.value)
                           : "unstable after " +
                                 std::to_string(lim.sequence.size() - 1) + " steps");
  return lim.stabilized ? lim.value : core_beta;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_info(const Common& c, std::ostream& out) {
  const Presentation p = load_graph(c.file);
  Document doc("info");
  doc["input"] = input_summary(c.file, p);
  if (!p.is_finite()) {
    p.validate();
    doc["betti"] = betti_of(p, c.seed(), doc);
  } else {
    doc["betti"] = betti_finite(p.core);
  }
  doc["gamma"] = gamma_json(branching_number(p));
  return doc.emit(out);
}

void k0_finite(const Presentation& p, const std::string& method, Document& doc) {
  if (method == "limit") {
    throw UsageError(
        "--method limit needs an infinite graph; for a finite graph use "
        "--method formula or both (matrix cokernel)");
  }
  const std::size_t beta = betti_finite(p.core);
  const AbelianGroup formula = k0_formula_finite(beta);
  doc["k0"] = to_json(formula);
  if (method == "both") {
    const KGroups k = k_groups_finite(p.core);
    doc["k0"] = to_json(k.k0);
    doc.check("k0_matrix_equals_formula", k.k0 == formula,
              "coker(Id - Phi) = " + k.k0.to_string() + ", formula gives " +
                  formula.to_string());
  }
}

void k0_infinite_into(const Presentation& p, const Common& c, Document& doc) {
  const K0Method m = c.method == "formula" ? K0Method::formula
                     : c.method == "limit" ? K0Method::limit
                                           : K0Method::both;
  const K0Report r = k0_infinite(p, m, c.options(), c.seed());
  doc["k0"] = r.value() ? to_json(*r.value()) : Json(nullptr);
  if (r.trace) {
    doc["trace"] = to_json(*r.trace);
    bool no_torsion = true;
    for (const auto& s : r.trace->steps) no_torsion = no_torsion && s.stable_image().torsion.empty();
    doc.check("k0_torsion_vanishes", no_torsion,
              no_torsion ? "every stable image is free"
                         : "torsion found in a stable image");
    doc.check(m == K0Method::both ? "k0_closed_form_vs_limit" : "k0_limit",
              r.agree, r.detail);
  }
}

int cmd_k0(const Common& c, std::ostream& out) {
  const Presentation p = load_checked(c.file);
  require_k_ready(p);
  Document doc("k0");
  doc["input"] = input_summary(c.file, p);
  doc["betti"] = betti_finite(p.core);
  doc["gamma"] = gamma_json(branching_number(p));
  doc["method"] = c.method;
  if (p.is_finite()) {
    k0_finite(p, c.method, doc);
  } else {
    k0_infinite_into(p, c, doc);
  }
  return doc.emit(out);
}

void k1_into(const Presentation& p, const Common& c, Document& doc) {
  if (p.is_finite()) {
    const std::size_t beta = betti_finite(p.core);
    const AbelianGroup formula = k1_formula_finite(beta);
    doc["k1"] = to_json(formula);
    if (c.method != "formula") {
      const KGroups k = k_groups_finite(p.core);
      doc["k1"] = to_json(k.k1);
      doc["k1_basis"] = chains_json(k.edge_order, k.k1_basis);
      if (c.method == "both") {
        std::string detail = "ker(Id - Phi) = " + k.k1.to_string() +
                             ", torsion-free part of K0 formula = " +
                             formula.to_string();
        if (beta == 1) detail += "; at betti 1 this is Z^2, not Z^betti";
        doc.check("k1_kernel_equals_formula", k.k1 == formula, detail);
      }
    }
    return;
  }
  const K1Method m = c.method == "formula" ? K1Method::formula
                     : c.method == "kernel" ? K1Method::kernel
                                            : K1Method::both;
  const K1Report r = k1_infinite(p, m, c.options());
  doc["k1"] = r.value() ? to_json(*r.value()) : Json(nullptr);
  if (r.kernel) {
    doc["k1_basis"] = to_json(*r.kernel)["basis"];
    doc["kernel"] = to_json(*r.kernel);
    doc.check(m == K1Method::both ? "k1_closed_form_vs_kernel" : "k1_kernel",
              r.agree, r.detail);
  }
}

int cmd_k1(const Common& c, std::ostream& out) {
  if (c.method == "limit") throw UsageError("k1 methods are formula, kernel, both");
  const Presentation p = load_checked(c.file);
  require_k_ready(p);
  Document doc("k1");
  doc["input"] = input_summary(c.file, p);
  doc["betti"] = betti_finite(p.core);
  doc["gamma"] = gamma_json(branching_number(p));
  doc["method"] = c.method;
  k1_into(p, c, doc);
  return doc.emit(out);
}

struct InfiniteGroups {
  K0Report k0;
  K1Report k1;
};

InfiniteGroups infinite_groups(const Presentation& p, const LimitOptions& o) {
  return {k0_infinite(p, K0Method::both, o), k1_infinite(p, K1Method::both, o)};
}

Json group_or_null(const std::optional<AbelianGroup>& g) {
  return g ? to_json(*g) : Json(nullptr);
}

int cmd_contract(const Common& c, const std::string& edge, std::ostream& out) {
  const Presentation p = load_checked(c.file);
  require_k_ready(p);
  const GeoEdge* e = p.core.find_edge(edge);
  if (!e) throw UsageError("unknown edge '" + edge + "'");
  if (e->is_loop()) throw UsageError("cannot contract loop '" + edge + "'");

  Document doc("contract");
  doc["input"] = input_summary(c.file, p);
  doc["betti"] = betti_finite(p.core);
  doc["gamma"] = gamma_json(branching_number(p));
  doc["method"] = "both";
  Json report;
  report["edge"] = edge;
  if (p.is_finite()) {
    const ContractionReport r = contract_and_compare(p.core, edge);
    doc["k0"] = to_json(r.before.k0);
    doc["k1"] = to_json(r.before.k1);
    report["before"] = {{"k0", to_json(r.before.k0)}, {"k1", to_json(r.before.k1)}};
    report["after"] = {{"k0", to_json(r.after.k0)}, {"k1", to_json(r.after.k1)}};
    doc.check("k_groups_preserved", r.groups_equal,
              "before K0 " + r.before.k0.to_string() + ", K1 " +
                  r.before.k1.to_string() + "; after K0 " + r.after.k0.to_string() +
                  ", K1 " + r.after.k1.to_string());
    doc.check("lemma_route_matches", r.lemma_route_matches,
              r.lemma_route_matches
                  ? "reduced Id - Phi equals Id - Phi of the contracted graph"
                  : "reduced matrix differs from the contracted graph's Id - Phi");
  } else {
    const LimitOptions o = c.options();
    const InfiniteGroups before = infinite_groups(p, o);
    const InfiniteGroups after = infinite_groups(contract_core_edge(p, edge), o);
    doc["k0"] = group_or_null(before.k0.value());
    doc["k1"] = group_or_null(before.k1.value());
    report["before"] = {{"k0", group_or_null(before.k0.value())},
                        {"k1", group_or_null(before.k1.value())}};
    report["after"] = {{"k0", group_or_null(after.k0.value())},
                       {"k1", group_or_null(after.k1.value())}};
    const bool same = before.k0.value() == after.k0.value() &&
                      before.k1.value() == after.k1.value();
    doc.check("k_groups_preserved", same, same ? "groups agree" : "groups differ");
    doc.check("computed_routes_agree",
              before.k0.agree && before.k1.agree && after.k0.agree && after.k1.agree,
              before.k0.detail + "; " + before.k1.detail + "; " + after.k0.detail +
                  "; " + after.k1.detail);
  }
  doc["contract"] = std::move(report);
  return doc.emit(out);
}

Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_snf(const std::string& path, std::ostream& out) {
  const IntMatrix a = load_matrix(path);
  const SnfResult r = snf(a);
  Document doc("snf");
  doc["input"] = {{"path", path}, {"rows", a.rows()}, {"cols", a.cols()}};
  Json diag = Json::array();
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
    diag.push_back(to_json(r.d(i, i)));
    if (sgn(r.d(i, i)) != 0) ++nonzero;
  }
  doc["snf"] = {{"diagonal", std::move(diag)},
                {"rank", nonzero},
                {"cokernel", to_json(cokernel(a))},
                {"kernel_rank", a.cols() - nonzero},
                {"d", matrix_json(r.d)},
                {"u", matrix_json(r.u)},
                {"v", matrix_json(r.v)}};
  doc.check("transform_identity", r.u * a * r.v == r.d, "u * a * v == d");
  const Integer du = determinant(r.u);
  const Integer dv = determinant(r.v);
  doc.check("unimodular_transforms", abs(du) == 1 && abs(dv) == 1,
            "det u = " + du.get_str() + ", det v = " + dv.get_str());
  return doc.emit(out);
}

int cmd_trace(const Common& c, const std::string& out_path, const std::string& format,
              std::ostream& out) {
  const Presentation p = load_checked(c.file);
  require_k_ready(p);
  const AmbientGraph amb(p);
  const LimitTrace trace =
      colimit_k0(amb, c.seed() ? *c.seed() : default_seed(p), c.options());

  std::ofstream file(out_path);
  if (!file) throw UsageError("cannot write '" + out_path + "'");
  if (format == "csv") {
    file << trace_csv(trace);
  } else {
    file << to_json(trace).dump(2) << '\n';
  }

  Document doc("trace");
  doc["input"] = input_summary(c.file, p);
  doc["betti"] = betti_finite(p.core);
  doc["gamma"] = gamma_json(branching_number(p));
  doc["k0"] = trace.value ? to_json(*trace.value) : Json(nullptr);
  doc["method"] = "limit";
  doc["trace"] = to_json(trace);
  doc["output"] = {{"path", out_path}, {"format", format}};
  return doc.emit(out);
}

// ---------------------------------------------------------------------------
// verify

void check_operator(const DoubleGraph& d, Document& doc) {
  const PhiMatrix phi = phi_matrix(d);
  const IntMatrix a = a_matrix(d);
  doc.check("phi_equals_a_transpose", phi.m == a.transpose(),
            std::to_string(phi.edge_order.size()) + " directed edges");
  bool zero_one = true;
  bool no_backtrack = true;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      zero_one = zero_one && (a(i, j) == 0 || a(i, j) == 1);
  for (std::size_t i = 0; i < phi.edge_order.size(); ++i) {
    const auto& bar = d.edge(phi.edge_order[i]).bar;
    const auto j = static_cast<std::size_t>(
        std::find(phi.edge_order.begin(), phi.edge_order.end(), bar) -
        phi.edge_order.begin());
    no_backtrack = no_backtrack && a(i, j) == 0;
  }
  doc.check("a_matrix_zero_one", zero_one && no_backtrack,
            "entries in {0,1} and A[e][bar e] = 0");
}

void verify_finite(const Presentation& p, const Common& c, Document& doc) {
  const Multigraph& g = p.core;
  const std::size_t beta = betti_finite(g);
  const KGroups k = k_groups_finite(g);
  doc["k0"] = to_json(k.k0);
  doc["k1"] = to_json(k.k1);

  const DoubleGraph d = make_double(g);
  check_operator(d, doc);

  const AbelianGroup formula = k0_formula_finite(beta);
  doc.check("k0_matrix_equals_formula", k.k0 == formula,
            "coker(Id - Phi) = " + k.k0.to_string() + ", formula gives " +
                formula.to_string());

  std::string rank_detail = "K1 rank " + k.k1.free_rank.to_string() +
                            ", K0 free rank " + k.k0.free_rank.to_string();
  if (beta == 1) rank_detail += "; at betti 1 the kernel has rank 2, not betti";
  doc.check("k1_rank_equals_k0_free_rank", k.k1.free_rank == k.k0.free_rank,
            rank_detail);

  const IntMatrix t = identity_minus_phi(d);
  const SnfResult s = snf(t);
  doc.check("snf_certificate",
            s.u * t * s.v == s.d && abs(determinant(s.u)) == 1 &&
                abs(determinant(s.v)) == 1,
            "u (Id - Phi) v = d with unimodular u, v");

  for (const auto& [id, e] : g.edges()) {
    if (e.is_loop()) continue;
    const ContractionReport r = contract_and_compare(g, id);
    doc.check("contraction_invariance:" + id, r.ok(),
              std::string(r.groups_equal ? "groups preserved" : "groups differ") +
                  (r.lemma_route_matches ? ", lemma route matches"
                                         : ", lemma route differs"));
  }

  const Presentation reduced = canonical_reduce(p);
  const bool reduced_ok =
      reduced.core.edge_count() == 0
          ? k.k0.is_trivial() && k.k1.is_trivial()
          : k_groups_finite(reduced.core).k0 == k.k0 &&
                k_groups_finite(reduced.core).k1 == k.k1;
  doc.check("canonical_reduce_preserves_k", reduced_ok,
            "reduced to a rose with " + std::to_string(reduced.core.edge_count()) +
                " petals");

  const AmbientGraph amb(p);
  bool seeds_agree = true;
  for (const auto& v : g.vertices()) {
    const BettiLimit lim = betti_limit(amb, induced_subgraph(amb, {v}), g.vertex_count() + 1);
    seeds_agree = seeds_agree && lim.stabilized && lim.value == beta;
  }
  doc.check("betti_seed_independence", seeds_agree,
            "exhaustion from every single-vertex seed gives " + std::to_string(beta));

  const LimitTrace trace =
      colimit_k0(amb, c.seed() ? *c.seed() : default_seed(p), c.options());
  doc["trace"] = to_json(trace);
  doc.check("colimit_matches_k0",
            trace.verdict == Verdict::stabilized && *trace.value == k.k0,
            "colimit " + (trace.value ? trace.value->to_string() : to_string(trace.verdict)) +
                " vs K0 " + k.k0.to_string());
}

bool on_petals_in_bar_lattice(const Presentation& rose, const EdgeChain& chain) {
  for (const auto& [id, coef] : chain) {
    const GeoEdge* e = rose.core.find_edge(geometric_id(id));
    if (!e || !e->is_loop()) return false;
    auto partner = chain.find(bar_id(id));
    if (partner == chain.end() || partner->second != -coef) return false;
  }
  return true;
}

void verify_infinite(const Presentation& p, const Common& c, Document& doc) {
  const LimitOptions o = c.options();
  const std::size_t beta = betti_finite(p.core);
  const FreeRank gamma = branching_number(p);

  const AmbientGraph amb(p);
  bool seeds_agree = true;
  for (const auto& v : p.core.vertices()) {
    const BettiLimit lim = betti_limit(amb, induced_subgraph(amb, {v}), 4 * kMaxDepth);
    seeds_agree = seeds_agree && lim.stabilized && lim.value == beta;
  }
  doc.check("betti_seed_independence", seeds_agree,
            "exhaustion from every core vertex gives " + std::to_string(beta));

  check_operator(make_double(amb.truncation(2)), doc);

  const K0Report k0 = k0_infinite(p, K0Method::both, o, c.seed());
  const K1Report k1 = k1_infinite(p, K1Method::both, o);
  doc["k0"] = group_or_null(k0.value());
  doc["k1"] = group_or_null(k1.value());
  doc["trace"] = to_json(*k0.trace);
  doc["kernel"] = to_json(*k1.kernel);
  doc.check("k0_closed_form_vs_limit", k0.agree, k0.detail);
  bool no_torsion = true;
  for (const auto& s : k0.trace->steps) no_torsion = no_torsion && s.stable_image().torsion.empty();
  doc.check("k0_torsion_vanishes", no_torsion && k0.closed_form->torsion.empty(),
            no_torsion ? "K0 and every stable image are free"
                       : "torsion found in a stable image");
  doc.check("k1_closed_form_vs_kernel", k1.agree, k1.detail);

  bool in_core = true;
  for (const auto& chain : k1.kernel->basis)
    for (const auto& [id, coef] : chain)
      in_core = in_core && p.core.find_edge(geometric_id(id)) != nullptr;
  doc.check("kernel_support_in_core", in_core,
            "kernel vectors avoid every ray and tree edge");

  const Presentation rose = canonical_reduce(p);
  const K1Report rose_k1 = k1_infinite(rose, K1Method::both, o);
  bool petal_lattice = rose_k1.agree;
  for (const auto& chain : rose_k1.kernel->basis)
    petal_lattice = petal_lattice && on_petals_in_bar_lattice(rose, chain);
  doc.check("kernel_basis_on_petals", petal_lattice,
            "reduced rose kernel spanned by u - u~ combinations");

  const K0Report rose_k0 = k0_infinite(rose, K0Method::both, o);
  const bool reduce_ok = betti_finite(rose.core) == beta &&
                         branching_number(rose) == gamma && rose_k0.agree &&
                         rose_k0.value() == k0.value() && rose_k1.value() == k1.value();
  doc.check("canonical_reduce_preserves_invariants", reduce_ok,
            "rose with " + std::to_string(rose.core.edge_count()) + " petals, " +
                std::to_string(rose.rays.size()) + " rays, " +
                std::to_string(rose.trees.size()) + " trees");

  const std::size_t k1_rank = k1.value() ? k1.value()->free_rank.value() : 0;
  const bool strictly_less = k0.value() && (k0.value()->free_rank.is_omega() ||
                                            k1_rank < k0.value()->free_rank.value());
  doc.check("k1_rank_vs_k0_free_rank", strictly_less,
            "K1 rank " + std::to_string(k1_rank) + " < K0 free rank " +
                (k0.value() ? k0.value()->free_rank.to_string() : "?") +
                ": K1 is not the torsion-free part of K0 for an infinite graph");

  for (const auto& [id, e] : p.core.edges()) {
    if (e.is_loop()) continue;
    const Presentation q = contract_core_edge(p, id);
    const InfiniteGroups after = infinite_groups(q, o);
    const bool ok = after.k0.agree && after.k1.agree &&
                    after.k0.value() == k0.value() && after.k1.value() == k1.value();
    doc.check("contraction_invariance:" + id, ok,
              ok ? "K0 and K1 preserved, routes agree" : after.k0.detail + "; " + after.k1.detail);
  }
}

int cmd_verify(const Common& c, std::ostream& out) {
  const Presentation p = load_checked(c.file);
  require_k_ready(p);
  Document doc("verify");
  doc["input"] = input_summary(c.file, p);
  doc["betti"] = betti_finite(p.core);
  doc["gamma"] = gamma_json(branching_number(p));
  doc["method"] = "both";
  if (p.is_finite()) {
    verify_finite(p, c, doc);
  } else {
    verify_infinite(p, c, doc);
  }
  return doc.emit(out);
}

void add_limit_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--depth", c.depth, "maximum exhaustion/truncation depth")
      ->capture_default_str();
  cmd->add_option("--window", c.window, "consecutive equal steps for stability")
      ->capture_default_str();
  cmd->add_option("--seed-omega", c.seed_text, "comma-separated seed vertices");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact K0 and K1 of graph operators via Id - Phi", "bhk"};
  app.require_subcommand(1);

  Common c;
  std::string edge, out_path, format = "json";

  auto* info = app.add_subcommand("info", "Betti number, branching number, summary");
  info->add_option("FILE", c.file)->required();
  info->add_option("--seed-omega", c.seed_text, "comma-separated seed vertices");

  auto* k0 = app.add_subcommand("k0", "K0 = coker(Id - Phi)");
  k0->add_option("FILE", c.file)->required();
  k0->add_option("--method", c.method)
      ->check(CLI::IsMember({"formula", "limit", "both"}))
      ->capture_default_str();
  add_limit_flags(k0, c);

  auto* k1 = app.add_subcommand("k1", "K1 = ker(Id - Phi)");
  k1->add_option("FILE", c.file)->required();
  k1->add_option("--method", c.method)
      ->check(CLI::IsMember({"formula", "kernel", "both"}))
      ->capture_default_str();
  add_limit_flags(k1, c);

  auto* contract = app.add_subcommand("contract", "K-groups before/after contracting an edge");
  contract->add_option("FILE", c.file)->required();
  contract->add_option("EDGE", edge)->required();
  add_limit_flags(contract, c);

  std::string matrix_path;
  auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of a matrix file");
  snf_cmd->add_option("MATRIXFILE", matrix_path)->required();

  auto* trace = app.add_subcommand("trace", "export the colimit trace");
  trace->add_option("FILE", c.file)->required();
  trace->add_option("--out", out_path)->required();
  trace->add_option("--format", format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  add_limit_flags(trace, c);

  auto* verify = app.add_subcommand("verify", "run every cross-check");
  verify->add_option("FILE", c.file)->required();
  add_limit_flags(verify, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bhk: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (!info->parsed() && !snf_cmd->parsed()) c.options();  // reject bad flags early
    if (info->parsed()) return cmd_info(c, out);
    if (k0->parsed()) return cmd_k0(c, out);
    if (k1->parsed()) return cmd_k1(c, out);
    if (contract->parsed()) return cmd_contract(c, edge, out);
    if (snf_cmd->parsed()) return cmd_snf(matrix_path, out);
    if (trace->parsed()) return cmd_trace(c, out_path, format, out);
    if (verify->parsed()) return cmd_verify(c, out);
  } catch (const ParseError& e) {
    err << "bhk: parse error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "bhk: " << e.what() << '\n';
    return kExitInputError;
  } catch (const UsageError& e) {
    err << "bhk: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    err << "bhk: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace bhk
