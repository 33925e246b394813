#pragma once

// K-theory of Cuntz-Krieger algebras of the Bass-Hashimoto operator:
// K0 = coker(Id - Phi), K1 = ker(Id - Phi).

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhk/graph.hpp"
#include "bhk/limitlab.hpp"
#include "bhk/zlinalg.hpp"

namespace bhk {

class LemmaHypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix of Phi on Z^(E^1); column e holds the coefficients of Phi(e).
/// Entry (e', e) is 1 iff r(e) = s(e') and e' != bar(e).
struct PhiMatrix {
  std::vector<std::string> edge_order;
  IntMatrix m;
};

PhiMatrix phi_matrix(const DoubleGraph& d);

/// 0-1 non-backtracking matrix: A[e][e'] = 1 iff r(e) = s(e') and e' != bar(e).
IntMatrix a_matrix(const DoubleGraph& d);

/// Id - Phi in the canonical edge order.
IntMatrix identity_minus_phi(const DoubleGraph& d);

struct KGroups {
  AbelianGroup k0;
  AbelianGroup k1;
  std::vector<std::string> edge_order;
  std::vector<IntVector> k1_basis;  // Hermite basis of ker(Id - Phi)
};

/// Direct computation for a finite connected graph with at least one edge.
KGroups k_groups_finite(const Multigraph& g);

/// Z^b + Z/(b-1), read with Z/0 = Z and Z/(-1) = 0.
AbelianGroup k0_formula_finite(std::size_t beta);
/// Torsion-free part of k0_formula_finite(beta).
AbelianGroup k1_formula_finite(std::size_t beta);

/// Presentation of F(b): one generator per edge, one relation (a column) per
/// black edge e, namely e - sum{e' : s(e') = r(e), e' != bar(e)}.
struct BwPresentation {
  std::vector<std::string> generators;
  std::vector<std::string> black_edges;
  IntMatrix relations;  // generators x black_edges
  AbelianGroup group;
};

BwPresentation bw_group(const BwDoubleGraph& b);

/// Given T on G + H with T x - x in G for every basis vector x of H, returns
/// the matrix of P o T restricted to G (P = id on G, P x = x - T x on H),
/// i.e. T_GG - T_GH T_HG. G keeps the ascending order of the remaining
/// coordinates. Cokernel and kernel are preserved.
IntMatrix reduce_lemma(const IntMatrix& t, std::span<const std::size_t> h_indices);

struct ContractionReport {
  std::string edge;
  KGroups before;
  KGroups after;
  bool groups_equal = false;
  /// reduce_lemma(Id - Phi_E, {x, x~}) == Id - Phi_E' entrywise.
  bool lemma_route_matches = false;

  bool ok() const { return groups_equal && lemma_route_matches; }
};

ContractionReport contract_and_compare(const Multigraph& g,
                                       const std::string& edge_id);

/// Prunes finite pendant branches of the core, then contracts every
/// remaining non-loop core edge: the core becomes a rose carrying all
/// attachments at its vertex.
Presentation canonical_reduce(const Presentation& p);

enum class K0Method { formula, limit, both };
enum class K1Method { formula, kernel, both };

struct K0Report {
  std::optional<AbelianGroup> closed_form;
  std::optional<LimitTrace> trace;
  bool agree = true;
  std::string detail;

  /// Closed form when present, else the stabilized colimit, else nothing.
  std::optional<AbelianGroup> value() const;
};

struct K1Report {
  std::optional<AbelianGroup> closed_form;
  std::optional<StableKernel> kernel;
  bool agree = true;
  std::string detail;

  std::optional<AbelianGroup> value() const;
};

/// Z^(beta + gamma) for an infinite presentation, and/or the colimit.
K0Report k0_infinite(const Presentation& p, K0Method method,
                     const LimitOptions& opts = {},
                     std::optional<VertexSet> seed = std::nullopt);

/// Z^beta for an infinite presentation, and/or the stable kernel.
K1Report k1_infinite(const Presentation& p, K1Method method,
                     const LimitOptions& opts = {});

}  // namespace bhk
