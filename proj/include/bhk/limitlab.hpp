#pragma once

// Direct limits along exhaustion chains of black-and-white fragments, and
// finitely supported kernels of Id - Phi on infinite graphs.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bhk/graph.hpp"
#include "bhk/zlinalg.hpp"

namespace bhk {

/// Finitely supported integer combination of directed edges.
using EdgeChain = std::map<std::string, Integer>;

struct LimitOptions {
  std::size_t max_depth = 12;
  std::size_t window = 3;
  /// Consecutive strictly increasing rank bounds needed to call divergence.
  std::size_t divergence_run = 5;
  /// Largest probe offset m when imaging stage n into stage n + m.
  std::size_t max_probe = 4;
  /// Stages with more generators than this are not built.
  std::size_t max_generators = 1100;

  void validate() const;
};

inline constexpr std::size_t kMaxDepth = 64;

enum class Verdict { stabilized, diverging, inconclusive };
std::string to_string(Verdict v);

struct ImageProbe {
  std::size_t offset;
  AbelianGroup image;
};

struct LimitStep {
  std::size_t index = 0;
  std::size_t omega_size = 0;
  std::size_t generators = 0;
  std::size_t black_relations = 0;
  AbelianGroup group;               // F(E_n) itself
  std::vector<ImageProbe> images;   // image of F(E_n) in F(E_{n+m}), m = 1..
  bool image_settled = false;       // last two probes agree

  const AbelianGroup& stable_image() const { return images.back().image; }
};

struct LimitTrace {
  std::vector<LimitStep> steps;
  Verdict verdict = Verdict::inconclusive;
  std::optional<AbelianGroup> value;
  std::size_t at_step = 0;
  /// Free rank of each step's stable image.
  std::vector<std::size_t> rank_lower_bounds;
  std::string note;
};

/// Smallest core vertex id.
VertexSet default_seed(const Presentation& p);

/// [E_0, ..., E_depth] with E_0 = bw_subgraph(seed), E_{n+1} = bw_extend(E_n).
std::vector<BwDoubleGraph> functor_chain(const AmbientGraph& amb,
                                         const VertexSet& seed,
                                         std::size_t depth);

/// Colimit of F(E_n) computed from the stable images of each stage in later
/// stages. Raw stage groups are recorded but are not the colimit: white
/// boundary generators inflate them. A stable window only counts once the
/// stage holds every core vertex.
LimitTrace colimit_k0(const AmbientGraph& amb, const VertexSet& seed,
                      const LimitOptions& opts = {});

struct KernelStep {
  std::size_t depth = 0;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t rank = 0;  // of the kernel at this depth
};

struct StableKernel {
  std::vector<KernelStep> steps;
  Verdict verdict = Verdict::inconclusive;
  std::size_t at_depth = 0;
  AbelianGroup group;
  std::vector<EdgeChain> basis;
};

/// Kernel of Id - Phi restricted to vectors supported on the depth-d
/// truncation, for growing d, until the basis repeats `window` times.
StableKernel kernel_stable(const AmbientGraph& amb,
                           const LimitOptions& opts = {});

}  // namespace bhk
