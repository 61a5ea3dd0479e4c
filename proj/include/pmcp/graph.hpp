#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pmcp/buchi.hpp"

namespace pmcp {

/// Materialized product of a system with a Buchi automaton. System states are
/// opaque 32-bit ids handed out by the caller; a vertex pairs such an id with
/// an automaton state. Edges follow the synchronous-product rule: the
/// automaton reads the label of the source system state.
struct RunGraph {
  std::vector<uint64_t> vkey;      // (sys << 32) | aut
  std::vector<uint32_t> row_ptr;   // CSR offsets, size V+1
  std::vector<uint32_t> edge_dst;
  std::vector<int32_t> edge_label;
  std::vector<uint32_t> roots;
  std::vector<bool> acc;           // automaton acceptance per vertex

  size_t num_vertices() const { return vkey.size(); }
  size_t num_edges() const { return edge_dst.size(); }
  uint32_t sys_of(uint32_t v) const { return static_cast<uint32_t>(vkey[v] >> 32); }
  uint32_t aut_of(uint32_t v) const { return static_cast<uint32_t>(vkey[v] & 0xffffffffu); }
};

using SysSuccFn = std::function<void(uint32_t, const std::function<void(uint32_t, int32_t)>&)>;
using EdgeSatFn = std::function<bool(uint32_t, const BuchiAutomaton::Edge&)>;

/// Breadth-first materialization of the reachable product.
RunGraph build_run_graph(const BuchiAutomaton& aut, const std::vector<uint32_t>& root_sys,
                         const SysSuccFn& sys_succ, const EdgeSatFn& edge_sat,
                         size_t max_vertices = 50000000);

/// Accepting lasso through the product. Labels annotate the edge leaving each
/// entry; the last cycle label closes the loop.
struct LassoPath {
  struct Entry {
    uint32_t v;
    int32_t label;
  };
  std::vector<Entry> stem;
  std::vector<Entry> cycle;
  /// Witness positions in the cycle that splicing must preserve.
  struct Witness {
    size_t pos;
    bool edge_flavored;
  };
  std::vector<Witness> witnesses;
};

/// Nested depth-first search for a cycle through an accepting vertex.
std::optional<LassoPath> find_accepting_lasso(const RunGraph& g);

/// Generalized variant: a fair cycle must carry every bit of required_marks,
/// where vertices contribute bit 0 when accepting and edges contribute
/// label_marks(label). Found via SCC decomposition.
std::optional<LassoPath> find_fair_lasso(const RunGraph& g, uint64_t required_marks,
                                         const std::function<uint64_t(int32_t)>& label_marks);

/// Cycle removal: repeated vertices are spliced out of the stem
/// unconditionally and out of the cycle unless the splice would drop a
/// witness. The result visits the same witnesses and still closes.
LassoPath periodic_counterexample(const LassoPath& p);

}  // namespace pmcp
