#include "pmcp/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace pmcp {

namespace {

struct EdgeTmp {
  uint32_t src, dst;
  int32_t label;
};

}  // namespace

RunGraph build_run_graph(const BuchiAutomaton& aut, const std::vector<uint32_t>& root_sys,
                         const SysSuccFn& sys_succ, const EdgeSatFn& edge_sat,
                         size_t max_vertices) {
  RunGraph g;
  std::unordered_map<uint64_t, uint32_t> index;
  std::deque<uint32_t> queue;
  auto intern = [&](uint32_t sys, uint32_t a) {
    uint64_t key = (static_cast<uint64_t>(sys) << 32) | a;
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (g.vkey.size() >= max_vertices)
      throw InputError("product exceeds the vertex limit");
    uint32_t id = static_cast<uint32_t>(g.vkey.size());
    g.vkey.push_back(key);
    g.acc.push_back(aut.accepting[a]);
    index.emplace(key, id);
    queue.push_back(id);
    return id;
  };
  for (uint32_t s : root_sys) g.roots.push_back(intern(s, aut.init));

  std::vector<EdgeTmp> edges;
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    uint32_t sys = g.sys_of(v), a = g.aut_of(v);
    // automaton moves available on this vertex's label
    std::vector<uint32_t> adst;
    for (const auto& e : aut.edges[a])
      if (edge_sat(sys, e)) adst.push_back(e.dst);
    std::sort(adst.begin(), adst.end());
    adst.erase(std::unique(adst.begin(), adst.end()), adst.end());
    if (adst.empty()) continue;
    sys_succ(sys, [&](uint32_t sys2, int32_t label) {
      for (uint32_t a2 : adst) edges.push_back({v, intern(sys2, a2), label});
    });
  }

  // bucket into CSR
  g.row_ptr.assign(g.vkey.size() + 1, 0);
  for (const auto& e : edges) ++g.row_ptr[e.src + 1];
  for (size_t i = 1; i < g.row_ptr.size(); ++i) g.row_ptr[i] += g.row_ptr[i - 1];
  g.edge_dst.resize(edges.size());
  g.edge_label.resize(edges.size());
  std::vector<uint32_t> fill(g.vkey.size(), 0);
  for (const auto& e : edges) {
    uint32_t at = g.row_ptr[e.src] + fill[e.src]++;
    g.edge_dst[at] = e.dst;
    g.edge_label[at] = e.label;
  }
  return g;
}

namespace {

struct Frame {
  uint32_t v;
  uint32_t next_edge;
};

}  // namespace

std::optional<LassoPath> find_accepting_lasso(const RunGraph& g) {
  size_t n = g.num_vertices();
  std::vector<uint8_t> color(n, 0);  // 0 white, 1 on blue stack, 2 blue done
  std::vector<uint8_t> red(n, 0);
  std::vector<Frame> blue;

  auto degree = [&](uint32_t v) { return g.row_ptr[v + 1] - g.row_ptr[v]; };
  auto label_between = [&](uint32_t a, uint32_t b) {
    for (uint32_t e = g.row_ptr[a]; e < g.row_ptr[a + 1]; ++e)
      if (g.edge_dst[e] == b) return g.edge_label[e];
    throw InternalError("ndfs: missing edge in extracted path");
  };

  for (uint32_t root : g.roots) {
    if (color[root]) continue;
    blue.clear();
    blue.push_back({root, 0});
    color[root] = 1;
    while (!blue.empty()) {
      Frame& f = blue.back();
      if (f.next_edge < degree(f.v)) {
        uint32_t dst = g.edge_dst[g.row_ptr[f.v] + f.next_edge++];
        if (color[dst] == 0) {
          color[dst] = 1;
          blue.push_back({dst, 0});
        }
        continue;
      }
      uint32_t seed = f.v;
      if (g.acc[seed] && !red[seed]) {
        // red search from the seed for the seed itself or a blue-stack vertex
        std::vector<Frame> rs{{seed, 0}};
        std::vector<uint8_t> on_red_path(n, 0);
        on_red_path[seed] = 1;
        bool found = false;
        uint32_t hit_target = 0;
        while (!rs.empty() && !found) {
          Frame& rf = rs.back();
          if (rf.next_edge < degree(rf.v)) {
            uint32_t dst = g.edge_dst[g.row_ptr[rf.v] + rf.next_edge++];
            if (dst == seed || color[dst] == 1) {
              found = true;
              hit_target = dst;
              break;
            }
            if (!red[dst]) {
              red[dst] = 1;
              rs.push_back({dst, 0});
              on_red_path[dst] = 1;
            }
            continue;
          }
          on_red_path[rf.v] = 0;
          rs.pop_back();
        }
        red[seed] = 1;
        if (found) {
          LassoPath out;
          size_t target_depth = blue.size() - 1;
          if (hit_target != seed) {
            for (size_t i = 0; i < blue.size(); ++i)
              if (blue[i].v == hit_target) {
                target_depth = i;
                break;
              }
          }
          for (size_t i = 0; i < target_depth; ++i)
            out.stem.push_back({blue[i].v, label_between(blue[i].v, blue[i + 1].v)});
          // cycle: blue segment target..seed, then the red path back to target
          std::vector<uint32_t> cyc;
          for (size_t i = target_depth; i < blue.size(); ++i) cyc.push_back(blue[i].v);
          for (const auto& rf : rs)
            if (cyc.empty() || cyc.back() != rf.v) cyc.push_back(rf.v);
          for (size_t i = 0; i < cyc.size(); ++i) {
            uint32_t nxt = cyc[(i + 1) % cyc.size()];
            out.cycle.push_back({cyc[i], label_between(cyc[i], nxt)});
          }
          for (size_t i = 0; i < out.cycle.size(); ++i)
            if (out.cycle[i].v == seed) {
              out.witnesses.push_back({i, false});
              break;
            }
          return out;
        }
      }
      color[f.v] = 2;
      blue.pop_back();
    }
  }
  return std::nullopt;
}

namespace {

/// Iterative Tarjan; scc_id is 1-based, 0 means unassigned.
struct TarjanScc {
  const RunGraph& g;
  std::vector<uint32_t> low, num, scc_id;
  std::vector<uint8_t> on_stack;
  std::vector<uint32_t> stack;
  uint32_t counter = 1, scc_count = 0;

  explicit TarjanScc(const RunGraph& graph)
      : g(graph),
        low(graph.num_vertices(), 0),
        num(graph.num_vertices(), 0),
        scc_id(graph.num_vertices(), 0),
        on_stack(graph.num_vertices(), 0) {}

  void run() {
    for (uint32_t root : g.roots)
      if (!num[root]) dfs(root);
  }

  void dfs(uint32_t start) {
    struct F {
      uint32_t v, edge;
    };
    std::vector<F> st{{start, 0}};
    num[start] = low[start] = counter++;
    on_stack[start] = 1;
    stack.push_back(start);
    while (!st.empty()) {
      F& f = st.back();
      if (f.edge < g.row_ptr[f.v + 1] - g.row_ptr[f.v]) {
        uint32_t dst = g.edge_dst[g.row_ptr[f.v] + f.edge++];
        if (!num[dst]) {
          num[dst] = low[dst] = counter++;
          on_stack[dst] = 1;
          stack.push_back(dst);
          st.push_back({dst, 0});
        } else if (on_stack[dst]) {
          low[f.v] = std::min(low[f.v], num[dst]);
        }
        continue;
      }
      uint32_t v = f.v;
      st.pop_back();
      if (!st.empty()) low[st.back().v] = std::min(low[st.back().v], low[v]);
      if (low[v] == num[v]) {
        ++scc_count;
        for (;;) {
          uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          scc_id[w] = scc_count;
          if (w == v) break;
        }
      }
    }
  }
};

}  // namespace

std::optional<LassoPath> find_fair_lasso(const RunGraph& g, uint64_t required_marks,
                                         const std::function<uint64_t(int32_t)>& label_marks) {
  if (g.num_vertices() == 0) return std::nullopt;
  TarjanScc tarjan(g);
  tarjan.run();

  size_t nv = g.num_vertices();
  std::unordered_map<uint32_t, uint64_t> scc_marks;
  std::unordered_map<uint32_t, uint32_t> scc_internal_edges;
  for (uint32_t v = 0; v < nv; ++v) {
    uint32_t id = tarjan.scc_id[v];
    if (g.acc[v]) scc_marks[id] |= 1;
    for (uint32_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
      if (tarjan.scc_id[g.edge_dst[e]] != id) continue;
      scc_marks[id] |= label_marks(g.edge_label[e]);
      ++scc_internal_edges[id];
    }
  }
  uint32_t target_scc = 0;
  for (uint32_t v = 0; v < nv && !target_scc; ++v) {
    uint32_t id = tarjan.scc_id[v];
    if ((scc_marks[id] & required_marks) == required_marks && scc_internal_edges[id] > 0)
      target_scc = id;
  }
  if (!target_scc) return std::nullopt;

  // stem: BFS from the roots to the first vertex of the target SCC
  std::vector<int64_t> parent(nv, -1);
  std::vector<int32_t> parent_label(nv, 0);
  std::deque<uint32_t> q;
  int64_t entry = -1;
  for (uint32_t r : g.roots) {
    if (parent[r] == -1) {
      parent[r] = -2;
      q.push_back(r);
    }
  }
  while (!q.empty() && entry < 0) {
    uint32_t v = q.front();
    q.pop_front();
    if (tarjan.scc_id[v] == target_scc) {
      entry = v;
      break;
    }
    for (uint32_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
      uint32_t dst = g.edge_dst[e];
      if (parent[dst] == -1) {
        parent[dst] = v;
        parent_label[dst] = g.edge_label[e];
        q.push_back(dst);
      }
    }
  }
  if (entry < 0) throw InternalError("fair SCC not reachable from the roots");

  LassoPath out;
  {
    std::vector<LassoPath::Entry> rev;
    uint32_t v = static_cast<uint32_t>(entry);
    while (parent[v] != -2) {
      rev.push_back({static_cast<uint32_t>(parent[v]), parent_label[v]});
      v = static_cast<uint32_t>(parent[v]);
    }
    std::reverse(rev.begin(), rev.end());
    out.stem = std::move(rev);
  }

  // cycle: chain BFS segments inside the SCC collecting every mark, close the loop
  std::vector<int64_t> par(nv, -1);
  std::vector<int32_t> par_label(nv, 0);
  struct Segment {
    std::vector<LassoPath::Entry> entries;
    uint32_t endpoint;
  };
  // goal(dst, edge_marks) is evaluated on every traversed in-SCC edge
  auto bfs_inside = [&](uint32_t from,
                        const std::function<bool(uint32_t, uint64_t)>& goal) -> Segment {
    std::fill(par.begin(), par.end(), -1);
    std::deque<uint32_t> bq{from};
    par[from] = -2;
    while (!bq.empty()) {
      uint32_t v = bq.front();
      bq.pop_front();
      for (uint32_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e) {
        uint32_t dst = g.edge_dst[e];
        if (tarjan.scc_id[dst] != target_scc) continue;
        if (goal(dst, label_marks(g.edge_label[e]))) {
          Segment seg;
          std::vector<LassoPath::Entry> rev{{v, g.edge_label[e]}};
          uint32_t w = v;
          while (par[w] != -2) {
            rev.push_back({static_cast<uint32_t>(par[w]), par_label[w]});
            w = static_cast<uint32_t>(par[w]);
          }
          std::reverse(rev.begin(), rev.end());
          seg.entries = std::move(rev);
          seg.endpoint = dst;
          return seg;
        }
        if (par[dst] == -1) {
          par[dst] = v;
          par_label[dst] = g.edge_label[e];
          bq.push_back(dst);
        }
      }
    }
    throw InternalError("mark unreachable inside fair SCC");
  };

  uint32_t cycle_start = static_cast<uint32_t>(entry);
  uint32_t cur = cycle_start;
  uint64_t have = g.acc[cycle_start] ? 1 : 0;
  std::vector<LassoPath::Entry> cyc;
  uint64_t missing = required_marks & ~have;
  while (missing) {
    Segment seg = bfs_inside(cur, [&](uint32_t v, uint64_t edge_marks) {
      if (edge_marks & missing) return true;
      return (missing & 1) != 0 && g.acc[v];
    });
    for (const auto& en : seg.entries) {
      cyc.push_back(en);
      have |= label_marks(en.label);
    }
    cur = seg.endpoint;
    if (g.acc[cur]) have |= 1;
    missing = required_marks & ~have;
  }
  if (cur != cycle_start || cyc.empty()) {
    Segment seg = bfs_inside(cur, [&](uint32_t v, uint64_t) { return v == cycle_start; });
    for (const auto& en : seg.entries) cyc.push_back(en);
  }
  out.cycle = std::move(cyc);

  uint64_t placed = 0;
  for (size_t i = 0; i < out.cycle.size(); ++i) {
    if (g.acc[out.cycle[i].v] && (required_marks & ~placed & 1)) {
      out.witnesses.push_back({i, false});
      placed |= 1;
    }
    uint64_t em = label_marks(out.cycle[i].label) & required_marks & ~placed;
    if (em) {
      out.witnesses.push_back({i, true});
      placed |= em;
    }
  }
  return out;
}

LassoPath periodic_counterexample(const LassoPath& p) {
  LassoPath out;

  // stem: splice out repeated vertices unconditionally
  {
    std::vector<LassoPath::Entry> kept;
    std::unordered_map<uint32_t, size_t> first;
    for (const auto& e : p.stem) {
      auto it = first.find(e.v);
      if (it != first.end()) {
        while (kept.size() > it->second) {
          first.erase(kept.back().v);
          kept.pop_back();
        }
      }
      first[e.v] = kept.size();
      kept.push_back(e);
    }
    out.stem = std::move(kept);
  }

  // cycle: splice unless a designated witness would be dropped
  {
    struct KeptEntry {
      size_t orig;
      LassoPath::Entry e;
    };
    std::vector<KeptEntry> kept;
    auto splice_allowed = [&](size_t s_orig, size_t t_orig) {
      for (const auto& w : p.witnesses) {
        if (w.edge_flavored) {
          if (w.pos >= s_orig && w.pos <= t_orig) return false;
        } else {
          if (w.pos > s_orig && w.pos <= t_orig) return false;
        }
      }
      return true;
    };
    for (size_t t = 0; t < p.cycle.size(); ++t) {
      const auto& e = p.cycle[t];
      bool spliced = false;
      for (size_t s = 0; s < kept.size(); ++s) {
        if (kept[s].e.v == e.v && splice_allowed(kept[s].orig, t)) {
          kept.resize(s);
          kept.push_back({t, e});
          spliced = true;
          break;
        }
      }
      if (!spliced) kept.push_back({t, e});
    }
    for (const auto& k : kept) {
      for (const auto& w : p.witnesses)
        if (k.orig == w.pos) out.witnesses.push_back({out.cycle.size(), w.edge_flavored});
      out.cycle.push_back(k.e);
    }
  }
  return out;
}

}  // namespace pmcp
