#include "pmcp/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace pmcp {

bool BuchiAutomaton::Edge::matches(const Letter& l) const {
  for (const Atom& a : pos)
    if (!l.contains(a)) return false;
  for (const Atom& a : neg)
    if (l.contains(a)) return false;
  return true;
}

namespace {

using NodeSet = std::set<const Formula*>;

struct TableauNode {
  std::set<int> incoming;  // -1 is the virtual initial node
  NodeSet news, olds, nexts;
};

/// Classic tableau expansion: states assert the formulas in `olds` about the
/// letter read on their incoming edges; `nexts` carries obligations to the
/// successor. Acceptance is generalized, one set per until subformula.
struct Tableau {
  std::vector<TableauNode> done;  // keyed by (olds, nexts)
  std::map<std::pair<NodeSet, NodeSet>, int> index;
  std::vector<const Formula*> untils;

  void collect_untils(const Formula& f) {
    if (f.op == Op::Until &&
        std::find(untils.begin(), untils.end(), &f) == untils.end())
      untils.push_back(&f);
    if (f.l) collect_untils(*f.l);
    if (f.r) collect_untils(*f.r);
  }

  void expand(TableauNode node) {
    if (node.news.empty()) {
      auto key = std::make_pair(node.olds, node.nexts);
      auto it = index.find(key);
      if (it != index.end()) {
        done[static_cast<size_t>(it->second)].incoming.insert(node.incoming.begin(),
                                                              node.incoming.end());
        return;
      }
      int id = static_cast<int>(done.size());
      index.emplace(key, id);
      done.push_back(node);
      TableauNode next;
      next.incoming = {id};
      next.news = done[static_cast<size_t>(id)].nexts;
      expand(std::move(next));
      return;
    }
    const Formula* f = *node.news.begin();
    node.news.erase(node.news.begin());
    if (node.olds.count(f)) {
      expand(std::move(node));
      return;
    }
    switch (f->op) {
      case Op::False:
        return;  // inconsistent node
      case Op::True:
        // kept in olds so until acceptance can see a satisfied right side
        node.olds.insert(f);
        expand(std::move(node));
        return;
      case Op::AtomOp:
      case Op::NegAtom: {
        // drop nodes asserting both a and !a
        for (const Formula* g : node.olds) {
          if (g->op != Op::AtomOp && g->op != Op::NegAtom) continue;
          if (g->atom == f->atom && g->op != f->op) return;
        }
        node.olds.insert(f);
        expand(std::move(node));
        return;
      }
      case Op::And: {
        node.olds.insert(f);
        node.news.insert(f->l.get());
        node.news.insert(f->r.get());
        expand(std::move(node));
        return;
      }
      case Op::Or: {
        TableauNode left = node;
        left.olds.insert(f);
        left.news.insert(f->l.get());
        expand(std::move(left));
        node.olds.insert(f);
        node.news.insert(f->r.get());
        expand(std::move(node));
        return;
      }
      case Op::Next: {
        node.olds.insert(f);
        node.nexts.insert(f->l.get());
        expand(std::move(node));
        return;
      }
      case Op::Until: {
        TableauNode left = node;
        left.olds.insert(f);
        left.news.insert(f->l.get());
        left.nexts.insert(f);
        expand(std::move(left));
        node.olds.insert(f);
        node.news.insert(f->r.get());
        expand(std::move(node));
        return;
      }
      case Op::Release: {
        TableauNode left = node;
        left.olds.insert(f);
        left.news.insert(f->r.get());
        left.nexts.insert(f);
        expand(std::move(left));
        node.olds.insert(f);
        node.news.insert(f->l.get());
        node.news.insert(f->r.get());
        expand(std::move(node));
        return;
      }
      case Op::Prompt:
        throw InputError("the automaton construction requires a prompt-free formula");
    }
  }
};

struct GBA {
  // state 0 is the virtual initial state; tableau node i is state i+1
  size_t states = 1;
  std::vector<std::vector<BuchiAutomaton::Edge>> edges;
  std::vector<std::vector<bool>> acc_sets;  // per until formula
};

GBA build_gba(const FormulaPtr& f) {
  Tableau tb;
  tb.collect_untils(*f);
  TableauNode root;
  root.incoming = {-1};
  root.news = {f.get()};
  tb.expand(std::move(root));

  GBA g;
  g.states = tb.done.size() + 1;
  g.edges.assign(g.states, {});
  for (size_t i = 0; i < tb.done.size(); ++i) {
    const TableauNode& node = tb.done[i];
    BuchiAutomaton::Edge e;
    e.dst = static_cast<uint32_t>(i + 1);
    for (const Formula* o : node.olds) {
      if (o->op == Op::AtomOp) e.pos.push_back(o->atom);
      if (o->op == Op::NegAtom) e.neg.push_back(o->atom);
    }
    std::sort(e.pos.begin(), e.pos.end());
    std::sort(e.neg.begin(), e.neg.end());
    for (int src : node.incoming)
      g.edges[static_cast<size_t>(src + 1)].push_back(e);
  }
  g.acc_sets.assign(tb.untils.size(), std::vector<bool>(g.states, false));
  for (size_t u = 0; u < tb.untils.size(); ++u) {
    const Formula* unt = tb.untils[u];
    g.acc_sets[u][0] = true;  // the virtual initial state constrains nothing
    for (size_t i = 0; i < tb.done.size(); ++i) {
      const TableauNode& node = tb.done[i];
      g.acc_sets[u][i + 1] =
          !node.olds.count(unt) || node.olds.count(unt->r.get());
    }
  }
  return g;
}

}  // namespace

BuchiAutomaton ltl_to_buchi(const FormulaPtr& f) {
  if (contains_prompt(*f)) throw InputError("ltl_to_buchi requires a prompt-free formula");
  GBA g = build_gba(f);
  size_t r = g.acc_sets.size();
  BuchiAutomaton out;
  if (r == 0) {
    out.edges = std::move(g.edges);
    out.init = 0;
    out.accepting.assign(out.num_states(), true);
    return out;
  }
  // counting degeneralization: track the next acceptance set to visit
  size_t n = g.states;
  out.edges.assign(n * (r + 1), {});
  out.accepting.assign(n * (r + 1), false);
  auto id = [&](size_t q, size_t c) { return static_cast<uint32_t>(c * n + q); };
  for (size_t q = 0; q < n; ++q) {
    for (size_t c = 0; c <= r; ++c) {
      for (const auto& e : g.edges[q]) {
        size_t base = (c == r) ? 0 : c;
        size_t nc = base;
        while (nc < r && g.acc_sets[nc][e.dst]) ++nc;
        BuchiAutomaton::Edge e2 = e;
        e2.dst = id(e.dst, nc);
        out.edges[id(q, c)].push_back(std::move(e2));
      }
      out.accepting[id(q, c)] = (c == r);
    }
  }
  out.init = id(0, 0);
  return out;
}

bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w) {
  size_t reps = w.rep_count();
  size_t n = a.num_states();
  auto vid = [&](size_t q, size_t p) { return p * n + q; };
  // product of automaton states with folded word positions; a run reads the
  // letter at position p while moving p -> p+1
  std::vector<char> reach(n * reps, 0);
  std::vector<size_t> stack;
  // initial edges read letter 0
  std::vector<std::pair<size_t, size_t>> init_edges;
  for (const auto& e : a.edges[a.init]) {
    if (!e.matches(w.at(0))) continue;
    size_t v = vid(e.dst, w.succ(0));
    if (!reach[v]) {
      reach[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    size_t v = stack.back();
    stack.pop_back();
    size_t q = v % n, p = v / n;
    for (const auto& e : a.edges[q]) {
      if (!e.matches(w.at(p))) continue;
      size_t u = vid(e.dst, w.succ(p));
      if (!reach[u]) {
        reach[u] = 1;
        stack.push_back(u);
      }
    }
  }
  // an accepting vertex on a cycle must be reachable; cycles only involve
  // positions in the periodic part
  for (size_t q = 0; q < n; ++q) {
    if (!a.accepting[q]) continue;
    for (size_t p = w.prefix.size(); p < reps; ++p) {
      size_t v = vid(q, p);
      if (!reach[v]) continue;
      // search for a cycle from v back to v
      std::vector<char> seen(n * reps, 0);
      std::vector<size_t> st{v};
      bool found = false;
      while (!st.empty() && !found) {
        size_t u = st.back();
        st.pop_back();
        size_t uq = u % n, up = u / n;
        for (const auto& e : a.edges[uq]) {
          if (!e.matches(w.at(up))) continue;
          size_t t = vid(e.dst, w.succ(up));
          if (t == v) {
            found = true;
            break;
          }
          if (!seen[t]) {
            seen[t] = 1;
            st.push_back(t);
          }
        }
      }
      if (found) return true;
    }
  }
  return false;
}

}  // namespace pmcp
