#include "pmcp/checker.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <unordered_map>

namespace pmcp {

namespace {

std::mutex audit_mutex;
EmissionAudit audit_state;

void record_emission(bool bound_ok) {
  std::lock_guard<std::mutex> lock(audit_mutex);
  ++audit_state.emissions;
  if (!bound_ok) ++audit_state.bound_violations;
}

}  // namespace

EmissionAudit emission_audit() {
  std::lock_guard<std::mutex> lock(audit_mutex);
  return audit_state;
}

void reset_emission_audit() {
  std::lock_guard<std::mutex> lock(audit_mutex);
  audit_state = {};
}

FormulaPtr bind_indices_to(const IndexedFormula& f, const std::vector<int>& procs) {
  if (procs.size() != f.vars.size())
    throw InputError("index binding arity mismatch");
  IndexedFormula g = f;
  // reuse bind_indices by renaming: build explicitly instead
  struct Rec {
    const std::vector<std::string>& vars;
    const std::vector<int>& procs;
    FormulaPtr run(const FormulaPtr& fm) {
      if (fm->op == Op::AtomOp || fm->op == Op::NegAtom) {
        if (fm->atom.role == Atom::Role::IndexedVar) {
          for (size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == fm->atom.var) {
              Atom a = Atom::idx(fm->atom.proc_letter, procs[i], fm->atom.state);
              return fm->op == Op::AtomOp ? Formula::mk_atom(a) : Formula::mk_neg_atom(a);
            }
          }
          throw InputError("unquantified index variable '" + fm->atom.var + "'");
        }
        return fm;
      }
      if (!fm->l) return fm;
      auto out = std::make_shared<Formula>(*fm);
      out->l = run(fm->l);
      if (fm->r) out->r = run(fm->r);
      return out;
    }
  } rec{f.vars, procs};
  return rec.run(f.body);
}

// --- guarded products ---

namespace {

struct CompiledEdge {
  std::vector<std::pair<int, StateId>> pos, neg;
};

struct CompiledAut {
  std::vector<std::vector<CompiledEdge>> edges;  // parallel to BuchiAutomaton::edges
};

CompiledAut compile_guarded(const BuchiAutomaton& aut, const GuardedSystem& sys) {
  CompiledAut out;
  out.edges.resize(aut.edges.size());
  auto compile_atom = [&](const Atom& a) -> std::pair<int, StateId> {
    if (a.role == Atom::Role::Ctrl) {
      auto id = sys.table.find(a.state);
      if (!id || !sys.A.has_state(*id))
        throw InputError("unknown controller state '" + a.state + "'");
      return {0, *id};
    }
    if (a.role == Atom::Role::Indexed && a.proc_letter == 'B') {
      if (a.index < 1 || a.index > sys.n)
        throw InputError("process index B[" + std::to_string(a.index) +
                         "] out of range for n = " + std::to_string(sys.n));
      auto id = sys.table.find(a.state);
      if (!id || !sys.B.has_state(*id))
        throw InputError("unknown B state '" + a.state + "'");
      return {a.index, *id};
    }
    throw InputError("atom '" + a.str() + "' does not fit a guarded system");
  };
  for (size_t s = 0; s < aut.edges.size(); ++s) {
    for (const auto& e : aut.edges[s]) {
      CompiledEdge ce;
      for (const Atom& a : e.pos) ce.pos.push_back(compile_atom(a));
      for (const Atom& a : e.neg) ce.neg.push_back(compile_atom(a));
      out.edges[s].push_back(std::move(ce));
    }
  }
  return out;
}

struct GuardedProduct {
  const GuardedSystem& sys;
  uint64_t b;
  std::vector<int> counter_procs;
  std::vector<CounterState> states;
  std::unordered_map<CounterState, uint32_t, CounterStateHash> index;
  std::vector<std::vector<std::pair<uint32_t, int32_t>>> succ_cache;
  std::vector<bool> succ_ready;

  GuardedProduct(const GuardedSystem& s, uint64_t bound, std::vector<int> cprocs)
      : sys(s), b(bound), counter_procs(std::move(cprocs)) {}

  uint32_t intern(const CounterState& cs) {
    auto it = index.find(cs);
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(states.size());
    states.push_back(cs);
    index.emplace(cs, id);
    succ_cache.emplace_back();
    succ_ready.push_back(false);
    return id;
  }

  const std::vector<std::pair<uint32_t, int32_t>>& successors_of(uint32_t id) {
    if (!succ_ready[id]) {
      CounterState cs = states[id];  // copy: interning may reallocate
      std::vector<std::pair<uint32_t, int32_t>> out;
      for (auto& [nxt, mover] : counter_successors(sys, cs, b, counter_procs))
        out.emplace_back(intern(nxt), mover);
      succ_cache[id] = std::move(out);
      succ_ready[id] = true;
    }
    return succ_cache[id];
  }
};

SystemLasso decode_lasso(const GuardedProduct& gp, const RunGraph& g, const LassoPath& p) {
  SystemLasso out;
  for (const auto& e : p.stem)
    out.prefix.push_back({gp.states[g.sys_of(e.v)].s, e.label});
  for (const auto& e : p.cycle)
    out.period.push_back({gp.states[g.sys_of(e.v)].s, e.label});
  return out;
}

long double lemma_bound(const GuardedSystem& sys, uint64_t b, size_t aut_states) {
  long double bound = static_cast<long double>(sys.A.states.size());
  for (int i = 0; i < sys.n; ++i) bound *= static_cast<long double>(sys.B.states.size());
  for (int i = 0; i < sys.n + 1; ++i) bound *= static_cast<long double>(b);
  bound *= static_cast<long double>(aut_states);
  return bound;
}

}  // namespace

Verdict check_ltl(const GuardedSystem& sys, const FormulaPtr& f, const FairnessSpec& fair,
                  bool deadlock_diagnostic, size_t max_vertices) {
  if (contains_prompt(*f)) throw InputError("check_ltl needs a prompt-free formula");
  if (fair.kind == FairnessKind::Unconditional)
    throw InputError("check_ltl needs a bounded fairness kind");
  if (fair.b < 1) throw InputError("fairness bound must be >= 1");

  Verdict out;
  if (deadlock_diagnostic) out.deadlock_states = find_deadlocks(sys).size();

  BuchiAutomaton aut = ltl_to_buchi(negate(f));
  CompiledAut ca = compile_guarded(aut, sys);

  std::vector<int> counter_procs;
  if (fair.kind == FairnessKind::GlobalBounded) {
    for (int p = 0; p <= sys.n; ++p) counter_procs.push_back(p);
  } else {
    counter_procs = fair.scope;
    std::sort(counter_procs.begin(), counter_procs.end());
    counter_procs.erase(std::unique(counter_procs.begin(), counter_procs.end()),
                        counter_procs.end());
    if (counter_procs.empty()) throw InputError("local bounded fairness needs a scope");
  }

  GuardedProduct gp(sys, fair.b, counter_procs);
  uint32_t root = gp.intern(initial_counter_state(sys, counter_procs));

  // pair each automaton edge with its compiled twin (same indexing)
  std::unordered_map<const BuchiAutomaton::Edge*, const CompiledEdge*> twin;
  for (size_t s = 0; s < aut.edges.size(); ++s)
    for (size_t i = 0; i < aut.edges[s].size(); ++i)
      twin.emplace(&aut.edges[s][i], &ca.edges[s][i]);

  auto sat = [&](uint32_t sysid, const BuchiAutomaton::Edge& e) {
    const CounterState& cs = gp.states[sysid];
    if (cs.failed) return false;
    const CompiledEdge* c = twin.at(&e);
    for (auto& [p, q] : c->pos)
      if (cs.s.of(p) != q) return false;
    for (auto& [p, q] : c->neg)
      if (cs.s.of(p) == q) return false;
    return true;
  };

  auto succ = [&](uint32_t sysid, const std::function<void(uint32_t, int32_t)>& emit) {
    for (auto& [dst, mover] : gp.successors_of(sysid)) emit(dst, mover);
  };

  RunGraph rg = build_run_graph(aut, {root}, succ, sat, max_vertices);
  out.stats.product_vertices = rg.num_vertices();
  out.stats.product_edges = rg.num_edges();

  std::optional<LassoPath> lasso;
  if (fair.kind == FairnessKind::GlobalBounded) {
    lasso = find_accepting_lasso(rg);
  } else {
    // u-fairness for everyone as edge marks beside the acceptance bit
    uint64_t required = 1;
    for (int p = 0; p <= sys.n; ++p) required |= (2ull << p);
    lasso = find_fair_lasso(
        rg, required, [](int32_t label) -> uint64_t { return 2ull << label; });
  }
  if (!lasso) return out;

  LassoPath spliced = periodic_counterexample(*lasso);
  SystemLasso ce = decode_lasso(gp, rg, spliced);

  // the emitted lasso must replay, be fair, and falsify the formula
  if (auto err = replay_error(sys, ce))
    throw InternalError("counterexample replay failed: " + *err);
  if (!is_fair(ce, fair, sys.proc_count()))
    throw InternalError("counterexample is not fair as claimed");
  if (eval(project(sys, ce, [&] {
             std::vector<int> all;
             for (int p = 0; p <= sys.n; ++p) all.push_back(p);
             return all;
           }()),
           *f, 0, 0))
    throw InternalError("counterexample does not falsify the formula");

  bool ok;
  if (fair.kind == FairnessKind::GlobalBounded) {
    long double bound = lemma_bound(sys, fair.b, aut.num_states());
    ok = static_cast<long double>(ce.prefix.size()) <= bound &&
         static_cast<long double>(ce.period.size()) <= 2 * bound;
  } else {
    long double verts = static_cast<long double>(rg.num_vertices());
    long double zones = static_cast<long double>(spliced.cycle.size() ? sys.n + 3 : 1);
    ok = static_cast<long double>(ce.prefix.size()) <= verts &&
         static_cast<long double>(ce.period.size()) <= zones * verts;
  }
  record_emission(ok);
  out.bound_ok = ok;
  out.holds = false;
  out.counterexample = std::move(ce);
  return out;
}

namespace {

template <class CheckFn, class Verd>
PromptVerdict prompt_search(const FormulaPtr& f, std::optional<uint64_t> k_max_opt,
                            const CheckFn& check, Verd*) {
  PromptVerdict out;
  uint64_t k = 0;
  std::optional<uint64_t> k_max = k_max_opt;
  for (;;) {
    Verd v = check(instantiate_k(f, k), k == 0);
    out.stats.product_vertices += v.stats.product_vertices;
    out.stats.product_edges += v.stats.product_edges;
    if (k == 0 && !k_max) k_max = v.stats.product_vertices + 1;
    out.k_max = *k_max;
    if (v.holds) {
      // k-monotonicity: the next bound must pass as well
      Verd v2 = check(instantiate_k(f, k + 1), false);
      out.stats.product_vertices += v2.stats.product_vertices;
      out.stats.product_edges += v2.stats.product_edges;
      if (!v2.holds)
        throw InternalError("k-monotonicity violated between k = " + std::to_string(k) +
                            " and k + 1");
      out.satisfied = true;
      out.k = k;
      return out;
    }
    if constexpr (std::is_same_v<Verd, Verdict>) {
      out.sample_counterexample = v.counterexample;
    } else {
      out.sample_token_counterexample = v.counterexample;
    }
    if (k >= *k_max) {
      out.satisfied = false;
      out.k = k;
      return out;
    }
    ++k;
  }
}

}  // namespace

PromptVerdict check_prompt(const GuardedSystem& sys, const FormulaPtr& f,
                           const FairnessSpec& fair, std::optional<uint64_t> k_max,
                           size_t max_vertices) {
  if (fair.kind == FairnessKind::Unconditional)
    throw InputError("prompt checking needs a bounded fairness kind");
  auto check = [&](const FormulaPtr& g, bool diag) {
    return check_ltl(sys, g, fair, diag, max_vertices);
  };
  PromptVerdict out = prompt_search(f, k_max, check, static_cast<Verdict*>(nullptr));
  out.b = fair.b;
  return out;
}

// --- token products ---

namespace {

struct TokenCounterState {
  TokenConfig c;
  std::vector<uint8_t> counters;

  bool operator==(const TokenCounterState&) const = default;
};

struct TokenCounterHash {
  size_t operator()(const TokenCounterState& t) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& q : t.c.q) h = (h ^ ((q.base << 1) | q.bit)) * 0x100000001b3ull;
    for (uint8_t x : t.counters) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

struct TokenProduct {
  const TokenSystem& sys;
  uint64_t b;
  std::vector<TokenCounterState> states;
  std::unordered_map<TokenCounterState, uint32_t, TokenCounterHash> index;
  std::vector<std::vector<std::pair<uint32_t, int32_t>>> succ_cache;
  std::vector<bool> succ_ready;

  TokenProduct(const TokenSystem& s, uint64_t bound) : sys(s), b(bound) {}

  static int32_t encode(const TokenActionLabel& a) {
    if (a.sync) return static_cast<int32_t>((1 << 20) | (a.from << 10) | a.to);
    return a.proc;
  }
  static TokenActionLabel decode(int32_t label) {
    if (label & (1 << 20))
      return TokenActionLabel::pass((label >> 10) & 0x3ff, label & 0x3ff);
    return TokenActionLabel::eps(label);
  }

  uint32_t intern(const TokenCounterState& cs) {
    auto it = index.find(cs);
    if (it != index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(states.size());
    states.push_back(cs);
    index.emplace(cs, id);
    succ_cache.emplace_back();
    succ_ready.push_back(false);
    return id;
  }

  const std::vector<std::pair<uint32_t, int32_t>>& successors_of(uint32_t id) {
    if (!succ_ready[id]) {
      TokenCounterState cs = states[id];
      std::vector<std::pair<uint32_t, int32_t>> out;
      for (auto& [c2, lab] : token_successors(sys, cs.c)) {
        TokenCounterState nxt;
        nxt.c = c2;
        nxt.counters = cs.counters;
        bool fail = false;
        for (int p = 1; p <= sys.G.n; ++p) {
          auto& ctr = nxt.counters[static_cast<size_t>(p) - 1];
          if (lab.sync && lab.to == p) {
            ctr = 0;
          } else if (static_cast<uint64_t>(ctr) + 1 > b) {
            fail = true;
            break;
          } else {
            ++ctr;
          }
        }
        if (fail) continue;  // the failure sink has no outgoing transitions
        out.emplace_back(intern(nxt), encode(lab));
      }
      succ_cache[id] = std::move(out);
      succ_ready[id] = true;
    }
    return succ_cache[id];
  }
};

struct CompiledTokenEdge {
  std::vector<std::pair<int, TokenState>> pos, neg;
};

}  // namespace

TokenVerdict check_token_ltl(const TokenSystem& sys, const FormulaPtr& f, uint64_t b,
                             size_t max_vertices) {
  if (contains_prompt(*f)) throw InputError("check_token_ltl needs a prompt-free formula");
  if (b < 1) throw InputError("fairness bound must be >= 1");
  TokenVerdict out;

  BuchiAutomaton aut = ltl_to_buchi(negate(f));
  std::unordered_map<const BuchiAutomaton::Edge*, CompiledTokenEdge> twin;
  auto compile_atom = [&](const Atom& a) -> std::pair<int, TokenState> {
    if (a.role != Atom::Role::Indexed || a.proc_letter != 'T')
      throw InputError("atom '" + a.str() + "' does not fit a token system");
    if (a.index < 1 || a.index > sys.G.n)
      throw InputError("process index T[" + std::to_string(a.index) + "] out of range");
    auto st = sys.T.parse_state(a.state);
    if (!st) throw InputError("unknown token state '" + a.state + "'");
    return {a.index, *st};
  };
  for (auto& row : aut.edges) {
    for (auto& e : row) {
      CompiledTokenEdge ce;
      for (const Atom& a : e.pos) ce.pos.push_back(compile_atom(a));
      for (const Atom& a : e.neg) ce.neg.push_back(compile_atom(a));
      twin.emplace(&e, std::move(ce));
    }
  }

  TokenProduct tp(sys, b);
  std::vector<uint32_t> roots;
  for (const TokenConfig& c : sys.initial_configs()) {
    TokenCounterState cs;
    cs.c = c;
    cs.counters.assign(static_cast<size_t>(sys.G.n), 0);
    roots.push_back(tp.intern(cs));
  }

  auto sat = [&](uint32_t sysid, const BuchiAutomaton::Edge& e) {
    const TokenConfig& c = tp.states[sysid].c;
    const CompiledTokenEdge& ce = twin.at(&e);
    for (auto& [p, q] : ce.pos)
      if (!(c.q[static_cast<size_t>(p) - 1] == q)) return false;
    for (auto& [p, q] : ce.neg)
      if (c.q[static_cast<size_t>(p) - 1] == q) return false;
    return true;
  };
  auto succ = [&](uint32_t sysid, const std::function<void(uint32_t, int32_t)>& emit) {
    for (auto& [dst, lab] : tp.successors_of(sysid)) emit(dst, lab);
  };

  RunGraph rg = build_run_graph(aut, roots, succ, sat, max_vertices);
  out.stats.product_vertices = rg.num_vertices();
  out.stats.product_edges = rg.num_edges();

  auto lasso = find_accepting_lasso(rg);
  if (!lasso) return out;
  LassoPath spliced = periodic_counterexample(*lasso);

  TokenLasso ce;
  for (const auto& e : spliced.stem)
    ce.prefix.push_back({tp.states[rg.sys_of(e.v)].c, TokenProduct::decode(e.label)});
  for (const auto& e : spliced.cycle)
    ce.period.push_back({tp.states[rg.sys_of(e.v)].c, TokenProduct::decode(e.label)});

  if (auto err = token_replay_error(sys, ce))
    throw InternalError("token counterexample replay failed: " + *err);
  if (!token_fair(ce, b)) throw InternalError("token counterexample is not fair");
  std::vector<int> all;
  for (int p = 1; p <= sys.G.n; ++p) all.push_back(p);
  if (eval(token_project(sys, ce, all), *f, 0, 0))
    throw InternalError("token counterexample does not falsify the formula");

  long double verts = static_cast<long double>(rg.num_vertices());
  bool ok = static_cast<long double>(ce.prefix.size()) <= verts &&
            static_cast<long double>(ce.period.size()) <= 2 * verts;
  record_emission(ok);
  out.bound_ok = ok;
  out.holds = false;
  out.counterexample = std::move(ce);
  return out;
}

PromptVerdict check_token_prompt(const TokenSystem& sys, const FormulaPtr& f, uint64_t b,
                                 std::optional<uint64_t> k_max, size_t max_vertices) {
  auto check = [&](const FormulaPtr& g, bool) {
    return check_token_ltl(sys, g, b, max_vertices);
  };
  PromptVerdict out = prompt_search(f, k_max, check, static_cast<TokenVerdict*>(nullptr));
  out.b = b;
  return out;
}

// --- sweeps ---

const SweepEntry* SweepReport::entry_for(uint64_t b) const {
  for (const auto& e : entries)
    if (e.b == b) return &e;
  return nullptr;
}

namespace {

SweepReport run_sweep(const std::vector<uint64_t>& bs, unsigned threads,
                      const std::function<PromptVerdict(uint64_t)>& slice) {
  SweepReport out;
  std::vector<uint64_t> sorted = bs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (threads <= 1 || sorted.size() <= 1) {
    for (uint64_t b : sorted) out.entries.push_back({b, slice(b)});
  } else {
    std::vector<std::future<PromptVerdict>> futs;
    for (uint64_t b : sorted)
      futs.push_back(std::async(std::launch::async, [&slice, b] { return slice(b); }));
    for (size_t i = 0; i < sorted.size(); ++i)
      out.entries.push_back({sorted[i], futs[i].get()});
  }
  bool violated_seen = false;
  for (const auto& e : out.entries) {
    if (!e.verdict.satisfied) violated_seen = true;
    else if (violated_seen)
      throw InternalError("violation did not persist at a larger fairness bound");
    out.all_satisfied = out.all_satisfied && e.verdict.satisfied;
  }
  return out;
}

}  // namespace

SweepReport b_sweep(const GuardedSystem& sys, const FormulaPtr& f, FairnessMode mode,
                    const std::vector<int>& scope, const std::vector<uint64_t>& bs,
                    std::optional<uint64_t> k_max, unsigned threads) {
  return run_sweep(bs, threads, [&](uint64_t b) {
    FairnessSpec fair = mode == FairnessMode::GlobalBounded
                            ? FairnessSpec::global_bounded(b)
                            : FairnessSpec::local_bounded(b, scope);
    return check_prompt(sys, f, fair, k_max);
  });
}

SweepReport b_sweep_token(const TokenSystem& sys, const FormulaPtr& f,
                          const std::vector<uint64_t>& bs, std::optional<uint64_t> k_max,
                          unsigned threads) {
  return run_sweep(bs, threads,
                   [&](uint64_t b) { return check_token_prompt(sys, f, b, k_max); });
}

// --- parameterized checks ---

ParamReport check_parameterized(const SystemFile& file, const IndexedFormula& f,
                                FairnessMode mode, const std::vector<uint64_t>& bs,
                                std::optional<uint64_t> k_max, unsigned threads) {
  if (f.h() < 1) throw InputError("parameterized checking needs an indexed formula");
  ParamReport out;
  GuardedSystem probe = make_system(file, static_cast<int>(f.h()) + 1);
  out.classification = classify(probe);
  if (out.classification.cls == SystemClass::Mixed)
    throw InputError("no cutoff rows apply to mixed systems");

  CutoffQuery q;
  q.cls = out.classification.cls;
  q.fairness = mode;
  q.logic = contains_prompt(*f.body) ? LogicKind::PromptNoX : LogicKind::LtlNoX;
  q.h = f.h();
  q.qb = file.templates.at(file.b_name).states.size();
  out.cutoff = cutoff_for(q);
  if (!out.cutoff.known) throw InputError(out.cutoff.citation);

  if (q.cls == SystemClass::Conjunctive) {
    if (!out.classification.neutral_inits)
      throw InputError("conjunctive guards must contain both initial states");
    if (mode == FairnessMode::GlobalBounded && !out.classification.bounded_initializing)
      throw InputError("the global-bounded conjunctive rows require a bounded-initializing "
                       "B template");
    if (!out.classification.bounded_initializing)
      out.notes.push_back("initializing side condition not structurally verified "
                          "(B has a cycle avoiding its initial state)");
  }

  out.checked_size = out.cutoff.c;
  GuardedSystem sys = make_system(file, static_cast<int>(out.cutoff.c));
  FormulaPtr body = reduce_indexed(f, out.cutoff.c);
  std::vector<int> scope{0};
  for (size_t i = 1; i <= f.h(); ++i) scope.push_back(static_cast<int>(i));
  out.sweep = b_sweep(sys, body, mode, scope, bs, k_max, threads);
  out.notes.push_back("verdict transfers to every size n >= " +
                      std::to_string(out.cutoff.c) + " by " + out.cutoff.citation);
  return out;
}

ParamReport check_parameterized_token(const TokenProcess& t, const TokenGraph& g, int vg,
                                      int vh, const IndexedFormula& f,
                                      const std::vector<uint64_t>& bs,
                                      std::optional<uint64_t> k_max, unsigned threads) {
  if (f.h() < 1 || f.h() > 2)
    throw InputError("token checking supports 1- and 2-indexed formulas");
  ParamReport out;
  CutoffQuery q;
  q.token = true;
  q.h = f.h();
  q.logic = contains_prompt(*f.body) ? LogicKind::PromptNoX : LogicKind::LtlNoX;
  out.cutoff = cutoff_for(q);

  ConnectivityVector v = connectivity_vector(g, vg, vh);
  auto rg = synth_reduction_graph(v);
  if (!rg)
    throw InputError("no 4-vertex graph realizes the connectivity vector");
  out.reduction_graph = rg;

  // the verification itself runs on the 4-vertex reduction
  TokenSystem reduced{t, rg->g};
  FormulaPtr body = f.h() == 2 ? bind_indices_to(f, {rg->i, rg->j})
                               : bind_indices_to(f, {rg->i});
  if (f.h() == 1)
    out.notes.push_back("1-indexed formula checked through the 2-indexed reduction with a "
                        "dummy second vertex");
  out.checked_size = 4;
  out.sweep = b_sweep_token(reduced, body, bs, k_max, threads);
  out.notes.push_back("verdict transfers to every token system whose designated pair has "
                      "connectivity vector matching the input");
  return out;
}

}  // namespace pmcp
