#include "pmcp/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace pmcp {

StateId StateTable::intern(const std::string& name) {
  auto it = ids.find(name);
  if (it != ids.end()) return it->second;
  StateId id = static_cast<StateId>(names.size());
  names.push_back(name);
  ids.emplace(name, id);
  return id;
}

std::optional<StateId> StateTable::find(const std::string& name) const {
  auto it = ids.find(name);
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

bool Guard::holds_for(StateId q) const {
  if (any) return true;
  return std::binary_search(set.begin(), set.end(), q);
}

bool ProcessTemplate::has_state(StateId q) const {
  return std::find(states.begin(), states.end(), q) != states.end();
}

bool GlobalState::operator<(const GlobalState& o) const {
  return std::tie(a, b) < std::tie(o.a, o.b);
}

void GlobalState::set(int proc, StateId q) {
  if (proc == 0)
    a = q;
  else
    b[static_cast<size_t>(proc) - 1] = q;
}

size_t GlobalStateHash::operator()(const GlobalState& s) const {
  size_t h = s.a * 0x9e3779b97f4a7c15ull;
  for (StateId q : s.b) h = (h ^ q) * 0x100000001b3ull;
  return h;
}

GlobalState GuardedSystem::initial() const {
  GlobalState s;
  s.a = A.init;
  s.b.assign(static_cast<size_t>(n), B.init);
  return s;
}

std::string GuardedSystem::proc_name(int proc) const {
  return proc == 0 ? "A" : "B" + std::to_string(proc);
}

const Step& SystemLasso::at(size_t t) const {
  if (t < prefix.size()) return prefix[t];
  return period[(t - prefix.size()) % period.size()];
}

const GlobalState& SystemLasso::state_after(size_t t) const {
  size_t u = t + 1;
  if (u < prefix.size()) return prefix[u].state;
  if (period.empty()) throw InternalError("lasso with empty period");
  return period[(u - prefix.size()) % period.size()].state;
}

FairnessSpec FairnessSpec::unconditional() { return {FairnessKind::Unconditional, 0, {}}; }
FairnessSpec FairnessSpec::global_bounded(uint64_t b) {
  return {FairnessKind::GlobalBounded, b, {}};
}
FairnessSpec FairnessSpec::local_bounded(uint64_t b, std::vector<int> scope) {
  return {FairnessKind::LocalBounded, b, std::move(scope)};
}

size_t CounterStateHash::operator()(const CounterState& cs) const {
  size_t h = GlobalStateHash{}(cs.s);
  for (uint8_t c : cs.counters) h = (h ^ c) * 0x100000001b3ull;
  return h ^ (cs.failed ? 0xdeadull : 0);
}

Classification classify(const GuardedSystem& sys) {
  Classification out;
  size_t exists_guards = 0, forall_guards = 0;
  bool neutral = true;
  for (const ProcessTemplate* t : {&sys.A, &sys.B}) {
    for (const auto& tr : t->transitions) {
      if (tr.guard.forall) {
        ++forall_guards;
        if (!tr.guard.holds_for(sys.A.init) || !tr.guard.holds_for(sys.B.init))
          neutral = false;
      } else {
        ++exists_guards;
      }
    }
  }
  if (exists_guards > 0 && forall_guards > 0) {
    out.cls = SystemClass::Mixed;
  } else if (exists_guards > 0) {
    out.cls = SystemClass::Disjunctive;
  } else {
    out.cls = SystemClass::Conjunctive;  // all-forall, or degenerate guardless
    if (exists_guards == 0 && forall_guards == 0)
      out.notes.push_back("no guards; class is degenerate");
  }
  out.neutral_inits = neutral;
  if (out.cls == SystemClass::Conjunctive && !neutral)
    out.notes.push_back("universal guards do not all contain the initial states");

  // every cycle of B contains init_B <=> B minus init_B is acyclic
  std::map<StateId, std::vector<StateId>> adj;
  for (const auto& tr : sys.B.transitions)
    if (tr.from != sys.B.init && tr.to != sys.B.init) adj[tr.from].push_back(tr.to);
  std::map<StateId, int> mark;  // 0 new, 1 on stack, 2 done
  bool cyclic = false;
  std::function<void(StateId)> dfs = [&](StateId q) {
    mark[q] = 1;
    for (StateId r : adj[q]) {
      if (mark[r] == 1) cyclic = true;
      else if (mark[r] == 0 && !cyclic) dfs(r);
    }
    mark[q] = 2;
  };
  for (StateId q : sys.B.states)
    if (q != sys.B.init && mark[q] == 0 && !cyclic) dfs(q);
  out.bounded_initializing = !cyclic;
  return out;
}

namespace {

bool guard_enabled(const GuardedSystem& sys, const GlobalState& s, int mover,
                   const Guard& g) {
  if (g.forall) {
    for (int p = 0; p < sys.proc_count(); ++p)
      if (p != mover && !g.holds_for(s.of(p))) return false;
    return true;
  }
  for (int p = 0; p < sys.proc_count(); ++p)
    if (p != mover && g.holds_for(s.of(p))) return true;
  return false;
}

}  // namespace

std::vector<std::pair<GlobalState, int>> successors(const GuardedSystem& sys,
                                                    const GlobalState& s) {
  std::vector<std::pair<GlobalState, int>> out;
  for (int p = 0; p < sys.proc_count(); ++p) {
    const ProcessTemplate& t = sys.tmpl(p);
    StateId q = s.of(p);
    for (const auto& tr : t.transitions) {
      if (tr.from != q) continue;
      if (!guard_enabled(sys, s, p, tr.guard)) continue;
      GlobalState s2 = s;
      s2.set(p, tr.to);
      out.emplace_back(std::move(s2), p);
    }
  }
  return out;
}

CounterState initial_counter_state(const GuardedSystem& sys,
                                   const std::vector<int>& counter_procs) {
  CounterState cs;
  cs.s = sys.initial();
  cs.counters.assign(counter_procs.size(), 0);
  return cs;
}

std::vector<std::pair<CounterState, int>> counter_successors(
    const GuardedSystem& sys, const CounterState& cs, uint64_t b,
    const std::vector<int>& counter_procs) {
  std::vector<std::pair<CounterState, int>> out;
  if (cs.failed) return out;
  for (auto& [s2, mover] : successors(sys, cs.s)) {
    CounterState nxt;
    nxt.s = s2;
    nxt.counters = cs.counters;
    for (size_t i = 0; i < counter_procs.size(); ++i) {
      if (counter_procs[i] == mover) {
        nxt.counters[i] = 0;
      } else if (static_cast<uint64_t>(nxt.counters[i]) + 1 > b) {
        nxt.failed = true;
        nxt.counters.clear();
        nxt.s = GlobalState{};
        break;
      } else {
        ++nxt.counters[i];
      }
    }
    out.emplace_back(std::move(nxt), mover);
  }
  return out;
}

namespace {

/// Move moments of proc on the unrolled timeline [0, horizon).
std::vector<uint64_t> move_moments(const SystemLasso& x, int proc, uint64_t horizon) {
  std::vector<uint64_t> m;
  for (uint64_t t = 0; t < horizon; ++t)
    if (x.at(t).mover == proc) m.push_back(t);
  return m;
}

/// Window check per the bounded fairness definition: for every m in
/// [0, window_limit] there is a move moment j with m <= j <= m + b.
bool windows_ok(const std::vector<uint64_t>& moves, uint64_t b, uint64_t window_limit) {
  size_t i = 0;
  for (uint64_t m = 0; m <= window_limit; ++m) {
    while (i < moves.size() && moves[i] < m) ++i;
    if (i >= moves.size() || moves[i] > m + b) return false;
  }
  return true;
}

}  // namespace

bool moves_infinitely_often(const SystemLasso& x, int proc) {
  for (const Step& st : x.period)
    if (st.mover == proc) return true;
  return false;
}

bool is_fair(const SystemLasso& x, const FairnessSpec& f, int proc_count) {
  if (x.period.empty()) return false;
  if (f.kind == FairnessKind::Unconditional) {
    for (int p = 0; p < proc_count; ++p)
      if (!moves_infinitely_often(x, p)) return false;
    return true;
  }
  // checking every window start in the prefix plus one full period wrap is
  // sufficient by periodicity
  uint64_t window_limit = x.prefix.size() + x.period.size();
  uint64_t horizon = window_limit + f.b + x.period.size() + 2;
  if (f.kind == FairnessKind::GlobalBounded) {
    for (int p = 0; p < proc_count; ++p)
      if (!windows_ok(move_moments(x, p, horizon), f.b, window_limit)) return false;
    return true;
  }
  // local bounded: unconditional for everyone, windows for the scope
  for (int p = 0; p < proc_count; ++p)
    if (!moves_infinitely_often(x, p)) return false;
  for (int p : f.scope)
    if (!windows_ok(move_moments(x, p, horizon), f.b, window_limit)) return false;
  return true;
}

std::optional<uint64_t> min_fair_bound(const SystemLasso& x, const std::vector<int>& procs) {
  if (x.period.empty()) return std::nullopt;
  uint64_t bound = 0;
  uint64_t window_limit = x.prefix.size() + x.period.size();
  for (int p : procs) {
    if (!moves_infinitely_often(x, p)) return std::nullopt;
    uint64_t horizon = window_limit + 2 * x.period.size() + 2;
    auto moves = move_moments(x, p, horizon);
    // first move, and largest gap between consecutive moves, decide the bound
    uint64_t need = moves.front();
    for (size_t i = 0; i + 1 < moves.size(); ++i)
      need = std::max(need, moves[i + 1] - moves[i] - 1);
    bound = std::max(bound, need);
  }
  return std::max<uint64_t>(bound, 1);
}

std::vector<GlobalState> find_deadlocks(const GuardedSystem& sys, size_t max_states) {
  std::vector<GlobalState> dead;
  std::unordered_set<GlobalState, GlobalStateHash> seen;
  std::deque<GlobalState> queue;
  queue.push_back(sys.initial());
  seen.insert(sys.initial());
  while (!queue.empty()) {
    GlobalState s = std::move(queue.front());
    queue.pop_front();
    auto succ = successors(sys, s);
    if (succ.empty()) dead.push_back(s);
    for (auto& [s2, mover] : succ) {
      (void)mover;
      if (seen.size() >= max_states)
        throw InputError("state space exceeds the exploration limit");
      if (seen.insert(s2).second) queue.push_back(s2);
    }
  }
  std::sort(dead.begin(), dead.end());
  return dead;
}

LassoWord project(const GuardedSystem& sys, const SystemLasso& x,
                  const std::vector<int>& procs) {
  auto letter = [&](const GlobalState& s) {
    Letter l;
    for (int p : procs) {
      if (p == 0)
        l.insert(Atom::ctrl(sys.table.name(s.a)));
      else
        l.insert(Atom::idx('B', p, sys.table.name(s.of(p))));
    }
    return l;
  };
  LassoWord w;
  for (const Step& st : x.prefix) w.prefix.push_back(letter(st.state));
  for (const Step& st : x.period) w.period.push_back(letter(st.state));
  return w;
}

std::optional<std::string> replay_error(const GuardedSystem& sys, const SystemLasso& x) {
  if (x.period.empty()) return "lasso period is empty";
  size_t total = x.len();
  auto check_dims = [&](const GlobalState& s) {
    return s.b.size() == static_cast<size_t>(sys.n);
  };
  for (size_t t = 0; t < total; ++t)
    if (!check_dims(x.at(t).state)) return "state width does not match the system size";
  if (!(x.at(0).state == sys.initial())) return "run does not start in the initial state";
  for (size_t t = 0; t < total; ++t) {
    const Step& st = x.at(t);
    const GlobalState& nxt = x.state_after(t);
    int p = st.mover;
    if (p < 0 || p >= sys.proc_count()) return "mover out of range at step " + std::to_string(t);
    for (int q = 0; q < sys.proc_count(); ++q)
      if (q != p && st.state.of(q) != nxt.of(q))
        return "process " + sys.proc_name(q) + " changed without moving at step " +
               std::to_string(t);
    const ProcessTemplate& tmpl = sys.tmpl(p);
    bool found = false;
    for (const auto& tr : tmpl.transitions) {
      if (tr.from != st.state.of(p) || tr.to != nxt.of(p)) continue;
      if (guard_enabled(sys, st.state, p, tr.guard)) {
        found = true;
        break;
      }
    }
    if (!found) return "replay failed at step " + std::to_string(t) + ": no enabled transition of " + sys.proc_name(p);
  }
  return std::nullopt;
}

// --- file format ---

namespace {

struct Tok {
  const std::string& text;
  size_t pos = 0;

  explicit Tok(const std::string& t) : text(t) {}

  void ws() {
    for (;;) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    ws();
    return pos >= text.size();
  }

  bool try_kw(const std::string& kw) {
    ws();
    if (text.compare(pos, kw.size(), kw) != 0) return false;
    size_t end = pos + kw.size();
    if (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
      return false;
    pos = end;
    return true;
  }

  void expect_kw(const std::string& kw) {
    if (!try_kw(kw)) throw ParseError("expected '" + kw + "'", pos);
  }

  bool try_ch(char c) {
    ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect_ch(char c) {
    if (!try_ch(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }

  std::string ident() {
    ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected identifier", pos);
    return text.substr(start, pos - start);
  }

  long number() {
    ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected number", pos);
    return std::stol(text.substr(start, pos - start));
  }
};

}  // namespace

SystemFile parse_system_text(const std::string& text) {
  SystemFile f;
  Tok tk(text);
  std::set<std::string> declared_states;
  while (!tk.eof()) {
    if (tk.try_kw("template")) {
      ProcessTemplate t;
      t.name = tk.ident();
      if (f.templates.count(t.name))
        throw ParseError("duplicate template '" + t.name + "'", tk.pos);
      tk.expect_ch('{');
      std::string init_name;
      std::vector<std::string> state_names;
      struct RawTrans {
        std::string from, to;
        bool forall;
        bool any;
        std::vector<std::string> set;
      };
      std::vector<RawTrans> raw;
      while (!tk.try_ch('}')) {
        if (tk.try_kw("init")) {
          init_name = tk.ident();
          tk.expect_ch(';');
        } else if (tk.try_kw("states")) {
          do {
            state_names.push_back(tk.ident());
          } while (tk.try_ch(','));
          tk.expect_ch(';');
        } else if (tk.try_kw("trans")) {
          RawTrans r;
          r.from = tk.ident();
          tk.expect_ch('-');
          tk.expect_ch('>');
          r.to = tk.ident();
          tk.expect_kw("when");
          if (tk.try_kw("exists"))
            r.forall = false;
          else if (tk.try_kw("forall"))
            r.forall = true;
          else
            throw ParseError("expected 'exists' or 'forall'", tk.pos);
          tk.expect_ch('{');
          if (tk.try_kw("any")) {
            r.any = true;
          } else {
            r.any = false;
            do {
              r.set.push_back(tk.ident());
            } while (tk.try_ch(','));
          }
          tk.expect_ch('}');
          tk.expect_ch(';');
          raw.push_back(std::move(r));
        } else {
          throw ParseError("expected 'init', 'states' or 'trans'", tk.pos);
        }
      }
      if (state_names.empty()) throw ParseError("template without states", tk.pos);
      if (init_name.empty()) throw ParseError("template without init", tk.pos);
      for (const auto& sn : state_names) {
        if (declared_states.count(sn))
          throw ParseError("state name '" + sn + "' reused across templates", tk.pos);
        declared_states.insert(sn);
        t.states.push_back(f.table.intern(sn));
      }
      auto res = f.table.find(init_name);
      if (!res || !t.has_state(*res))
        throw ParseError("init state '" + init_name + "' not among declared states", tk.pos);
      t.init = *res;
      for (const auto& r : raw) {
        LocalTransition tr;
        auto from = f.table.find(r.from), to = f.table.find(r.to);
        if (!from || !t.has_state(*from))
          throw ParseError("transition endpoint '" + r.from + "' not in template", tk.pos);
        if (!to || !t.has_state(*to))
          throw ParseError("transition endpoint '" + r.to + "' not in template", tk.pos);
        tr.from = *from;
        tr.to = *to;
        tr.guard.forall = r.forall;
        tr.guard.any = r.any;
        tr.guard.set.clear();
        for (const auto& gs : r.set) {
          auto id = f.table.find(gs);
          // guard entries may reference states of templates declared later;
          // resolve what we can now and defer the rest
          if (!id) {
            tr.guard.set.push_back(f.table.intern(gs));
          } else {
            tr.guard.set.push_back(*id);
          }
        }
        std::sort(tr.guard.set.begin(), tr.guard.set.end());
        t.transitions.push_back(std::move(tr));
      }
      f.templates.emplace(t.name, std::move(t));
    } else if (tk.try_kw("system")) {
      tk.expect_ch('{');
      while (!tk.try_ch('}')) {
        std::string role = tk.ident();
        tk.expect_ch(':');
        std::string name = tk.ident();
        tk.expect_ch(';');
        if (role == "A")
          f.a_name = name;
        else if (role == "B")
          f.b_name = name;
        else
          throw ParseError("system roles are 'A' and 'B'", tk.pos);
      }
    } else {
      throw ParseError("expected 'template' or 'system'", tk.pos);
    }
  }
  if (f.a_name.empty() || f.b_name.empty())
    throw ParseError("system block must name templates for A and B", tk.pos);
  // guard entries must name declared states
  for (auto& [name, t] : f.templates)
    for (auto& tr : t.transitions)
      for (StateId q : tr.guard.set)
        if (!declared_states.count(f.table.name(q)))
          throw ParseError("guard references undeclared state '" + f.table.name(q) + "'",
                           tk.pos);
  return f;
}

GuardedSystem make_system(const SystemFile& f, int n) {
  if (n < 1) throw InputError("system size must be >= 1");
  auto a = f.templates.find(f.a_name);
  auto b = f.templates.find(f.b_name);
  if (a == f.templates.end()) throw InputError("unknown template '" + f.a_name + "'");
  if (b == f.templates.end()) throw InputError("unknown template '" + f.b_name + "'");
  GuardedSystem sys;
  sys.table = f.table;
  sys.A = a->second;
  sys.B = b->second;
  sys.n = n;
  return sys;
}

}  // namespace pmcp
