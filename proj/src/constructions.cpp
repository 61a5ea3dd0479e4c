#include "pmcp/constructions.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace pmcp {

namespace {

GuardedSystem resized(const GuardedSystem& sys, int n) {
  GuardedSystem out = sys;
  out.n = n;
  return out;
}

std::vector<int> all_procs(int n) {
  std::vector<int> out;
  for (int p = 0; p <= n; ++p) out.push_back(p);
  return out;
}

void verify_guarded(GuardedConstruction& r, const GuardedSystem& in_sys, const SystemLasso& x,
                    const FairnessSpec& in_fair, const FairnessSpec& out_fair) {
  ConstructionChecks& c = r.checks;
  c.input_fair = is_fair(x, in_fair, in_sys.proc_count());
  if (!c.input_fair) c.detail = "input lasso does not satisfy the assumed fairness";
  GuardedSystem out_sys = resized(in_sys, r.output_n);
  if (auto err = replay_error(out_sys, r.output)) {
    c.valid = false;
    if (c.detail.empty()) c.detail = "output replay: " + *err;
  } else {
    c.valid = true;
  }
  LassoWord wx = project(in_sys, x, {0, 1});
  LassoWord wy = project(out_sys, r.output, {0, 1});
  c.measured_d = min_d(wx, wy);
  c.d_ok = c.measured_d.has_value() && *c.measured_d <= r.claimed_d;
  if (!c.d_ok && c.detail.empty()) c.detail = "stutter distance exceeds the claimed d";
  c.fair_ok = is_fair(r.output, out_fair, r.output_n + 1);
  if (!c.fair_ok && c.detail.empty()) c.detail = "output misses the claimed fairness bound";
  if (out_fair.kind == FairnessKind::GlobalBounded) {
    c.measured_fair_bound = min_fair_bound(r.output, all_procs(r.output_n));
  } else {
    bool ufair = true;
    for (int p = 0; p <= r.output_n; ++p)
      ufair = ufair && moves_infinitely_often(r.output, p);
    if (ufair) c.measured_fair_bound = min_fair_bound(r.output, out_fair.scope);
  }
}

void check_input(const GuardedSystem& sys, const SystemLasso& x) {
  if (x.period.empty()) throw InputError("input lasso has an empty period");
  if (auto err = replay_error(sys, x)) throw InputError("input lasso invalid: " + *err);
}

}  // namespace

SystemLasso establish_interleaving(const GuardedSystem& target, const MultiLasso& x) {
  if (x.period.empty()) throw InputError("lasso period is empty");
  size_t total = x.prefix.size() + x.period.size();
  auto at = [&](size_t t) -> const MultiStep& {
    return t < x.prefix.size() ? x.prefix[t]
                               : x.period[(t - x.prefix.size()) % x.period.size()];
  };
  auto after = [&](size_t t) -> const GlobalState& { return at(t + 1).state; };
  SystemLasso out;
  for (size_t t = 0; t < total; ++t) {
    const MultiStep& st = at(t);
    const GlobalState& nxt = after(t);
    std::vector<Step>& dst = t < x.prefix.size() ? out.prefix : out.period;
    if (st.movers.empty() || st.movers.size() > 2)
      throw InputError("steps must move one or two processes");
    if (st.movers.size() == 1) {
      dst.push_back({st.state, st.movers[0]});
    } else {
      GlobalState mid = st.state;
      mid.set(st.movers[0], nxt.of(st.movers[0]));
      dst.push_back({st.state, st.movers[0]});
      dst.push_back({mid, st.movers[1]});
    }
  }
  if (auto err = replay_error(target, out))
    throw InputError("interleaving split is not a valid run: " + *err);
  return out;
}

GuardedConstruction mon_disj(const GuardedSystem& sys, const SystemLasso& x, int copy_index,
                             uint64_t b, bool global_mode) {
  if (classify(sys).cls != SystemClass::Disjunctive)
    throw InputError("mon_disj needs a disjunctive system");
  if (sys.n < 2) throw InputError("mon_disj needs n >= 2");
  if (copy_index < 1 || copy_index > sys.n) throw InputError("copy index out of range");
  check_input(sys, x);

  GuardedConstruction r;
  r.output_n = sys.n + 1;
  r.claimed_d = 2;
  r.claimed_fair_bound = 2 * b;

  auto build = [&](size_t base, size_t count, std::vector<Step>& out) {
    for (size_t idx = 0; idx < count; ++idx) {
      size_t t = base + idx;
      const Step& st = x.at(t);
      GlobalState cur = st.state;
      cur.b.push_back(st.state.of(copy_index));
      out.push_back({cur, st.mover});
      if (st.mover == copy_index) {
        GlobalState mid = x.state_after(t);
        mid.b.push_back(st.state.of(copy_index));
        out.push_back({mid, sys.n + 1});
      }
    }
  };
  build(0, x.prefix.size(), r.output.prefix);
  build(x.prefix.size(), x.period.size(), r.output.period);

  FairnessSpec in_fair = global_mode ? FairnessSpec::global_bounded(b)
                                     : FairnessSpec::local_bounded(b, {0, 1});
  FairnessSpec out_fair = global_mode ? FairnessSpec::global_bounded(2 * b)
                                      : FairnessSpec::local_bounded(2 * b, {0, 1});
  verify_guarded(r, sys, x, in_fair, out_fair);
  return r;
}

GuardedConstruction bound_disj(const GuardedSystem& sys, const SystemLasso& x, uint64_t b) {
  if (classify(sys).cls != SystemClass::Disjunctive)
    throw InputError("bound_disj needs a disjunctive system");
  size_t qb = sys.B.states.size();
  int c = static_cast<int>(2 * qb) + 1;
  if (sys.n < c) throw InputError("bound_disj needs n >= 2|Q_B| + 1");
  check_input(sys, x);

  GuardedConstruction r;
  r.output_n = c;
  r.claimed_d = static_cast<uint64_t>(c);
  r.claimed_fair_bound = b * static_cast<uint64_t>(c);

  size_t pre = x.prefix.size(), per = x.period.size(), total = pre + per;

  struct QInfo {
    bool visited2 = false;  // visited by some B_i, i >= 2
    bool inf = false;
    size_t f = 0;  // first appearance among all B columns
    int first = 0;
    size_t l = 0;  // last appearance among B_2..B_n (finite case)
    int last = 0;
    int infp = 0;   // infinitely visiting process (periodic visitor)
    size_t t0 = 0;  // its first arrival
  };
  std::map<StateId, QInfo> info;
  for (StateId q : sys.B.states) {
    QInfo qi;
    for (size_t t = 0; t < total && !qi.visited2; ++t)
      for (int i = 2; i <= sys.n; ++i)
        if (x.at(t).state.of(i) == q) qi.visited2 = true;
    if (!qi.visited2) continue;
    for (size_t t = pre; t < total && !qi.inf; ++t)
      for (int i = 2; i <= sys.n; ++i)
        if (x.at(t).state.of(i) == q) {
          qi.inf = true;
          qi.infp = i;
        }
    // first appearance among all B processes
    bool found = false;
    for (size_t t = 0; t < total && !found; ++t)
      for (int i = 1; i <= sys.n && !found; ++i)
        if (x.at(t).state.of(i) == q) {
          qi.f = t;
          qi.first = i;
          found = true;
        }
    if (qi.inf) {
      // pick the least periodic visitor, then its first arrival anywhere
      for (int i = 2; i <= sys.n; ++i) {
        bool visits = false;
        for (size_t t = pre; t < total; ++t)
          if (x.at(t).state.of(i) == q) visits = true;
        if (visits) {
          qi.infp = i;
          break;
        }
      }
      for (size_t t = 0; t < total; ++t)
        if (x.at(t).state.of(qi.infp) == q) {
          qi.t0 = t;
          break;
        }
    } else {
      for (size_t t = 0; t < total; ++t)
        for (int i = 2; i <= sys.n; ++i)
          if (x.at(t).state.of(i) == q) {
            qi.l = t;
            qi.last = i;
          }
      // least process index at the last moment
      for (int i = 2; i <= sys.n; ++i)
        if (x.at(qi.l).state.of(i) == q) {
          qi.last = i;
          break;
        }
    }
    info[q] = qi;
  }

  struct Role {
    int kind;  // 0 evacuation, 1 fair extension, 2 mirror of B_1
    StateId q = 0;
    int slot = 0;
  };
  std::vector<Role> roster;
  for (StateId q : sys.B.states) {
    auto it = info.find(q);
    if (it == info.end()) continue;
    if (it->second.inf) {
      roster.push_back({1, q, 0});
      roster.push_back({1, q, 1});
    } else {
      roster.push_back({0, q, 0});
    }
  }
  if (roster.size() > static_cast<size_t>(c - 1))
    throw InternalError("flooding roster exceeds the cutoff size");
  while (roster.size() < static_cast<size_t>(c - 1)) roster.push_back({2, 0, 0});

  // walk with closure detection on the fair-extension turn state
  std::map<StateId, std::pair<bool, int>> seg;  // started, turn
  for (auto& [q, qi] : info)
    if (qi.inf) seg[q] = {false, 0};

  GlobalState cur;
  cur.a = sys.A.init;
  cur.b.assign(static_cast<size_t>(c), sys.B.init);
  std::vector<Step> steps;
  std::vector<std::pair<size_t, size_t>> marks;  // signature, y length
  std::optional<std::pair<size_t, size_t>> closed;
  GlobalStateHash gh;

  size_t t = 0;
  while (!closed) {
    if (t >= pre && (t - pre) % per == 0) {
      size_t sig = gh(cur);
      for (auto& [q, s] : seg) sig = sig * 1315423911u + (s.first ? 2 : 0) + s.second;
      for (auto& [ms, mlen] : marks)
        if (ms == sig) closed = std::make_pair(mlen, steps.size());
      if (!closed) {
        marks.push_back({sig, steps.size()});
        if (marks.size() > 4100) throw InternalError("flooding walk failed to close");
      }
    }
    if (closed) break;

    const Step& st = x.at(t);
    // arrivals of the periodic visitors
    for (auto& [q, s] : seg)
      if (!s.first && x.at(t).state.of(info[q].infp) == q) s.first = true;
    // flooding cover: every state present in x is present in y
    {
      bool cover = true;
      for (int p = 0; p <= sys.n && cover; ++p) {
        StateId q = st.state.of(p);
        bool found = cur.a == q;
        for (StateId y : cur.b) found = found || y == q;
        cover = found;
      }
      if (!cover) throw InternalError("flooding cover property violated");
    }

    int p = st.mover;
    StateId to = x.state_after(t).of(p);
    std::vector<int> ymovers;
    if (p == 0) {
      ymovers.push_back(0);
    } else {
      if (p == 1) ymovers.push_back(1);
      for (size_t jr = 0; jr < roster.size(); ++jr) {
        const Role& role = roster[jr];
        int yproc = static_cast<int>(jr) + 2;
        if (role.kind == 0) {
          const QInfo& qi = info[role.q];
          if ((p == qi.first && t < qi.f) || (p == qi.last && t >= qi.l))
            ymovers.push_back(yproc);
        } else if (role.kind == 1) {
          const QInfo& qi = info[role.q];
          auto& s = seg[role.q];
          if (p == qi.first && t < qi.f)
            ymovers.push_back(yproc);
          else if (p == qi.infp && s.first && s.second == role.slot)
            ymovers.push_back(yproc);
        } else {
          if (p == 1) ymovers.push_back(yproc);
        }
      }
    }
    for (int m : ymovers) {
      steps.push_back({cur, m});
      cur.set(m, to);
    }
    for (auto& [q, s] : seg)
      if (s.first && p == info[q].infp && to == q) s.second ^= 1;
    ++t;
  }

  r.output.prefix.assign(steps.begin(), steps.begin() + static_cast<long>(closed->first));
  r.output.period.assign(steps.begin() + static_cast<long>(closed->first),
                         steps.begin() + static_cast<long>(closed->second));
  if (r.output.period.empty()) throw InternalError("flooding produced an empty period");

  verify_guarded(r, sys, x, FairnessSpec::local_bounded(b, {0, 1}),
                 FairnessSpec::local_bounded(r.claimed_fair_bound, {0, 1}));
  return r;
}

GuardedConstruction mon_conj(const GuardedSystem& sys, const SystemLasso& x, int share_index,
                             uint64_t b, bool global_mode) {
  Classification cls = classify(sys);
  if (cls.cls != SystemClass::Conjunctive)
    throw InputError("mon_conj needs a conjunctive system");
  if (sys.n < 2) throw InputError("mon_conj needs n >= 2");
  if (share_index < 2 || share_index > sys.n)
    throw InputError("share index must name a process outside the specification");
  check_input(sys, x);

  GuardedConstruction r;
  r.output_n = sys.n + 1;
  r.claimed_d = 1;
  uint64_t qb = sys.B.states.size();
  r.claimed_fair_bound = global_mode ? b + qb : b;

  StateId initB = sys.B.init;
  int extra = sys.n + 1;
  int active = share_index;
  std::vector<Step> steps;
  std::vector<std::pair<size_t, size_t>> marks;
  std::optional<std::pair<size_t, size_t>> closed;

  size_t pre = x.prefix.size(), per = x.period.size();
  size_t t = 0;
  while (!closed) {
    if (t >= pre && (t - pre) % per == 0) {
      size_t sig = active == share_index ? 1 : 2;
      for (auto& [ms, mlen] : marks)
        if (ms == sig) closed = std::make_pair(mlen, steps.size());
      if (!closed) {
        marks.push_back({sig, steps.size()});
        if (marks.size() > 8) throw InternalError("sharing walk failed to close");
      }
    }
    if (closed) break;
    const Step& st = x.at(t);
    StateId share_col = st.state.of(share_index);
    GlobalState y = st.state;
    y.set(share_index, active == share_index ? share_col : initB);
    y.b.push_back(active == extra ? share_col : initB);
    int mover = st.mover == share_index ? active : st.mover;
    steps.push_back({y, mover});
    if (st.mover == share_index && x.state_after(t).of(share_index) == initB)
      active = active == share_index ? extra : share_index;
    ++t;
  }
  r.output.prefix.assign(steps.begin(), steps.begin() + static_cast<long>(closed->first));
  r.output.period.assign(steps.begin() + static_cast<long>(closed->first),
                         steps.begin() + static_cast<long>(closed->second));
  if (r.output.period.empty()) throw InternalError("sharing produced an empty period");

  FairnessSpec in_fair = global_mode ? FairnessSpec::global_bounded(b)
                                     : FairnessSpec::local_bounded(b, {0, 1});
  FairnessSpec out_fair = global_mode
                              ? FairnessSpec::global_bounded(r.claimed_fair_bound)
                              : FairnessSpec::local_bounded(r.claimed_fair_bound, {0, 1});
  verify_guarded(r, sys, x, in_fair, out_fair);
  return r;
}

GuardedConstruction bound_conj(const GuardedSystem& sys, const SystemLasso& x, uint64_t b) {
  if (classify(sys).cls != SystemClass::Conjunctive)
    throw InputError("bound_conj needs a conjunctive system");
  if (b < 1) throw InputError("a fairness bound of at least 1 is required");
  check_input(sys, x);

  GuardedConstruction r;
  r.output_n = 1;
  r.claimed_d = b;
  r.claimed_fair_bound = b;

  auto shrink = [&](const GlobalState& s) {
    GlobalState g;
    g.a = s.a;
    g.b = {s.of(1)};
    return g;
  };
  for (const Step& st : x.prefix)
    if (st.mover <= 1) r.output.prefix.push_back({shrink(st.state), st.mover});
  for (const Step& st : x.period)
    if (st.mover <= 1) r.output.period.push_back({shrink(st.state), st.mover});
  if (r.output.period.empty()) {
    r.checks.detail = "period contains no moves of A or B1";
    r.checks.input_fair = false;
    return r;
  }
  verify_guarded(r, sys, x, FairnessSpec::global_bounded(b),
                 FairnessSpec::global_bounded(b));
  return r;
}

// --- token constructions ---

namespace {

LassoWord token_positional(const TokenProcess& t, const TokenLasso& x,
                           const std::vector<int>& procs) {
  auto letter = [&](const TokenConfig& c) {
    Letter l;
    for (size_t idx = 0; idx < procs.size(); ++idx)
      l.insert(Atom::idx('T', static_cast<int>(idx) + 1,
                         t.state_name(c.q[static_cast<size_t>(procs[idx]) - 1])));
    return l;
  };
  LassoWord w;
  for (const auto& st : x.prefix) w.prefix.push_back(letter(st.state));
  for (const auto& st : x.period) w.period.push_back(letter(st.state));
  return w;
}

void verify_token(TokenConstruction& r, const TokenProcess& t, const TokenGraph& g_in,
                  const TokenLasso& x, int vg, int vh, uint64_t b) {
  ConstructionChecks& c = r.checks;
  c.input_fair = token_fair(x, b);
  if (!c.input_fair) c.detail = "input lasso does not satisfy the assumed fairness";
  TokenSystem out_sys{t, r.output_graph};
  if (auto err = token_replay_error(out_sys, r.output)) {
    c.valid = false;
    if (c.detail.empty()) c.detail = "output replay: " + *err;
  } else {
    c.valid = true;
  }
  LassoWord wx = token_positional(t, x, {vg, vh});
  LassoWord wy = token_positional(t, r.output, {r.out_i, r.out_j});
  c.measured_d = min_d(wx, wy);
  c.d_ok = c.measured_d.has_value() && *c.measured_d <= r.claimed_d;
  if (!c.d_ok && c.detail.empty()) c.detail = "stutter distance exceeds the claimed d";
  c.fair_ok = token_fair(r.output, r.claimed_fair_bound);
  if (!c.fair_ok && c.detail.empty()) c.detail = "output misses the claimed fairness bound";
  c.measured_fair_bound = min_token_fair_bound(r.output);
  r.vector_ok =
      connectivity_vector(g_in, vg, vh) == connectivity_vector(r.output_graph, r.out_i, r.out_j);
  if (!r.vector_ok && c.detail.empty()) c.detail = "connectivity vector not preserved";
}

}  // namespace

TokenConstruction mon_token(const TokenProcess& t, const TokenGraph& g, const TokenLasso& x,
                            int vg, int vh, int va, uint64_t b) {
  if (g.n < 3) throw InputError("mon_token needs at least three vertices");
  if (va == vg || va == vh) throw InputError("the rewired vertex must differ from g and h");
  if (va < 1 || va > g.n || vg < 1 || vg > g.n || vh < 1 || vh > g.n || vg == vh)
    throw InputError("vertex out of range");
  auto ims = immediately_sends_paths(t);
  if (!ims) throw InputError("the process has no immediate-send machinery");
  TokenSystem in_sys{t, g};
  if (x.period.empty()) throw InputError("input lasso has an empty period");
  if (auto err = token_replay_error(in_sys, x))
    throw InputError("input lasso invalid: " + *err);

  TokenConstruction r;
  r.out_i = vg;
  r.out_j = vh;
  int fresh = g.n + 1;
  r.output_graph.n = fresh;
  for (auto& [a2, b2] : g.edges) {
    if (a2 == va)
      r.output_graph.edges.insert({fresh, b2});
    else
      r.output_graph.edges.insert({a2, b2});
  }
  r.output_graph.edges.insert({va, fresh});
  r.vector = connectivity_vector(g, vg, vh);

  uint64_t qt = t.num_states();
  r.claimed_d = qt + 1;
  int64_t extra = static_cast<int64_t>(b) - g.n + 2;
  r.claimed_fair_bound =
      extra > 0 ? b + static_cast<uint64_t>(extra) * qt : (extra == 0 ? b : 0);

  TokenState helper = ims->warmup.empty() ? ims->q_rcv : ims->warmup[0].from;
  std::vector<TokenState> cur;
  for (const auto& q : x.at(0).state.q) cur.push_back(q);
  cur.push_back(helper);

  auto push = [&](std::vector<TokenStep>& dst, const TokenActionLabel& a) {
    dst.push_back({TokenConfig{cur}, a});
  };
  for (const auto& tr : ims->warmup) {
    push(r.output.prefix, TokenActionLabel::eps(fresh));
    cur[static_cast<size_t>(fresh) - 1] = tr.to;
  }

  size_t pre = x.prefix.size(), total = pre + x.period.size();
  for (size_t step = 0; step < total; ++step) {
    std::vector<TokenStep>& dst = step < pre ? r.output.prefix : r.output.period;
    const TokenStep& st = x.at(step);
    const TokenConfig& nxt = x.state_after(step);
    if (st.action.sync && st.action.from == va) {
      int z = st.action.to;
      push(dst, TokenActionLabel::pass(va, fresh));
      cur[static_cast<size_t>(va) - 1] = nxt.q[static_cast<size_t>(va) - 1];
      cur[static_cast<size_t>(fresh) - 1] = ims->recv_to_send[0].to;
      for (size_t i = 1; i < ims->recv_to_send.size(); ++i) {
        push(dst, TokenActionLabel::eps(fresh));
        cur[static_cast<size_t>(fresh) - 1] = ims->recv_to_send[i].to;
      }
      push(dst, TokenActionLabel::pass(fresh, z));
      cur[static_cast<size_t>(fresh) - 1] = ims->send_to_recv[0].to;
      cur[static_cast<size_t>(z) - 1] = nxt.q[static_cast<size_t>(z) - 1];
      for (size_t i = 1; i < ims->send_to_recv.size(); ++i) {
        push(dst, TokenActionLabel::eps(fresh));
        cur[static_cast<size_t>(fresh) - 1] = ims->send_to_recv[i].to;
      }
    } else {
      push(dst, st.action);
      for (int p = 1; p <= g.n; ++p)
        cur[static_cast<size_t>(p) - 1] = nxt.q[static_cast<size_t>(p) - 1];
    }
  }
  if (!(cur[static_cast<size_t>(fresh) - 1] == ims->q_rcv))
    throw InternalError("relay did not return to its waiting state");

  verify_token(r, t, g, x, vg, vh, b);
  return r;
}

TokenConstruction bound_token(const TokenProcess& t, const TokenGraph& g, const TokenLasso& x,
                              int vg, int vh, uint64_t b) {
  if (g.n < 4) throw InputError("bound_token needs at least four vertices");
  if (vg < 1 || vg > g.n || vh < 1 || vh > g.n || vg == vh)
    throw InputError("vertex out of range");
  auto ims = immediately_sends_paths(t);
  if (!ims) throw InputError("the process has no immediate-send machinery");
  TokenSystem in_sys{t, g};
  if (x.period.empty()) throw InputError("input lasso has an empty period");
  if (auto err = token_replay_error(in_sys, x))
    throw InputError("input lasso invalid: " + *err);

  ConnectivityVector v = connectivity_vector(g, vg, vh);
  auto red = synth_reduction_graph(v);
  if (!red) throw InputError("no 4-vertex graph realizes the connectivity vector");

  TokenConstruction r;
  r.output_graph = red->g;
  r.out_i = red->i;
  r.out_j = red->j;
  r.vector = v;
  uint64_t qt = t.num_states();
  r.claimed_d = qt + 1;
  int64_t extra = static_cast<int64_t>(b) - g.n + 2;
  uint64_t tail = extra > 0 ? static_cast<uint64_t>(extra) * qt : 0;
  r.claimed_fair_bound = 2 * qt + b + tail;

  const int I = red->i, J = red->j, K = red->k, L = red->l;
  size_t pre = x.prefix.size(), per = x.period.size();
  uint64_t scan_limit = pre + 2 * per + 2;

  // next receive among {g, h} strictly after step s
  auto next_gh = [&](size_t s) -> std::optional<int> {
    for (size_t u = s + 1; u <= s + scan_limit; ++u) {
      const auto& a = x.at(u).action;
      if (a.sync && (a.to == vg || a.to == vh)) return a.to;
    }
    return std::nullopt;
  };

  // pending: 0 none, 1 token parked at l (deliver to i), 2 parked at k (to j)
  int pending = 0;
  std::vector<TokenTransition> k_warm = ims->warmup, l_warm = ims->warmup;
  TokenState free_start = ims->warmup.empty() ? ims->q_rcv : ims->warmup[0].from;
  TokenState k_start = free_start, l_start = free_start;

  int holder0 = x.at(0).state.token_holder();
  if (holder0 != vg && holder0 != vh) {
    std::optional<int> r0;
    for (size_t u = 0; u <= scan_limit && !r0; ++u) {
      const auto& a = x.at(u).action;
      if (a.sync && (a.to == vg || a.to == vh)) r0 = a.to;
    }
    if (!r0) throw InputError("the designated processes never receive the token");
    auto warm = token_warmup_path(t, ims->q_snd);
    if (!warm)
      throw InputError("no token-holding warm-up path reaches the send state");
    if (*r0 == vg) {
      pending = 1;
      l_warm = *warm;
      l_start = warm->empty() ? ims->q_snd : (*warm)[0].from;
    } else {
      pending = 2;
      k_warm = *warm;
      k_start = warm->empty() ? ims->q_snd : (*warm)[0].from;
    }
  }
  std::vector<TokenState> cur{x.at(0).state.q[static_cast<size_t>(vg) - 1],
                              x.at(0).state.q[static_cast<size_t>(vh) - 1], k_start, l_start};
  auto push = [&](std::vector<TokenStep>& dst, const TokenActionLabel& a) {
    dst.push_back({TokenConfig{cur}, a});
  };
  auto set_col = [&](int proc, TokenState q) { cur[static_cast<size_t>(proc) - 1] = q; };
  auto require_edge = [&](int a2, int b2) {
    if (!r.output_graph.has_edge(a2, b2))
      throw InternalError("reduction graph misses a required relay edge");
  };

  for (const auto& tr : k_warm) {
    push(r.output.prefix, TokenActionLabel::eps(K));
    set_col(K, tr.to);
  }
  for (const auto& tr : l_warm) {
    push(r.output.prefix, TokenActionLabel::eps(L));
    set_col(L, tr.to);
  }

  // walk helper: deliver the queued walk of a helper after its sync step
  auto walk_rest = [&](std::vector<TokenStep>& dst, int proc,
                       const std::vector<TokenTransition>& path) {
    for (size_t i = 1; i < path.size(); ++i) {
      push(dst, TokenActionLabel::eps(proc));
      set_col(proc, path[i].to);
    }
  };

  int boundary_pending = -1;
  TokenState boundary_k = cur[static_cast<size_t>(K) - 1];
  TokenState boundary_l = cur[static_cast<size_t>(L) - 1];
  size_t total = pre + per;
  for (size_t step = 0; step < total; ++step) {
    if (step == pre) {
      boundary_pending = pending;
      boundary_k = cur[static_cast<size_t>(K) - 1];
      boundary_l = cur[static_cast<size_t>(L) - 1];
    }
    std::vector<TokenStep>& dst = step < pre ? r.output.prefix : r.output.period;
    const TokenStep& st = x.at(step);
    const TokenConfig& nxt = x.state_after(step);
    auto g_next = [&] { return nxt.q[static_cast<size_t>(vg) - 1]; };
    auto h_next = [&] { return nxt.q[static_cast<size_t>(vh) - 1]; };
    const auto& a = st.action;
    if (!a.sync) {
      if (a.proc == vg) {
        push(dst, TokenActionLabel::eps(I));
        set_col(I, g_next());
      } else if (a.proc == vh) {
        push(dst, TokenActionLabel::eps(J));
        set_col(J, h_next());
      }
      continue;
    }
    bool from_g = a.from == vg, from_h = a.from == vh;
    bool to_g = a.to == vg, to_h = a.to == vh;
    if (from_g && to_h) {
      require_edge(I, J);
      push(dst, TokenActionLabel::pass(I, J));
      set_col(I, g_next());
      set_col(J, h_next());
    } else if (from_h && to_g) {
      require_edge(J, I);
      push(dst, TokenActionLabel::pass(J, I));
      set_col(J, h_next());
      set_col(I, g_next());
    } else if (from_g || from_h) {
      auto nr = next_gh(step);
      if (!nr) throw InputError("the token never returns to the designated pair");
      int src = from_g ? I : J;
      if (*nr == vg) {
        require_edge(src, L);
        push(dst, TokenActionLabel::pass(src, L));
        set_col(src, from_g ? g_next() : h_next());
        set_col(L, ims->recv_to_send[0].to);
        walk_rest(dst, L, ims->recv_to_send);
        pending = 1;
      } else {
        require_edge(src, K);
        push(dst, TokenActionLabel::pass(src, K));
        set_col(src, from_g ? g_next() : h_next());
        set_col(K, ims->recv_to_send[0].to);
        walk_rest(dst, K, ims->recv_to_send);
        pending = 2;
      }
    } else if (to_g) {
      if (pending != 1) throw InternalError("delivery to i without a parked token");
      require_edge(L, I);
      push(dst, TokenActionLabel::pass(L, I));
      set_col(L, ims->send_to_recv[0].to);
      set_col(I, g_next());
      walk_rest(dst, L, ims->send_to_recv);
      pending = 0;
    } else if (to_h) {
      if (pending != 2) throw InternalError("delivery to j without a parked token");
      require_edge(K, J);
      push(dst, TokenActionLabel::pass(K, J));
      set_col(K, ims->send_to_recv[0].to);
      set_col(J, h_next());
      walk_rest(dst, K, ims->send_to_recv);
      pending = 0;
    }
    // steps entirely among the other processes vanish
  }
  if (boundary_pending != pending || !(boundary_k == cur[static_cast<size_t>(K) - 1]) ||
      !(boundary_l == cur[static_cast<size_t>(L) - 1]))
    throw InternalError("reduction walk did not close after one period");
  if (r.output.period.empty())
    throw InputError("the designated pair never moves in the period");

  verify_token(r, t, g, x, vg, vh, b);
  return r;
}

}  // namespace pmcp
