#pragma once

// Shared randomized generators and independent oracles for the test suites.

#include <optional>
#include <random>

#include "pmcp/checker.hpp"
#include "pmcp/constructions.hpp"
#include "pmcp/stutter.hpp"

namespace testgen {

using Rng = std::mt19937_64;
using namespace pmcp;

inline std::vector<Atom> word_ap() { return {Atom::plain("p"), Atom::plain("q")}; }

inline Letter rand_letter(Rng& rng, const std::vector<Atom>& ap) {
  Letter l;
  for (const Atom& a : ap)
    if (rng() & 1) l.insert(a);
  return l;
}

inline LassoWord rand_lasso(Rng& rng, const std::vector<Atom>& ap, size_t max_total = 12) {
  LassoWord w;
  size_t total = 2 + rng() % (max_total - 1);
  if (total > max_total) total = max_total;
  size_t period = 1 + rng() % total;
  size_t prefix = total - period;
  for (size_t i = 0; i < prefix; ++i) w.prefix.push_back(rand_letter(rng, ap));
  for (size_t i = 0; i < period; ++i) w.period.push_back(rand_letter(rng, ap));
  return w;
}

inline FormulaPtr rand_formula(Rng& rng, const std::vector<Atom>& ap, int depth,
                               bool allow_prompt, bool allow_next = false) {
  auto atom = [&] { return ap[rng() % ap.size()]; };
  if (depth <= 0) {
    switch (rng() % 4) {
      case 0: return Formula::mk_atom(atom());
      case 1: return Formula::mk_neg_atom(atom());
      case 2: return Formula::tt();
      default: return Formula::ff();
    }
  }
  int pick = static_cast<int>(rng() % (allow_prompt ? 7 : (allow_next ? 7 : 6)));
  switch (pick) {
    case 0: return Formula::mk_atom(atom());
    case 1:
      return Formula::mk_and(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next),
                             rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
    case 2:
      return Formula::mk_or(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next),
                            rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
    case 3:
      return Formula::mk_until(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next),
                               rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
    case 4:
      return Formula::mk_release(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next),
                                 rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
    case 5:
      return rng() & 1
                 ? Formula::mk_eventually(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next))
                 : Formula::mk_globally(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
    default:
      if (allow_prompt)
        return Formula::mk_prompt(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
      return Formula::mk_next(rand_formula(rng, ap, depth - 1, allow_prompt, allow_next));
  }
}

/// Builds a d-stutter-equivalent companion by rescaling every maximal run by
/// a random factor within [1/d, d].
inline LassoWord stretch_lasso(Rng& rng, const LassoWord& w, uint64_t d) {
  Condensation c = condense(w);
  auto scale = [&](uint64_t len) {
    uint64_t lo = (len + d - 1) / d, hi = len * d;
    if (hi > len + 2 * d) hi = len + 2 * d;  // keep the words small
    return lo + rng() % (hi - lo + 1);
  };
  LassoWord out;
  for (const CondRun& r : c.prefix) {
    uint64_t m = scale(r.len);
    for (uint64_t i = 0; i < m; ++i) out.prefix.push_back(r.letter);
  }
  if (c.ultimately_constant()) {
    out.period.push_back(c.periodic[0].letter);
  } else {
    for (const CondRun& r : c.periodic) {
      uint64_t m = scale(r.len);
      for (uint64_t i = 0; i < m; ++i) out.period.push_back(r.letter);
    }
  }
  return out;
}

/// Brute-force d-stutter equivalence on eventually-constant words
/// (finite words padded with their last letter), straight from the
/// block-decomposition definition. Memoized over positions with the padded
/// tails collapsed.
inline bool brute_d_equiv_padded(const std::vector<Letter>& a, const std::vector<Letter>& b,
                                 uint64_t d) {
  size_t la = a.size(), lb = b.size();
  auto at = [](const std::vector<Letter>& w, size_t i) -> const Letter& {
    return i < w.size() ? w[i] : w.back();
  };
  // positions at or past the end all share the same suffix (the padded tail),
  // so they collapse onto one memo slot
  std::vector<int8_t> memo((la + 1) * (lb + 1), -1);
  uint64_t cap = d * (std::max(la, lb) + 2);
  std::function<bool(size_t, size_t)> go = [&](size_t i, size_t j) -> bool {
    i = std::min(i, la);
    j = std::min(j, lb);
    if (i == la && j == lb) return a.back() == b.back();
    int8_t& m = memo[i * (lb + 1) + j];
    if (m >= 0) return m == 1;
    m = 0;
    const Letter& ch = at(a, i);
    if (!(ch == at(b, j))) return false;
    // choose one block on each side: constant, same letter, ratio <= d
    auto run_len = [&](const std::vector<Letter>& w, size_t from) -> uint64_t {
      uint64_t len = 0;
      for (size_t x = from; at(w, x) == ch && len <= cap; ++x) {
        ++len;
        if (x >= w.size()) return cap;  // constant to infinity
      }
      return len;
    };
    uint64_t max_x = run_len(a, i), max_y = run_len(b, j);
    for (uint64_t x = 1; x <= max_x && !m; ++x)
      for (uint64_t y = 1; y <= max_y && !m; ++y)
        if (x <= d * y && y <= d * x && go(i + x, j + y)) m = 1;
    return m == 1;
  };
  return go(0, 0);
}

// --- guarded protocol generators ---

inline SystemFile reader_writer_file() {
  return parse_system_text(R"(
    template Reader {
      states nr, r;
      init nr;
      trans nr -> r when exists{nw};
      trans r -> r when exists{nw};
      trans r -> nr when exists{any};
    }
    template Writer {
      states nw, w;
      init nw;
      trans nw -> w when exists{any};
      trans w -> w when exists{r};
      trans w -> nw when exists{any};
    }
    system { A: Writer; B: Reader; }
  )");
}

/// Random disjunctive templates; every state keeps at least one outgoing
/// transition guarded by the full set so that systems stay alive.
inline SystemFile rand_disjunctive_file(Rng& rng, size_t qa, size_t qb) {
  std::string text;
  auto add_template = [&](const std::string& name, const std::string& stem, size_t count,
                          const std::vector<std::string>& all_states) {
    text += "template " + name + " { states ";
    for (size_t i = 0; i < count; ++i) text += (i ? ", " : "") + stem + std::to_string(i);
    text += "; init " + stem + "0;\n";
    for (size_t i = 0; i < count; ++i) {
      std::string from = stem + std::to_string(i);
      // a guaranteed move to keep the process alive
      std::string to = stem + std::to_string(rng() % count);
      text += "trans " + from + " -> " + to + " when exists{any};\n";
      size_t extra = rng() % 3;
      for (size_t e = 0; e < extra; ++e) {
        std::string to2 = stem + std::to_string(rng() % count);
        std::string g;
        size_t picks = 1 + rng() % 2;
        for (size_t p = 0; p < picks; ++p)
          g += (p ? "," : "") + all_states[rng() % all_states.size()];
        text += "trans " + from + " -> " + to2 + " when exists{" + g + "};\n";
      }
    }
    text += "}\n";
  };
  std::vector<std::string> all;
  for (size_t i = 0; i < qa; ++i) all.push_back("a" + std::to_string(i));
  for (size_t i = 0; i < qb; ++i) all.push_back("b" + std::to_string(i));
  add_template("Ctl", "a", qa, all);
  add_template("Proc", "b", qb, all);
  text += "system { A: Ctl; B: Proc; }\n";
  return parse_system_text(text);
}

/// Random conjunctive, bounded-initializing templates: every B transition
/// either leaves the initial state or returns to it, so every cycle passes
/// through init. Guards are universal and contain both initial states.
inline SystemFile rand_conjunctive_file(Rng& rng, size_t qa, size_t qb) {
  std::string text;
  std::vector<std::string> all;
  for (size_t i = 0; i < qa; ++i) all.push_back("a" + std::to_string(i));
  for (size_t i = 0; i < qb; ++i) all.push_back("b" + std::to_string(i));
  auto guard = [&]() {
    std::string g = "a0,b0";
    size_t extra = rng() % 3;
    for (size_t e = 0; e < extra; ++e) g += "," + all[rng() % all.size()];
    return g;
  };
  // controller: a cycle through a0 plus random chords back to a0
  text += "template Ctl { states ";
  for (size_t i = 0; i < qa; ++i) text += (i ? ", " : "") + ("a" + std::to_string(i));
  text += "; init a0;\n";
  for (size_t i = 0; i < qa; ++i) {
    std::string from = "a" + std::to_string(i);
    std::string to = i + 1 < qa && (rng() & 1) ? "a" + std::to_string(i + 1) : "a0";
    text += "trans " + from + " -> " + to + " when forall{" + guard() + "};\n";
    if (rng() & 1) text += "trans " + from + " -> a0 when forall{" + guard() + "};\n";
  }
  text += "}\n";
  text += "template Proc { states ";
  for (size_t i = 0; i < qb; ++i) text += (i ? ", " : "") + ("b" + std::to_string(i));
  text += "; init b0;\n";
  for (size_t i = 0; i < qb; ++i) {
    std::string from = "b" + std::to_string(i);
    if (i == 0) {
      // moves out of init to arbitrary states
      for (size_t j = 1; j < qb; ++j)
        if (rng() & 1)
          text += "trans b0 -> b" + std::to_string(j) + " when forall{" + guard() + "};\n";
      text += "trans b0 -> b" + std::to_string(qb > 1 ? 1 + rng() % (qb - 1) : 0) +
              " when forall{" + guard() + "};\n";
      if (qb == 1) text += "trans b0 -> b0 when forall{" + guard() + "};\n";
    } else {
      // always a way home; forward moves stay acyclic outside init
      text += "trans " + from + " -> b0 when forall{" + guard() + "};\n";
      if (i + 1 < qb && (rng() & 1))
        text += "trans " + from + " -> b" + std::to_string(i + 1) + " when forall{" +
                guard() + "};\n";
    }
  }
  text += "}\n";
  text += "system { A: Ctl; B: Proc; }\n";
  return parse_system_text(text);
}

/// Random fair lasso by a counter-guided walk: movers with older counters are
/// preferred, and the walk closes when a counter state repeats.
inline std::optional<SystemLasso> rand_fair_lasso(Rng& rng, const GuardedSystem& sys,
                                                  const FairnessSpec& want,
                                                  size_t attempts = 60) {
  std::vector<int> counter_procs;
  for (int p = 0; p <= sys.n; ++p) counter_procs.push_back(p);
  for (size_t att = 0; att < attempts; ++att) {
    CounterState cs = initial_counter_state(sys, counter_procs);
    std::vector<Step> walk;
    std::unordered_map<CounterState, size_t, CounterStateHash> seen;
    seen.emplace(cs, 0);
    bool dead = false;
    for (size_t t = 0; t < 400; ++t) {
      auto succ = counter_successors(sys, cs, want.b, counter_procs);
      succ.erase(std::remove_if(succ.begin(), succ.end(),
                                [](auto& pr) { return pr.first.failed; }),
                 succ.end());
      if (succ.empty()) {
        dead = true;
        break;
      }
      // bias toward the mover with the largest counter
      size_t best = 0;
      uint64_t score = 0;
      for (size_t i = 0; i < succ.size(); ++i) {
        uint64_t s = cs.counters[static_cast<size_t>(succ[i].second)] + rng() % 4;
        if (s >= score) {
          score = s;
          best = i;
        }
      }
      if ((rng() % 4) == 0) best = rng() % succ.size();
      walk.push_back({cs.s, succ[best].second});
      cs = succ[best].first;
      auto it = seen.find(cs);
      if (it != seen.end() && t > 4) {
        SystemLasso x;
        x.prefix.assign(walk.begin(), walk.begin() + static_cast<long>(it->second));
        x.period.assign(walk.begin() + static_cast<long>(it->second), walk.end());
        if (!x.period.empty() && is_fair(x, want, sys.proc_count())) return x;
        break;
      }
      seen.emplace(cs, walk.size());
    }
    (void)dead;
  }
  return std::nullopt;
}

// --- token generators ---

inline TokenProcess rand_token_process(Rng& rng, size_t base_count) {
  std::string text = "token P { base ";
  for (size_t i = 0; i < base_count; ++i) text += (i ? ", " : "") + ("s" + std::to_string(i));
  text += ";\n init s0/0, s0/1;\n";
  text += "trans s0/0 -rcv-> s0/1;\ntrans s0/1 -snd-> s0/0;\n";
  for (size_t i = 1; i < base_count; ++i) {
    // eps ring through the extra states on both layers
    std::string prev = "s" + std::to_string(i - 1), cur = "s" + std::to_string(i);
    text += "trans " + prev + "/0 -eps-> " + cur + "/0;\n";
    text += "trans " + cur + "/0 -eps-> s0/0;\n";
    if (rng() & 1) text += "trans " + prev + "/1 -eps-> " + cur + "/1;\n";
    if (rng() & 1) text += "trans " + cur + "/1 -eps-> s0/1;\n";
    if (rng() & 1) text += "trans " + cur + "/0 -rcv-> " + cur + "/1;\n";
    if (rng() & 1) text += "trans " + cur + "/1 -snd-> " + cur + "/0;\n";
  }
  text += "}\n";
  return parse_token_text(text);
}

/// Ring plus the chords that make the designated pair (1, 2) reachable
/// through the other vertices in both directions (u2 = u5 = 1).
inline TokenGraph rand_graph_through(Rng& rng, int n) {
  TokenGraph g;
  g.n = n;
  for (int i = 1; i <= n; ++i) g.edges.insert({i, i % n + 1});
  g.edges.insert({1, 3});
  g.edges.insert({n, 2});
  for (int tries = static_cast<int>(rng() % 3); tries > 0; --tries) {
    int a = static_cast<int>(rng() % n) + 1, b = static_cast<int>(rng() % n) + 1;
    if (a != b) g.edges.insert({a, b});
  }
  return g;
}

/// With require_both_deliveries the period must route the token to each of
/// vertices 1 and 2 through some third process at least once, so both relay
/// helpers of the four-vertex reduction get exercised.
inline std::optional<TokenLasso> rand_token_fair_lasso(Rng& rng, const TokenSystem& sys,
                                                       uint64_t b, size_t attempts = 60,
                                                       bool require_both_deliveries = false) {
  auto deliveries_ok = [&](const TokenLasso& x) {
    if (!require_both_deliveries) return true;
    bool to1 = false, to2 = false;
    for (const auto& st : x.period) {
      if (!st.action.sync || st.action.from == 1 || st.action.from == 2) continue;
      if (st.action.to == 1) to1 = true;
      if (st.action.to == 2) to2 = true;
    }
    return to1 && to2;
  };
  struct Key {
    TokenConfig c;
    std::vector<uint8_t> age;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = 1469598103934665603ull;
      for (auto& q : k.c.q) h = (h ^ ((q.base << 1) | q.bit)) * 1099511628211ull;
      for (auto a : k.age) h = (h ^ a) * 1099511628211ull;
      return h;
    }
  };
  auto inits = sys.initial_configs();
  for (size_t att = 0; att < attempts; ++att) {
    Key cur;
    cur.c = inits[rng() % inits.size()];
    cur.age.assign(static_cast<size_t>(sys.G.n), 0);
    std::vector<TokenStep> walk;
    std::unordered_map<Key, size_t, KeyHash> seen;
    seen.emplace(cur, 0);
    for (size_t t = 0; t < 500; ++t) {
      auto succ = token_successors(sys, cur.c);
      if (succ.empty()) break;
      // prefer passing to the most starved receiver
      size_t best = 0;
      int64_t score = -1;
      for (size_t i = 0; i < succ.size(); ++i) {
        int64_t s = rng() % 3;
        const auto& lab = succ[i].second;
        if (lab.sync) s += 2 + 3 * cur.age[static_cast<size_t>(lab.to) - 1];
        if (s > score) {
          score = s;
          best = i;
        }
      }
      if ((rng() % 5) == 0) best = rng() % succ.size();
      const auto& [nc, lab] = succ[best];
      bool over = false;
      Key nxt;
      nxt.c = nc;
      nxt.age = cur.age;
      for (int p = 1; p <= sys.G.n; ++p) {
        auto& a = nxt.age[static_cast<size_t>(p) - 1];
        if (lab.sync && lab.to == p) a = 0;
        else if (static_cast<uint64_t>(a) + 1 > b) over = true;
        else ++a;
      }
      if (over) break;
      walk.push_back({cur.c, lab});
      cur = nxt;
      auto it = seen.find(cur);
      if (it != seen.end() && t > 4) {
        TokenLasso x;
        x.prefix.assign(walk.begin(), walk.begin() + static_cast<long>(it->second));
        x.period.assign(walk.begin() + static_cast<long>(it->second), walk.end());
        if (!x.period.empty() && token_fair(x, b) && deliveries_ok(x)) return x;
        break;
      }
      seen.emplace(cur, walk.size());
    }
  }
  return std::nullopt;
}

}  // namespace testgen
