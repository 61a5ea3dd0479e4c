#include "pmcp/token.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>

namespace pmcp {

std::string TokenProcess::state_name(TokenState q) const {
  return base_names[q.base] + (q.bit ? "/1" : "/0");
}

std::optional<TokenState> TokenProcess::parse_state(const std::string& s) const {
  auto slash = s.rfind('/');
  if (slash == std::string::npos || slash + 2 != s.size()) return std::nullopt;
  char b = s[slash + 1];
  if (b != '0' && b != '1') return std::nullopt;
  std::string base = s.substr(0, slash);
  for (size_t i = 0; i < base_names.size(); ++i)
    if (base_names[i] == base) return TokenState{static_cast<uint16_t>(i), b == '1'};
  return std::nullopt;
}

int TokenConfig::token_holder() const {
  int holder = -1;
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i].bit) {
      if (holder >= 0) return -1;
      holder = static_cast<int>(i) + 1;
    }
  }
  return holder;
}

const TokenStep& TokenLasso::at(size_t t) const {
  if (t < prefix.size()) return prefix[t];
  return period[(t - prefix.size()) % period.size()];
}

const TokenConfig& TokenLasso::state_after(size_t t) const {
  size_t u = t + 1;
  if (u < prefix.size()) return prefix[u].state;
  if (period.empty()) throw InternalError("token lasso with empty period");
  return period[(u - prefix.size()) % period.size()].state;
}

namespace {

bool reaches(const TokenGraph& g, int from, int to, int avoid,
             const std::vector<int>& start_set) {
  // path from one of start_set to `to` using vertices != avoid (except `to`)
  std::vector<char> seen(static_cast<size_t>(g.n) + 1, 0);
  std::deque<int> q;
  for (int s : start_set) {
    if (s == avoid) continue;
    if (s == to) return true;
    if (!seen[static_cast<size_t>(s)]) {
      seen[static_cast<size_t>(s)] = 1;
      q.push_back(s);
    }
  }
  (void)from;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w = 1; w <= g.n; ++w) {
      if (!g.has_edge(v, w)) continue;
      if (w == to) return true;
      if (w == avoid) continue;
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        q.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

ConnectivityVector connectivity_vector(const TokenGraph& g, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > g.n || j > g.n)
    throw InputError("connectivity vector needs two distinct vertices");
  auto succs = [&](int v) {
    std::vector<int> out;
    for (int w = 1; w <= g.n; ++w)
      if (g.has_edge(v, w)) out.push_back(w);
    return out;
  };
  ConnectivityVector u{};
  // u1: non-empty path i -> i avoiding j
  u[0] = reaches(g, i, i, j, succs(i));
  // u2: path i -> j via vertices different from i and j
  {
    bool found = false;
    for (int m : succs(i))
      if (m != j && m != i && reaches(g, m, j, i, {m})) found = true;
    u[1] = found;
  }
  // u3: direct edge
  u[2] = g.has_edge(i, j);
  u[3] = reaches(g, j, j, i, succs(j));
  {
    bool found = false;
    for (int m : succs(j))
      if (m != i && m != j && reaches(g, m, i, j, {m})) found = true;
    u[4] = found;
  }
  u[5] = g.has_edge(j, i);
  return u;
}

std::vector<TokenConfig> TokenSystem::initial_configs() const {
  std::vector<TokenState> token_inits, free_inits;
  for (const TokenState& q : T.inits) (q.bit ? token_inits : free_inits).push_back(q);
  if (token_inits.empty() || free_inits.empty())
    throw InputError("token process must have initial states with and without the token");
  std::vector<TokenConfig> out;
  // choose the holder and an assignment of initial states to every process
  std::vector<TokenConfig> partial;
  for (int holder = 1; holder <= G.n; ++holder) {
    partial.clear();
    partial.push_back(TokenConfig{});
    for (int p = 1; p <= G.n; ++p) {
      std::vector<TokenConfig> next;
      const auto& options = (p == holder) ? token_inits : free_inits;
      for (const auto& cfg : partial) {
        for (const TokenState& q : options) {
          TokenConfig c = cfg;
          c.q.push_back(q);
          next.push_back(std::move(c));
        }
      }
      partial = std::move(next);
    }
    out.insert(out.end(), partial.begin(), partial.end());
  }
  return out;
}

std::vector<std::pair<TokenConfig, TokenActionLabel>> token_successors(
    const TokenSystem& sys, const TokenConfig& c) {
  std::vector<std::pair<TokenConfig, TokenActionLabel>> out;
  int n = sys.G.n;
  for (int p = 1; p <= n; ++p) {
    const TokenState& q = c.q[static_cast<size_t>(p) - 1];
    for (const auto& tr : sys.T.transitions) {
      if (!(tr.from == q)) continue;
      if (tr.action == TokenAction::Eps) {
        TokenConfig c2 = c;
        c2.q[static_cast<size_t>(p) - 1] = tr.to;
        out.emplace_back(std::move(c2), TokenActionLabel::eps(p));
      } else if (tr.action == TokenAction::Snd) {
        for (int z = 1; z <= n; ++z) {
          if (!sys.G.has_edge(p, z)) continue;
          const TokenState& qz = c.q[static_cast<size_t>(z) - 1];
          for (const auto& rz : sys.T.transitions) {
            if (rz.action != TokenAction::Rcv || !(rz.from == qz)) continue;
            TokenConfig c2 = c;
            c2.q[static_cast<size_t>(p) - 1] = tr.to;
            c2.q[static_cast<size_t>(z) - 1] = rz.to;
            out.emplace_back(std::move(c2), TokenActionLabel::pass(p, z));
          }
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<uint64_t> receive_moments(const TokenLasso& x, int proc, uint64_t horizon) {
  std::vector<uint64_t> m;
  for (uint64_t t = 0; t < horizon; ++t) {
    const auto& a = x.at(t).action;
    if (a.sync && a.to == proc) m.push_back(t);
  }
  return m;
}

}  // namespace

bool token_fair(const TokenLasso& x, uint64_t b) {
  if (x.period.empty()) return false;
  int n = static_cast<int>(x.prefix.empty() ? x.period[0].state.q.size()
                                            : x.prefix[0].state.q.size());
  uint64_t window_limit = x.prefix.size() + x.period.size();
  uint64_t horizon = window_limit + b + x.period.size() + 2;
  for (int p = 1; p <= n; ++p) {
    auto recv = receive_moments(x, p, horizon);
    size_t i = 0;
    for (uint64_t m = 0; m <= window_limit; ++m) {
      while (i < recv.size() && recv[i] < m) ++i;
      if (i >= recv.size() || recv[i] > m + b) return false;
    }
  }
  return true;
}

std::optional<uint64_t> min_token_fair_bound(const TokenLasso& x) {
  if (x.period.empty()) return std::nullopt;
  int n = static_cast<int>(x.at(0).state.q.size());
  uint64_t bound = 1;
  uint64_t horizon = x.prefix.size() + 2 * x.period.size() + 2;
  for (int p = 1; p <= n; ++p) {
    bool in_period = false;
    for (const auto& st : x.period)
      if (st.action.sync && st.action.to == p) in_period = true;
    if (!in_period) return std::nullopt;
    auto recv = receive_moments(x, p, horizon);
    uint64_t need = recv.front();
    for (size_t i = 0; i + 1 < recv.size(); ++i)
      need = std::max(need, recv[i + 1] - recv[i] - 1);
    bound = std::max(bound, need);
  }
  return bound;
}

std::optional<std::string> token_replay_error(const TokenSystem& sys, const TokenLasso& x) {
  if (x.period.empty()) return "lasso period is empty";
  size_t total = x.len();
  for (size_t t = 0; t < total; ++t)
    if (x.at(t).state.q.size() != static_cast<size_t>(sys.G.n))
      return "configuration width does not match the graph";
  {
    auto inits = sys.initial_configs();
    if (std::find(inits.begin(), inits.end(), x.at(0).state) == inits.end())
      return "run does not start in an initial configuration";
  }
  for (size_t t = 0; t < total; ++t) {
    const TokenStep& st = x.at(t);
    const TokenConfig& nxt = x.state_after(t);
    if (st.state.token_holder() < 0) return "token count violated at step " + std::to_string(t);
    auto succ = token_successors(sys, st.state);
    bool ok = false;
    for (auto& [c2, lab] : succ)
      if (lab == st.action && c2 == nxt) ok = true;
    if (!ok) return "replay failed at step " + std::to_string(t);
  }
  return std::nullopt;
}

LassoWord token_project(const TokenSystem& sys, const TokenLasso& x,
                        const std::vector<int>& procs) {
  auto letter = [&](const TokenConfig& c) {
    Letter l;
    for (int p : procs)
      l.insert(Atom::idx('T', p, sys.T.state_name(c.q[static_cast<size_t>(p) - 1])));
    return l;
  };
  LassoWord w;
  for (const auto& st : x.prefix) w.prefix.push_back(letter(st.state));
  for (const auto& st : x.period) w.period.push_back(letter(st.state));
  return w;
}

namespace {

/// Shortest eps-only path between token states of equal bit, as transitions.
std::optional<std::vector<TokenTransition>> eps_path(const TokenProcess& t, TokenState from,
                                                     TokenState to) {
  if (from == to) return std::vector<TokenTransition>{};
  std::map<TokenState, TokenTransition> par;
  std::deque<TokenState> q{from};
  while (!q.empty()) {
    TokenState v = q.front();
    q.pop_front();
    for (const auto& tr : t.transitions) {
      if (tr.action != TokenAction::Eps || !(tr.from == v)) continue;
      if (par.count(tr.to) || tr.to == from) continue;
      par.emplace(tr.to, tr);
      if (tr.to == to) {
        std::vector<TokenTransition> path;
        TokenState w = to;
        while (!(w == from)) {
          auto it = par.find(w);
          path.push_back(it->second);
          w = it->second.from;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push_back(tr.to);
    }
  }
  return std::nullopt;
}

/// Simple eps-paths from `from` to `to` avoiding `banned` states; shortest,
/// deterministic by transition order.
std::optional<std::vector<TokenTransition>> eps_path_avoiding(
    const TokenProcess& t, TokenState from, TokenState to,
    const std::vector<TokenState>& banned) {
  auto is_banned = [&](TokenState q) {
    return std::find(banned.begin(), banned.end(), q) != banned.end();
  };
  if (from == to) return std::vector<TokenTransition>{};
  std::map<TokenState, TokenTransition> par;
  std::deque<TokenState> q{from};
  while (!q.empty()) {
    TokenState v = q.front();
    q.pop_front();
    for (const auto& tr : t.transitions) {
      if (tr.action != TokenAction::Eps || !(tr.from == v)) continue;
      if (!(tr.to == to) && is_banned(tr.to)) continue;
      if (par.count(tr.to) || tr.to == from) continue;
      par.emplace(tr.to, tr);
      if (tr.to == to) {
        std::vector<TokenTransition> path;
        TokenState w = to;
        while (!(w == from)) {
          auto it = par.find(w);
          path.push_back(it->second);
          w = it->second.from;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push_back(tr.to);
    }
  }
  return std::nullopt;
}

std::vector<TokenState> states_of(const std::vector<TokenTransition>& path,
                                  TokenState start) {
  std::vector<TokenState> s{start};
  for (const auto& tr : path) s.push_back(tr.to);
  return s;
}

}  // namespace

std::optional<ImmediateSends> immediately_sends_paths(const TokenProcess& t) {
  // candidate q_rcv: token-free states with an outgoing rcv; q_snd: token
  // states with an outgoing snd; lexicographically least valid pair
  std::vector<TokenState> all;
  for (uint16_t b = 0; b < t.base_names.size(); ++b) {
    all.push_back({b, false});
    all.push_back({b, true});
  }
  std::sort(all.begin(), all.end(), [&](TokenState a, TokenState b2) {
    return t.state_name(a) < t.state_name(b2);
  });
  for (TokenState qr : all) {
    if (qr.bit) continue;
    for (TokenState qs : all) {
      if (!qs.bit) continue;
      // path (ii): rcv transition out of q_rcv, then eps to q_snd
      for (const auto& rcv : t.transitions) {
        if (rcv.action != TokenAction::Rcv || !(rcv.from == qr)) continue;
        for (const auto& snd : t.transitions) {
          if (snd.action != TokenAction::Snd || !(snd.from == qs)) continue;
          // walk rcv.to -> q_snd avoiding nothing yet; then snd.to -> q_rcv
          // avoiding the interior of path (ii)
          auto mid_ii = eps_path(t, rcv.to, qs);
          if (!mid_ii) continue;
          std::vector<TokenTransition> path_ii{rcv};
          path_ii.insert(path_ii.end(), mid_ii->begin(), mid_ii->end());
          // interior states of (ii), endpoints excluded
          std::vector<TokenState> interior = states_of(*mid_ii, rcv.to);
          interior.pop_back();           // drop q_snd
          std::vector<TokenState> banned = interior;
          banned.push_back(qr);          // may reappear only as the endpoint
          banned.push_back(qs);
          auto mid_iii = eps_path_avoiding(t, snd.to, qr, banned);
          if (!mid_iii) continue;
          std::vector<TokenTransition> path_iii{snd};
          path_iii.insert(path_iii.end(), mid_iii->begin(), mid_iii->end());
          if (path_ii.size() + path_iii.size() > t.num_states()) continue;
          // warm-up: eps path from a token-free initial state
          for (const TokenState& init : t.inits) {
            if (init.bit) continue;
            auto warm = eps_path(t, init, qr);
            if (!warm) continue;
            ImmediateSends out;
            out.q_rcv = qr;
            out.q_snd = qs;
            out.warmup = *warm;
            out.recv_to_send = std::move(path_ii);
            out.send_to_recv = std::move(path_iii);
            return out;
          }
          break;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<TokenTransition>> token_warmup_path(const TokenProcess& t,
                                                              TokenState q_snd) {
  for (const TokenState& init : t.inits) {
    if (!init.bit) continue;
    auto p = eps_path(t, init, q_snd);
    if (p) return p;
  }
  return std::nullopt;
}

std::optional<ReductionGraph> synth_reduction_graph(const ConnectivityVector& v) {
  // vertices i=1 j=2 k=3 l=4; 12 possible edges
  std::vector<std::pair<int, int>> slots;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      if (a != b) slots.emplace_back(a, b);
  const int i = 1, j = 2, k = 3, l = 4;
  for (uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    TokenGraph g;
    g.n = 4;
    for (size_t s = 0; s < slots.size(); ++s)
      if (mask & (1u << s)) g.edges.insert(slots[s]);
    if (!g.has_edge(k, j) || !g.has_edge(l, i)) continue;
    // relay edges demanded by the construction case split
    if (v[0] && !g.has_edge(i, l)) continue;
    if (v[1] && !g.has_edge(i, k)) continue;
    if (v[3] && !g.has_edge(j, k)) continue;
    if (v[4] && !g.has_edge(j, l)) continue;
    if (connectivity_vector(g, i, j) != v) continue;
    ReductionGraph out;
    out.g = std::move(g);
    return out;
  }
  return std::nullopt;
}

// --- file formats ---

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

TokenState parse_state_ref(Tok& tk, TokenProcess& t) {
  std::string base = tk.ident();
  tk.expect_ch('/');
  long bit = tk.number();
  if (bit != 0 && bit != 1) throw ParseError("token bit must be 0 or 1", tk.pos);
  for (size_t i = 0; i < t.base_names.size(); ++i)
    if (t.base_names[i] == base) return {static_cast<uint16_t>(i), bit == 1};
  throw ParseError("unknown base state '" + base + "'", tk.pos);
}

}  // namespace

TokenProcess parse_token_text(const std::string& text) {
  Tok tk(text);
  tk.expect_kw("token");
  TokenProcess t;
  t.name = tk.ident();
  tk.expect_ch('{');
  while (!tk.try_ch('}')) {
    if (tk.try_kw("base")) {
      do {
        std::string n = tk.ident();
        if (std::find(t.base_names.begin(), t.base_names.end(), n) != t.base_names.end())
          throw ParseError("duplicate base state '" + n + "'", tk.pos);
        t.base_names.push_back(n);
      } while (tk.try_ch(','));
      tk.expect_ch(';');
    } else if (tk.try_kw("init")) {
      do {
        t.inits.push_back(parse_state_ref(tk, t));
      } while (tk.try_ch(','));
      tk.expect_ch(';');
    } else if (tk.try_kw("trans")) {
      TokenTransition tr;
      tr.from = parse_state_ref(tk, t);
      tk.expect_ch('-');
      if (tk.try_kw("snd"))
        tr.action = TokenAction::Snd;
      else if (tk.try_kw("rcv"))
        tr.action = TokenAction::Rcv;
      else if (tk.try_kw("eps"))
        tr.action = TokenAction::Eps;
      else
        throw ParseError("expected action snd, rcv or eps", tk.pos);
      tk.expect_ch('-');
      tk.expect_ch('>');
      tr.to = parse_state_ref(tk, t);
      switch (tr.action) {
        case TokenAction::Eps:
          if (tr.from.bit != tr.to.bit)
            throw ParseError("eps transitions preserve the token bit", tk.pos);
          break;
        case TokenAction::Snd:
          if (!tr.from.bit || tr.to.bit)
            throw ParseError("snd transitions go from bit 1 to bit 0", tk.pos);
          break;
        case TokenAction::Rcv:
          if (tr.from.bit || !tr.to.bit)
            throw ParseError("rcv transitions go from bit 0 to bit 1", tk.pos);
          break;
      }
      t.transitions.push_back(tr);
      tk.expect_ch(';');
    } else {
      throw ParseError("expected 'base', 'init' or 'trans'", tk.pos);
    }
  }
  if (t.base_names.empty()) throw ParseError("token process needs base states", tk.pos);
  bool has0 = false, has1 = false;
  for (const auto& q : t.inits) (q.bit ? has1 : has0) = true;
  if (!has0 || !has1)
    throw ParseError("initial states must include token and non-token states", tk.pos);
  return t;
}

TokenGraph parse_graph_text(const std::string& text) {
  Tok tk(text);
  tk.expect_kw("graph");
  tk.expect_ch('{');
  TokenGraph g;
  while (!tk.try_ch('}')) {
    if (tk.try_kw("n")) {
      tk.expect_ch(':');
      g.n = static_cast<int>(tk.number());
      tk.expect_ch(';');
    } else if (tk.try_kw("edges")) {
      tk.expect_ch(':');
      do {
        tk.expect_ch('(');
        int a = static_cast<int>(tk.number());
        tk.expect_ch(',');
        int b = static_cast<int>(tk.number());
        tk.expect_ch(')');
        if (a == b) throw ParseError("self loops are not allowed", tk.pos);
        if (a < 1 || b < 1) throw ParseError("vertices are 1-based", tk.pos);
        g.edges.insert({a, b});
      } while (tk.try_ch(','));
      tk.expect_ch(';');
    } else {
      throw ParseError("expected 'n' or 'edges'", tk.pos);
    }
  }
  if (g.n < 1) throw ParseError("graph needs a positive vertex count", tk.pos);
  for (auto& [a, b] : g.edges)
    if (a > g.n || b > g.n) throw ParseError("edge endpoint out of range", tk.pos);
  return g;
}

}  // namespace pmcp
