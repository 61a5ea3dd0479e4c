#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmcp/formula.hpp"

namespace pmcp {

/// Local state of a token process: base state plus token bit.
struct TokenState {
  uint16_t base = 0;
  bool bit = false;

  bool operator==(const TokenState&) const = default;
  bool operator<(const TokenState& o) const {
    return std::tie(base, bit) < std::tie(o.base, o.bit);
  }
};

enum class TokenAction : uint8_t { Eps, Snd, Rcv };

struct TokenTransition {
  TokenState from, to;
  TokenAction action = TokenAction::Eps;
};

struct TokenProcess {
  std::string name;
  std::vector<std::string> base_names;
  std::vector<TokenState> inits;  // intersects both token and non-token states
  std::vector<TokenTransition> transitions;

  size_t num_states() const { return 2 * base_names.size(); }  // |Q_T|
  std::string state_name(TokenState q) const;
  std::optional<TokenState> parse_state(const std::string& s) const;
};

/// Directed graph without self loops; vertices 1..n.
struct TokenGraph {
  int n = 0;
  std::set<std::pair<int, int>> edges;

  bool has_edge(int a, int b) const { return edges.count({a, b}) > 0; }
};

/// (u1..u6) of the reduction machinery; u1 = cycle at i avoiding j,
/// u2 = path i->j through others, u3 = direct edge, u4..u6 swap i and j.
using ConnectivityVector = std::array<bool, 6>;

ConnectivityVector connectivity_vector(const TokenGraph& g, int i, int j);

struct TokenConfig {
  std::vector<TokenState> q;

  bool operator==(const TokenConfig&) const = default;
  int token_holder() const;  // -1 if not exactly one
};

/// Action labels on steps: eps by proc, or a send/receive pair along an edge.
struct TokenActionLabel {
  bool sync = false;
  int proc = 0;      // eps mover (1-based)
  int from = 0, to = 0;

  static TokenActionLabel eps(int p) { return {false, p, 0, 0}; }
  static TokenActionLabel pass(int a, int b) { return {true, 0, a, b}; }
  bool operator==(const TokenActionLabel&) const = default;
};

struct TokenStep {
  TokenConfig state;
  TokenActionLabel action;
};

struct TokenLasso {
  std::vector<TokenStep> prefix, period;

  size_t len() const { return prefix.size() + period.size(); }
  const TokenStep& at(size_t t) const;
  const TokenConfig& state_after(size_t t) const;
};

struct TokenSystem {
  TokenProcess T;
  TokenGraph G;

  std::vector<TokenConfig> initial_configs() const;
};

std::vector<std::pair<TokenConfig, TokenActionLabel>> token_successors(
    const TokenSystem& sys, const TokenConfig& c);

/// Every process receives the token at least once in every window [m, m+b].
bool token_fair(const TokenLasso& x, uint64_t b);
std::optional<uint64_t> min_token_fair_bound(const TokenLasso& x);

std::optional<std::string> token_replay_error(const TokenSystem& sys, const TokenLasso& x);

/// Projection of the configuration sequence onto the given processes,
/// as a word over local token states.
LassoWord token_project(const TokenSystem& sys, const TokenLasso& x, const std::vector<int>& procs);

/// The fixed immediate-send machinery: q_rcv (token-free), q_snd (token
/// holding) and three local paths: a token-free warm-up path from an initial
/// state to q_rcv, a path q_rcv -> q_snd starting with rcv, and a path
/// q_snd -> q_rcv starting with snd. The two cycle paths share no state
/// besides their endpoints, so one relay executes at most |Q_T| actions.
struct ImmediateSends {
  TokenState q_rcv, q_snd;
  std::vector<TokenTransition> warmup;        // init -> q_rcv, all eps
  std::vector<TokenTransition> recv_to_send;  // rcv then eps
  std::vector<TokenTransition> send_to_recv;  // snd then eps
};

std::optional<ImmediateSends> immediately_sends_paths(const TokenProcess& t);

/// Token-holding warm-up used when a helper starts with the token: an
/// eps path from a token initial state to q_snd.
std::optional<std::vector<TokenTransition>> token_warmup_path(const TokenProcess& t,
                                                              TokenState q_snd);

/// Smallest 4-vertex graph (by edge bitmask) realizing the vector for the
/// designated pair (i, j) = (1, 2), with the relay edges (k, j) and (l, i)
/// present and the conditional relay edges implied by the vector.
struct ReductionGraph {
  TokenGraph g;           // vertices 1..4
  int i = 1, j = 2, k = 3, l = 4;
};

std::optional<ReductionGraph> synth_reduction_graph(const ConnectivityVector& v);

// --- file formats ---

TokenProcess parse_token_text(const std::string& text);
TokenGraph parse_graph_text(const std::string& text);

}  // namespace pmcp
