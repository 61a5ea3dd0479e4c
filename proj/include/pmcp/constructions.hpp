#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmcp/protocol.hpp"
#include "pmcp/stutter.hpp"
#include "pmcp/token.hpp"

namespace pmcp {

/// Verification triple attached to every construction output: replay
/// validity, stutter distance against the claimed d, and fairness at the
/// claimed bound. Failures are recorded, never masked.
struct ConstructionChecks {
  bool input_fair = false;
  bool valid = false;
  bool d_ok = false;
  bool fair_ok = false;
  std::optional<uint64_t> measured_d;
  std::optional<uint64_t> measured_fair_bound;
  std::string detail;

  bool pass() const { return input_fair && valid && d_ok && fair_ok; }
};

struct GuardedConstruction {
  SystemLasso output;
  int output_n = 0;
  uint64_t claimed_d = 1;
  uint64_t claimed_fair_bound = 0;
  ConstructionChecks checks;
};

struct TokenConstruction {
  TokenLasso output;
  TokenGraph output_graph;
  int out_i = 1, out_j = 2;
  uint64_t claimed_d = 1;
  uint64_t claimed_fair_bound = 0;
  ConnectivityVector vector{};
  bool vector_ok = false;
  ConstructionChecks checks;
};

/// A run whose steps may move one or two processes at once (the two local
/// transitions of a duplicated step). Splitting the two-mover steps restores
/// interleaving semantics.
struct MultiStep {
  GlobalState state;
  std::vector<int> movers;  // 1 or 2 entries
};

struct MultiLasso {
  std::vector<MultiStep> prefix, period;
};

SystemLasso establish_interleaving(const GuardedSystem& target, const MultiLasso& x);

/// Adds process B_{n+1} copying x(B_copy); every copied move is split into
/// two consecutive transitions. Preserves (A, B_1) up to d = 2; local bound
/// 2b for {A, B_1}, or global bound 2b in global mode.
GuardedConstruction mon_disj(const GuardedSystem& sys, const SystemLasso& x, int copy_index,
                             uint64_t b, bool global_mode);

/// Flooding with evacuation and fair extension down to c = 2|Q_B| + 1
/// processes; preserves (A, B_1) up to d = c with local bound b * c.
GuardedConstruction bound_disj(const GuardedSystem& sys, const SystemLasso& x, uint64_t b);

/// B_{n+1} shares the local run of B_share with role swaps at every visit of
/// the initial state; (A, B_1) is untouched (d = 1). Local bound b, or
/// b + |Q_B| globally for bounded-initializing templates.
GuardedConstruction mon_conj(const GuardedSystem& sys, const SystemLasso& x, int share_index,
                             uint64_t b, bool global_mode);

/// Keeps the A and B_1 columns and deletes all other steps, yielding a run of
/// A || B^1 with global bound b and (A, B_1) preserved up to d = b.
GuardedConstruction bound_conj(const GuardedSystem& sys, const SystemLasso& x, uint64_t b);

/// Splices vertex n+1 into the outgoing edges of vertex a; the new process
/// relays every send of a, immediately. Preserves the connectivity vector of
/// (g, h) and the pair projection up to d = |Q_T| + 1.
TokenConstruction mon_token(const TokenProcess& t, const TokenGraph& g, const TokenLasso& x,
                            int vg, int vh, int va, uint64_t b);

/// Reduction to four vertices: keeps the (g, h) columns as (i, j); helper k
/// relays deliveries to j, helper l returns the token to i.
TokenConstruction bound_token(const TokenProcess& t, const TokenGraph& g, const TokenLasso& x,
                              int vg, int vh, uint64_t b);

}  // namespace pmcp
