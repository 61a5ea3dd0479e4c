#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmcp/formula.hpp"

namespace pmcp {

using StateId = uint16_t;

/// Interned state names; Q_A and Q_B share one namespace and must be
/// disjoint across templates.
struct StateTable {
  std::vector<std::string> names;
  std::map<std::string, StateId> ids;

  StateId intern(const std::string& name);
  std::optional<StateId> find(const std::string& name) const;
  const std::string& name(StateId id) const { return names[id]; }
  size_t size() const { return names.size(); }
};

struct Guard {
  bool forall = false;       // else exists
  bool any = false;          // G = Q (the whole namespace)
  std::vector<StateId> set;  // sorted

  bool holds_for(StateId q) const;
};

struct LocalTransition {
  StateId from, to;
  Guard guard;
};

struct ProcessTemplate {
  std::string name;
  std::vector<StateId> states;
  StateId init = 0;
  std::vector<LocalTransition> transitions;

  bool has_state(StateId q) const;
};

/// Global state of A || B^n. Process 0 is A, processes 1..n are B_i.
struct GlobalState {
  StateId a = 0;
  std::vector<StateId> b;

  bool operator==(const GlobalState&) const = default;
  bool operator<(const GlobalState& o) const;
  StateId of(int proc) const { return proc == 0 ? a : b[static_cast<size_t>(proc) - 1]; }
  void set(int proc, StateId q);
};

struct GlobalStateHash {
  size_t operator()(const GlobalState& s) const;
};

struct GuardedSystem {
  StateTable table;
  ProcessTemplate A, B;
  int n = 1;

  int proc_count() const { return n + 1; }
  GlobalState initial() const;
  const ProcessTemplate& tmpl(int proc) const { return proc == 0 ? A : B; }
  std::string proc_name(int proc) const;
};

/// One step of a run: the state and the process that moves out of it.
struct Step {
  GlobalState state;
  int mover = 0;
};

/// Ultimately periodic run; the state after the last period step is the
/// first period state.
struct SystemLasso {
  std::vector<Step> prefix;
  std::vector<Step> period;

  size_t len() const { return prefix.size() + period.size(); }
  const Step& at(size_t t) const;
  const GlobalState& state_after(size_t t) const;  // state at moment t+1
};

enum class FairnessKind { Unconditional, GlobalBounded, LocalBounded };

struct FairnessSpec {
  FairnessKind kind = FairnessKind::GlobalBounded;
  uint64_t b = 1;          // bounded kinds
  std::vector<int> scope;  // LocalBounded only; process indices (0 = A)

  static FairnessSpec unconditional();
  static FairnessSpec global_bounded(uint64_t b);
  static FairnessSpec local_bounded(uint64_t b, std::vector<int> scope);
};

/// Global state extended with one fairness counter per process.
struct CounterState {
  GlobalState s;
  std::vector<uint8_t> counters;  // one per process in counter scope
  bool failed = false;

  bool operator==(const CounterState&) const = default;
};

struct CounterStateHash {
  size_t operator()(const CounterState& cs) const;
};

enum class SystemClass { Disjunctive, Conjunctive, Mixed };

struct Classification {
  SystemClass cls = SystemClass::Disjunctive;
  bool neutral_inits = true;         // conjunctive: {init_A, init_B} in every guard
  bool bounded_initializing = true;  // every cycle of B contains init_B
  std::vector<std::string> notes;
};

Classification classify(const GuardedSystem& sys);

std::vector<std::pair<GlobalState, int>> successors(const GuardedSystem& sys,
                                                    const GlobalState& s);

/// Successors in the bounded-fair system: the mover's counter resets, all
/// others increment, and exceeding b yields the failure state (no successors).
/// counter_procs selects which processes carry counters (all for the global
/// bounded-fair system).
std::vector<std::pair<CounterState, int>> counter_successors(
    const GuardedSystem& sys, const CounterState& cs, uint64_t b,
    const std::vector<int>& counter_procs);

CounterState initial_counter_state(const GuardedSystem& sys,
                                   const std::vector<int>& counter_procs);

bool is_fair(const SystemLasso& x, const FairnessSpec& f, int proc_count);

/// Least b such that the lasso is globally b-bounded fair, restricted to the
/// given processes (all processes for the global notion).
std::optional<uint64_t> min_fair_bound(const SystemLasso& x, const std::vector<int>& procs);
bool moves_infinitely_often(const SystemLasso& x, int proc);

std::vector<GlobalState> find_deadlocks(const GuardedSystem& sys, size_t max_states = 2000000);

/// Letterization of the run restricted to procs; mover annotations dropped.
LassoWord project(const GuardedSystem& sys, const SystemLasso& x, const std::vector<int>& procs);

/// Replays the lasso through the transition relation; returns an error
/// description for the first illegal step, or nullopt when valid.
std::optional<std::string> replay_error(const GuardedSystem& sys, const SystemLasso& x);

// --- file formats ---

struct SystemFile {
  std::map<std::string, ProcessTemplate> templates;
  StateTable table;
  std::string a_name, b_name;
};

SystemFile parse_system_text(const std::string& text);
GuardedSystem make_system(const SystemFile& f, int n);

}  // namespace pmcp
