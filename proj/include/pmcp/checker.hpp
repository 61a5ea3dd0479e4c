#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmcp/cutoff.hpp"
#include "pmcp/formula.hpp"
#include "pmcp/graph.hpp"
#include "pmcp/protocol.hpp"
#include "pmcp/token.hpp"

namespace pmcp {

struct CheckStats {
  size_t product_vertices = 0;
  size_t product_edges = 0;
};

struct Verdict {
  bool holds = true;
  std::optional<SystemLasso> counterexample;
  CheckStats stats;
  size_t deadlock_states = 0;  // reachable deadlocks of the plain system
  bool bound_ok = true;        // counterexample length within the stated bound
};

struct TokenVerdict {
  bool holds = true;
  std::optional<TokenLasso> counterexample;
  CheckStats stats;
  bool bound_ok = true;
};

struct PromptVerdict {
  bool satisfied = false;
  uint64_t k = 0;       // witness bound when satisfied
  uint64_t k_max = 0;   // cap actually used
  uint64_t b = 0;
  std::optional<SystemLasso> sample_counterexample;
  std::optional<TokenLasso> sample_token_counterexample;
  CheckStats stats;  // accumulated over the k iterations
};

/// Running audit of every counterexample emission and its length bound.
struct EmissionAudit {
  uint64_t emissions = 0;
  uint64_t bound_violations = 0;
};
EmissionAudit emission_audit();
void reset_emission_audit();

/// Prompt-free model checking under bounded fairness. The negated formula's
/// automaton is composed with the bounded-fair system (global mode: one
/// counter per process) or, in the local mode, with counters for the scoped
/// processes only plus a move-infinitely-often obligation for everyone.
Verdict check_ltl(const GuardedSystem& sys, const FormulaPtr& f, const FairnessSpec& fair,
                  bool deadlock_diagnostic = true, size_t max_vertices = 50000000);

/// k-search for prompt formulas: check instantiate_k(f, k) for k = 0, 1, ...
/// First passing k wins (sound by k-monotonicity) and is re-verified at k+1.
PromptVerdict check_prompt(const GuardedSystem& sys, const FormulaPtr& f,
                           const FairnessSpec& fair,
                           std::optional<uint64_t> k_max = std::nullopt,
                           size_t max_vertices = 50000000);

/// Token systems: bounded fairness counts token receipts; the local and
/// global notions coincide here.
TokenVerdict check_token_ltl(const TokenSystem& sys, const FormulaPtr& f, uint64_t b,
                             size_t max_vertices = 50000000);
PromptVerdict check_token_prompt(const TokenSystem& sys, const FormulaPtr& f, uint64_t b,
                                 std::optional<uint64_t> k_max = std::nullopt,
                                 size_t max_vertices = 50000000);

struct SweepEntry {
  uint64_t b = 0;
  PromptVerdict verdict;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  bool all_satisfied = true;

  const SweepEntry* entry_for(uint64_t b) const;
};

/// Per-b prompt verdicts over a finite range of fairness bounds. A violation
/// at some b must persist at every larger swept b (fair-run inclusion); the
/// sweep checks this and reports "holds for all swept b" at most.
SweepReport b_sweep(const GuardedSystem& sys, const FormulaPtr& f, FairnessMode mode,
                    const std::vector<int>& scope, const std::vector<uint64_t>& bs,
                    std::optional<uint64_t> k_max = std::nullopt, unsigned threads = 1);

SweepReport b_sweep_token(const TokenSystem& sys, const FormulaPtr& f,
                          const std::vector<uint64_t>& bs,
                          std::optional<uint64_t> k_max = std::nullopt, unsigned threads = 1);

struct ParamReport {
  CutoffResult cutoff;
  Classification classification;
  size_t checked_size = 0;  // system size the reduction was checked at
  SweepReport sweep;
  std::vector<std::string> notes;
  std::optional<ReductionGraph> reduction_graph;  // token runs embed G'
};

/// Parameterized verdict via the cutoff reduction: the indexed formula is
/// symmetry-reduced to phi(A, B_1..B_h) and swept at the cutoff size; the
/// verdict holds for every n >= c. Throws InputError when no cutoff row
/// applies (unknown row, mixed class, or a violated side condition).
ParamReport check_parameterized(const SystemFile& file, const IndexedFormula& f,
                                FairnessMode mode, const std::vector<uint64_t>& bs,
                                std::optional<uint64_t> k_max = std::nullopt,
                                unsigned threads = 1);

/// Token variant: reduces (G, g, h) to the synthesized 4-vertex graph with the
/// same connectivity vector; 1-indexed formulas are widened with a dummy
/// second index.
ParamReport check_parameterized_token(const TokenProcess& t, const TokenGraph& g, int vg,
                                      int vh, const IndexedFormula& f,
                                      const std::vector<uint64_t>& bs,
                                      std::optional<uint64_t> k_max = std::nullopt,
                                      unsigned threads = 1);

/// Binds an indexed formula's variables to explicit process indices.
FormulaPtr bind_indices_to(const IndexedFormula& f, const std::vector<int>& procs);

}  // namespace pmcp
