#pragma once

#include <cstdint>
#include <vector>

#include "pmcp/formula.hpp"

namespace pmcp {

/// Nondeterministic Buchi automaton over letters 2^AP. Transitions carry
/// literal constraints instead of explicit letters: an edge is taken on any
/// letter containing every atom in pos and none in neg.
struct BuchiAutomaton {
  struct Edge {
    uint32_t dst;
    std::vector<Atom> pos, neg;

    bool matches(const Letter& l) const;
  };

  std::vector<std::vector<Edge>> edges;  // indexed by source state
  uint32_t init = 0;
  std::vector<bool> accepting;

  size_t num_states() const { return edges.size(); }
};

/// Tableau construction for prompt-free NNF formulas (internal next allowed),
/// generalized acceptance degeneralized to plain Buchi.
BuchiAutomaton ltl_to_buchi(const FormulaPtr& f);

/// Does the automaton accept the word u.v^omega?
bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w);

}  // namespace pmcp
