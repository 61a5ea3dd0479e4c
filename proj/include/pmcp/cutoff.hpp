#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmcp/protocol.hpp"

namespace pmcp {

enum class LogicKind { LtlNoX, PromptNoX };
enum class FairnessMode { LocalBounded, GlobalBounded };

struct CutoffQuery {
  SystemClass cls = SystemClass::Disjunctive;  // token handled via TokenQuery
  bool token = false;
  FairnessMode fairness = FairnessMode::LocalBounded;
  LogicKind logic = LogicKind::LtlNoX;
  size_t h = 1;
  size_t qb = 1;  // |Q_B| for guarded classes
};

struct CutoffResult {
  bool known = false;
  size_t c = 0;
  std::vector<std::string> side_conditions;
  std::string citation;  // statement of the table row used, or of the refusal
};

/// Cutoff table lookup. Disjunctive: 2|Q_B| + h, except no known cutoff for
/// prompt specifications under global bounded fairness. Conjunctive: h + 1,
/// requiring initializing processes, plus bounded-initializing templates for
/// the global rows. Token: 2h.
CutoffResult cutoff_for(const CutoffQuery& q);

/// phi(A, B_1, ..., B_h): the h quantified indices bound to 1..h by symmetry.
FormulaPtr reduce_indexed(const IndexedFormula& f, size_t n);

}  // namespace pmcp
