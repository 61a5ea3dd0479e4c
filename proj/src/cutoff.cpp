#include "pmcp/cutoff.hpp"

namespace pmcp {

CutoffResult cutoff_for(const CutoffQuery& q) {
  if (q.h < 1) throw InputError("cutoff queries need h >= 1");
  CutoffResult r;
  if (q.token) {
    r.known = true;
    r.c = 2 * q.h;
    r.citation = "token-passing cutoff 2h (graph size), any bounded fairness, with a "
                 "connectivity-preserving reduction graph";
    r.side_conditions.push_back("reduction graph must realize the connectivity vector");
    return r;
  }
  switch (q.cls) {
    case SystemClass::Disjunctive:
      if (q.qb < 1) throw InputError("cutoff queries need |Q_B| >= 1");
      if (q.logic == LogicKind::PromptNoX && q.fairness == FairnessMode::GlobalBounded) {
        r.known = false;
        r.citation = "no known cutoff for disjunctive systems with prompt specifications "
                     "under global bounded fairness";
        return r;
      }
      r.known = true;
      r.c = 2 * q.qb + q.h;
      r.citation = "disjunctive cutoff 2|Q_B| + h";
      return r;
    case SystemClass::Conjunctive:
      r.known = true;
      r.c = q.h + 1;
      r.citation = "conjunctive cutoff h + 1";
      r.side_conditions.push_back("processes must be initializing");
      if (q.fairness == FairnessMode::GlobalBounded)
        r.side_conditions.push_back("B must be bounded initializing (every cycle contains "
                                    "the initial state)");
      return r;
    case SystemClass::Mixed:
      throw InputError("no cutoff rows apply to mixed systems");
  }
  throw InternalError("cutoff_for: bad class");
}

FormulaPtr reduce_indexed(const IndexedFormula& f, size_t n) {
  if (n < f.h()) throw InputError("system size smaller than the index arity");
  return bind_indices(f);
}

}  // namespace pmcp
