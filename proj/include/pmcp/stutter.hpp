#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pmcp/formula.hpp"

namespace pmcp {

/// One maximal run of equal letters. len is meaningless when infinite.
struct CondRun {
  Letter letter;
  uint64_t len = 1;
  bool infinite = false;
};

/// Maximal-run condensation of a lasso word. Either the word is ultimately
/// constant (periodic part is a single infinite run) or the periodic part is
/// the lexicographically least rotation of the cyclic run sequence, reduced
/// to its primitive period. Adjacent runs always carry distinct letters.
struct Condensation {
  std::vector<CondRun> prefix;    // finite maximal runs
  std::vector<CondRun> periodic;  // single infinite run, or >= 1 finite runs

  bool ultimately_constant() const {
    return periodic.size() == 1 && periodic[0].infinite;
  }
  /// Letter and length of the i-th run of the full infinite run sequence.
  const CondRun& run(size_t i) const;
  /// First position of the i-th run.
  uint64_t run_start(size_t i) const;
  /// Run index containing position j.
  size_t run_index_of(uint64_t j) const;
  /// Rebuilds a lasso word equal to the condensed word.
  LassoWord expand() const;
};

Condensation condense(const LassoWord& w);

/// d-stutter equivalence: identical run letter sequences and two-sided
/// length ratio at most d on every corresponding pair of maximal runs.
bool d_equiv(const LassoWord& w, const LassoWord& w2, uint64_t d);

/// Least d such that d_equiv holds, or nullopt when the condensation letter
/// sequences differ.
std::optional<uint64_t> min_d(const LassoWord& w, const LassoWord& w2);

/// The position map f of the block machinery: f(j) is the position set of
/// the run of w2 corresponding to the run of w containing j.
class PositionMap {
 public:
  struct Span {
    uint64_t begin = 0;
    std::optional<uint64_t> end;  // half open; nullopt = infinite run

    bool contains(uint64_t j) const { return j >= begin && (!end || j < *end); }
  };

  PositionMap(Condensation source, Condensation target);

  Span image(uint64_t j) const;
  size_t run_index(uint64_t j) const { return src_.run_index_of(j); }
  const Condensation& source() const { return src_; }
  const Condensation& target() const { return tgt_; }

 private:
  Condensation src_, tgt_;
};

/// Throws InputError when the words are not bounded stutter equivalent.
PositionMap position_map(const LassoWord& w, const LassoWord& w2);

}  // namespace pmcp
