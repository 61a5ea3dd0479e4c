#include "pmcp/stutter.hpp"

#include <algorithm>
#include <numeric>

namespace pmcp {

const CondRun& Condensation::run(size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (ultimately_constant()) {
    if (i != prefix.size()) throw InternalError("run index past the infinite tail");
    return periodic[0];
  }
  return periodic[(i - prefix.size()) % periodic.size()];
}

uint64_t Condensation::run_start(size_t i) const {
  uint64_t s = 0;
  size_t k = prefix.size();
  if (i <= k) {
    for (size_t j = 0; j < i; ++j) s += prefix[j].len;
    return s;
  }
  for (const auto& r : prefix) s += r.len;
  if (ultimately_constant()) throw InternalError("run index past the infinite tail");
  uint64_t cycle_len = 0;
  for (const auto& r : periodic) cycle_len += r.len;
  uint64_t q = i - k;
  s += (q / periodic.size()) * cycle_len;
  for (size_t j = 0; j < q % periodic.size(); ++j) s += periodic[j].len;
  return s;
}

size_t Condensation::run_index_of(uint64_t j) const {
  uint64_t s = 0;
  for (size_t i = 0; i < prefix.size(); ++i) {
    s += prefix[i].len;
    if (j < s) return i;
  }
  if (ultimately_constant()) return prefix.size();
  uint64_t q = j - s;
  uint64_t cycle_len = 0;
  for (const auto& r : periodic) cycle_len += r.len;
  uint64_t wraps = q / cycle_len;
  uint64_t rem = q % cycle_len;
  for (size_t i = 0; i < periodic.size(); ++i) {
    if (rem < periodic[i].len) return prefix.size() + wraps * periodic.size() + i;
    rem -= periodic[i].len;
  }
  throw InternalError("run_index_of: arithmetic");
}

LassoWord Condensation::expand() const {
  LassoWord w;
  for (const auto& r : prefix)
    for (uint64_t i = 0; i < r.len; ++i) w.prefix.push_back(r.letter);
  if (ultimately_constant()) {
    w.period.push_back(periodic[0].letter);
  } else {
    for (const auto& r : periodic)
      for (uint64_t i = 0; i < r.len; ++i) w.period.push_back(r.letter);
  }
  return w;
}

namespace {

std::vector<CondRun> runs_of(const std::vector<Letter>& word) {
  std::vector<CondRun> out;
  for (const auto& l : word) {
    if (!out.empty() && out.back().letter == l)
      ++out.back().len;
    else
      out.push_back({l, 1, false});
  }
  return out;
}

bool run_less(const CondRun& a, const CondRun& b) {
  if (a.letter < b.letter) return true;
  if (b.letter < a.letter) return false;
  return a.len < b.len;
}

bool rotation_less(const std::vector<CondRun>& r, size_t a, size_t b) {
  size_t m = r.size();
  for (size_t i = 0; i < m; ++i) {
    const CondRun& x = r[(a + i) % m];
    const CondRun& y = r[(b + i) % m];
    if (run_less(x, y)) return true;
    if (run_less(y, x)) return false;
  }
  return false;
}

}  // namespace

Condensation condense(const LassoWord& w) {
  if (w.period.empty()) throw InputError("lasso period must be non-empty");
  Condensation c;

  bool constant = std::all_of(w.period.begin(), w.period.end(),
                              [&](const Letter& l) { return l == w.period[0]; });
  if (constant) {
    c.prefix = runs_of(w.prefix);
    while (!c.prefix.empty() && c.prefix.back().letter == w.period[0]) c.prefix.pop_back();
    c.periodic.push_back({w.period[0], 0, true});
    return c;
  }

  size_t n = w.period.size();
  // rotate the period to a run boundary
  size_t p = 0;
  while (w.period[p] == w.period[(p + n - 1) % n]) ++p;
  std::vector<Letter> rotated;
  rotated.reserve(n);
  for (size_t i = 0; i < n; ++i) rotated.push_back(w.period[(p + i) % n]);
  std::vector<CondRun> cyc = runs_of(rotated);

  // canonical: lexicographically least rotation of the run sequence
  size_t best = 0;
  for (size_t r = 1; r < cyc.size(); ++r)
    if (rotation_less(cyc, r, best)) best = r;
  uint64_t shift = 0;
  for (size_t j = 0; j < best; ++j) shift += cyc[j].len;
  std::rotate(cyc.begin(), cyc.begin() + static_cast<long>(best), cyc.end());

  // reduce to the primitive period of the run cycle
  for (size_t q = 1; q < cyc.size(); ++q) {
    if (cyc.size() % q) continue;
    bool periodic_q = true;
    for (size_t i = 0; periodic_q && i < cyc.size(); ++i) {
      const CondRun& x = cyc[i];
      const CondRun& y = cyc[(i + q) % cyc.size()];
      periodic_q = x.letter == y.letter && x.len == y.len;
    }
    if (periodic_q) {
      cyc.resize(q);
      break;
    }
  }

  // prefix absorbs the rotation offset
  std::vector<Letter> pre = w.prefix;
  for (uint64_t i = 0; i < p + shift; ++i) pre.push_back(w.period[i % n]);
  c.prefix = runs_of(pre);
  c.periodic = std::move(cyc);
  // a prefix ending on the cycle's letter merges with the first cycle run;
  // the cycle then starts one run later
  if (!c.prefix.empty() && c.prefix.back().letter == c.periodic.front().letter) {
    c.prefix.back().len += c.periodic.front().len;
    std::rotate(c.periodic.begin(), c.periodic.begin() + 1, c.periodic.end());
  }
  if (!c.prefix.empty() && c.prefix.back().letter == c.periodic.front().letter)
    throw InternalError("condense: prefix does not end on a run boundary");
  return c;
}

namespace {

std::optional<uint64_t> min_d_cond(const Condensation& a, const Condensation& b) {
  if (a.ultimately_constant() != b.ultimately_constant()) return std::nullopt;
  uint64_t d = 1;
  auto ratio = [](uint64_t m, uint64_t m2) {
    uint64_t hi = std::max(m, m2), lo = std::min(m, m2);
    return (hi + lo - 1) / lo;  // least d with hi <= d * lo
  };
  if (a.ultimately_constant()) {
    if (a.prefix.size() != b.prefix.size()) return std::nullopt;
    if (!(a.periodic[0].letter == b.periodic[0].letter)) return std::nullopt;
    for (size_t i = 0; i < a.prefix.size(); ++i) {
      if (!(a.prefix[i].letter == b.prefix[i].letter)) return std::nullopt;
      d = std::max(d, ratio(a.prefix[i].len, b.prefix[i].len));
    }
    return d;
  }
  size_t ka = a.prefix.size(), kb = b.prefix.size();
  size_t ma = a.periodic.size(), mb = b.periodic.size();
  size_t l = std::lcm(ma, mb);
  size_t horizon = std::max(ka, kb) + l;
  for (size_t i = 0; i < horizon; ++i) {
    const CondRun& x = a.run(i);
    const CondRun& y = b.run(i);
    if (!(x.letter == y.letter)) return std::nullopt;
    d = std::max(d, ratio(x.len, y.len));
  }
  return d;
}

}  // namespace

std::optional<uint64_t> min_d(const LassoWord& w, const LassoWord& w2) {
  return min_d_cond(condense(w), condense(w2));
}

bool d_equiv(const LassoWord& w, const LassoWord& w2, uint64_t d) {
  if (d < 1) throw InputError("d must be >= 1");
  auto m = min_d(w, w2);
  return m && *m <= d;
}

PositionMap::PositionMap(Condensation source, Condensation target)
    : src_(std::move(source)), tgt_(std::move(target)) {}

PositionMap::Span PositionMap::image(uint64_t j) const {
  size_t i = src_.run_index_of(j);
  Span s;
  s.begin = tgt_.run_start(i);
  const CondRun& r = tgt_.run(i);
  if (!r.infinite) s.end = s.begin + r.len;
  return s;
}

PositionMap position_map(const LassoWord& w, const LassoWord& w2) {
  Condensation a = condense(w), b = condense(w2);
  if (!min_d_cond(a, b))
    throw InputError("words are not bounded stutter equivalent");
  return PositionMap(std::move(a), std::move(b));
}

}  // namespace pmcp
