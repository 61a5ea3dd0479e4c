#include "doctest.h"
#include "support/gen.hpp"

using namespace pmcp;
using testgen::Rng;

namespace {

GuardedSystem reader_writer(int n) { return make_system(testgen::reader_writer_file(), n); }

GlobalState gs(const GuardedSystem& sys, const std::string& a,
               std::initializer_list<std::string> bs) {
  GlobalState s;
  s.a = *sys.table.find(a);
  for (const auto& b : bs) s.b.push_back(*sys.table.find(b));
  return s;
}

/// The worked reader-writer run of W || R^2 used throughout.
SystemLasso fig3_lasso(const GuardedSystem& sys) {
  SystemLasso x;
  x.prefix = {{gs(sys, "nw", {"nr", "nr"}), 1},
              {gs(sys, "nw", {"r", "nr"}), 2},
              {gs(sys, "nw", {"r", "r"}), 0}};
  x.period = {{gs(sys, "w", {"r", "r"}), 0},
              {gs(sys, "nw", {"r", "r"}), 1},
              {gs(sys, "nw", {"r", "r"}), 2},
              {gs(sys, "nw", {"r", "r"}), 0}};
  return x;
}

}  // namespace

TEST_CASE("reader-writer templates are disjunctive") {
  GuardedSystem sys = reader_writer(2);
  Classification c = classify(sys);
  CHECK(c.cls == SystemClass::Disjunctive);
}

TEST_CASE("classification of conjunctive templates") {
  SystemFile f = parse_system_text(R"(
    template Ctl { states a0; init a0; trans a0 -> a0 when forall{a0,b0}; }
    template P { states b0, b1, b2; init b0;
      trans b0 -> b1 when forall{a0,b0};
      trans b1 -> b2 when forall{a0,b0};
      trans b2 -> b0 when forall{a0,b0};
    }
    system { A: Ctl; B: P; }
  )");
  GuardedSystem sys = make_system(f, 2);
  Classification c = classify(sys);
  CHECK(c.cls == SystemClass::Conjunctive);
  CHECK(c.neutral_inits);
  CHECK(c.bounded_initializing);

  // a 2-cycle avoiding the initial state breaks bounded initialization
  SystemFile g = parse_system_text(R"(
    template Ctl { states a0; init a0; trans a0 -> a0 when forall{a0,b0}; }
    template P { states b0, b1, b2; init b0;
      trans b0 -> b1 when forall{a0,b0};
      trans b1 -> b2 when forall{a0,b0};
      trans b2 -> b1 when forall{a0,b0};
    }
    system { A: Ctl; B: P; }
  )");
  Classification c2 = classify(make_system(g, 2));
  CHECK(c2.cls == SystemClass::Conjunctive);
  CHECK_FALSE(c2.bounded_initializing);

  // a template without transitions classifies as conjunctive and
  // bounded initializing
  SystemFile h = parse_system_text(R"(
    template Ctl { states a0; init a0; trans a0 -> a0 when forall{a0,b0}; }
    template P { states b0; init b0; }
    system { A: Ctl; B: P; }
  )");
  Classification c3 = classify(make_system(h, 2));
  CHECK(c3.cls == SystemClass::Conjunctive);
  CHECK(c3.bounded_initializing);
}

TEST_CASE("existential guards need a witness among the others") {
  GuardedSystem sys = reader_writer(2);
  auto succ = successors(sys, gs(sys, "nw", {"nr", "nr"}));
  bool r1_reads = false;
  for (auto& [s, mover] : succ)
    if (mover == 1 && s.of(1) == *sys.table.find("r")) r1_reads = true;
  CHECK(r1_reads);

  // with the writer in w, nr -> r loses its witness
  auto succ2 = successors(sys, gs(sys, "w", {"nr", "nr"}));
  for (auto& [s, mover] : succ2) {
    (void)s;
    bool to_r = s.of(mover) == *sys.table.find("r") && mover > 0;
    CHECK_FALSE(to_r);
  }
}

TEST_CASE("universal guards are blocked by any process outside the set") {
  SystemFile f = parse_system_text(R"(
    template Ctl { states a0, a1; init a0;
      trans a0 -> a1 when forall{a0,b0};
    }
    template P { states b0, b1; init b0;
      trans b0 -> b1 when forall{a0,b0};
      trans b1 -> b0 when forall{a0,b0,b1};
    }
    system { A: Ctl; B: P; }
  )");
  GuardedSystem sys = make_system(f, 2);
  GlobalState s;
  s.a = *sys.table.find("a0");
  s.b = {*sys.table.find("b1"), *sys.table.find("b0")};
  // B2 at b0 cannot move to b1 while B1 sits at b1 (outside the guard set)
  for (auto& [s2, mover] : successors(sys, s)) {
    (void)s2;
    CHECK(mover != 2);
  }
}

TEST_CASE("counter overflow yields the failure sink") {
  GuardedSystem sys = reader_writer(1);
  std::vector<int> procs{0, 1};
  CounterState cs = initial_counter_state(sys, procs);
  cs.counters = {1, 0};  // bound 1: one more non-A step fails
  bool failure_seen = false;
  for (auto& [nxt, mover] : counter_successors(sys, cs, 1, procs)) {
    if (mover != 0) {
      CHECK(nxt.failed);
      failure_seen = true;
      CHECK(counter_successors(sys, nxt, 1, procs).empty());
    }
  }
  CHECK(failure_seen);
}

TEST_CASE("bounded-fair reachable set matches a brute-force product") {
  GuardedSystem sys = reader_writer(2);
  std::vector<int> procs{0, 1, 2};
  uint64_t b = 2;
  // reference: direct enumeration over (state, counters) per the definition
  std::set<std::pair<GlobalState, std::vector<uint8_t>>> ref;
  std::vector<CounterState> queue{initial_counter_state(sys, procs)};
  ref.insert({queue[0].s, queue[0].counters});
  while (!queue.empty()) {
    CounterState cs = queue.back();
    queue.pop_back();
    for (auto& [s2, mover] : successors(sys, cs.s)) {
      std::vector<uint8_t> c2 = cs.counters;
      bool fail = false;
      for (size_t i = 0; i < procs.size(); ++i) {
        if (procs[i] == mover) c2[i] = 0;
        else if (c2[i] + 1u > b) fail = true;
        else ++c2[i];
      }
      if (fail) continue;
      if (ref.insert({s2, c2}).second) queue.push_back({s2, c2, false});
    }
  }
  // the production path
  std::set<std::pair<GlobalState, std::vector<uint8_t>>> got;
  std::vector<CounterState> q2{initial_counter_state(sys, procs)};
  got.insert({q2[0].s, q2[0].counters});
  while (!q2.empty()) {
    CounterState cs = q2.back();
    q2.pop_back();
    for (auto& [nxt, mover] : counter_successors(sys, cs, b, procs)) {
      (void)mover;
      if (nxt.failed) continue;
      if (got.insert({nxt.s, nxt.counters}).second) q2.push_back(nxt);
    }
  }
  CHECK(ref == got);
}

TEST_CASE("fairness window checks") {
  GuardedSystem sys = reader_writer(2);
  SystemLasso rr;  // strict round robin over three processes
  GlobalState s = gs(sys, "nw", {"nr", "nr"});
  GlobalState s1 = gs(sys, "nw", {"r", "nr"});
  GlobalState s2 = gs(sys, "nw", {"r", "r"});
  rr.period = {{s, 1}, {s1, 2}, {s2, 0}};
  // not a replayable run of the system necessarily, but fairness only reads
  // the mover annotations
  CHECK(is_fair(rr, FairnessSpec::global_bounded(3), 3));
  CHECK(is_fair(rr, FairnessSpec::unconditional(), 3));

  SystemLasso no_b2;
  no_b2.period = {{s, 0}, {s1, 1}};
  CHECK_FALSE(is_fair(no_b2, FairnessSpec::unconditional(), 3));

  SystemLasso fig3 = fig3_lasso(sys);
  CHECK(is_fair(fig3, FairnessSpec::local_bounded(4, {0, 1}), 3));
  CHECK(min_fair_bound(fig3, {0, 1}) == 3);
}

TEST_CASE("the worked reader-writer lasso replays") {
  GuardedSystem sys = reader_writer(2);
  SystemLasso x = fig3_lasso(sys);
  CHECK_FALSE(replay_error(sys, x).has_value());
}

TEST_CASE("deadlock detection") {
  for (int n = 1; n <= 3; ++n) CHECK(find_deadlocks(reader_writer(n)).empty());

  SystemFile f = parse_system_text(R"(
    template Ctl { states a0, a1; init a0; trans a0 -> a1 when forall{a1}; }
    template P { states b0; init b0; }
    system { A: Ctl; B: P; }
  )");
  auto dead = find_deadlocks(make_system(f, 2));
  CHECK(dead.size() == 1);  // the initial state itself

  SystemFile g = parse_system_text(R"(
    template Ctl { states a0; init a0; trans a0 -> a0 when exists{a0,b0}; }
    template P { states b0; init b0; trans b0 -> b0 when exists{b0}; }
    system { A: Ctl; B: P; }
  )");
  CHECK(find_deadlocks(make_system(g, 2)).empty());
}

TEST_CASE("projection letterizes the chosen columns") {
  GuardedSystem sys = reader_writer(2);
  SystemLasso x = fig3_lasso(sys);
  LassoWord w = project(sys, x, {0, 1});
  CHECK(w.prefix[0].contains(Atom::ctrl("nw")));
  CHECK(w.prefix[0].contains(Atom::idx('B', 1, "nr")));
  CHECK_FALSE(w.prefix[0].contains(Atom::idx('B', 2, "nr")));
  // atom lookups through the projection match the state directly
  LassoWord all = project(sys, x, {0, 1, 2});
  CHECK(eval(all, *Formula::mk_atom(Atom::idx('B', 2, "r")), 2, 0));
}

TEST_CASE("permuting B indices preserves validity") {
  Rng rng(20240320);
  for (int round = 0; round < 20; ++round) {
    SystemFile f = testgen::rand_disjunctive_file(rng, 2, 2);
    GuardedSystem sys = make_system(f, 3);
    auto x = testgen::rand_fair_lasso(rng, sys, FairnessSpec::global_bounded(3), 20);
    if (!x) continue;
    // swap B1 and B2 everywhere
    auto swap_state = [](GlobalState s) {
      std::swap(s.b[0], s.b[1]);
      return s;
    };
    SystemLasso y;
    for (const Step& st : x->prefix)
      y.prefix.push_back({swap_state(st.state),
                          st.mover == 1 ? 2 : (st.mover == 2 ? 1 : st.mover)});
    for (const Step& st : x->period)
      y.period.push_back({swap_state(st.state),
                          st.mover == 1 ? 2 : (st.mover == 2 ? 1 : st.mover)});
    CHECK_FALSE(replay_error(sys, y).has_value());
  }
}

TEST_CASE("file format rejections") {
  CHECK_THROWS_AS(parse_system_text("template T { init x; }"), ParseError);
  // duplicate state names across templates
  CHECK_THROWS_AS(parse_system_text(R"(
    template X { states s; init s; }
    template Y { states s; init s; }
    system { A: X; B: Y; }
  )"),
                  ParseError);
  CHECK_THROWS_AS(parse_system_text(R"(
    template X { states x0; init x0; trans x0 -> x0 when exists{nope}; }
    template Y { states y0; init y0; }
    system { A: X; B: Y; }
  )"),
                  ParseError);
}
