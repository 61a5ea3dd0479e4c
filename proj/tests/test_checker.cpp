#include "doctest.h"
#include "support/gen.hpp"

using namespace pmcp;
using testgen::Rng;

namespace {

GuardedSystem reader_writer(int n) { return make_system(testgen::reader_writer_file(), n); }

FormulaPtr parse_body(const std::string& text, size_t n) {
  return reduce_indexed(parse_formula(text), n);
}

}  // namespace

TEST_CASE("violated safety ships a replayable counterexample") {
  GuardedSystem sys = reader_writer(2);
  // the system leaves nr1 on some fair run
  FormulaPtr f = parse_body("G B[1].nr", 2);
  Verdict v = check_ltl(sys, f, FairnessSpec::global_bounded(3));
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample.has_value());
  CHECK_FALSE(replay_error(sys, *v.counterexample).has_value());
  CHECK(is_fair(*v.counterexample, FairnessSpec::global_bounded(3), 3));
  CHECK_FALSE(eval(project(sys, *v.counterexample, {0, 1, 2}), *f, 0, 0));
  CHECK(v.bound_ok);
}

TEST_CASE("tautologies hold under every bounded fairness") {
  GuardedSystem sys = reader_writer(2);
  FormulaPtr f = parse_body("G (A.w | A.nw)", 2);
  for (uint64_t b : {1, 2, 4}) {
    CHECK(check_ltl(sys, f, FairnessSpec::global_bounded(b)).holds);
    CHECK(check_ltl(sys, f, FairnessSpec::local_bounded(b, {0, 1})).holds);
  }
  CHECK(check_ltl(sys, f, FairnessSpec::global_bounded(3)).deadlock_states == 0);
}

TEST_CASE("response under global bounded fairness") {
  GuardedSystem sys = reader_writer(2);
  // after w the first reader eventually rests while the writer may move on
  FormulaPtr f = parse_body("G (!A.w | F B[1].nr)", 2);
  Verdict v = check_ltl(sys, f, FairnessSpec::global_bounded(4));
  // a scheduler can keep R1 reading with r -> r self-loops at nw moments,
  // so the response property fails even under global windows
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample.has_value());
  CHECK(is_fair(*v.counterexample, FairnessSpec::global_bounded(4), 3));
}

TEST_CASE("prompt search finds the exact forced bound") {
  // a three-step chain that must run before anyone else can move
  SystemFile file = parse_system_text(R"(
    template Chain { states a0, a1, a2, a3; init a0;
      trans a0 -> a1 when exists{any};
      trans a1 -> a2 when exists{any};
      trans a2 -> a3 when exists{any};
      trans a3 -> a3 when exists{any};
    }
    template Idle { states b0; init b0;
      trans b0 -> b0 when exists{a3};
    }
    system { A: Chain; B: Idle; }
  )");
  GuardedSystem sys = make_system(file, 1);
  FormulaPtr f = Formula::mk_prompt(Formula::mk_atom(Atom::ctrl("a3")));
  PromptVerdict v = check_prompt(sys, f, FairnessSpec::global_bounded(3));
  CHECK(v.satisfied);
  CHECK(v.k == 3);
}

TEST_CASE("unreachable prompt targets stay violated up to the cap") {
  GuardedSystem sys = reader_writer(2);
  FormulaPtr f = Formula::mk_prompt(
      Formula::mk_and(Formula::mk_atom(Atom::ctrl("w")), Formula::mk_atom(Atom::ctrl("nw"))));
  PromptVerdict v = check_prompt(sys, f, FairnessSpec::global_bounded(2), 4);
  CHECK_FALSE(v.satisfied);
  CHECK(v.k_max == 4);
  REQUIRE(v.sample_counterexample.has_value());
}

TEST_CASE("the reader-writer prompt liveness is refuted by a dodging scheduler") {
  // a scheduler can keep R1 reading forever by firing its r self-loop only
  // at nw moments, so the prompt response fails for every k
  GuardedSystem sys = reader_writer(5);
  FormulaPtr f = parse_body("forall i . G (!A.w | Fp (A.w & B[i].nr))", 5);
  PromptVerdict v = check_prompt(sys, f, FairnessSpec::local_bounded(2, {0, 1}), 3);
  CHECK_FALSE(v.satisfied);
  REQUIRE(v.sample_counterexample.has_value());
  CHECK(is_fair(*v.sample_counterexample, FairnessSpec::local_bounded(2, {0, 1}), 6));

  // under the tightest window there is no unconditionally fair run at all,
  // so the property holds vacuously
  PromptVerdict vac = check_prompt(sys, f, FairnessSpec::local_bounded(1, {0, 1}), 3);
  CHECK(vac.satisfied);
  CHECK(vac.k == 0);
}

TEST_CASE("sweeps preserve violations upward and keep k nondecreasing") {
  GuardedSystem sys = reader_writer(3);
  // the first reader must start reading promptly on every fair run
  FormulaPtr sat = parse_body("Fp B[1].r", 3);
  SweepReport rep = b_sweep(sys, sat, FairnessMode::LocalBounded, {0, 1}, {1, 2, 3});
  CHECK(rep.all_satisfied);
  uint64_t last_k = 0;
  for (const auto& e : rep.entries) {
    CHECK(e.verdict.satisfied);
    CHECK(e.verdict.k >= last_k);
    last_k = e.verdict.k;
  }

  FormulaPtr bad = parse_body("G B[1].nr", 3);
  SweepReport rep2 = b_sweep(sys, bad, FairnessMode::GlobalBounded, {}, {3, 4}, 2);
  CHECK_FALSE(rep2.all_satisfied);
  for (const auto& e : rep2.entries) CHECK_FALSE(e.verdict.satisfied);

  SweepReport empty = b_sweep(sys, sat, FairnessMode::LocalBounded, {0, 1}, {});
  CHECK(empty.entries.empty());
  CHECK(empty.all_satisfied);
}

TEST_CASE("parameterized reader-writer checks at the cutoff") {
  SystemFile file = testgen::reader_writer_file();
  IndexedFormula f = parse_formula("forall i . G (!A.w | Fp (A.w & B[i].nr))");
  ParamReport r =
      check_parameterized(file, f, FairnessMode::LocalBounded, {1, 2}, 3, 1);
  CHECK(r.cutoff.known);
  CHECK(r.cutoff.c == 5);
  CHECK(r.checked_size == 5);
  // satisfied vacuously at b = 1, refuted by the dodging scheduler at b = 2
  REQUIRE(r.sweep.entries.size() == 2);
  CHECK(r.sweep.entries[0].verdict.satisfied);
  CHECK_FALSE(r.sweep.entries[1].verdict.satisfied);
  CHECK_FALSE(r.sweep.all_satisfied);
}

TEST_CASE("the absent cutoff row refuses with a citation") {
  SystemFile file = testgen::reader_writer_file();
  IndexedFormula f = parse_formula("forall i . G Fp B[i].nr");
  CHECK_THROWS_WITH_AS(
      check_parameterized(file, f, FairnessMode::GlobalBounded, {1, 2}, std::nullopt, 1),
      doctest::Contains("no known cutoff"), InputError);
}

TEST_CASE("conjunctive side conditions gate the global rows") {
  SystemFile file = parse_system_text(R"(
    template Ctl { states a0; init a0; trans a0 -> a0 when forall{a0,b0}; }
    template P { states b0, b1, b2; init b0;
      trans b0 -> b1 when forall{a0,b0};
      trans b1 -> b2 when forall{a0,b0};
      trans b2 -> b1 when forall{a0,b0};
    }
    system { A: Ctl; B: P; }
  )");
  IndexedFormula f = parse_formula("forall i . G Fp B[i].b0");
  CHECK_THROWS_WITH_AS(
      check_parameterized(file, f, FairnessMode::GlobalBounded, {2}, std::nullopt, 1),
      doctest::Contains("bounded-initializing"), InputError);
}

TEST_CASE("token model checking end to end") {
  TokenProcess t = parse_token_text(R"(
    token Min {
      base q;
      init q/0, q/1;
      trans q/0 -rcv-> q/1;
      trans q/1 -snd-> q/0;
    }
  )");
  TokenGraph ring3;
  ring3.n = 3;
  ring3.edges = {{1, 2}, {2, 3}, {3, 1}};
  TokenSystem sys{t, ring3};

  // the token keeps circulating, so every process keeps re-receiving it
  FormulaPtr live = Formula::mk_globally(
      Formula::mk_prompt(Formula::mk_atom(Atom::idx('T', 1, "q/1"))));
  PromptVerdict v = check_token_prompt(sys, live, 3);
  CHECK(v.satisfied);

  // but process 1 cannot hold it forever
  FormulaPtr hold = Formula::mk_eventually(
      Formula::mk_globally(Formula::mk_atom(Atom::idx('T', 1, "q/1"))));
  TokenVerdict h = check_token_ltl(sys, hold, 3);
  CHECK_FALSE(h.holds);
  REQUIRE(h.counterexample.has_value());
  CHECK_FALSE(token_replay_error(sys, *h.counterexample).has_value());
  CHECK(token_fair(*h.counterexample, 3));
}

TEST_CASE("parameterized token checking reduces to four vertices") {
  TokenProcess t = parse_token_text(R"(
    token Min {
      base q;
      init q/0, q/1;
      trans q/0 -rcv-> q/1;
      trans q/1 -snd-> q/0;
    }
  )");
  Rng rng(20240360);
  TokenGraph g = testgen::rand_graph_through(rng, 5);
  IndexedFormula f = parse_formula("forall i, j . G Fp T[i].q/1");
  ParamReport r = check_parameterized_token(t, g, 1, 2, f, {4, 5}, std::nullopt, 1);
  CHECK(r.cutoff.known);
  CHECK(r.cutoff.c == 4);
  REQUIRE(r.reduction_graph.has_value());
  CHECK(connectivity_vector(r.reduction_graph->g, 1, 2) == connectivity_vector(g, 1, 2));
}

TEST_CASE("every emitted counterexample passed its length audit so far") {
  EmissionAudit audit = emission_audit();
  CHECK(audit.emissions > 0);
  CHECK(audit.bound_violations == 0);
}
