#include "doctest.h"
#include "support/gen.hpp"

using namespace pmcp;
using testgen::Rng;

namespace {

LassoWord make_word(const std::string& prefix, const std::string& period) {
  // 'q' sets atom q, 'p' sets atom p, 'b' sets both, '.' is the empty letter
  auto letter = [](char c) {
    Letter l;
    if (c == 'q' || c == 'b') l.insert(Atom::plain("q"));
    if (c == 'p' || c == 'b') l.insert(Atom::plain("p"));
    return l;
  };
  LassoWord w;
  for (char c : prefix) w.prefix.push_back(letter(c));
  for (char c : period) w.period.push_back(letter(c));
  return w;
}

FormulaPtr q_atom() { return Formula::mk_atom(Atom::plain("q")); }

}  // namespace

TEST_CASE("parser accepts the indexed surface syntax") {
  CHECK_THROWS_AS(parse_formula("forall i . G (A.w -> Fp (A.w & B[i].nr))"), ParseError);
  IndexedFormula f = parse_formula("forall i . G (!A.w | Fp (A.w & B[i].nr))");
  CHECK(f.h() == 1);
  CHECK(f.body->str() == "(false R (!A.w | Fp (A.w & B[i].nr)))");

  IndexedFormula atom = parse_formula("A.q");
  CHECK(atom.h() == 0);
  CHECK(atom.body->op == Op::AtomOp);
}

TEST_CASE("negation is only allowed on atoms") {
  CHECK_THROWS_WITH_AS(parse_formula("!(A.q & A.r)"),
                       doctest::Contains("negation only on atoms"), ParseError);
  CHECK_THROWS_AS(parse_formula("X A.q"), ParseError);
  CHECK_THROWS_AS(parse_formula("forall i . B[j].q"), ParseError);
  CHECK_THROWS_AS(parse_formula("B[i].q"), ParseError);
  CHECK_NOTHROW(parse_formula("B[3].q U A.r"));
}

TEST_CASE("prompt eventually window semantics") {
  LassoWord w = make_word("", "q..");
  FormulaPtr f = Formula::mk_globally(Formula::mk_prompt(q_atom()));
  CHECK(eval(w, *f, 0, 2));
  CHECK_FALSE(eval(w, *f, 0, 1));  // the window {1,2} contains no q
}

TEST_CASE("atom semantics at position zero") {
  LassoWord w = make_word("", "qp");
  CHECK(eval(w, *q_atom(), 0, 0));
  CHECK(eval(w, *q_atom(), 0, 7));
  CHECK_FALSE(eval(w, *q_atom(), 1, 3));
}

TEST_CASE("stretching doubles the required bound") {
  LassoWord w = make_word("", "q.");
  LassoWord w2 = make_word("", "qq..");
  FormulaPtr f = Formula::mk_globally(Formula::mk_prompt(q_atom()));
  CHECK(eval(w, *f, 0, 1));
  CHECK(eval(w2, *f, 0, 2));
  CHECK_FALSE(eval(w2, *f, 0, 1));
}

TEST_CASE("instantiate_k unfolds prompt windows") {
  CHECK(instantiate_k(Formula::mk_prompt(q_atom()), 0)->str() == "q");
  CHECK(instantiate_k(Formula::mk_prompt(q_atom()), 2)->str() == "(q | X (q | X q))");
  FormulaPtr ur = Formula::mk_until(q_atom(), Formula::mk_atom(Atom::plain("p")));
  CHECK(instantiate_k(ur, 5)->str() == ur->str());
}

TEST_CASE("negate uses the standard dualities") {
  FormulaPtr g = Formula::mk_globally(q_atom());
  CHECK(negate(g)->str() == "(true U !q)");
  FormulaPtr u = Formula::mk_until(q_atom(), Formula::mk_atom(Atom::plain("p")));
  CHECK(negate(u)->str() == "(!q R !p)");
  FormulaPtr x = Formula::mk_or(q_atom(), Formula::mk_next(Formula::mk_atom(Atom::plain("p"))));
  CHECK(negate(x)->str() == "(!q & X !p)");
  CHECK_THROWS_AS(negate(Formula::mk_prompt(q_atom())), InputError);
}

TEST_CASE("eval is monotone in k") {
  Rng rng(20240301);
  auto ap = testgen::word_ap();
  for (int round = 0; round < 300; ++round) {
    LassoWord w = testgen::rand_lasso(rng, ap);
    FormulaPtr f = testgen::rand_formula(rng, ap, 3, true);
    size_t i = rng() % 6;
    uint64_t k = rng() % 4;
    if (eval(w, *f, i, k)) CHECK(eval(w, *f, i, k + 1));
  }
}

TEST_CASE("instantiation agrees with the prompt semantics") {
  Rng rng(20240302);
  auto ap = testgen::word_ap();
  for (int round = 0; round < 400; ++round) {
    LassoWord w = testgen::rand_lasso(rng, ap);
    FormulaPtr f = testgen::rand_formula(rng, ap, 3, true);
    size_t i = rng() % 6;
    uint64_t k = rng() % 4;
    FormulaPtr inst = instantiate_k(f, k);
    CHECK_FALSE(contains_prompt(*inst));
    CHECK(eval(w, *f, i, k) == eval(w, *inst, i, 0));
  }
}

TEST_CASE("negate is an involution on prompt-free formulas") {
  Rng rng(20240303);
  auto ap = testgen::word_ap();
  for (int round = 0; round < 300; ++round) {
    LassoWord w = testgen::rand_lasso(rng, ap);
    FormulaPtr f = testgen::rand_formula(rng, ap, 3, false, true);
    size_t i = rng() % 6;
    CHECK(eval(w, *negate(negate(f)), i, 0) == eval(w, *f, i, 0));
    CHECK(eval(w, *negate(f), i, 0) == !eval(w, *f, i, 0));
  }
}

TEST_CASE("evaluation is stable under period unrolling") {
  Rng rng(20240304);
  auto ap = testgen::word_ap();
  for (int round = 0; round < 200; ++round) {
    LassoWord w = testgen::rand_lasso(rng, ap);
    LassoWord unrolled;
    unrolled.prefix = w.prefix;
    for (const Letter& l : w.period) unrolled.prefix.push_back(l);
    unrolled.period = w.period;
    FormulaPtr f = testgen::rand_formula(rng, ap, 3, true);
    size_t i = rng() % 6;
    uint64_t k = rng() % 4;
    CHECK(eval(w, *f, i, k) == eval(unrolled, *f, i, k));
  }
}

TEST_CASE("bind_indices substitutes the quantified variables") {
  IndexedFormula f = parse_formula("forall i, j . (B[i].q & B[j].r)");
  CHECK(bind_indices(f)->str() == "(B[1].q & B[2].r)");
}
