#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmcp {

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(std::string msg, size_t position)
      : std::runtime_error(std::move(msg)), pos(position) {}
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// An atomic proposition: a local state of the controller (A.state), of an
/// indexed process (B[3].state, T[2].state), of a process referenced through a
/// quantified index variable (B[i].state), or a bare name used in word-level
/// tests.
struct Atom {
  enum class Role : uint8_t { Ctrl, Indexed, IndexedVar, Plain };
  Role role = Role::Plain;
  char proc_letter = 'B';  // 'B' or 'T' for Indexed/IndexedVar
  int index = 0;           // 1-based process index (Indexed)
  std::string var;         // index variable (IndexedVar)
  std::string state;

  static Atom ctrl(std::string st);
  static Atom idx(char letter, int i, std::string st);
  static Atom idx_var(char letter, std::string v, std::string st);
  static Atom plain(std::string st);

  bool operator==(const Atom&) const = default;
  bool operator<(const Atom& o) const;
  std::string str() const;
};

/// A letter of the word alphabet 2^AP: the set of atoms true at one position.
/// Kept sorted and duplicate-free.
class Letter {
 public:
  Letter() = default;
  Letter(std::initializer_list<Atom> atoms);
  explicit Letter(std::vector<Atom> atoms);

  bool contains(const Atom& a) const;
  void insert(Atom a);
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool operator==(const Letter&) const = default;
  bool operator<(const Letter& o) const { return atoms_ < o.atoms_; }
  std::string str() const;

 private:
  std::vector<Atom> atoms_;  // sorted, unique
};

/// Ultimately periodic word u . v^omega.
struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> period;  // non-empty

  const Letter& at(size_t pos) const;
  size_t fold(size_t pos) const;  // fold onto the |u|+|v| representatives
  size_t rep_count() const { return prefix.size() + period.size(); }
  size_t succ(size_t rep) const;

  /// Suffix w[j, inf) as a lasso.
  LassoWord suffix(size_t j) const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Op : uint8_t {
  True,
  False,
  AtomOp,
  NegAtom,
  And,
  Or,
  Prompt,   // F_p
  Until,    // U
  Release,  // R
  Next,     // internal only; never in surface syntax
};

/// Formula in negation normal form. F and G are desugared at construction
/// (F x = true U x, G x = false R x).
struct Formula {
  Op op;
  Atom atom;         // AtomOp / NegAtom
  FormulaPtr l, r;   // children; unary ops use l

  static FormulaPtr tt();
  static FormulaPtr ff();
  static FormulaPtr mk_atom(Atom a);
  static FormulaPtr mk_neg_atom(Atom a);
  static FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_prompt(FormulaPtr a);
  static FormulaPtr mk_until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_release(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mk_next(FormulaPtr a);
  static FormulaPtr mk_eventually(FormulaPtr a);
  static FormulaPtr mk_globally(FormulaPtr a);

  std::string str() const;
};

/// forall i1,...,ih . body
struct IndexedFormula {
  std::vector<std::string> vars;  // h quantified index variables
  FormulaPtr body;

  size_t h() const { return vars.size(); }
};

bool contains_prompt(const Formula& f);
bool contains_next(const Formula& f);
bool is_closed(const Formula& f);  // no IndexedVar atoms
void collect_atoms(const Formula& f, std::vector<Atom>& out);
size_t formula_size(const Formula& f);

/// Parses the concrete syntax. Quantifier prefix `forall i, j .`, then
/// `|`, `&`, binary `U`/`R` (right associative), prefix `G`, `F`, `Fp`,
/// `!` (atoms only), atoms `A.state` / `B[i].state` / `B[3].state`,
/// parentheses. `->` and surface `X` are rejected with hints.
IndexedFormula parse_formula(const std::string& text);

/// Exact Prompt-LTL\X (+ internal next) semantics on u.v^omega:
/// (w, pos, k) |= f. U/R by fixpoint over the folded representatives, F_p by
/// window scan of at most k+1 successors.
bool eval(const LassoWord& w, const Formula& f, size_t pos, uint64_t k);

/// Rewrites every F_p psi into psi' | X(psi' | X(...)) with k nested next
/// layers; the result is prompt-free and eval-equivalent at bound k.
FormulaPtr instantiate_k(const FormulaPtr& f, uint64_t k);

/// NNF negation of a prompt-free formula via the usual dualities.
/// Throws InputError if the formula contains F_p.
FormulaPtr negate(const FormulaPtr& f);

/// Substitutes quantified index variables i1..ih by concrete indices 1..h,
/// yielding the symmetry-reduced body phi(A, B_1, ..., B_h).
FormulaPtr bind_indices(const IndexedFormula& f);

}  // namespace pmcp
