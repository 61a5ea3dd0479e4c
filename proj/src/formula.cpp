#include "pmcp/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

namespace pmcp {

Atom Atom::ctrl(std::string st) {
  Atom a;
  a.role = Role::Ctrl;
  a.proc_letter = 'A';
  a.state = std::move(st);
  return a;
}

Atom Atom::idx(char letter, int i, std::string st) {
  Atom a;
  a.role = Role::Indexed;
  a.proc_letter = letter;
  a.index = i;
  a.state = std::move(st);
  return a;
}

Atom Atom::idx_var(char letter, std::string v, std::string st) {
  Atom a;
  a.role = Role::IndexedVar;
  a.proc_letter = letter;
  a.var = std::move(v);
  a.state = std::move(st);
  return a;
}

Atom Atom::plain(std::string st) {
  Atom a;
  a.role = Role::Plain;
  a.state = std::move(st);
  return a;
}

bool Atom::operator<(const Atom& o) const {
  return std::tie(role, proc_letter, index, var, state) <
         std::tie(o.role, o.proc_letter, o.index, o.var, o.state);
}

std::string Atom::str() const {
  switch (role) {
    case Role::Ctrl:
      return "A." + state;
    case Role::Indexed:
      return std::string(1, proc_letter) + "[" + std::to_string(index) + "]." + state;
    case Role::IndexedVar:
      return std::string(1, proc_letter) + "[" + var + "]." + state;
    case Role::Plain:
      return state;
  }
  return state;
}

Letter::Letter(std::initializer_list<Atom> atoms) : atoms_(atoms) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

Letter::Letter(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Letter::contains(const Atom& a) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

void Letter::insert(Atom a) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  if (it == atoms_.end() || !(*it == a)) atoms_.insert(it, std::move(a));
}

std::string Letter::str() const {
  std::string s = "{";
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (i) s += ",";
    s += atoms_[i].str();
  }
  return s + "}";
}

const Letter& LassoWord::at(size_t pos) const {
  if (pos < prefix.size()) return prefix[pos];
  if (period.empty()) throw InternalError("lasso with empty period");
  return period[(pos - prefix.size()) % period.size()];
}

size_t LassoWord::fold(size_t pos) const {
  if (pos < rep_count()) return pos;
  return prefix.size() + (pos - prefix.size()) % period.size();
}

size_t LassoWord::succ(size_t rep) const {
  return rep + 1 < rep_count() ? rep + 1 : prefix.size();
}

LassoWord LassoWord::suffix(size_t j) const {
  LassoWord out;
  if (j <= prefix.size()) {
    out.prefix.assign(prefix.begin() + static_cast<long>(j), prefix.end());
    out.period = period;
  } else {
    size_t r = (j - prefix.size()) % period.size();
    out.period.assign(period.begin() + static_cast<long>(r), period.end());
    out.period.insert(out.period.end(), period.begin(), period.begin() + static_cast<long>(r));
  }
  return out;
}

// --- formula construction ---

static FormulaPtr make(Op op, Atom a, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->atom = std::move(a);
  f->l = std::move(l);
  f->r = std::move(r);
  return f;
}

FormulaPtr Formula::tt() { return make(Op::True, {}, nullptr, nullptr); }
FormulaPtr Formula::ff() { return make(Op::False, {}, nullptr, nullptr); }
FormulaPtr Formula::mk_atom(Atom a) { return make(Op::AtomOp, std::move(a), nullptr, nullptr); }
FormulaPtr Formula::mk_neg_atom(Atom a) { return make(Op::NegAtom, std::move(a), nullptr, nullptr); }
FormulaPtr Formula::mk_and(FormulaPtr a, FormulaPtr b) { return make(Op::And, {}, std::move(a), std::move(b)); }
FormulaPtr Formula::mk_or(FormulaPtr a, FormulaPtr b) { return make(Op::Or, {}, std::move(a), std::move(b)); }
FormulaPtr Formula::mk_prompt(FormulaPtr a) { return make(Op::Prompt, {}, std::move(a), nullptr); }
FormulaPtr Formula::mk_until(FormulaPtr a, FormulaPtr b) { return make(Op::Until, {}, std::move(a), std::move(b)); }
FormulaPtr Formula::mk_release(FormulaPtr a, FormulaPtr b) { return make(Op::Release, {}, std::move(a), std::move(b)); }
FormulaPtr Formula::mk_next(FormulaPtr a) { return make(Op::Next, {}, std::move(a), nullptr); }
FormulaPtr Formula::mk_eventually(FormulaPtr a) { return mk_until(tt(), std::move(a)); }
FormulaPtr Formula::mk_globally(FormulaPtr a) { return mk_release(ff(), std::move(a)); }

std::string Formula::str() const {
  switch (op) {
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::AtomOp:
      return atom.str();
    case Op::NegAtom:
      return "!" + atom.str();
    case Op::And:
      return "(" + l->str() + " & " + r->str() + ")";
    case Op::Or:
      return "(" + l->str() + " | " + r->str() + ")";
    case Op::Prompt:
      return "Fp " + l->str();
    case Op::Until:
      return "(" + l->str() + " U " + r->str() + ")";
    case Op::Release:
      return "(" + l->str() + " R " + r->str() + ")";
    case Op::Next:
      return "X " + l->str();
  }
  return "?";
}

bool contains_prompt(const Formula& f) {
  if (f.op == Op::Prompt) return true;
  if (f.l && contains_prompt(*f.l)) return true;
  if (f.r && contains_prompt(*f.r)) return true;
  return false;
}

bool contains_next(const Formula& f) {
  if (f.op == Op::Next) return true;
  if (f.l && contains_next(*f.l)) return true;
  if (f.r && contains_next(*f.r)) return true;
  return false;
}

bool is_closed(const Formula& f) {
  if ((f.op == Op::AtomOp || f.op == Op::NegAtom) && f.atom.role == Atom::Role::IndexedVar)
    return false;
  if (f.l && !is_closed(*f.l)) return false;
  if (f.r && !is_closed(*f.r)) return false;
  return true;
}

void collect_atoms(const Formula& f, std::vector<Atom>& out) {
  if (f.op == Op::AtomOp || f.op == Op::NegAtom) out.push_back(f.atom);
  if (f.l) collect_atoms(*f.l, out);
  if (f.r) collect_atoms(*f.r, out);
}

size_t formula_size(const Formula& f) {
  size_t n = 1;
  if (f.l) n += formula_size(*f.l);
  if (f.r) n += formula_size(*f.r);
  return n;
}

// --- parser ---

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      } else if (text[pos] == '#') {  // line comment
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("expected '") + c + "' (" + what + ")", pos);
    ++pos;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  // Peeks the identifier at the current position without consuming it.
  std::string peek_ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) return {};
    size_t e = pos;
    while (e < text.size() && ident_char(text[e])) ++e;
    return text.substr(pos, e - pos);
  }

  std::string consume_ident(const char* what) {
    skip_ws();
    std::string id = peek_ident();
    if (id.empty()) throw ParseError(std::string("expected ") + what, pos);
    pos += id.size();
    return id;
  }

  // State names may carry a token bit suffix, e.g. q1/0.
  std::string consume_state_name() {
    std::string name = consume_ident("state name");
    if (pos < text.size() && text[pos] == '/') {
      if (pos + 1 < text.size() && (text[pos + 1] == '0' || text[pos + 1] == '1')) {
        name += text.substr(pos, 2);
        pos += 2;
      } else {
        throw ParseError("expected token bit 0 or 1 after '/'", pos + 1);
      }
    }
    return name;
  }

  void check_arrow() {
    skip_ws();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>')
      throw ParseError(
          "implication '->' is not supported; rewrite 'a -> b' as '(!a | b)'", pos);
  }
};

struct Parser {
  Lexer lx;
  std::vector<std::string> vars;

  explicit Parser(const std::string& t) : lx(t) {}

  bool is_var(const std::string& v) const {
    return std::find(vars.begin(), vars.end(), v) != vars.end();
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    for (;;) {
      lx.check_arrow();
      if (lx.try_consume('|'))
        f = Formula::mk_or(f, parse_and());
      else
        return f;
    }
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_temporal();
    for (;;) {
      lx.check_arrow();
      if (lx.try_consume('&'))
        f = Formula::mk_and(f, parse_temporal());
      else
        return f;
    }
  }

  // Right-associative binary U / R above the unary layer.
  FormulaPtr parse_temporal() {
    FormulaPtr f = parse_unary();
    std::string id = lx.peek_ident();
    if (id == "U") {
      lx.pos += 1;
      return Formula::mk_until(f, parse_temporal());
    }
    if (id == "R") {
      lx.pos += 1;
      return Formula::mk_release(f, parse_temporal());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    lx.check_arrow();
    size_t at = lx.pos;
    std::string id = lx.peek_ident();
    if (id == "G") {
      lx.pos += 1;
      return Formula::mk_globally(parse_unary());
    }
    if (id == "F") {
      lx.pos += 1;
      return Formula::mk_eventually(parse_unary());
    }
    if (id == "Fp") {
      lx.pos += 2;
      return Formula::mk_prompt(parse_unary());
    }
    if (id == "X") {
      lx.skip_ws();
      throw ParseError("X is not part of the surface language", at);
    }
    if (lx.try_consume('!')) {
      lx.skip_ws();
      size_t neg_at = lx.pos;
      std::string nid = lx.peek_ident();
      if (nid.empty() || nid == "G" || nid == "F" || nid == "Fp" || nid == "X")
        throw ParseError("negation only on atoms", neg_at);
      Atom a = parse_atom();
      return Formula::mk_neg_atom(std::move(a));
    }
    if (lx.try_consume('(')) {
      FormulaPtr f = parse_or();
      lx.expect(')', "closing parenthesis");
      return f;
    }
    if (id.empty()) throw ParseError("expected formula", lx.pos);
    if (id == "true") {
      lx.pos += id.size();
      return Formula::tt();
    }
    if (id == "false") {
      lx.pos += id.size();
      return Formula::ff();
    }
    return Formula::mk_atom(parse_atom());
  }

  Atom parse_atom() {
    lx.skip_ws();
    size_t at = lx.pos;
    std::string id = lx.consume_ident("atom");
    if (id == "A") {
      lx.expect('.', "atom A.state");
      return Atom::ctrl(lx.consume_state_name());
    }
    if ((id == "B" || id == "T") && lx.peek() == '[') {
      lx.expect('[', "index");
      lx.skip_ws();
      char c = lx.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = lx.pos;
        long n = 0;
        while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) {
          n = n * 10 + (lx.text[lx.pos] - '0');
          ++lx.pos;
        }
        if (n < 1) throw ParseError("process index must be >= 1", start);
        lx.expect(']', "index");
        lx.expect('.', "atom");
        return Atom::idx(id[0], static_cast<int>(n), lx.consume_state_name());
      }
      std::string v = lx.consume_ident("index variable");
      if (!is_var(v))
        throw ParseError("unquantified index variable '" + v + "'", lx.pos - v.size());
      lx.expect(']', "index");
      lx.expect('.', "atom");
      return Atom::idx_var(id[0], v, lx.consume_state_name());
    }
    throw ParseError("expected atom 'A.state', 'B[i].state' or 'B[3].state'", at);
  }
};

}  // namespace

IndexedFormula parse_formula(const std::string& text) {
  Parser p(text);
  IndexedFormula out;
  if (p.lx.peek_ident() == "forall") {
    p.lx.pos += 6;
    for (;;) {
      std::string v = p.lx.consume_ident("index variable");
      if (p.is_var(v))
        throw ParseError("duplicate index variable '" + v + "'", p.lx.pos - v.size());
      p.vars.push_back(v);
      if (!p.lx.try_consume(',')) break;
    }
    p.lx.expect('.', "end of quantifier prefix");
  }
  out.vars = p.vars;
  out.body = p.parse_or();
  if (!p.lx.eof()) throw ParseError("trailing input after formula", p.lx.pos);
  // Every quantified variable should be usable; unused variables are legal,
  // but every used variable must be quantified (enforced during parsing).
  return out;
}

// --- evaluation ---

namespace {

/// Bottom-up truth tables over the |u|+|v| representatives of a lasso.
class Evaluator {
 public:
  Evaluator(const LassoWord& w, uint64_t k) : w_(w), k_(k), n_(w.rep_count()) {}

  const std::vector<char>& table(const Formula& f) {
    auto it = cache_.find(&f);
    if (it != cache_.end()) return it->second;
    std::vector<char> t(n_, 0);
    switch (f.op) {
      case Op::True:
        std::fill(t.begin(), t.end(), 1);
        break;
      case Op::False:
        break;
      case Op::AtomOp:
        for (size_t p = 0; p < n_; ++p) t[p] = w_.at(p).contains(f.atom);
        break;
      case Op::NegAtom:
        for (size_t p = 0; p < n_; ++p) t[p] = !w_.at(p).contains(f.atom);
        break;
      case Op::And: {
        const auto& a = table(*f.l);
        const auto& b = table(*f.r);
        for (size_t p = 0; p < n_; ++p) t[p] = a[p] && b[p];
        break;
      }
      case Op::Or: {
        const auto& a = table(*f.l);
        const auto& b = table(*f.r);
        for (size_t p = 0; p < n_; ++p) t[p] = a[p] || b[p];
        break;
      }
      case Op::Next: {
        const auto& a = table(*f.l);
        for (size_t p = 0; p < n_; ++p) t[p] = a[w_.succ(p)];
        break;
      }
      case Op::Until: {
        const auto& a = table(*f.l);
        const auto& b = table(*f.r);
        // least fixpoint of t = b | (a & X t) over the folded graph
        for (size_t p = 0; p < n_; ++p) t[p] = b[p];
        for (bool changed = true; changed;) {
          changed = false;
          for (size_t p = n_; p-- > 0;) {
            if (!t[p] && a[p] && t[w_.succ(p)]) {
              t[p] = 1;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::Release: {
        const auto& a = table(*f.l);
        const auto& b = table(*f.r);
        // greatest fixpoint of t = b & (a | X t)
        for (size_t p = 0; p < n_; ++p) t[p] = b[p];
        for (bool changed = true; changed;) {
          changed = false;
          for (size_t p = 0; p < n_; ++p) {
            if (t[p] && !(b[p] && (a[p] || t[w_.succ(p)]))) {
              t[p] = 0;
              changed = true;
            }
          }
        }
        break;
      }
      case Op::Prompt: {
        const auto& a = table(*f.l);
        // window of k+1 positions; walking past one full cycle adds nothing
        uint64_t steps = std::min<uint64_t>(k_, n_);
        for (size_t p = 0; p < n_; ++p) {
          size_t q = p;
          bool hit = false;
          for (uint64_t s = 0; s <= steps && !hit; ++s) {
            hit = a[q];
            q = w_.succ(q);
          }
          t[p] = hit;
        }
        break;
      }
    }
    return cache_.emplace(&f, std::move(t)).first->second;
  }

 private:
  const LassoWord& w_;
  uint64_t k_;
  size_t n_;
  std::unordered_map<const Formula*, std::vector<char>> cache_;
};

}  // namespace

bool eval(const LassoWord& w, const Formula& f, size_t pos, uint64_t k) {
  if (w.period.empty()) throw InputError("lasso period must be non-empty");
  if (!is_closed(f)) throw InputError("formula has unresolved index variables");
  Evaluator ev(w, k);
  return ev.table(f)[w.fold(pos)];
}

FormulaPtr instantiate_k(const FormulaPtr& f, uint64_t k) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::AtomOp:
    case Op::NegAtom:
      return f;
    case Op::And:
      return Formula::mk_and(instantiate_k(f->l, k), instantiate_k(f->r, k));
    case Op::Or:
      return Formula::mk_or(instantiate_k(f->l, k), instantiate_k(f->r, k));
    case Op::Next:
      return Formula::mk_next(instantiate_k(f->l, k));
    case Op::Until:
      return Formula::mk_until(instantiate_k(f->l, k), instantiate_k(f->r, k));
    case Op::Release:
      return Formula::mk_release(instantiate_k(f->l, k), instantiate_k(f->r, k));
    case Op::Prompt: {
      FormulaPtr body = instantiate_k(f->l, k);
      FormulaPtr out = body;
      for (uint64_t i = 0; i < k; ++i) out = Formula::mk_or(body, Formula::mk_next(out));
      return out;
    }
  }
  throw InternalError("instantiate_k: bad op");
}

FormulaPtr negate(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
      return Formula::ff();
    case Op::False:
      return Formula::tt();
    case Op::AtomOp:
      return Formula::mk_neg_atom(f->atom);
    case Op::NegAtom:
      return Formula::mk_atom(f->atom);
    case Op::And:
      return Formula::mk_or(negate(f->l), negate(f->r));
    case Op::Or:
      return Formula::mk_and(negate(f->l), negate(f->r));
    case Op::Next:
      return Formula::mk_next(negate(f->l));
    case Op::Until:
      return Formula::mk_release(negate(f->l), negate(f->r));
    case Op::Release:
      return Formula::mk_until(negate(f->l), negate(f->r));
    case Op::Prompt:
      throw InputError("cannot negate a formula containing Fp");
  }
  throw InternalError("negate: bad op");
}

static FormulaPtr bind_rec(const FormulaPtr& f, const std::map<std::string, int>& env) {
  if (f->op == Op::AtomOp || f->op == Op::NegAtom) {
    if (f->atom.role == Atom::Role::IndexedVar) {
      auto it = env.find(f->atom.var);
      if (it == env.end())
        throw InputError("unquantified index variable '" + f->atom.var + "'");
      Atom a = Atom::idx(f->atom.proc_letter, it->second, f->atom.state);
      return f->op == Op::AtomOp ? Formula::mk_atom(a) : Formula::mk_neg_atom(a);
    }
    return f;
  }
  if (!f->l) return f;
  FormulaPtr l = bind_rec(f->l, env);
  FormulaPtr r = f->r ? bind_rec(f->r, env) : nullptr;
  auto g = std::make_shared<Formula>(*f);
  g->l = l;
  g->r = r;
  return g;
}

FormulaPtr bind_indices(const IndexedFormula& f) {
  std::map<std::string, int> env;
  for (size_t i = 0; i < f.vars.size(); ++i) env[f.vars[i]] = static_cast<int>(i) + 1;
  return bind_rec(f.body, env);
}

}  // namespace pmcp
