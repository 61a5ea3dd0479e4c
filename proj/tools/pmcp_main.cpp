// Command-line front end: check, cutoff, verify-param, construct.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pmcp/checker.hpp"
#include "pmcp/json_io.hpp"

using namespace pmcp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_token_file(const std::string& text) {
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  return text.compare(i, 5, "token") == 0;
}

void emit(const Json& report, const std::string& json_path, bool no_meta) {
  Json out = report;
  if (!no_meta) {
    out["meta"] = {{"generated_at", static_cast<int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count())}};
  }
  std::string text = out.dump(2);
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << text << "\n";
  } else {
    std::cout << text << "\n";
  }
}

std::vector<uint64_t> b_range(uint64_t bmin, uint64_t bmax) {
  if (bmin < 1 || bmax < bmin) throw InputError("bad fairness bound range");
  std::vector<uint64_t> out;
  for (uint64_t b = bmin; b <= bmax; ++b) out.push_back(b);
  return out;
}

std::optional<uint64_t> parse_kmax(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  return std::stoull(s);
}

int cmd_check(const std::string& system_path, const std::string& graph_path,
              const std::string& formula_path, int n, const std::string& fairness,
              uint64_t b, const std::string& kmax, const std::string& json_path,
              bool no_meta, unsigned threads) {
  (void)threads;
  std::string sys_text = slurp(system_path);
  IndexedFormula f = parse_formula(slurp(formula_path));
  Json report;
  report["schema"] = 1;
  report["command"] = "check";
  report["b"] = b;
  bool violated = false;

  if (looks_like_token_file(sys_text)) {
    TokenProcess t = parse_token_text(sys_text);
    if (graph_path.empty()) throw InputError("token systems need --graph");
    TokenGraph g = parse_graph_text(slurp(graph_path));
    if (n > 0 && n != g.n) throw InputError("--n disagrees with the graph size");
    TokenSystem sys{t, g};
    std::vector<int> procs;
    for (size_t i = 1; i <= f.h(); ++i) procs.push_back(static_cast<int>(i));
    FormulaPtr body = f.h() ? bind_indices_to(f, procs) : f.body;
    if (contains_prompt(*body)) {
      PromptVerdict v = check_token_prompt(sys, body, b, parse_kmax(kmax));
      report["outcome"] = v.satisfied ? "satisfied-with" : "violated-up-to";
      report["k"] = v.satisfied ? v.k : v.k_max;
      report["stats"] = {{"product_vertices", v.stats.product_vertices}};
      if (!v.satisfied && v.sample_token_counterexample)
        report["counterexample"] =
            token_lasso_to_json(sys, *v.sample_token_counterexample);
      violated = !v.satisfied;
    } else {
      TokenVerdict v = check_token_ltl(sys, body, b);
      report["outcome"] = v.holds ? "holds" : "violated";
      report["stats"] = {{"product_vertices", v.stats.product_vertices}};
      if (v.counterexample)
        report["counterexample"] = token_lasso_to_json(sys, *v.counterexample);
      violated = !v.holds;
    }
    report["citations"] = {"bounded token fairness: every process receives the token in "
                           "every window of b steps"};
  } else {
    SystemFile file = parse_system_text(sys_text);
    if (n < 1) throw InputError("--n must be at least 1");
    GuardedSystem sys = make_system(file, n);
    FormulaPtr body = reduce_indexed(f, static_cast<size_t>(n));
    std::vector<int> scope{0};
    for (size_t i = 1; i <= std::max<size_t>(f.h(), 1); ++i)
      scope.push_back(static_cast<int>(i));
    FairnessSpec spec = fairness == "gb" ? FairnessSpec::global_bounded(b)
                                         : FairnessSpec::local_bounded(b, scope);
    if (contains_prompt(*body)) {
      PromptVerdict v = check_prompt(sys, body, spec, parse_kmax(kmax));
      report["outcome"] = v.satisfied ? "satisfied-with" : "violated-up-to";
      report["k"] = v.satisfied ? v.k : v.k_max;
      report["stats"] = {{"product_vertices", v.stats.product_vertices}};
      if (!v.satisfied && v.sample_counterexample)
        report["counterexample"] = lasso_to_json(sys, *v.sample_counterexample);
      violated = !v.satisfied;
    } else {
      Verdict v = check_ltl(sys, body, spec);
      report["outcome"] = v.holds ? "holds" : "violated";
      report["stats"] = {{"product_vertices", v.stats.product_vertices}};
      report["deadlock_states"] = v.deadlock_states;
      if (v.counterexample)
        report["counterexample"] = lasso_to_json(sys, *v.counterexample);
      violated = !v.holds;
    }
    report["citations"] = {fairness == "gb"
                               ? "global bounded fairness via one counter per process"
                               : "local bounded fairness: counters for the specification "
                                 "processes plus unconditional fairness for the rest"};
  }
  emit(report, json_path, no_meta);
  return violated ? 1 : 0;
}

int cmd_cutoff(const std::string& cls, const std::string& fairness, const std::string& logic,
               size_t h, size_t qb) {
  CutoffQuery q;
  q.token = cls == "token";
  if (cls == "disj") q.cls = SystemClass::Disjunctive;
  else if (cls == "conj") q.cls = SystemClass::Conjunctive;
  else if (cls != "token") throw InputError("--class must be disj, conj or token");
  q.fairness = fairness == "gb" ? FairnessMode::GlobalBounded : FairnessMode::LocalBounded;
  q.logic = logic == "prompt" ? LogicKind::PromptNoX : LogicKind::LtlNoX;
  q.h = h;
  q.qb = qb;
  CutoffResult r = cutoff_for(q);
  if (!r.known) {
    std::cout << "no known cutoff: " << r.citation << "\n";
    return 1;
  }
  std::cout << r.c;
  for (const auto& s : r.side_conditions) std::cout << " (requires " << s << ")";
  std::cout << "\n";
  return 0;
}

int cmd_verify_param(const std::string& system_path, const std::string& graph_path,
                     const std::string& formula_path, const std::string& fairness,
                     uint64_t bmin, uint64_t bmax, int vg, int vh, const std::string& kmax,
                     const std::string& json_path, bool no_meta, unsigned threads) {
  std::string sys_text = slurp(system_path);
  IndexedFormula f = parse_formula(slurp(formula_path));
  FairnessMode mode =
      fairness == "gb" ? FairnessMode::GlobalBounded : FairnessMode::LocalBounded;
  Json report;
  report["schema"] = 1;
  report["command"] = "verify-param";
  ParamReport r;
  bool token = looks_like_token_file(sys_text);
  TokenProcess t;
  TokenGraph g;
  if (token) {
    t = parse_token_text(sys_text);
    if (graph_path.empty()) throw InputError("token systems need --graph");
    g = parse_graph_text(slurp(graph_path));
    r = check_parameterized_token(t, g, vg, vh, f, b_range(bmin, bmax), parse_kmax(kmax),
                                  threads);
  } else {
    SystemFile file = parse_system_text(sys_text);
    r = check_parameterized(file, f, mode, b_range(bmin, bmax), parse_kmax(kmax), threads);
  }
  report["cutoff"] = r.cutoff.known ? Json(r.cutoff.c) : Json(nullptr);
  report["checked_size"] = r.checked_size;
  report["sweep"] = sweep_to_json(r.sweep);
  report["verdict"] = r.sweep.all_satisfied
                          ? "holds for every swept b at every size >= " +
                                std::to_string(r.checked_size)
                          : "violated";
  Json notes = Json::array();
  for (const auto& s : r.notes) notes.push_back(s);
  report["notes"] = notes;
  Json citations = Json::array();
  citations.push_back(r.cutoff.citation);
  report["citations"] = citations;
  if (r.reduction_graph) {
    Json edges = Json::array();
    for (auto& [a, b2] : r.reduction_graph->g.edges) edges.push_back({a, b2});
    report["reduction_graph"] = {{"n", 4}, {"edges", edges}};
  }
  emit(report, json_path, no_meta);
  return r.sweep.all_satisfied ? 0 : 1;
}

int cmd_construct(const std::string& lemma, const std::string& system_path,
                  const std::string& graph_path, const std::string& run_path, uint64_t b,
                  int index, int vg, int vh, int va, const std::string& json_path,
                  bool no_meta) {
  std::string sys_text = slurp(system_path);
  Json run = Json::parse(slurp(run_path));
  Json report;
  if (lemma == "mon-disj" || lemma == "bound-disj" || lemma == "mon-conj" ||
      lemma == "bound-conj") {
    SystemFile file = parse_system_text(sys_text);
    int n = run.at("n").get<int>();
    GuardedSystem sys = make_system(file, n);
    SystemLasso x = lasso_from_json(sys, run);
    if (auto err = replay_error(sys, x)) throw InputError(*err);
    GuardedConstruction r;
    if (lemma == "mon-disj")
      r = mon_disj(sys, x, index > 0 ? index : 2, b, false);
    else if (lemma == "bound-disj")
      r = bound_disj(sys, x, b);
    else if (lemma == "mon-conj")
      r = mon_conj(sys, x, index > 0 ? index : 2, b, false);
    else
      r = bound_conj(sys, x, b);
    report = guarded_construction_json(sys, x, r, lemma);
    emit(report, json_path, no_meta);
    return r.checks.pass() ? 0 : 1;
  }
  if (lemma == "mon-token" || lemma == "bound-token") {
    TokenProcess t = parse_token_text(sys_text);
    if (graph_path.empty()) throw InputError("token lemmas need --graph");
    TokenGraph g = parse_graph_text(slurp(graph_path));
    TokenSystem sys{t, g};
    TokenLasso x = token_lasso_from_json(sys, run);
    if (auto err = token_replay_error(sys, x)) throw InputError(*err);
    TokenConstruction r = lemma == "mon-token" ? mon_token(t, g, x, vg, vh, va, b)
                                               : bound_token(t, g, x, vg, vh, b);
    report = token_construction_json(sys, x, r, lemma);
    emit(report, json_path, no_meta);
    return r.checks.pass() && r.vector_ok ? 0 : 1;
  }
  throw InputError("unknown lemma '" + lemma + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit-state checker for prompt and plain LTL\\X properties of guarded "
               "protocols and token-passing systems under bounded fairness"};
  app.require_subcommand(1);

  std::string system_path, graph_path, formula_path, run_path, json_path;
  std::string fairness = "lb", kmax = "auto", cls = "disj", logic = "ltl", lemma;
  int n = 0, vg = 1, vh = 2, va = 3, index = 0;
  size_t h = 1, qb = 1;
  uint64_t b = 1, bmin = 1, bmax = 3;
  unsigned threads = 1;
  bool no_meta = false;

  auto* check = app.add_subcommand("check", "model check one system size");
  check->add_option("--system", system_path)->required();
  check->add_option("--graph", graph_path);
  check->add_option("--formula", formula_path)->required();
  check->add_option("--n", n);
  check->add_option("--fairness", fairness)->check(CLI::IsMember({"gb", "lb"}));
  check->add_option("--b", b)->required();
  check->add_option("--k-max", kmax);
  check->add_option("--json", json_path);
  check->add_option("--threads", threads);
  check->add_flag("--no-meta", no_meta);

  auto* cut = app.add_subcommand("cutoff", "look up a cutoff table row");
  cut->add_option("--class", cls)->required()->check(CLI::IsMember({"disj", "conj", "token"}));
  cut->add_option("--fairness", fairness)->check(CLI::IsMember({"gb", "lb"}));
  cut->add_option("--logic", logic)->check(CLI::IsMember({"ltl", "prompt"}));
  cut->add_option("--h", h)->required();
  cut->add_option("--qb", qb);

  auto* vp = app.add_subcommand("verify-param", "decide the parameterized problem via the cutoff");
  vp->add_option("--system", system_path)->required();
  vp->add_option("--graph", graph_path);
  vp->add_option("--formula", formula_path)->required();
  vp->add_option("--fairness", fairness)->check(CLI::IsMember({"gb", "lb"}));
  vp->add_option("--b-min", bmin);
  vp->add_option("--b-max", bmax);
  vp->add_option("--g", vg);
  vp->add_option("--h-vertex", vh);
  vp->add_option("--k-max", kmax);
  vp->add_option("--json", json_path);
  vp->add_option("--threads", threads);
  vp->add_flag("--no-meta", no_meta);

  auto* con = app.add_subcommand("construct", "run a lemma construction on a lasso");
  con->add_option("--lemma", lemma)
      ->required()
      ->check(CLI::IsMember(
          {"mon-disj", "bound-disj", "mon-conj", "bound-conj", "mon-token", "bound-token"}));
  con->add_option("--system", system_path)->required();
  con->add_option("--graph", graph_path);
  con->add_option("--run", run_path)->required();
  con->add_option("--b", b)->required();
  con->add_option("--copy-index", index);
  con->add_option("--share-index", index);
  con->add_option("--g", vg);
  con->add_option("--h-vertex", vh);
  con->add_option("--vertex-a", va);
  con->add_option("--json", json_path);
  con->add_flag("--no-meta", no_meta);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(system_path, graph_path, formula_path, n, fairness, b, kmax,
                       json_path, no_meta, threads);
    if (cut->parsed()) return cmd_cutoff(cls, fairness, logic, h, qb);
    if (vp->parsed())
      return cmd_verify_param(system_path, graph_path, formula_path, fairness, bmin, bmax,
                              vg, vh, kmax, json_path, no_meta, threads);
    if (con->parsed())
      return cmd_construct(lemma, system_path, graph_path, run_path, b, index, vg, vh, va,
                           json_path, no_meta);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (at offset " << e.pos << ")\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
