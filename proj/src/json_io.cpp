#include "pmcp/json_io.hpp"

namespace pmcp {

Json lasso_to_json(const GuardedSystem& sys, const SystemLasso& x) {
  auto steps = [&](const std::vector<Step>& part) {
    Json arr = Json::array();
    for (const Step& st : part) {
      Json state = Json::object();
      state["A"] = sys.table.name(st.state.a);
      for (int i = 1; i <= static_cast<int>(st.state.b.size()); ++i)
        state["B" + std::to_string(i)] = sys.table.name(st.state.of(i));
      arr.push_back({{"state", state}, {"mover", sys.proc_name(st.mover)}});
    }
    return arr;
  };
  Json j;
  j["schema"] = 1;
  j["kind"] = "guarded";
  j["n"] = x.prefix.empty() ? (x.period.empty() ? 0 : x.period[0].state.b.size())
                            : x.prefix[0].state.b.size();
  j["prefix"] = steps(x.prefix);
  j["period"] = steps(x.period);
  return j;
}

namespace {

int parse_mover(const std::string& name) {
  if (name == "A") return 0;
  if (name.size() > 1 && name[0] == 'B') return std::stoi(name.substr(1));
  throw InputError("bad mover name '" + name + "'");
}

}  // namespace

SystemLasso lasso_from_json(const GuardedSystem& sys, const Json& j) {
  if (!j.contains("prefix") || !j.contains("period"))
    throw InputError("lasso JSON needs 'prefix' and 'period'");
  auto steps = [&](const Json& arr) {
    std::vector<Step> out;
    for (const auto& e : arr) {
      Step st;
      const Json& state = e.at("state");
      auto a = sys.table.find(state.at("A").get<std::string>());
      if (!a) throw InputError("unknown state in lasso JSON");
      st.state.a = *a;
      st.state.b.resize(static_cast<size_t>(sys.n));
      for (int i = 1; i <= sys.n; ++i) {
        auto q = sys.table.find(state.at("B" + std::to_string(i)).get<std::string>());
        if (!q) throw InputError("unknown state in lasso JSON");
        st.state.b[static_cast<size_t>(i) - 1] = *q;
      }
      st.mover = parse_mover(e.at("mover").get<std::string>());
      out.push_back(std::move(st));
    }
    return out;
  };
  SystemLasso x;
  x.prefix = steps(j.at("prefix"));
  x.period = steps(j.at("period"));
  return x;
}

Json token_lasso_to_json(const TokenSystem& sys, const TokenLasso& x) {
  auto steps = [&](const std::vector<TokenStep>& part) {
    Json arr = Json::array();
    for (const TokenStep& st : part) {
      Json state = Json::object();
      for (int i = 1; i <= static_cast<int>(st.state.q.size()); ++i)
        state["T" + std::to_string(i)] =
            sys.T.state_name(st.state.q[static_cast<size_t>(i) - 1]);
      Json action;
      if (st.action.sync)
        action = {{"snd", st.action.from}, {"rcv", st.action.to}};
      else
        action = {{"eps", st.action.proc}};
      arr.push_back({{"state", state}, {"action", action}});
    }
    return arr;
  };
  Json j;
  j["schema"] = 1;
  j["kind"] = "token";
  j["n"] = sys.G.n;
  j["prefix"] = steps(x.prefix);
  j["period"] = steps(x.period);
  return j;
}

TokenLasso token_lasso_from_json(const TokenSystem& sys, const Json& j) {
  auto steps = [&](const Json& arr) {
    std::vector<TokenStep> out;
    for (const auto& e : arr) {
      TokenStep st;
      const Json& state = e.at("state");
      for (int i = 1; i <= sys.G.n; ++i) {
        auto q = sys.T.parse_state(state.at("T" + std::to_string(i)).get<std::string>());
        if (!q) throw InputError("unknown token state in lasso JSON");
        st.state.q.push_back(*q);
      }
      const Json& action = e.at("action");
      if (action.contains("eps"))
        st.action = TokenActionLabel::eps(action.at("eps").get<int>());
      else
        st.action = TokenActionLabel::pass(action.at("snd").get<int>(),
                                           action.at("rcv").get<int>());
      out.push_back(std::move(st));
    }
    return out;
  };
  TokenLasso x;
  x.prefix = steps(j.at("prefix"));
  x.period = steps(j.at("period"));
  return x;
}

Json checks_to_json(const ConstructionChecks& c) {
  Json j;
  j["input_fair"] = c.input_fair;
  j["valid"] = c.valid;
  j["d_equiv"] = c.d_ok;
  j["fairness"] = c.fair_ok;
  if (c.measured_d) j["measured_d"] = *c.measured_d;
  if (c.measured_fair_bound) j["measured_fair_bound"] = *c.measured_fair_bound;
  if (!c.detail.empty()) j["detail"] = c.detail;
  j["pass"] = c.pass();
  return j;
}

Json guarded_construction_json(const GuardedSystem& in_sys, const SystemLasso& x,
                               const GuardedConstruction& r, const std::string& lemma) {
  Json j;
  j["schema"] = 1;
  j["lemma"] = lemma;
  j["input"] = lasso_to_json(in_sys, x);
  GuardedSystem out_sys = in_sys;
  out_sys.n = r.output_n;
  j["output"] = lasso_to_json(out_sys, r.output);
  j["claimed_d"] = r.claimed_d;
  j["claimed_fair_bound"] = r.claimed_fair_bound;
  j["checks"] = checks_to_json(r.checks);
  return j;
}

Json token_construction_json(const TokenSystem& in_sys, const TokenLasso& x,
                             const TokenConstruction& r, const std::string& lemma) {
  Json j;
  j["schema"] = 1;
  j["lemma"] = lemma;
  j["input"] = token_lasso_to_json(in_sys, x);
  TokenSystem out_sys{in_sys.T, r.output_graph};
  j["output"] = token_lasso_to_json(out_sys, r.output);
  Json edges = Json::array();
  for (auto& [a, b] : r.output_graph.edges) edges.push_back({a, b});
  j["output_graph"] = {{"n", r.output_graph.n}, {"edges", edges}};
  j["designated"] = {{"i", r.out_i}, {"j", r.out_j}};
  Json vec = Json::array();
  for (bool u : r.vector) vec.push_back(u ? 1 : 0);
  j["connectivity_vector"] = vec;
  j["vector_preserved"] = r.vector_ok;
  j["claimed_d"] = r.claimed_d;
  j["claimed_fair_bound"] = r.claimed_fair_bound;
  j["checks"] = checks_to_json(r.checks);
  return j;
}

Json sweep_to_json(const SweepReport& s) {
  Json arr = Json::array();
  for (const auto& e : s.entries) {
    Json v;
    v["b"] = e.b;
    v["outcome"] = e.verdict.satisfied ? "satisfied-with" : "violated-up-to";
    v["k"] = e.verdict.satisfied ? e.verdict.k : e.verdict.k_max;
    v["product_vertices"] = e.verdict.stats.product_vertices;
    arr.push_back(v);
  }
  return {{"entries", arr}, {"all_satisfied", s.all_satisfied}};
}

}  // namespace pmcp
