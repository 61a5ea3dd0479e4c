#pragma once

#include "pmcp/checker.hpp"
#include "pmcp/constructions.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace pmcp {

using Json = nlohmann::json;

Json lasso_to_json(const GuardedSystem& sys, const SystemLasso& x);
SystemLasso lasso_from_json(const GuardedSystem& sys, const Json& j);

Json token_lasso_to_json(const TokenSystem& sys, const TokenLasso& x);
TokenLasso token_lasso_from_json(const TokenSystem& sys, const Json& j);

Json checks_to_json(const ConstructionChecks& c);
Json guarded_construction_json(const GuardedSystem& in_sys, const SystemLasso& x,
                               const GuardedConstruction& r, const std::string& lemma);
Json token_construction_json(const TokenSystem& in_sys, const TokenLasso& x,
                             const TokenConstruction& r, const std::string& lemma);

Json sweep_to_json(const SweepReport& s);

}  // namespace pmcp
