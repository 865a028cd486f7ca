#pragma once

#include "qaw/dsl.hpp"

#include "json.hpp"

namespace qaw {

// Canonical JSON: object keys sorted, distances as "p/q" / "p" / "inf"
// strings, terms in DSL syntax.
using Json = nlohmann::json;

Json to_json(const Dist& d);
Json to_json(const FinMetric& m);  // {"points": [..], "dist": [[..]]}
Json to_json(const FinPoset& p);   // {"points": [..], "leq": [[bool]]}
Json to_json(const ConstraintSet& c);
Json to_json(const OmegaChainMet& c);
Json to_json(const OmegaChainPos& c);
Json to_json(const WorkbenchFile& f);

// All throw InputError on malformed input.
Dist dist_from_json(const Json& j);
FinMetric metric_from_json(const Json& j);
FinPoset poset_from_json(const Json& j);
ConstraintSet constraints_from_json(const Json& j);
OmegaChainMet met_chain_from_json(const Json& j);
WorkbenchFile workbench_from_json(const Json& j);

}  // namespace qaw
