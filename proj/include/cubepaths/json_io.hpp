#pragma once

#include <string>

#include <json.hpp>

#include "cubepaths/basesolver.hpp"
#include "cubepaths/completion.hpp"
#include "cubepaths/connector.hpp"
#include "cubepaths/pairset.hpp"
#include "cubepaths/solver.hpp"

namespace cubepaths {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json pair_set_to_json(const PairSet& a);
PairSet pair_set_from_json(const json& j);

json connector_to_json(const Connector& c);
Connector connector_from_json(const json& j);

json report_to_json(const SolveReport& r, bool include_connector = true);
json census_record_to_json(const CensusRecord& r, int dim);
json trace_to_json(const CompletionTrace& t);

// odd/balanced/diminishable/separating/blocked/enc summary for one pair-set
json classification_to_json(const PairSet& a);

}  // namespace cubepaths
