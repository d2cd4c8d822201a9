#pragma once

#include <json.hpp>

#include "evrel/causal.hpp"
#include "evrel/coref.hpp"
#include "evrel/temporal.hpp"

namespace evrel {

nlohmann::json to_json(const PairKey& key);
nlohmann::json to_json(const CellState& cell);
nlohmann::json to_json(const ConflictWitness& w);
nlohmann::json to_json(const std::vector<ConflictWitness>& ws);
nlohmann::json to_json(const CompletionStatus& s);
nlohmann::json to_json(const RelationMatrix& m);
nlohmann::json to_json(const CorefPartition& p);
nlohmann::json to_json(const CausalState& s);
nlohmann::json to_json(const MembershipConflict& c);

// Reads a label field; throws Error(kValidation) naming `field`.
TemporalLabel label_from_json(const nlohmann::json& j, const char* field);

}  // namespace evrel
