#pragma once

#include <json.hpp>

#include "evrel/session.hpp"

namespace evrel {

// Full view of a session for the annotator UI: phase, progress counters, the
// current unit, a graph (nodes = mentions or clusters, edges = resolved
// relations with provenance) and open conflicts with their walks.
nlohmann::json session_snapshot(const AnnotationSession& s);

nlohmann::json to_json(const NextUnit& unit);

}  // namespace evrel
