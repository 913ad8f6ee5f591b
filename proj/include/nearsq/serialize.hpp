#pragma once

#include <json.hpp>

#include "nearsq/decompose.hpp"
#include "nearsq/pell.hpp"
#include "nearsq/search.hpp"
#include "nearsq/window.hpp"

namespace nearsq {

// Unbounded integers are written as decimal strings; counts as numbers.
// Objects are emitted with sorted keys so output is byte-stable.
nlohmann::json ToJson(const Int& v);
Int IntFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const PairWitness& w);
nlohmann::json ToJson(const WindowCensus& census);
nlohmann::json ToJson(const MuXY& m);
nlohmann::json ToJson(const PellExample& ex);
nlohmann::json ToJson(const PellSystem& sys);
nlohmann::json ToJson(const InstanceReport& report);
nlohmann::json ToJson(const ScanReport& report);

// Compact per-instance line for the record stream.
nlohmann::json RecordJson(const InstanceReport& report);

ScanReport ScanReportFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const Checkpoint& cp);
Checkpoint CheckpointFromJson(const nlohmann::json& j);

}  // namespace nearsq
