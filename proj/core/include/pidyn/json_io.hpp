#pragma once

// JSON encodings of maps and analysis reports, and a deterministic writer
// that prints every floating value with 17 significant digits.

#include <string>

#include <json.hpp>

#include "pidyn/chains.hpp"
#include "pidyn/gallery.hpp"
#include "pidyn/maps.hpp"
#include "pidyn/periodic.hpp"
#include "pidyn/recurrence.hpp"

namespace pidyn {

using Json = nlohmann::ordered_json;

/// Pretty-printed JSON with %.17g floats, non-finite numbers as null, keys
/// in insertion order, and a trailing newline.
std::string dump_json(const Json& value, int indent = 2);

/// {"breakpoints": [...], "values": [...]}
Json map_to_json(const PiecewiseLinearMap& map);

/// Throws std::invalid_argument when the record is malformed or the map
/// invariants fail.
PiecewiseLinearMap map_from_json(const Json& value);

Json to_json(const Interval& interval);
Json to_json(const Region& region);
Json to_json(const Proportion& p);
Json to_json(const RecurrenceReport& report);
Json to_json(const AbsorptionReport& report);
Json to_json(const TrapReport& report);
Json to_json(const DeltaChain& chain, const ChainCheck& check);
Json to_json(const ChainSearchResult& result, const PiecewiseLinearMap& f);
Json to_json(const CorridorCheck& check);
Json to_json(const PeriodicOrbit& orbit);
Json to_json(const PeriodicSearchResult& result);
Json to_json(const IntervalDecomposition& dec);
Json to_json(const ShadowResult& result);
Json to_json(const LiYorkeReport& report);
Json to_json(const Example2Report& report);

}  // namespace pidyn
