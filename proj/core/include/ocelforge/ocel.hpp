#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocelforge/events.hpp"

namespace ocelforge {

struct OcelEvent {
  std::string id;
  std::string activity;
  Timestamp timestamp{};
  std::vector<std::string> omap;  // sorted
  std::map<std::string, std::string> vmap;

  bool operator==(const OcelEvent&) const = default;
};

struct OcelObject {
  std::string id;
  std::string type;
  std::map<std::string, std::string> ovmap;

  bool operator==(const OcelObject&) const = default;
};

// Events ordered by (timestamp, id); every omap id resolves in `objects`.
struct OcelLog {
  std::vector<OcelEvent> events;
  std::map<std::string, OcelObject> objects;
  std::set<std::string> object_types;
  std::set<std::string> attribute_names;

  bool operator==(const OcelLog&) const = default;
};

// Throws DanglingObjectRef for an unresolved omap id and MalformedOcel for a
// duplicate event id.
OcelLog assemble(std::vector<RawEvent> events, const std::vector<RawObject>& objects);

// Structural check: ordering, unique ids, resolvable references, declared
// types and attribute names.
void validate(const OcelLog& log);

// OCEL 1.0 JSON with sorted keys; timestamps ISO-8601 UTC at seconds.
std::string serialize_json(const OcelLog& log);
OcelLog deserialize_json(std::string_view json);

struct FlatEntry {
  std::string activity;
  Timestamp timestamp{};
  std::string event_id;
  std::map<std::string, std::string> vmap;

  bool operator==(const FlatEntry&) const = default;
};

struct FlatLog {
  std::string case_type;
  std::map<std::string, std::vector<FlatEntry>> cases;  // entries by (timestamp, event id)
  std::size_t dropped_events = 0;  // events with no object of the case type

  std::size_t entry_count() const;
};

// Throws UnknownCaseType when `case_type` is not an object type of the log.
FlatLog flatten(const OcelLog& log, const std::string& case_type);

// case:concept:name,concept:name,time:timestamp,event:id
void write_flat_csv(std::ostream& out, const FlatLog& flat);

struct ConvergenceStats {
  std::size_t duplicated_events = 0;  // events with >= 2 case objects
  double duplication_factor = 1.0;    // mean case-object count over events with >= 1
  std::size_t events_with_case = 0;
};

ConvergenceStats convergence_stats(const OcelLog& log, const std::string& case_type);

struct DivergenceStats {
  std::size_t diverging_pairs = 0;  // (case, activity) with multiplicity >= 2
  std::size_t affected_cases = 0;
};

DivergenceStats divergence_stats(const FlatLog& flat);

}  // namespace ocelforge
