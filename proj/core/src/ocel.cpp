#include "ocelforge/ocel.hpp"

#include <algorithm>
#include <ostream>

#include <nlohmann/json.hpp>

#include "ocelforge/csv.hpp"
#include "ocelforge/error.hpp"

using json = nlohmann::json;

namespace ocelforge {

namespace {

bool event_before(const OcelEvent& a, const OcelEvent& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.id < b.id;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedOcel, what);
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) malformed(std::string("expected an object holding ") + key);
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing key ") + key);
  return *it;
}

std::map<std::string, std::string> string_map(const json& obj, const char* what) {
  if (!obj.is_object()) malformed(std::string(what) + " must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : obj.items()) {
    out[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return out;
}

}  // namespace

OcelLog assemble(std::vector<RawEvent> events, const std::vector<RawObject>& objects) {
  OcelLog log;
  for (const auto& o : objects) {
    log.objects.try_emplace(o.id, OcelObject{o.id, o.type, o.ovmap});
    log.object_types.insert(o.type);
    for (const auto& [k, v] : o.ovmap) log.attribute_names.insert(k);
  }

  std::set<std::string> ids;
  log.events.reserve(events.size());
  for (auto& e : events) {
    if (!ids.insert(e.id).second) malformed("duplicate event id " + e.id);
    for (const auto& o : e.omap) {
      if (!log.objects.count(o)) {
        throw Error(ErrorCode::DanglingObjectRef, "event " + e.id + " references unknown object " + o);
      }
    }
    for (const auto& [k, v] : e.vmap) log.attribute_names.insert(k);
    OcelEvent ev{std::move(e.id), std::move(e.activity), e.timestamp, std::move(e.omap), std::move(e.vmap)};
    std::sort(ev.omap.begin(), ev.omap.end());
    ev.omap.erase(std::unique(ev.omap.begin(), ev.omap.end()), ev.omap.end());
    log.events.push_back(std::move(ev));
  }
  std::sort(log.events.begin(), log.events.end(), event_before);
  return log;
}

void validate(const OcelLog& log) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& e = log.events[i];
    if (!ids.insert(e.id).second) malformed("duplicate event id " + e.id);
    if (i > 0 && event_before(e, log.events[i - 1])) malformed("events out of order at " + e.id);
    for (const auto& o : e.omap) {
      if (!log.objects.count(o)) {
        throw Error(ErrorCode::DanglingObjectRef, "event " + e.id + " references unknown object " + o);
      }
    }
    for (const auto& [k, v] : e.vmap) {
      if (!log.attribute_names.count(k)) malformed("undeclared attribute " + k);
    }
  }
  for (const auto& [id, o] : log.objects) {
    if (id != o.id) malformed("object key mismatch for " + id);
    if (!log.object_types.count(o.type)) malformed("undeclared object type " + o.type);
  }
}

std::string serialize_json(const OcelLog& log) {
  json doc;
  doc["ocel:global-event"] = {{"ocel:activity", "__INVALID__"}};
  doc["ocel:global-object"] = {{"ocel:type", "__INVALID__"}};
  doc["ocel:global-log"] = {
      {"ocel:version", "1.0"},
      {"ocel:ordering", "timestamp"},
      {"ocel:attribute-names", json(std::vector<std::string>(log.attribute_names.begin(), log.attribute_names.end()))},
      {"ocel:object-types", json(std::vector<std::string>(log.object_types.begin(), log.object_types.end()))},
  };

  json events = json::object();
  for (const auto& e : log.events) {
    events[e.id] = {
        {"ocel:activity", e.activity},
        {"ocel:timestamp", format_iso(e.timestamp)},
        {"ocel:omap", e.omap},
        {"ocel:vmap", e.vmap},
    };
  }
  doc["ocel:events"] = std::move(events);

  json objects = json::object();
  for (const auto& [id, o] : log.objects) {
    objects[id] = {{"ocel:type", o.type}, {"ocel:ovmap", o.ovmap}};
  }
  doc["ocel:objects"] = std::move(objects);
  return doc.dump(2) + "\n";
}

OcelLog deserialize_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }

  OcelLog log;
  const auto& global = member(doc, "ocel:global-log");
  for (const auto& t : member(global, "ocel:object-types")) log.object_types.insert(t.get<std::string>());
  for (const auto& a : member(global, "ocel:attribute-names")) log.attribute_names.insert(a.get<std::string>());

  for (const auto& [id, o] : member(doc, "ocel:objects").items()) {
    OcelObject obj;
    obj.id = id;
    obj.type = member(o, "ocel:type").get<std::string>();
    if (auto it = o.find("ocel:ovmap"); it != o.end()) obj.ovmap = string_map(*it, "ocel:ovmap");
    log.objects.emplace(id, std::move(obj));
  }

  for (const auto& [id, e] : member(doc, "ocel:events").items()) {
    OcelEvent ev;
    ev.id = id;
    ev.activity = member(e, "ocel:activity").get<std::string>();
    const auto ts_text = member(e, "ocel:timestamp").get<std::string>();
    auto ts = parse_iso(ts_text);
    if (!ts) malformed("event " + id + " has invalid timestamp " + ts_text);
    ev.timestamp = *ts;
    for (const auto& o : member(e, "ocel:omap")) ev.omap.push_back(o.get<std::string>());
    std::sort(ev.omap.begin(), ev.omap.end());
    ev.vmap = string_map(member(e, "ocel:vmap"), "ocel:vmap");
    log.events.push_back(std::move(ev));
  }
  std::sort(log.events.begin(), log.events.end(), event_before);
  validate(log);
  return log;
}

std::size_t FlatLog::entry_count() const {
  std::size_t n = 0;
  for (const auto& [id, entries] : cases) n += entries.size();
  return n;
}

FlatLog flatten(const OcelLog& log, const std::string& case_type) {
  if (!log.object_types.count(case_type)) {
    throw Error(ErrorCode::UnknownCaseType, "unknown case type " + case_type);
  }
  FlatLog flat;
  flat.case_type = case_type;
  for (const auto& e : log.events) {
    bool any = false;
    for (const auto& o : e.omap) {
      if (log.objects.at(o).type != case_type) continue;
      any = true;
      flat.cases[o].push_back(FlatEntry{e.activity, e.timestamp, e.id, e.vmap});
    }
    if (!any) ++flat.dropped_events;
  }
  return flat;
}

void write_flat_csv(std::ostream& out, const FlatLog& flat) {
  csv::write_row(out, {"case:concept:name", "concept:name", "time:timestamp", "event:id"});
  for (const auto& [case_id, entries] : flat.cases) {
    for (const auto& e : entries) {
      csv::write_row(out, {case_id, e.activity, format_iso(e.timestamp), e.event_id});
    }
  }
}

ConvergenceStats convergence_stats(const OcelLog& log, const std::string& case_type) {
  if (!log.object_types.count(case_type)) {
    throw Error(ErrorCode::UnknownCaseType, "unknown case type " + case_type);
  }
  ConvergenceStats s;
  std::size_t total = 0;
  for (const auto& e : log.events) {
    const auto k = static_cast<std::size_t>(std::count_if(
        e.omap.begin(), e.omap.end(), [&](const std::string& o) { return log.objects.at(o).type == case_type; }));
    if (k == 0) continue;
    ++s.events_with_case;
    total += k;
    if (k >= 2) ++s.duplicated_events;
  }
  if (s.events_with_case > 0) {
    s.duplication_factor = static_cast<double>(total) / static_cast<double>(s.events_with_case);
  }
  return s;
}

DivergenceStats divergence_stats(const FlatLog& flat) {
  DivergenceStats s;
  for (const auto& [case_id, entries] : flat.cases) {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : entries) ++counts[e.activity];
    const auto pairs = static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second >= 2; }));
    s.diverging_pairs += pairs;
    if (pairs > 0) ++s.affected_cases;
  }
  return s;
}

}  // namespace ocelforge
