#include <doctest.h>

#include <random>
#include <sstream>

#include "ocelforge/error.hpp"
#include "ocelforge/ocel.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ocelforge;
using nlohmann::json;

namespace {

Timestamp at(int day, int hour = 0) {
  using namespace std::chrono;
  return sys_days{year{2021} / January / day} + hours{hour};
}

RawEvent event(std::string id, std::string activity, Timestamp ts, std::vector<std::string> omap) {
  RawEvent e;
  e.id = std::move(id);
  e.activity = std::move(activity);
  e.timestamp = ts;
  e.omap = std::move(omap);
  return e;
}

RawObject object(const std::string& type, const std::string& value) { return make_object({type, type}, value); }

// One order with three items: a single create event shared by all items
// (convergence) and two goods receipts on the order (divergence).
OcelLog small_log() {
  const std::vector<RawObject> objects{object("EBELN", "1"), object("EBELP", "10"), object("EBELP", "20"),
                                       object("EBELP", "30")};
  std::vector<RawEvent> events{
      event("E:3", "Goods receipt", at(3), {"EBELN-EBELN:1", "EBELP-EBELP:10"}),
      event("E:1", "Create order", at(1),
            {"EBELN-EBELN:1", "EBELP-EBELP:10", "EBELP-EBELP:20", "EBELP-EBELP:30"}),
      event("E:2", "Goods receipt", at(3), {"EBELN-EBELN:1", "EBELP-EBELP:20"}),
      event("E:4", "Unrelated", at(2), {}),
  };
  return assemble(std::move(events), objects);
}

}  // namespace

TEST_CASE("assemble orders events by timestamp then id and rejects broken input") {
  const auto log = small_log();
  std::vector<std::string> ids;
  for (const auto& e : log.events) ids.push_back(e.id);
  CHECK(ids == std::vector<std::string>{"E:1", "E:4", "E:2", "E:3"});
  CHECK(log.object_types == std::set<std::string>{"EBELN-EBELN", "EBELP-EBELP"});
  CHECK_NOTHROW(validate(log));

  try {
    assemble({event("E:1", "a", at(1), {"X:1"})}, {});
    FAIL("expected DanglingObjectRef");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingObjectRef);
  }
  try {
    assemble({event("E:1", "a", at(1), {}), event("E:1", "b", at(2), {})}, {});
    FAIL("expected MalformedOcel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedOcel);
  }
}

TEST_CASE("an empty log serializes to the OCEL skeleton") {
  const auto text = serialize_json(assemble({}, {}));
  const auto doc = json::parse(text);
  for (const char* key : {"ocel:global-event", "ocel:global-object", "ocel:global-log", "ocel:events", "ocel:objects"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["ocel:events"].empty());
  CHECK(doc["ocel:objects"].empty());
  CHECK(doc["ocel:global-log"]["ocel:version"] == "1.0");
  CHECK(deserialize_json(text) == assemble({}, {}));
}

TEST_CASE("serialization round-trips byte for byte") {
  const auto log = testsupport::extract_default(testsupport::seeded_snapshot()).log;
  const auto text = serialize_json(log);
  const auto back = deserialize_json(text);
  CHECK(back == log);
  CHECK(serialize_json(back) == text);
  CHECK(oracle::omap_closed(json::parse(text)));
}

TEST_CASE("deserialize rejects malformed documents") {
  auto code = [](const std::string& text) {
    try {
      deserialize_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code("{}") == ErrorCode::MalformedOcel);
  auto doc = json::parse(serialize_json(small_log()));
  doc["ocel:events"]["E:1"]["ocel:omap"].push_back("NOPE:1");
  CHECK(code(doc.dump()) == ErrorCode::DanglingObjectRef);
  doc = json::parse(serialize_json(small_log()));
  doc["ocel:events"]["E:1"]["ocel:timestamp"] = "yesterday";
  CHECK(code(doc.dump()) == ErrorCode::MalformedOcel);
}

TEST_CASE("validate catches out-of-order events and undeclared names") {
  auto log = small_log();
  std::swap(log.events[0], log.events[1]);
  CHECK_THROWS_AS(validate(log), Error);
  log = small_log();
  log.object_types.erase("EBELP-EBELP");
  CHECK_THROWS_AS(validate(log), Error);
  log = small_log();
  log.events[0].vmap["UNDECLARED"] = "1";
  CHECK_THROWS_AS(validate(log), Error);
}

TEST_CASE("flattening the three-item order shows convergence and divergence") {
  const auto log = small_log();

  const auto by_item = flatten(log, "EBELP-EBELP");
  CHECK(by_item.cases.size() == 3);
  CHECK(by_item.entry_count() == 5);  // the create event is copied into all three items
  CHECK(by_item.dropped_events == 1);
  const auto conv = convergence_stats(log, "EBELP-EBELP");
  CHECK(conv.duplicated_events == 1);
  CHECK(conv.events_with_case == 3);
  CHECK(conv.duplication_factor == doctest::Approx(5.0 / 3.0));
  CHECK(divergence_stats(by_item).diverging_pairs == 0);

  const auto by_order = flatten(log, "EBELN-EBELN");
  REQUIRE(by_order.cases.size() == 1);
  const auto& entries = by_order.cases.at("EBELN-EBELN:1");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].activity == "Create order");
  CHECK(entries[1].event_id == "E:2");  // same timestamp: id order
  CHECK(entries[2].event_id == "E:3");
  const auto div = divergence_stats(by_order);
  CHECK(div.diverging_pairs == 1);
  CHECK(div.affected_cases == 1);
  CHECK(convergence_stats(log, "EBELN-EBELN").duplicated_events == 0);

  std::ostringstream csv;
  write_flat_csv(csv, by_order);
  CHECK(csv.str() ==
        "case:concept:name,concept:name,time:timestamp,event:id\n"
        "EBELN-EBELN:1,Create order,2021-01-01T00:00:00Z,E:1\n"
        "EBELN-EBELN:1,Goods receipt,2021-01-03T00:00:00Z,E:2\n"
        "EBELN-EBELN:1,Goods receipt,2021-01-03T00:00:00Z,E:3\n");

  try {
    flatten(log, "NOPE");
    FAIL("expected UnknownCaseType");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCaseType);
  }
  CHECK_THROWS_AS(convergence_stats(log, "NOPE"), Error);
}

TEST_CASE("flattening, convergence and divergence equal the per-object replay on extracted logs") {
  for (const auto& dir : {testsupport::seeded_snapshot(), testsupport::change_snapshot()}) {
    const std::set<std::string> add = dir == testsupport::change_snapshot()
                                          ? std::set<std::string>{"CDHDR", "CDPOS", "VBFA"}
                                          : std::set<std::string>{};
    const auto log = testsupport::extract_default(dir, "EKKO", add).log;
    const auto doc = json::parse(serialize_json(log));
    for (const auto& type : log.object_types) {
      CAPTURE(type);
      const auto flat = flatten(log, type);
      std::vector<oracle::FlatEntry> got;
      for (const auto& [case_id, entries] : flat.cases) {
        for (const auto& e : entries) got.push_back({case_id, e.activity, format_iso(e.timestamp), e.event_id});
      }
      const auto expected = oracle::flatten(doc, type);
      // cases come out in object-id order on both sides
      CHECK(got == expected);

      const auto conv = convergence_stats(log, type);
      const auto oc = oracle::convergence(doc, type);
      CHECK(conv.duplicated_events == oc.duplicated_events);
      CHECK(conv.events_with_case == oc.events_with_case);
      CHECK(conv.duplication_factor == doctest::Approx(oc.factor()).epsilon(1e-12));
      CHECK(flat.dropped_events == log.events.size() - oc.events_with_case);

      const auto div = divergence_stats(flat);
      const auto od = oracle::divergence(expected);
      CHECK(div.diverging_pairs == od.diverging_pairs);
      CHECK(div.affected_cases == od.affected_cases);
    }
  }
}

TEST_CASE("assemble sorts any permutation of its input identically") {
  const auto log = testsupport::extract_default(testsupport::seeded_snapshot()).log;
  std::vector<RawEvent> raw;
  std::vector<RawObject> objects;
  for (const auto& e : log.events) {
    RawEvent r;
    r.id = e.id;
    r.activity = e.activity;
    r.timestamp = e.timestamp;
    r.omap = e.omap;
    r.vmap = e.vmap;
    raw.push_back(std::move(r));
  }
  for (const auto& [id, o] : log.objects) objects.push_back({o.id, o.type, o.ovmap});
  std::mt19937 rng(7);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(raw.begin(), raw.end(), rng);
    const auto again = assemble(raw, objects);
    CHECK(again.events == log.events);
    // brute-force order check
    for (std::size_t i = 1; i < again.events.size(); ++i) {
      const auto& a = again.events[i - 1];
      const auto& b = again.events[i];
      CHECK((a.timestamp < b.timestamp || (a.timestamp == b.timestamp && a.id < b.id)));
    }
  }
}
