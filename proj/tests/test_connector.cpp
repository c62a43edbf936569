#include <doctest.h>

#include "ocelforge/connector.hpp"
#include "ocelforge/pipeline.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ocelforge;

namespace {

struct Split {
  std::set<std::string> details, masters, event_tables;
};

Split split(const ExtractionPlan& plan) {
  Split s;
  for (const auto& [t, cat] : plan.categories) {
    if (cat.value == Category::Detail) {
      s.details.insert(t);
    } else {
      s.masters.insert(t);
      s.event_tables.insert(t);
    }
  }
  return s;
}

std::map<std::string, std::set<std::string>> omaps(const OcelLog& log) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& e : log.events) out[e.id] = {e.omap.begin(), e.omap.end()};
  return out;
}

}  // namespace

TEST_CASE("harvested links equal the pairwise scan of detail rows") {
  for (const auto& dir : {testsupport::seeded_snapshot(), testsupport::change_snapshot()}) {
    const Catalog c = load_catalog(dir);
    const auto meta = oracle::read_meta(dir);
    const auto plan = default_plan(c, "EKKO");
    const auto s = split(plan);
    const auto keys = master_key_fields(c, plan);

    std::vector<oracle::Link> got;
    for (const auto& d : s.details) {
      const auto h = harvest_links(c, d, plan, keys);
      CHECK(h.rows_scanned == oracle::read_raw(dir / (d + ".csv")).rows.size());
      for (const auto& l : h.links) {
        CHECK(l.left_object < l.right_object);
        got.emplace_back(l.detail_table, l.left_object, l.right_object);
      }
      CHECK(h.links == harvest_links(c, d, plan).links);
    }
    std::sort(got.begin(), got.end());
    CHECK(got == oracle::links(dir, meta, s.details, s.masters));
  }
}

TEST_CASE("order items link order, item, requisition and material") {
  const auto dir = testsupport::seeded_snapshot();
  const Catalog c = load_catalog(dir);
  const auto plan = default_plan(c, "EKKO");
  const auto h = harvest_links(c, "EKPO", plan);
  const auto row = scan_table(c, "EKPO").at(0);
  std::set<std::pair<std::string, std::string>> first_row;
  for (const auto& l : h.links) {
    if (l.source_row_key == row_key(c.table("EKPO"), row, 1)) first_row.insert({l.left_object, l.right_object});
  }
  const std::string order = "EBELN-EBELN:" + row.at("EBELN");
  const std::string item = "EBELP-EBELP:" + row.at("EBELP");
  const std::string req = "BANFN-BANFN:" + row.at("BANFN");
  CHECK(first_row.count({std::min(order, item), std::max(order, item)}));
  CHECK(first_row.count({std::min(order, req), std::max(order, req)}));
  // links come only from code columns: MATNR is text
  for (const auto& [a, b] : first_row) {
    CHECK(a.rfind("MATNR", 0) != 0);
    CHECK(b.rfind("MATNR", 0) != 0);
  }
}

TEST_CASE("one-hop enrichment equals the raw adjacency expansion") {
  for (const auto& dir : {testsupport::seeded_snapshot(), testsupport::change_snapshot()}) {
    const Catalog c = load_catalog(dir);
    const auto meta = oracle::read_meta(dir);
    const auto plan = default_plan(c, "EKKO");
    const auto s = split(plan);
    const auto adj = oracle::adjacency(oracle::links(dir, meta, s.details, s.masters));
    const auto result = run_extraction(c, plan, load_lookups(dir));
    CHECK(omaps(result.log) == oracle::expected_omaps(dir, meta, s.event_tables, adj));
  }
}

TEST_CASE("payments gain their order one hop away, the requisition only transitively") {
  const auto dir = testsupport::seeded_snapshot();
  const Catalog c = load_catalog(dir);
  auto plan = default_plan(c, "EKKO");
  const auto one = run_extraction(c, plan, load_lookups(dir));
  plan.transitive_links = true;
  const auto all = run_extraction(c, plan, load_lookups(dir));

  auto types_of = [](const OcelLog& log, const OcelEvent& e) {
    std::set<std::string> t;
    for (const auto& o : e.omap) t.insert(log.objects.at(o).type);
    return t;
  };
  std::size_t payments = 0;
  for (std::size_t i = 0; i < one.log.events.size(); ++i) {
    const auto& e = one.log.events[i];
    if (e.activity != "Enter outgoing payment") continue;
    ++payments;
    const auto direct = types_of(one.log, e);
    CHECK(direct.count("EBELN-EBELN"));
    CHECK(direct.count("EBELP-EBELP"));
    CHECK_FALSE(direct.count("BANFN-BANFN"));
    const auto& et = all.log.events[i];
    REQUIRE(et.id == e.id);
    CHECK(types_of(all.log, et).count("BANFN-BANFN"));
    CHECK(std::includes(et.omap.begin(), et.omap.end(), e.omap.begin(), e.omap.end()));
  }
  CHECK(payments == c.table("BKPF").row_count);
}

TEST_CASE("enrich_events handles the small cases exactly") {
  RawEvent e;
  e.id = "T:1";
  e.omap = {"A:1"};
  const std::vector<LinkRecord> links{{"D", "A:1", "B:1", "k"}, {"D", "B:1", "C:1", "k"}, {"D", "X:1", "Y:1", "k"}};
  EnrichStats stats;
  const auto one = enrich_events({e}, links, false, &stats);
  CHECK(one.at(0).omap == std::vector<std::string>{"A:1", "B:1"});
  CHECK(stats.events_enriched == 1);
  const auto all = enrich_events({e}, links, true);
  CHECK(all.at(0).omap == std::vector<std::string>{"A:1", "B:1", "C:1"});
  // nothing to add
  RawEvent lone;
  lone.id = "T:2";
  lone.omap = {"Z:1"};
  EnrichStats none;
  CHECK(enrich_events({lone}, links, false, &none).at(0).omap == lone.omap);
  CHECK(none.events_enriched == 0);
  CHECK(enrich_events({e}, {}, true).at(0).omap == e.omap);
}

TEST_CASE("filters restrict which detail rows are harvested") {
  const auto dir = testsupport::seeded_snapshot();
  const Catalog c = load_catalog(dir);
  auto plan = default_plan(c, "EKKO");
  plan.filters = {{"GJAHR", {"2021"}}};
  const auto raw = oracle::read_raw(dir / "BSEG.csv");
  const auto gj = raw.col("GJAHR");
  const auto expected =
      std::count_if(raw.rows.begin(), raw.rows.end(), [&](const auto& r) { return r[gj] == "2021"; });
  CHECK(harvest_links(c, "BSEG", plan).rows_scanned == static_cast<std::size_t>(expected));
}
