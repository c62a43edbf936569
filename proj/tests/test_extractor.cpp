#include <doctest.h>

#include <cstdio>

#include "ocelforge/error.hpp"
#include "ocelforge/extractor.hpp"
#include "ocelforge/pipeline.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ocelforge;

namespace {

// "YYYYMMDD" + optional "HHMMSS" -> "YYYY-MM-DDTHH:MM:SSZ" by plain string
// surgery, independent of the library's calendar code.
std::string iso_of(const std::string& date, const std::string& time = "000000") {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%s-%sT%s:%s:%sZ", date.substr(0, 4).c_str(), date.substr(4, 2).c_str(),
                date.substr(6, 2).c_str(), time.substr(0, 2).c_str(), time.substr(2, 2).c_str(),
                time.substr(4, 2).c_str());
  return buf;
}

std::map<std::string, std::size_t> histogram(const OcelLog& log) {
  std::map<std::string, std::size_t> h;
  for (const auto& e : log.events) ++h[e.activity];
  return h;
}

Lookup read_lookup(const std::filesystem::path& file) {
  Lookup out;
  for (const auto& r : oracle::read_raw(file).rows) out[r.at(0)] = r.at(1);
  return out;
}

}  // namespace

TEST_CASE("date, time and ISO parsing") {
  using namespace std::chrono;
  CHECK(parse_date("20210301") == sys_days{year{2021} / March / 1});
  CHECK(parse_date("2021-03-01") == sys_days{year{2021} / March / 1});
  CHECK_FALSE(parse_date("00000000").has_value());
  CHECK_FALSE(parse_date("20210230").has_value());
  CHECK_FALSE(parse_date("2021031").has_value());
  CHECK_FALSE(parse_date("").has_value());
  CHECK(parse_time_of_day("120000") == hours{12});
  CHECK(parse_time_of_day("23:59:59") == hours{23} + minutes{59} + seconds{59});
  CHECK_FALSE(parse_time_of_day("250000").has_value());
  const Timestamp ts = sys_days{year{2021} / March / 1} + hours{12};
  CHECK(format_iso(ts) == "2021-03-01T12:00:00Z");
  CHECK(parse_iso("2021-03-01T12:00:00Z") == ts);
  CHECK_FALSE(parse_iso("2021-03-01 12:00").has_value());
}

TEST_CASE("timestamp resolution follows the priority list, then the first date column") {
  const auto dir = testsupport::fresh_dir("ext_ts");
  testsupport::write_file(dir / "dd_domains.csv",
                          "DOMNAME,KIND,DESCRIPTION\nDOC,CODE,d\nDATUM,DATE,d\nUZEIT,TIME,t\n");
  testsupport::write_file(dir / "dd_fields.csv",
                          "TABNAME,FIELDNAME,DOMNAME,KEYFLAG,POSITION\nT,DOC,DOC,X,1\nT,ERDAT,DATUM,,2\n"
                          "T,BUDAT,DATUM,,3\nT,CPUDT,DATUM,,4\nT,CPUTM,UZEIT,,5\nT,ZDAT,DATUM,,6\n");
  testsupport::write_file(dir / "T.csv",
                          "DOC,ERDAT,BUDAT,CPUDT,CPUTM,ZDAT\n"
                          "1,20210101,20210202,20210303,101010,\n"   // CPUDT+CPUTM wins
                          "2,20210101,20210202,20210303,,\n"         // time missing: BUDAT
                          "3,20210101,,,,\n"                         // ERDAT
                          "4,,,,,20210505\n"                         // fallback: first date column
                          "5,,,,,\n");                               // none
  const Catalog c = load_catalog(dir);
  const auto rows = scan_table(c, "T");
  const auto prio = default_timestamp_priority();
  auto iso = [&](std::size_t i) {
    auto ts = resolve_timestamp(c, "T", rows[i], prio);
    return ts ? format_iso(*ts) : std::string("none");
  };
  CHECK(iso(0) == "2021-03-03T10:10:10Z");
  CHECK(iso(1) == "2021-02-02T00:00:00Z");
  CHECK(iso(2) == "2021-01-01T00:00:00Z");
  CHECK(iso(3) == "2021-05-05T00:00:00Z");
  CHECK(iso(4) == "none");

  ExtractionPlan plan;
  plan.gor.master = "T";
  plan.gor.nodes = {"T"};
  const auto ex = extract_record_events(c, "T", plan);
  CHECK(ex.rows_scanned == 5);
  CHECK(ex.skipped_no_timestamp == 1);
  CHECK(ex.events.size() == 4);
}

TEST_CASE("change header timestamps equal UDATE+UTIME reparsed from the raw file") {
  const auto dir = testsupport::change_snapshot();
  const Catalog c = load_catalog(dir);
  const auto plan = default_plan(c, "EKKO", {}, {}, {"CDHDR", "CDPOS"});
  const auto ex = extract_change_events(c, "CDHDR", std::nullopt, plan, load_lookups(dir).tcodes);
  const auto raw = oracle::read_raw(dir / "CDHDR.csv");
  const auto meta = oracle::read_meta(dir);
  REQUIRE(ex.events.size() == raw.rows.size());
  REQUIRE_FALSE(raw.rows.empty());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& r = raw.rows[i];
    CHECK(format_iso(ex.events[i].timestamp) == iso_of(r[raw.col("UDATE")], r[raw.col("UTIME")]));
    CHECK(ex.events[i].id == "CDHDR:" + oracle::row_key(meta, "CDHDR", r));
    CHECK(ex.events[i].activity == "Change purchase order");
    CHECK(ex.events[i].omap ==
          std::vector<std::string>{"OBJECTID-" + r[raw.col("OBJECTCLAS")] + ":" + r[raw.col("OBJECTID")]});
  }
}

TEST_CASE("record and transaction events carry the expected activities and timestamps") {
  const auto dir = testsupport::seeded_snapshot();
  const Catalog c = load_catalog(dir);
  const auto plan = default_plan(c, "EKKO");
  const auto lookups = load_lookups(dir);

  const auto ekko = extract_record_events(c, "EKKO", plan);
  const auto raw = oracle::read_raw(dir / "EKKO.csv");
  REQUIRE(ekko.events.size() == raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    CHECK(ekko.events[i].activity == "Create document (EKKO)");
    CHECK(format_iso(ekko.events[i].timestamp) == iso_of(raw.rows[i][raw.col("AEDAT")]));
  }

  const auto bkpf = extract_transaction_events(c, "BKPF", plan, lookups.tcodes);
  const auto rawb = oracle::read_raw(dir / "BKPF.csv");
  REQUIRE(bkpf.events.size() == rawb.rows.size());
  for (std::size_t i = 0; i < rawb.rows.size(); ++i) {
    CHECK(bkpf.events[i].activity == "Enter outgoing payment");
    CHECK(format_iso(bkpf.events[i].timestamp) ==
          iso_of(rawb.rows[i][rawb.col("CPUDT")], rawb.rows[i][rawb.col("CPUTM")]));
  }
  // without a lookup the raw code is the activity
  CHECK(extract_transaction_events(c, "RBKP", plan, {}).events.at(0).activity == "MIRO");
  CHECK_THROWS_AS(extract_transaction_events(c, "EKKO", plan, lookups.tcodes), Error);
}

TEST_CASE("the activity histogram equals a raw join of rows with their lookups") {
  for (const auto& dir : {testsupport::seeded_snapshot(), testsupport::change_snapshot()}) {
    const auto meta = oracle::read_meta(dir);
    const Catalog c = load_catalog(dir);
    std::set<std::string> add;
    if (meta.tables.count("CDHDR")) add = {"CDHDR", "CDPOS", "VBFA"};
    const auto result = testsupport::extract_default(dir, "EKKO", add);
    const auto plan = default_plan(c, "EKKO", {}, {}, add);

    const auto tcodes = read_lookup(dir / "tstct.csv");
    std::map<std::string, std::size_t> expected;
    for (const auto& [t, cat] : plan.categories) {
      const auto raw = oracle::read_raw(dir / (t + ".csv"));
      switch (cat.value) {
        case Category::Record:
          expected["Create document (" + t + ")"] += raw.rows.size();
          break;
        case Category::Transaction:
        case Category::Change:
          if (t == "CDPOS") break;  // default strategy: one event per header
          for (const auto& r : raw.rows) ++expected[tcodes.at(r[raw.col("TCODE")])];
          break;
        case Category::Flow: {
          const auto doctypes = read_lookup(dir / "doctypes.csv");
          for (const auto& r : raw.rows) ++expected[doctypes.at(r[raw.col("VBTYP_N")])];
          break;
        }
        case Category::Detail:
          break;
      }
    }
    CHECK(histogram(result.log) == expected);
    CHECK(result.diagnostics.skipped_no_timestamp == 0);
  }
}

TEST_CASE("flow events relate the current and previous document") {
  const auto dir = testsupport::change_snapshot();
  const Catalog c = load_catalog(dir);
  const auto plan = default_plan(c, "EKKO", {}, {}, {"VBFA"});
  const auto ex = extract_flow_events(c, "VBFA", plan, load_lookups(dir).doctypes);
  const auto raw = oracle::read_raw(dir / "VBFA.csv");
  REQUIRE(ex.events.size() == raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& r = raw.rows[i];
    std::vector<std::string> omap{"VBELN-VBELN:" + r[raw.col("VBELN")], "VBELV-VBELN:" + r[raw.col("VBELV")]};
    std::sort(omap.begin(), omap.end());
    CHECK(ex.events[i].omap == omap);
    CHECK(ex.events[i].activity == (r[raw.col("VBTYP_N")] == "J" ? "Delivery" : "Invoice"));
    // ERDAT alone: ERZET is not paired with it in the priority list
    CHECK(format_iso(ex.events[i].timestamp) == iso_of(r[raw.col("ERDAT")]));
  }
}

TEST_CASE("field and semantic strategies emit one event per change item") {
  const auto dir = testsupport::change_snapshot();
  const Catalog c = load_catalog(dir);
  auto plan = default_plan(c, "EKKO", {}, {}, {"CDHDR", "CDPOS"});
  const auto tcodes = load_lookups(dir).tcodes;
  const auto raw = oracle::read_raw(dir / "CDPOS.csv");
  REQUIRE_FALSE(raw.rows.empty());

  plan.change_strategy = ChangeStrategy::Field;
  const auto field = extract_change_events(c, "CDHDR", std::string("CDPOS"), plan, tcodes);
  REQUIRE(field.events.size() == raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    CHECK(field.events[i].activity == "Changed " + raw.rows[i][raw.col("FNAME")]);
    CHECK(field.events[i].source_table == "CDPOS");
  }
  CHECK(field.orphan_items == 0);

  plan.change_strategy = ChangeStrategy::Semantic;
  plan.semantic_rules = {{"EKET", "EINDT", ChangePredicate::Increased, "Postpone Delivery"},
                         {"EKET", "EINDT", ChangePredicate::Decreased, "Advance Delivery"},
                         {"EKPO", "NETPR", ChangePredicate::Increased, "Increase Price"},
                         {"EKPO", "NETPR", ChangePredicate::Decreased, "Reduce Price"}};
  const auto sem = extract_change_events(c, "CDHDR", std::string("CDPOS"), plan, tcodes);
  REQUIRE(sem.events.size() == raw.rows.size());
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    const auto& r = raw.rows[i];
    const auto& oldv = r[raw.col("VALUE_OLD")];
    const auto& newv = r[raw.col("VALUE_NEW")];
    std::string expected;
    if (r[raw.col("FNAME")] == "EINDT") {
      expected = newv > oldv ? "Postpone Delivery" : (newv < oldv ? "Advance Delivery" : "Changed EINDT");
    } else {
      const double o = std::stod(oldv), n = std::stod(newv);
      expected = n > o ? "Increase Price" : (n < o ? "Reduce Price" : "Changed NETPR");
    }
    CHECK(sem.events[i].activity == expected);
  }
}

TEST_CASE("change predicates compare numbers and dates numerically") {
  CHECK(change_predicate_holds(ChangePredicate::Increased, "9.5", "10", DomainKind::Numeric));
  CHECK_FALSE(change_predicate_holds(ChangePredicate::Increased, "9.5", "10", DomainKind::Text));
  CHECK(change_predicate_holds(ChangePredicate::Decreased, "2021-03-02", "20210301", DomainKind::TemporalDate));
  CHECK(change_predicate_holds(ChangePredicate::Set, "", "x", DomainKind::Text));
  CHECK(change_predicate_holds(ChangePredicate::Cleared, "x", "", DomainKind::Text));
  CHECK(change_predicate_holds(ChangePredicate::Changed, "a", "b", DomainKind::Text));
  CHECK_FALSE(change_predicate_holds(ChangePredicate::Changed, "a", "a", DomainKind::Text));
  CHECK_FALSE(change_predicate_holds(ChangePredicate::Increased, "", "1", DomainKind::Numeric));
}

TEST_CASE("objects come from every non-temporal, non-numeric column") {
  const auto dir = testsupport::seeded_snapshot();
  const Catalog c = load_catalog(dir);
  const auto meta = oracle::read_meta(dir);
  for (const std::string t : {"EKPO", "BKPF", "RSEG", "EBAN"}) {
    const auto rows = scan_table(c, t);
    const auto raw = oracle::read_raw(dir / (t + ".csv"));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::set<std::string> got;
      for (const auto& o : derive_objects(c, t, rows[i])) {
        got.insert(o.id);
        CHECK(o.id.rfind(o.type + ":", 0) == 0);
      }
      CHECK(got == oracle::row_objects(meta, t, raw.rows[i]));
    }
  }
  const auto bkpf = scan_table(c, "BKPF");
  std::set<std::string> types;
  for (const auto& o : derive_objects(c, "BKPF", bkpf.at(0))) types.insert(o.type);
  CHECK(types.count("BELNR-BELNR_D"));
  CHECK(types.count("TCODE-TCODE"));
  CHECK_FALSE(types.count("GJAHR-GJAHR"));
  CHECK_FALSE(types.count("MANDT-MANDT"));
  // blacklisting is by field
  for (const auto& o : derive_objects(c, "BKPF", bkpf.at(0), {"MANDT", "BELNR"})) CHECK(o.type != "BELNR-BELNR_D");
}

TEST_CASE("row keys join key values; keyless tables use the ordinal") {
  const Catalog c = load_catalog(testsupport::seeded_snapshot());
  const auto rows = scan_table(c, "EKPO");
  const auto& r = rows.at(0);
  CHECK(row_key(c.table("EKPO"), r, 1) == r.at("MANDT") + "|" + r.at("EBELN") + "|" + r.at("EBELP"));
  TableSchema keyless;
  keyless.columns = {{"X", "A", "A", false, 1}};
  CHECK(row_key(keyless, Row(std::make_shared<std::vector<std::string>>(std::vector<std::string>{"A"}),
                             {"v"}),
                7) == "#7");
}

TEST_CASE("missing lookup files yield empty lookups") {
  const auto l = load_lookups(testsupport::fresh_dir("ext_nolookups"));
  CHECK(l.tcodes.empty());
  CHECK(l.doctypes.empty());
  const auto s = load_lookups(testsupport::change_snapshot());
  CHECK(s.tcodes.at("MIRO") == "Enter incoming invoice");
  CHECK(s.doctypes.at("J") == "Delivery");
}
