#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ocelforge/catalog.hpp"
#include "ocelforge/classifier.hpp"
#include "ocelforge/events.hpp"
#include "ocelforge/plan.hpp"

namespace ocelforge {

using Lookup = std::map<std::string, std::string>;

struct Lookups {
  Lookup tcodes;    // tstct.csv: TCODE,TTEXT
  Lookup doctypes;  // doctypes.csv: CODE,TEXT
};

// Both files are optional; missing files yield empty lookups.
Lookups load_lookups(const std::filesystem::path& snapshot_dir);

struct TableExtraction {
  std::string table;
  std::vector<RawEvent> events;    // row order
  std::vector<RawObject> objects;  // unique, sorted by id
  std::size_t rows_scanned = 0;
  std::size_t skipped_no_timestamp = 0;
  std::size_t orphan_items = 0;
};

// Key values joined with '|'; the row ordinal for keyless tables.
std::string row_key(const TableSchema& table, const Row& row, std::size_t ordinal);

// One object per non-empty column whose domain is neither temporal nor
// numeric, skipping blacklisted fields.
std::vector<RawObject> derive_objects(const Catalog& catalog, const std::string& table,
                                      const Row& row,
                                      const std::set<std::string>& object_blacklist = {"MANDT"});

// First priority entry present and non-empty in the row wins; otherwise the
// first non-empty date column in schema order. nullopt means NoTimestamp.
std::optional<Timestamp> resolve_timestamp(const Catalog& catalog, const std::string& table,
                                           const Row& row,
                                           const std::vector<TimestampSource>& priority);

// Temporal and numeric columns plus key values; empty values omitted.
std::map<std::string, std::string> event_attributes(const Catalog& catalog, const TableSchema& table,
                                                    const Row& row);

bool change_predicate_holds(ChangePredicate predicate, const std::string& old_value,
                            const std::string& new_value, DomainKind kind);

TableExtraction extract_record_events(const Catalog& catalog, const std::string& table,
                                      const ExtractionPlan& plan);

TableExtraction extract_transaction_events(const Catalog& catalog, const std::string& table,
                                           const ExtractionPlan& plan, const Lookup& tcode_lookup,
                                           const ClassificationRules& rules = {});

TableExtraction extract_flow_events(const Catalog& catalog, const std::string& table,
                                    const ExtractionPlan& plan, const Lookup& doctype_lookup,
                                    const ClassificationRules& rules = {});

// `items` is the change-item table paired with `header`, if any. Without an
// item table every strategy degrades to one event per header row.
TableExtraction extract_change_events(const Catalog& catalog, const std::string& header,
                                      const std::optional<std::string>& items,
                                      const ExtractionPlan& plan, const Lookup& tcode_lookup,
                                      const ClassificationRules& rules = {});

}  // namespace ocelforge
