#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ocelforge/catalog.hpp"
#include "ocelforge/classifier.hpp"
#include "ocelforge/extractor.hpp"
#include "ocelforge/ocel.hpp"
#include "ocelforge/plan.hpp"

namespace ocelforge {

struct TableStats {
  std::string category;
  std::size_t rows_scanned = 0;
  std::size_t events = 0;
  std::size_t links = 0;
  std::size_t skipped_no_timestamp = 0;
  std::size_t orphan_items = 0;
};

struct RunDiagnostics {
  std::size_t rows_scanned = 0;
  std::size_t events = 0;
  std::size_t objects = 0;
  std::size_t links_harvested = 0;
  std::size_t events_enriched = 0;
  std::size_t skipped_no_timestamp = 0;
  std::size_t orphan_items = 0;
  std::map<std::string, TableStats> tables;
  std::vector<std::string> warnings;
};

struct ExtractionResult {
  OcelLog log;
  RunDiagnostics diagnostics;
};

struct Progress {
  std::size_t tables_done = 0;
  std::size_t tables_total = 0;
  std::size_t events_emitted = 0;
};

using ProgressCallback = std::function<void(const Progress&)>;

// The change-item table for `header` among `nodes`, if any.
std::optional<std::string> paired_change_items(const Catalog& catalog, const std::string& header,
                                               const std::set<std::string>& nodes,
                                               const ClassificationRules& rules);

// Extracts every GoR table per its category, harvests detail links, enriches
// and assembles. Tables run on up to `jobs` threads; results merge in table
// name order, so output does not depend on `jobs`.
ExtractionResult run_extraction(const Catalog& catalog, const ExtractionPlan& plan,
                                const Lookups& lookups, const ClassificationRules& rules = {},
                                unsigned jobs = 1, const ProgressCallback& progress = {});

}  // namespace ocelforge
