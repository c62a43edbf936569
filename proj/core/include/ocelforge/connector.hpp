#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ocelforge/catalog.hpp"
#include "ocelforge/events.hpp"
#include "ocelforge/plan.hpp"

namespace ocelforge {

// Undirected association found in one detail row; left_object < right_object.
struct LinkRecord {
  std::string detail_table;
  std::string left_object;
  std::string right_object;
  std::string source_row_key;

  bool operator==(const LinkRecord&) const = default;
  auto operator<=>(const LinkRecord&) const = default;
};

using KeyFieldSet = std::set<std::pair<std::string, std::string>>;  // (field, domain)

// Primary-key (field, domain) pairs of every non-detail table in the plan.
KeyFieldSet master_key_fields(const Catalog& catalog, const ExtractionPlan& plan);

struct LinkHarvest {
  std::string table;
  std::vector<LinkRecord> links;   // row order, then pair order
  std::vector<RawObject> objects;  // link endpoints, unique, sorted by id
  std::size_t rows_scanned = 0;
};

// For each filtered row: one link per unordered pair of distinct code-domain
// objects in the row where at least one side is a master key field.
LinkHarvest harvest_links(const Catalog& catalog, const std::string& detail,
                          const ExtractionPlan& plan, const KeyFieldSet& master_keys);

LinkHarvest harvest_links(const Catalog& catalog, const std::string& detail,
                          const ExtractionPlan& plan);

struct EnrichStats {
  std::size_t events_enriched = 0;
};

// One-hop expansion: every object linked to an object of the original omap
// joins it. With `transitive`, the whole connected component joins instead.
std::vector<RawEvent> enrich_events(std::vector<RawEvent> events,
                                    const std::vector<LinkRecord>& links, bool transitive = false,
                                    EnrichStats* stats = nullptr);

}  // namespace ocelforge
