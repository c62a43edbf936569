#include "ocelforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ocelforge/connector.hpp"
#include "ocelforge/error.hpp"

namespace ocelforge {

namespace {

struct Unit {
  std::string table;
  Category category;
  TableExtraction extraction;
  LinkHarvest harvest;
  bool consumed = false;  // change items handled together with their header
};

}  // namespace

std::optional<std::string> paired_change_items(const Catalog& catalog, const std::string& header,
                                               const std::set<std::string>& nodes,
                                               const ClassificationRules& rules) {
  for (const auto& n : nodes) {
    if (n == header) continue;
    const auto& t = catalog.table(n);
    if (change_role(t, rules) != ChangeRole::Item) continue;
    if (detail_link(catalog, n, header, rules)) return n;
  }
  return std::nullopt;
}

ExtractionResult run_extraction(const Catalog& catalog, const ExtractionPlan& plan,
                                const Lookups& lookups, const ClassificationRules& rules,
                                unsigned jobs, const ProgressCallback& progress) {
  const ExtractionPlan checked = validate_plan(plan, catalog);
  const KeyFieldSet master_keys = master_key_fields(catalog, checked);

  std::vector<Unit> units;
  std::set<std::string> consumed_items;
  for (const auto& node : checked.gor.nodes) {
    units.push_back(Unit{node, checked.categories.at(node).value, {}, {}, false});
  }
  // change headers claim their item tables
  std::map<std::string, std::optional<std::string>> change_items;
  for (const auto& u : units) {
    if (u.category != Category::Change) continue;
    if (change_role(catalog.table(u.table), rules) == ChangeRole::Header) {
      auto items = paired_change_items(catalog, u.table, checked.gor.nodes, rules);
      if (items) consumed_items.insert(*items);
      change_items[u.table] = items;
    }
  }
  for (auto& u : units) u.consumed = consumed_items.count(u.table) > 0;

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<std::size_t> emitted{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      Unit& u = units[i];
      try {
        switch (u.category) {
          case Category::Record:
            u.extraction = extract_record_events(catalog, u.table, checked);
            break;
          case Category::Transaction:
            u.extraction = extract_transaction_events(catalog, u.table, checked, lookups.tcodes, rules);
            break;
          case Category::Flow:
            u.extraction = extract_flow_events(catalog, u.table, checked, lookups.doctypes, rules);
            break;
          case Category::Change:
            if (auto it = change_items.find(u.table); it != change_items.end()) {
              u.extraction = extract_change_events(catalog, u.table, it->second, checked,
                                                   lookups.tcodes, rules);
            }
            break;
          case Category::Detail:
            u.harvest = harvest_links(catalog, u.table, checked, master_keys);
            break;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = units.size();
        return;
      }
      emitted += u.extraction.events.size();
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(Progress{d, units.size(), emitted.load()});
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(units.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExtractionResult result;
  auto& diag = result.diagnostics;
  std::vector<RawEvent> events;
  std::vector<RawObject> objects;
  std::vector<LinkRecord> links;
  // units are in table-name order already (std::set iteration)
  for (auto& u : units) {
    TableStats ts;
    ts.category = std::string(to_string(u.category));
    ts.rows_scanned = u.extraction.rows_scanned + u.harvest.rows_scanned;
    ts.events = u.extraction.events.size();
    ts.links = u.harvest.links.size();
    ts.skipped_no_timestamp = u.extraction.skipped_no_timestamp;
    ts.orphan_items = u.extraction.orphan_items;
    diag.rows_scanned += ts.rows_scanned;
    diag.links_harvested += ts.links;
    diag.skipped_no_timestamp += ts.skipped_no_timestamp;
    diag.orphan_items += ts.orphan_items;
    if (u.consumed) ts.category += " (items)";
    diag.tables[u.table] = ts;

    std::move(u.extraction.events.begin(), u.extraction.events.end(), std::back_inserter(events));
    std::move(u.extraction.objects.begin(), u.extraction.objects.end(), std::back_inserter(objects));
    std::move(u.harvest.objects.begin(), u.harvest.objects.end(), std::back_inserter(objects));
    std::move(u.harvest.links.begin(), u.harvest.links.end(), std::back_inserter(links));
    if (u.category == Category::Change && !u.consumed && !change_items.count(u.table)) {
      diag.warnings.push_back("change table " + u.table + " has no header; skipped");
    }
  }
  if (checked.gor.no_relations) {
    diag.warnings.push_back("master table " + checked.gor.master + " has no relations");
  }

  EnrichStats es;
  events = enrich_events(std::move(events), links, checked.transitive_links, &es);
  diag.events_enriched = es.events_enriched;

  result.log = assemble(std::move(events), objects);
  diag.events = result.log.events.size();
  diag.objects = result.log.objects.size();
  return result;
}

}  // namespace ocelforge
