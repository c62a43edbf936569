#include "ocelforge/connector.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "ocelforge/extractor.hpp"

namespace ocelforge {

KeyFieldSet master_key_fields(const Catalog& catalog, const ExtractionPlan& plan) {
  KeyFieldSet out;
  for (const auto& node : plan.gor.nodes) {
    auto it = plan.categories.find(node);
    if (it != plan.categories.end() && it->second.value == Category::Detail) continue;
    for (const auto& c : catalog.table(node).columns) {
      if (c.is_key) out.emplace(c.field, c.domain);
    }
  }
  return out;
}

LinkHarvest harvest_links(const Catalog& catalog, const std::string& detail,
                          const ExtractionPlan& plan, const KeyFieldSet& master_keys) {
  const TableSchema& schema = catalog.table(detail);

  struct LinkColumn {
    std::size_t index;
    ObjectTypeName type;
    bool master_key;
  };
  std::vector<LinkColumn> cols;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    const auto& c = schema.columns[i];
    if (plan.object_blacklist.count(c.field)) continue;
    if (catalog.domain(c.domain).kind != DomainKind::Code) continue;
    cols.push_back({i, {c.field, c.domain}, master_keys.count({c.field, c.domain}) > 0});
  }

  LinkHarvest out;
  out.table = detail;
  std::map<std::string, RawObject> objects;
  std::size_t ordinal = 0;
  scan_table(catalog, detail, filters_for(plan, schema), [&](const Row& row) {
    ++out.rows_scanned;
    ++ordinal;
    const std::string key = row_key(schema, row, ordinal);

    std::vector<std::pair<RawObject, bool>> present;
    for (const auto& c : cols) {
      const auto& v = row.value(c.index);
      if (!v.empty()) present.emplace_back(make_object(c.type, v), c.master_key);
    }
    for (std::size_t i = 0; i < present.size(); ++i) {
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        const auto& [a, a_master] = present[i];
        const auto& [b, b_master] = present[j];
        if (a.id == b.id || !(a_master || b_master)) continue;
        LinkRecord l;
        l.detail_table = detail;
        l.left_object = std::min(a.id, b.id);
        l.right_object = std::max(a.id, b.id);
        l.source_row_key = key;
        objects.try_emplace(a.id, a);
        objects.try_emplace(b.id, b);
        out.links.push_back(std::move(l));
      }
    }
  });
  for (auto& [id, o] : objects) out.objects.push_back(std::move(o));
  return out;
}

LinkHarvest harvest_links(const Catalog& catalog, const std::string& detail,
                          const ExtractionPlan& plan) {
  return harvest_links(catalog, detail, plan, master_key_fields(catalog, plan));
}

std::vector<RawEvent> enrich_events(std::vector<RawEvent> events,
                                    const std::vector<LinkRecord>& links, bool transitive,
                                    EnrichStats* stats) {
  std::unordered_map<std::string, std::vector<const std::string*>> adj;
  for (const auto& l : links) {
    adj[l.left_object].push_back(&l.right_object);
    adj[l.right_object].push_back(&l.left_object);
  }

  std::size_t enriched = 0;
  for (auto& ev : events) {
    std::vector<std::string> added;
    if (!transitive) {
      for (const auto& o : ev.omap) {
        auto it = adj.find(o);
        if (it == adj.end()) continue;
        for (const auto* nb : it->second) added.push_back(*nb);
      }
    } else {
      std::set<std::string> seen(ev.omap.begin(), ev.omap.end());
      std::deque<std::string> queue(ev.omap.begin(), ev.omap.end());
      while (!queue.empty()) {
        auto cur = std::move(queue.front());
        queue.pop_front();
        auto it = adj.find(cur);
        if (it == adj.end()) continue;
        for (const auto* nb : it->second) {
          if (seen.insert(*nb).second) {
            added.push_back(*nb);
            queue.push_back(*nb);
          }
        }
      }
    }
    if (added.empty()) continue;
    const auto before = ev.omap.size();
    ev.omap.insert(ev.omap.end(), added.begin(), added.end());
    std::sort(ev.omap.begin(), ev.omap.end());
    ev.omap.erase(std::unique(ev.omap.begin(), ev.omap.end()), ev.omap.end());
    if (ev.omap.size() > before) ++enriched;
  }
  if (stats) stats->events_enriched = enriched;
  return events;
}

}  // namespace ocelforge
