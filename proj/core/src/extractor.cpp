#include "ocelforge/extractor.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "ocelforge/csv.hpp"
#include "ocelforge/error.hpp"

namespace fs = std::filesystem;

namespace ocelforge {

namespace {

Lookup load_lookup(const fs::path& file, const std::vector<std::string>& header) {
  Lookup out;
  if (!fs::exists(file)) return out;
  auto reader = csv::Reader::from_file(file);
  std::vector<std::string> rec;
  if (!reader.next(rec)) return out;
  if (rec != header) {
    throw Error(ErrorCode::MalformedMetadata, file.filename().string() + ": unexpected header");
  }
  while (reader.next(rec)) {
    if (rec.size() != 2) {
      throw Error(ErrorCode::MalformedMetadata,
                  file.filename().string() + ":" + std::to_string(reader.line()) + ": wrong cell count");
    }
    out[rec[0]] = rec[1];
  }
  return out;
}

std::vector<DomainKind> column_kinds(const Catalog& catalog, const TableSchema& t) {
  std::vector<DomainKind> kinds;
  kinds.reserve(t.columns.size());
  for (const auto& c : t.columns) kinds.push_back(catalog.domain(c.domain).kind);
  return kinds;
}

class ObjectCollector {
public:
  void add(const RawObject& o) { objects_.try_emplace(o.id, o); }

  std::vector<RawObject> take() {
    std::vector<RawObject> out;
    out.reserve(objects_.size());
    for (auto& [id, o] : objects_) out.push_back(std::move(o));
    return out;
  }

private:
  std::map<std::string, RawObject> objects_;
};

std::vector<std::string> ids_of(const std::vector<RawObject>& objects) {
  std::vector<std::string> ids;
  ids.reserve(objects.size());
  for (const auto& o : objects) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// Shared loop for record and transaction tables: one event per filtered row,
// omap from derive_objects.
TableExtraction extract_per_row(const Catalog& catalog, const std::string& table,
                                const ExtractionPlan& plan,
                                const std::function<std::string(const Row&)>& activity_of) {
  const TableSchema& schema = catalog.table(table);
  TableExtraction out;
  out.table = table;
  ObjectCollector objects;
  std::size_t ordinal = 0;
  scan_table(catalog, table, filters_for(plan, schema), [&](const Row& row) {
    ++out.rows_scanned;
    ++ordinal;
    auto ts = resolve_timestamp(catalog, table, row, plan.timestamp_priority);
    if (!ts) {
      ++out.skipped_no_timestamp;
      return;
    }
    auto objs = derive_objects(catalog, table, row, plan.object_blacklist);
    RawEvent ev;
    ev.source_table = table;
    ev.source_row_key = row_key(schema, row, ordinal);
    ev.id = table + ":" + ev.source_row_key;
    ev.activity = activity_of(row);
    ev.timestamp = *ts;
    ev.omap = ids_of(objs);
    ev.vmap = event_attributes(catalog, schema, row);
    for (const auto& o : objs) objects.add(o);
    out.events.push_back(std::move(ev));
  });
  out.objects = objects.take();
  return out;
}

std::string lookup_or(const Lookup& lookup, const std::string& code) {
  auto it = lookup.find(code);
  return it == lookup.end() ? code : it->second;
}

bool parse_number(const std::string& s, DomainKind kind, double& out) {
  std::string cleaned;
  for (char c : s) {
    if (is_temporal(kind) && (c == '-' || c == ':')) continue;
    cleaned.push_back(c);
  }
  if (cleaned.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cleaned.c_str(), &end);
  return end == cleaned.c_str() + cleaned.size();
}

// <0, 0, >0 like strcmp; numeric for temporal and numeric domains
int compare_values(const std::string& a, const std::string& b, DomainKind kind) {
  if (kind == DomainKind::Numeric || is_temporal(kind)) {
    double x = 0, y = 0;
    if (parse_number(a, kind, x) && parse_number(b, kind, y)) return (x > y) - (x < y);
  }
  return a.compare(b);
}

}  // namespace

Lookups load_lookups(const fs::path& snapshot_dir) {
  Lookups l;
  l.tcodes = load_lookup(snapshot_dir / "tstct.csv", {"TCODE", "TTEXT"});
  l.doctypes = load_lookup(snapshot_dir / "doctypes.csv", {"CODE", "TEXT"});
  return l;
}

std::string row_key(const TableSchema& table, const Row& row, std::size_t ordinal) {
  if (table.primary_key.empty()) return "#" + std::to_string(ordinal);
  std::string key;
  bool first = true;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (!table.columns[i].is_key) continue;
    if (!first) key.push_back('|');
    first = false;
    key += row.value(i);
  }
  return key;
}

std::vector<RawObject> derive_objects(const Catalog& catalog, const std::string& table,
                                      const Row& row, const std::set<std::string>& object_blacklist) {
  const TableSchema& schema = catalog.table(table);
  std::vector<RawObject> out;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    const auto& c = schema.columns[i];
    const auto& v = row.value(i);
    if (v.empty() || object_blacklist.count(c.field)) continue;
    const auto kind = catalog.domain(c.domain).kind;
    if (is_temporal(kind) || kind == DomainKind::Numeric) continue;
    out.push_back(make_object({c.field, c.domain}, v));
  }
  return out;
}

std::optional<Timestamp> resolve_timestamp(const Catalog& catalog, const std::string& table,
                                           const Row& row,
                                           const std::vector<TimestampSource>& priority) {
  const TableSchema& schema = catalog.table(table);
  auto cell = [&](const std::string& field) -> const std::string* {
    auto idx = schema.index_of(field);
    return idx ? &row.value(*idx) : nullptr;
  };

  for (const auto& src : priority) {
    const std::string* date = cell(src.date_field);
    if (!date || date->empty()) continue;
    auto day = parse_date(*date);
    if (!day) continue;
    if (src.time_field.empty()) return Timestamp{*day};
    const std::string* time = cell(src.time_field);
    if (!time || time->empty()) continue;
    auto tod = parse_time_of_day(*time);
    if (!tod) continue;
    return Timestamp{*day} + *tod;
  }

  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    if (catalog.domain(schema.columns[i].domain).kind != DomainKind::TemporalDate) continue;
    if (auto day = parse_date(row.value(i))) return Timestamp{*day};
  }
  return std::nullopt;
}

std::map<std::string, std::string> event_attributes(const Catalog& catalog, const TableSchema& table,
                                                    const Row& row) {
  std::map<std::string, std::string> vmap;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    const auto& c = table.columns[i];
    const auto& v = row.value(i);
    if (v.empty()) continue;
    const auto kind = catalog.domain(c.domain).kind;
    if (c.is_key || is_temporal(kind) || kind == DomainKind::Numeric) vmap[c.field] = v;
  }
  return vmap;
}

bool change_predicate_holds(ChangePredicate predicate, const std::string& old_value,
                            const std::string& new_value, DomainKind kind) {
  switch (predicate) {
    case ChangePredicate::Increased:
      return !old_value.empty() && !new_value.empty() && compare_values(new_value, old_value, kind) > 0;
    case ChangePredicate::Decreased:
      return !old_value.empty() && !new_value.empty() && compare_values(new_value, old_value, kind) < 0;
    case ChangePredicate::Changed:
      return old_value != new_value;
    case ChangePredicate::Set:
      return old_value.empty() && !new_value.empty();
    case ChangePredicate::Cleared:
      return !old_value.empty() && new_value.empty();
  }
  return false;
}

TableExtraction extract_record_events(const Catalog& catalog, const std::string& table,
                                      const ExtractionPlan& plan) {
  const std::string activity = "Create document (" + table + ")";
  return extract_per_row(catalog, table, plan, [&](const Row&) { return activity; });
}

TableExtraction extract_transaction_events(const Catalog& catalog, const std::string& table,
                                           const ExtractionPlan& plan, const Lookup& tcode_lookup,
                                           const ClassificationRules& rules) {
  const TableSchema& schema = catalog.table(table);
  const ColumnDef* tc = tcode_column(schema, rules);
  if (!tc) {
    throw Error(ErrorCode::InvalidPlan, "transaction table " + table + " has no transaction code column");
  }
  const std::size_t idx = *schema.index_of(tc->field);
  return extract_per_row(catalog, table, plan, [&](const Row& row) {
    const auto& code = row.value(idx);
    return lookup_or(tcode_lookup, code);
  });
}

TableExtraction extract_flow_events(const Catalog& catalog, const std::string& table,
                                    const ExtractionPlan& plan, const Lookup& doctype_lookup,
                                    const ClassificationRules& rules) {
  const TableSchema& schema = catalog.table(table);
  const auto cols = flow_columns(catalog, schema, rules);
  if (!cols) throw Error(ErrorCode::InvalidPlan, "table " + table + " has no flow signature");
  const ColumnDef& cur = *schema.column(cols->current_doc);
  const ColumnDef& prev = *schema.column(cols->previous_doc);
  const std::size_t cur_i = *schema.index_of(cur.field);
  const std::size_t prev_i = *schema.index_of(prev.field);
  const std::size_t type_i = *schema.index_of(cols->current_type);

  TableExtraction out;
  out.table = table;
  ObjectCollector objects;
  std::size_t ordinal = 0;
  scan_table(catalog, table, filters_for(plan, schema), [&](const Row& row) {
    ++out.rows_scanned;
    ++ordinal;
    auto ts = resolve_timestamp(catalog, table, row, plan.timestamp_priority);
    if (!ts) {
      ++out.skipped_no_timestamp;
      return;
    }
    std::vector<RawObject> objs;
    if (!row.value(cur_i).empty()) objs.push_back(make_object({cur.field, cur.domain}, row.value(cur_i)));
    if (!row.value(prev_i).empty()) objs.push_back(make_object({prev.field, prev.domain}, row.value(prev_i)));

    RawEvent ev;
    ev.source_table = table;
    ev.source_row_key = row_key(schema, row, ordinal);
    ev.id = table + ":" + ev.source_row_key;
    ev.activity = lookup_or(doctype_lookup, row.value(type_i));
    ev.timestamp = *ts;
    ev.omap = ids_of(objs);
    ev.vmap = event_attributes(catalog, schema, row);
    for (const auto& o : objs) objects.add(o);
    out.events.push_back(std::move(ev));
  });
  out.objects = objects.take();
  return out;
}

TableExtraction extract_change_events(const Catalog& catalog, const std::string& header,
                                      const std::optional<std::string>& items,
                                      const ExtractionPlan& plan, const Lookup& tcode_lookup,
                                      const ClassificationRules& rules) {
  const TableSchema& hs = catalog.table(header);
  if (rules.change_header_fields.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "change_header_fields needs number, class and id fields");
  }
  const auto class_i = hs.index_of(rules.change_header_fields[1]);
  const auto objid_i = hs.index_of(rules.change_header_fields[2]);
  if (!class_i || !objid_i) {
    throw Error(ErrorCode::InvalidPlan, "change header " + header + " lacks object class/id columns");
  }
  const ColumnDef* tc = tcode_column(hs, rules);
  const auto tcode_i = tc ? hs.index_of(tc->field) : std::nullopt;

  TableExtraction out;
  out.table = header;
  ObjectCollector objects;

  auto changed_object = [&](const Row& h) -> std::optional<RawObject> {
    const auto& cls = h.value(*class_i);
    const auto& id = h.value(*objid_i);
    if (cls.empty() || id.empty()) return std::nullopt;
    return make_object({rules.change_header_fields[2], cls}, id);
  };

  auto make_event = [&](const std::string& table, const std::string& key, std::string activity,
                        Timestamp ts, const Row& h, std::map<std::string, std::string> vmap) {
    RawEvent ev;
    ev.source_table = table;
    ev.source_row_key = key;
    ev.id = table + ":" + key;
    ev.activity = std::move(activity);
    ev.timestamp = ts;
    if (auto o = changed_object(h)) {
      ev.omap.push_back(o->id);
      objects.add(*o);
    }
    ev.vmap = std::move(vmap);
    out.events.push_back(std::move(ev));
  };

  const bool per_header = plan.change_strategy == ChangeStrategy::Tcode || !items;
  if (per_header) {
    std::size_t ordinal = 0;
    scan_table(catalog, header, filters_for(plan, hs), [&](const Row& h) {
      ++out.rows_scanned;
      ++ordinal;
      auto ts = resolve_timestamp(catalog, header, h, plan.timestamp_priority);
      if (!ts) {
        ++out.skipped_no_timestamp;
        return;
      }
      std::string code = tcode_i ? h.value(*tcode_i) : std::string();
      std::string activity = code.empty() ? "Change document (" + header + ")" : lookup_or(tcode_lookup, code);
      make_event(header, row_key(hs, h, ordinal), std::move(activity), *ts, h,
                 event_attributes(catalog, hs, h));
    });
    out.objects = objects.take();
    return out;
  }

  const TableSchema& is = catalog.table(*items);
  std::vector<std::size_t> header_key_in_items;
  for (const auto& f : hs.primary_key) {
    auto idx = is.index_of(f);
    if (!idx) {
      throw Error(ErrorCode::InvalidPlan, "change items " + *items + " lack header key field " + f);
    }
    header_key_in_items.push_back(*idx);
  }
  const auto& item_fields = rules.change_item_fields;
  if (item_fields.size() < 4) {
    throw Error(ErrorCode::InvalidArgument, "change_item_fields needs table, field, old and new");
  }
  const auto tab_i = is.index_of(item_fields[0]);
  const auto fname_i = is.index_of(item_fields[1]);
  const auto old_i = is.index_of(item_fields[2]);
  const auto new_i = is.index_of(item_fields[3]);
  if (!tab_i || !fname_i || !old_i || !new_i) {
    throw Error(ErrorCode::InvalidPlan, "table " + *items + " is not a change item table");
  }

  struct HeaderEntry {
    Row row;
    std::optional<Timestamp> ts;
    std::map<std::string, std::string> vmap;
  };
  std::map<std::string, HeaderEntry> headers;
  std::size_t ordinal = 0;
  scan_table(catalog, header, filters_for(plan, hs), [&](const Row& h) {
    ++out.rows_scanned;
    ++ordinal;
    auto ts = resolve_timestamp(catalog, header, h, plan.timestamp_priority);
    headers.emplace(row_key(hs, h, ordinal), HeaderEntry{h, ts, event_attributes(catalog, hs, h)});
  });

  std::map<std::pair<std::string, std::string>, std::vector<const SemanticChangeRule*>> rules_by_field;
  if (plan.change_strategy == ChangeStrategy::Semantic) {
    for (const auto& r : plan.semantic_rules) rules_by_field[{r.table, r.field}].push_back(&r);
  }

  ordinal = 0;
  scan_table(catalog, *items, filters_for(plan, is), [&](const Row& item) {
    ++out.rows_scanned;
    ++ordinal;
    std::string hkey;
    for (std::size_t i = 0; i < header_key_in_items.size(); ++i) {
      if (i) hkey.push_back('|');
      hkey += item.value(header_key_in_items[i]);
    }
    auto hit = headers.find(hkey);
    if (hit == headers.end()) {
      ++out.orphan_items;
      return;
    }
    const HeaderEntry& h = hit->second;
    if (!h.ts) {
      ++out.skipped_no_timestamp;
      return;
    }

    const auto& tab = item.value(*tab_i);
    const auto& fname = item.value(*fname_i);
    std::string activity = "Changed " + fname;
    if (auto rit = rules_by_field.find({tab, fname}); rit != rules_by_field.end()) {
      DomainKind kind = DomainKind::Text;
      if (const auto* t = catalog.find_table(tab); t && t->has_field(fname)) {
        kind = catalog.domain(t->column(fname)->domain).kind;
      }
      for (const auto* r : rit->second) {
        if (change_predicate_holds(r->predicate, item.value(*old_i), item.value(*new_i), kind)) {
          activity = r->activity_name;
          break;
        }
      }
    }

    auto vmap = h.vmap;
    for (std::size_t i = 0; i < is.columns.size(); ++i) {
      if (is.columns[i].is_key && !item.value(i).empty()) vmap[is.columns[i].field] = item.value(i);
    }
    make_event(*items, row_key(is, item, ordinal), std::move(activity), *h.ts, h.row, std::move(vmap));
  });
  out.objects = objects.take();
  return out;
}

}  // namespace ocelforge
