#include "ocelforge/json_io.hpp"

#include <fstream>
#include <sstream>

#include "ocelforge/error.hpp"

namespace fs = std::filesystem;

namespace ocelforge {

namespace {

[[noreturn]] void bad_plan(const std::string& what) { throw Error(ErrorCode::InvalidPlan, what); }

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    bad_plan(std::string("field ") + key + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  return get_or<std::vector<std::string>>(doc, key, {});
}

Category category_of(const json& v) {
  const std::string text = v.is_object() ? v.at("category").get<std::string>() : v.get<std::string>();
  auto c = parse_category(text);
  if (!c) bad_plan("unknown category " + text);
  return *c;
}

}  // namespace

json gor_to_json(const GraphOfRelations& gor, const Catalog* catalog,
                 const std::map<std::string, TableCategory>* categories) {
  json nodes = json::array();
  for (const auto& n : gor.nodes) {
    json node = {{"name", n}, {"distance", gor.distance.count(n) ? gor.distance.at(n) : -1}};
    if (catalog) {
      const auto* t = catalog->find_table(n);
      node["row_count"] = t ? t->row_count : 0;
    }
    if (categories) {
      if (auto it = categories->find(n); it != categories->end()) {
        node["category"] = std::string(to_string(it->second.value));
      }
    }
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const auto& e : gor.edges) {
    edges.push_back({{"a", e.table_a},
                     {"b", e.table_b},
                     {"join_domain", e.join_domain},
                     {"join_fields", {e.join_fields.first, e.join_fields.second}},
                     {"manual", e.manual}});
  }
  return {{"master", gor.master}, {"nodes", nodes}, {"edges", edges}, {"no_relations", gor.no_relations}};
}

GraphOfRelations gor_from_json(const json& doc) {
  try {
    GraphOfRelations gor;
    gor.master = doc.at("master").get<std::string>();
    for (const auto& n : doc.at("nodes")) {
      const auto name = n.is_string() ? n.get<std::string>() : n.at("name").get<std::string>();
      gor.nodes.insert(name);
    }
    for (const auto& e : doc.at("edges")) {
      GorEdge edge;
      edge.table_a = e.at("a").get<std::string>();
      edge.table_b = e.at("b").get<std::string>();
      if (edge.table_b < edge.table_a) std::swap(edge.table_a, edge.table_b);
      edge.join_domain = get_or<std::string>(e, "join_domain", "");
      if (auto jf = e.find("join_fields"); jf != e.end() && jf->size() == 2) {
        edge.join_fields = {(*jf)[0].get<std::string>(), (*jf)[1].get<std::string>()};
      }
      edge.manual = get_or<bool>(e, "manual", false);
      gor.edges.push_back(std::move(edge));
    }
    std::sort(gor.edges.begin(), gor.edges.end(), [](const GorEdge& x, const GorEdge& y) {
      return std::tie(x.table_a, x.table_b) < std::tie(y.table_a, y.table_b);
    });
    gor.no_relations = get_or<bool>(doc, "no_relations", false);
    gor.distance = bfs_distances(gor.master, gor.nodes, gor.edges);
    if (gor.distance.size() != gor.nodes.size()) bad_plan("GoR document is not connected");
    return gor;
  } catch (const json::exception& e) {
    bad_plan(std::string("malformed GoR document: ") + e.what());
  }
}

json categories_to_json(const std::map<std::string, TableCategory>& categories) {
  json out = json::object();
  for (const auto& [t, c] : categories) {
    out[t] = {{"category", std::string(to_string(c.value))}, {"evidence", c.evidence}};
  }
  return out;
}

std::map<std::string, TableCategory> categories_from_json(const json& doc) {
  std::map<std::string, TableCategory> out;
  for (const auto& [t, v] : doc.items()) {
    TableCategory c;
    c.value = category_of(v);
    if (v.is_object()) c.evidence = string_list(v, "evidence");
    out[t] = std::move(c);
  }
  return out;
}

json links_to_json(const std::vector<DetailLink>& links) {
  json out = json::array();
  for (const auto& l : links) {
    out.push_back({{"detail", l.detail_table}, {"master", l.master_table}, {"shared_key_fields", l.shared_key_fields}});
  }
  return out;
}

std::vector<DetailLink> links_from_json(const json& doc) {
  std::vector<DetailLink> out;
  for (const auto& l : doc) {
    out.push_back({l.at("detail").get<std::string>(), l.at("master").get<std::string>(),
                   string_list(l, "shared_key_fields")});
  }
  return out;
}

json classification_to_json(const Classification& cls) {
  return {{"categories", categories_to_json(cls.categories)}, {"detail_links", links_to_json(cls.links)}};
}

json key_fields_to_json(const std::vector<KeyFieldUse>& fields) {
  json out = json::array();
  for (const auto& f : fields) out.push_back({{"field", f.field}, {"tables", f.tables}});
  return out;
}

ClassificationRules rules_from_json(const json& doc) {
  ClassificationRules r;
  if (!doc.is_object()) bad_plan("rule file must be an object");
  if (doc.contains("tcode_domains")) {
    auto v = string_list(doc, "tcode_domains");
    r.tcode_domains = {v.begin(), v.end()};
  }
  if (doc.contains("change_header_fields")) r.change_header_fields = string_list(doc, "change_header_fields");
  if (doc.contains("change_item_fields")) r.change_item_fields = string_list(doc, "change_item_fields");
  if (doc.contains("doc_type_domain_suffixes")) {
    r.doc_type_domain_suffixes = string_list(doc, "doc_type_domain_suffixes");
  }
  if (doc.contains("ignored_key_domains")) {
    auto v = string_list(doc, "ignored_key_domains");
    r.ignored_key_domains = {v.begin(), v.end()};
  }
  if (auto it = doc.find("overrides"); it != doc.end()) {
    for (const auto& [t, v] : it->items()) r.overrides[t] = category_of(v);
  }
  if (r.change_header_fields.size() != 3) bad_plan("change_header_fields needs 3 entries");
  if (r.change_item_fields.size() != 4) bad_plan("change_item_fields needs 4 entries");
  return r;
}

json rules_to_json(const ClassificationRules& r) {
  json overrides = json::object();
  for (const auto& [t, c] : r.overrides) overrides[t] = std::string(to_string(c));
  return {{"tcode_domains", r.tcode_domains},
          {"change_header_fields", r.change_header_fields},
          {"change_item_fields", r.change_item_fields},
          {"doc_type_domain_suffixes", r.doc_type_domain_suffixes},
          {"ignored_key_domains", r.ignored_key_domains},
          {"overrides", overrides}};
}

ClassificationRules load_rules_file(const fs::path& path) { return rules_from_json(read_json_file(path)); }

json plan_to_json(const ExtractionPlan& plan) {
  json filters = json::array();
  for (const auto& f : plan.filters) filters.push_back({{"field", f.field}, {"values", f.allowed_values}});
  json rules = json::array();
  for (const auto& r : plan.semantic_rules) {
    rules.push_back({{"table", r.table},
                     {"field", r.field},
                     {"predicate", std::string(to_string(r.predicate))},
                     {"activity", r.activity_name}});
  }
  json ts = json::array();
  for (const auto& t : plan.timestamp_priority) {
    if (t.time_field.empty()) {
      ts.push_back(t.date_field);
    } else {
      ts.push_back({t.date_field, t.time_field});
    }
  }
  return {{"gor", gor_to_json(plan.gor)},
          {"categories", categories_to_json(plan.categories)},
          {"detail_links", links_to_json(plan.detail_links)},
          {"filters", filters},
          {"change_strategy", std::string(to_string(plan.change_strategy))},
          {"semantic_rules", rules},
          {"timestamp_priority", ts},
          {"object_blacklist", plan.object_blacklist},
          {"transitive_links", plan.transitive_links}};
}

ExtractionPlan plan_from_json(const json& doc, const Catalog& catalog, const ClassificationRules& rules) {
  if (!doc.is_object()) bad_plan("plan must be a JSON object");
  ExtractionPlan plan;
  try {
    if (auto g = doc.find("gor"); g != doc.end() && !g->is_null()) {
      plan.gor = gor_from_json(*g);
      if (auto c = doc.find("categories"); c != doc.end() && !c->is_null()) {
        plan.categories = categories_from_json(*c);
        plan.detail_links = links_from_json(doc.value("detail_links", json::array()));
      } else {
        auto cls = classify_all(catalog, plan.gor, rules);
        plan.categories = std::move(cls.categories);
        plan.detail_links = std::move(cls.links);
      }
    } else if (doc.contains("master")) {
      GorOptions opt;
      opt.row_threshold = get_or<std::size_t>(doc, "row_threshold", 0);
      opt.max_distance = get_or<int>(doc, "max_distance", 3);
      auto include = string_list(doc, "include");
      plan = default_plan(catalog, doc.at("master").get<std::string>(), opt, rules,
                          {include.begin(), include.end()});
    } else {
      bad_plan("plan needs either \"gor\" or \"master\"");
    }

    for (const auto& f : doc.value("filters", json::array())) {
      KeyFilter kf;
      kf.field = f.at("field").get<std::string>();
      for (const auto& v : f.at("values")) kf.allowed_values.insert(v.is_string() ? v.get<std::string>() : v.dump());
      plan.filters.push_back(std::move(kf));
    }
    if (doc.contains("change_strategy")) {
      const auto s = doc.at("change_strategy").get<std::string>();
      auto cs = parse_change_strategy(s);
      if (!cs) bad_plan("unknown change_strategy " + s);
      plan.change_strategy = *cs;
    }
    for (const auto& r : doc.value("semantic_rules", json::array())) {
      SemanticChangeRule rule;
      rule.table = r.at("table").get<std::string>();
      rule.field = r.at("field").get<std::string>();
      const auto p = r.at("predicate").get<std::string>();
      auto pred = parse_change_predicate(p);
      if (!pred) bad_plan("unknown predicate " + p);
      rule.predicate = *pred;
      rule.activity_name = r.value("activity", std::string());
      plan.semantic_rules.push_back(std::move(rule));
    }
    if (auto it = doc.find("timestamp_priority"); it != doc.end()) {
      plan.timestamp_priority.clear();
      for (const auto& t : *it) {
        if (t.is_string()) {
          plan.timestamp_priority.push_back({t.get<std::string>(), ""});
        } else if (t.is_array() && t.size() == 2) {
          plan.timestamp_priority.push_back({t[0].get<std::string>(), t[1].get<std::string>()});
        } else {
          bad_plan("timestamp_priority entries are a field or a [date, time] pair");
        }
      }
    }
    if (doc.contains("object_blacklist")) {
      auto v = string_list(doc, "object_blacklist");
      plan.object_blacklist = {v.begin(), v.end()};
    }
    plan.transitive_links = get_or<bool>(doc, "transitive_links", false);
  } catch (const json::exception& e) {
    bad_plan(std::string("malformed plan: ") + e.what());
  }
  return plan;
}

ExtractionPlan load_plan_file(const fs::path& path, const Catalog& catalog, const ClassificationRules& rules) {
  return plan_from_json(read_json_file(path), catalog, rules);
}

json diagnostics_to_json(const RunDiagnostics& d) {
  json tables = json::object();
  for (const auto& [name, t] : d.tables) {
    tables[name] = {{"category", t.category},
                    {"rows_scanned", t.rows_scanned},
                    {"events", t.events},
                    {"links", t.links},
                    {"skipped_no_timestamp", t.skipped_no_timestamp},
                    {"orphan_items", t.orphan_items}};
  }
  return {{"rows_scanned", d.rows_scanned},
          {"events", d.events},
          {"objects", d.objects},
          {"links_harvested", d.links_harvested},
          {"events_enriched", d.events_enriched},
          {"skipped_no_timestamp", d.skipped_no_timestamp},
          {"orphan_items", d.orphan_items},
          {"tables", tables},
          {"warnings", d.warnings}};
}

json flatten_stats_to_json(const FlatLog& flat, const ConvergenceStats& conv, const DivergenceStats& div) {
  return {{"case_type", flat.case_type},
          {"cases", flat.cases.size()},
          {"entries", flat.entry_count()},
          {"dropped_events", flat.dropped_events},
          {"convergence",
           {{"duplicated_events", conv.duplicated_events},
            {"duplication_factor", conv.duplication_factor},
            {"events_with_case", conv.events_with_case}}},
          {"divergence", {{"diverging_pairs", div.diverging_pairs}, {"affected_cases", div.affected_cases}}}};
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidPlan, path.string() + ": " + e.what());
  }
}

}  // namespace ocelforge
