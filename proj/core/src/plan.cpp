#include "ocelforge/plan.hpp"

#include <algorithm>
#include <map>

#include "ocelforge/error.hpp"

namespace ocelforge {

std::string_view to_string(ChangeStrategy s) noexcept {
  switch (s) {
    case ChangeStrategy::Tcode: return "tcode";
    case ChangeStrategy::Field: return "field";
    case ChangeStrategy::Semantic: return "semantic";
  }
  return "tcode";
}

std::optional<ChangeStrategy> parse_change_strategy(std::string_view s) noexcept {
  if (s == "tcode") return ChangeStrategy::Tcode;
  if (s == "field") return ChangeStrategy::Field;
  if (s == "semantic") return ChangeStrategy::Semantic;
  return std::nullopt;
}

std::string_view to_string(ChangePredicate p) noexcept {
  switch (p) {
    case ChangePredicate::Increased: return "increased";
    case ChangePredicate::Decreased: return "decreased";
    case ChangePredicate::Changed: return "changed";
    case ChangePredicate::Set: return "set";
    case ChangePredicate::Cleared: return "cleared";
  }
  return "changed";
}

std::optional<ChangePredicate> parse_change_predicate(std::string_view s) noexcept {
  if (s == "increased") return ChangePredicate::Increased;
  if (s == "decreased") return ChangePredicate::Decreased;
  if (s == "changed") return ChangePredicate::Changed;
  if (s == "set") return ChangePredicate::Set;
  if (s == "cleared") return ChangePredicate::Cleared;
  return std::nullopt;
}

std::vector<TimestampSource> default_timestamp_priority() {
  return {{"UDATE", "UTIME"}, {"CPUDT", "CPUTM"}, {"BUDAT", ""},
          {"BLDAT", ""},      {"AEDAT", ""},      {"ERDAT", ""}};
}

std::vector<KeyFieldUse> key_field_union(const Catalog& catalog, const GraphOfRelations& gor) {
  std::map<std::string, std::vector<std::string>> fields;
  for (const auto& node : gor.nodes) {
    for (const auto& f : catalog.table(node).primary_key) fields[f].push_back(node);
  }
  std::vector<KeyFieldUse> out;
  out.reserve(fields.size());
  for (auto& [field, tables] : fields) out.push_back({field, std::move(tables)});
  return out;
}

ExtractionPlan validate_plan(const ExtractionPlan& plan, const Catalog& catalog) {
  for (const auto& node : plan.gor.nodes) {
    if (!catalog.has_table(node)) throw Error(ErrorCode::UnknownTable, "unknown table " + node);
    if (!plan.categories.count(node)) {
      throw Error(ErrorCode::UncoveredTable, "table " + node + " has no category");
    }
  }
  if (!plan.gor.nodes.count(plan.gor.master)) {
    throw Error(ErrorCode::InvalidPlan, "master table " + plan.gor.master + " is not a GoR node");
  }

  std::set<std::string> key_fields;
  for (const auto& use : key_field_union(catalog, plan.gor)) key_fields.insert(use.field);
  for (const auto& f : plan.filters) {
    if (!key_fields.count(f.field)) {
      throw Error(ErrorCode::FilterFieldNotKey,
                  "filter field " + f.field + " is not a key field of any included table");
    }
    if (f.allowed_values.empty()) {
      throw Error(ErrorCode::EmptyFilterValues, "filter on " + f.field + " has no values");
    }
  }

  if (plan.change_strategy == ChangeStrategy::Semantic && plan.semantic_rules.empty()) {
    throw Error(ErrorCode::MissingSemanticRules, "semantic change strategy requires rules");
  }
  for (const auto& r : plan.semantic_rules) {
    if (r.activity_name.empty()) {
      throw Error(ErrorCode::InvalidPlan,
                  "semantic rule on " + r.table + "." + r.field + " has no activity name");
    }
  }
  for (const auto& ts : plan.timestamp_priority) {
    if (ts.date_field.empty()) throw Error(ErrorCode::InvalidPlan, "timestamp source without date field");
  }
  return plan;
}

std::vector<KeyFilter> filters_for(const ExtractionPlan& plan, const TableSchema& table) {
  std::vector<KeyFilter> out;
  for (const auto& f : plan.filters) {
    if (table.is_key_field(f.field)) out.push_back(f);
  }
  return out;
}

Classification classify_including_masters(const Catalog& catalog, GraphOfRelations& gor,
                                          const ClassificationRules& rules,
                                          const std::set<std::string>& blacklist) {
  auto cls = classify_all(catalog, gor, rules);
  // newly added masters can turn further tables into details
  for (std::size_t round = 0; round < catalog.tables().size(); ++round) {
    auto next = include_masters_of_details(gor, catalog, cls.categories, rules, blacklist);
    if (next.nodes == gor.nodes) break;
    gor = std::move(next);
    cls = classify_all(catalog, gor, rules);
  }
  return cls;
}

ExtractionPlan default_plan(const Catalog& catalog, const std::string& master,
                            const GorOptions& options, const ClassificationRules& rules,
                            const std::set<std::string>& add) {
  auto gor = build_gor(catalog, master, options);
  if (!add.empty()) gor = extend_gor(gor, catalog, add, options.blacklist);
  auto cls = classify_including_masters(catalog, gor, rules, options.blacklist);

  ExtractionPlan plan;
  plan.gor = std::move(gor);
  plan.categories = std::move(cls.categories);
  plan.detail_links = std::move(cls.links);
  return plan;
}

}  // namespace ocelforge
