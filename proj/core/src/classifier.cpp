#include "ocelforge/classifier.hpp"

#include <algorithm>

#include "ocelforge/error.hpp"

namespace ocelforge {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

using KeyPairs = std::set<std::pair<std::string, std::string>>;

KeyPairs key_pairs(const TableSchema& t) {
  KeyPairs out;
  for (const auto& c : t.columns) {
    if (c.is_key) out.emplace(c.field, c.domain);
  }
  return out;
}

// code domain -> columns (position order)
std::map<std::string, std::vector<const ColumnDef*>> code_columns(const Catalog& catalog,
                                                                  const TableSchema& t) {
  std::map<std::string, std::vector<const ColumnDef*>> out;
  for (const auto& c : t.columns) {
    if (catalog.domain(c.domain).kind == DomainKind::Code) out[c.domain].push_back(&c);
  }
  return out;
}

bool is_doc_type_domain(std::string_view domain, const ClassificationRules& rules) {
  return std::any_of(rules.doc_type_domain_suffixes.begin(), rules.doc_type_domain_suffixes.end(),
                     [&](const std::string& s) { return !s.empty() && ends_with(domain, s); });
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::Flow: return "flow";
    case Category::Transaction: return "transaction";
    case Category::Change: return "change";
    case Category::Record: return "record";
    case Category::Detail: return "detail";
  }
  return "record";
}

std::optional<Category> parse_category(std::string_view s) noexcept {
  if (s == "flow") return Category::Flow;
  if (s == "transaction") return Category::Transaction;
  if (s == "change") return Category::Change;
  if (s == "record") return Category::Record;
  if (s == "detail") return Category::Detail;
  return std::nullopt;
}

const ColumnDef* tcode_column(const TableSchema& table, const ClassificationRules& rules) {
  for (const auto& c : table.columns) {
    if (rules.tcode_domains.count(c.domain)) return &c;
  }
  return nullptr;
}

ChangeRole change_role(const TableSchema& table, const ClassificationRules& rules) {
  if (rules.change_header_fields.empty()) return ChangeRole::None;
  if (!table.is_key_field(rules.change_header_fields[0])) return ChangeRole::None;
  const bool item = !rules.change_item_fields.empty() &&
                    std::all_of(rules.change_item_fields.begin(), rules.change_item_fields.end(),
                                [&](const std::string& f) { return table.has_field(f); });
  if (item) return ChangeRole::Item;
  if (rules.change_header_fields.size() > 1 && table.has_field(rules.change_header_fields[1])) {
    return ChangeRole::Header;
  }
  return ChangeRole::None;
}

std::optional<FlowColumns> flow_columns(const Catalog& catalog, const TableSchema& table,
                                        const ClassificationRules& rules) {
  const auto by_domain = code_columns(catalog, table);

  const std::vector<const ColumnDef*>* types = nullptr;
  for (const auto& [domain, cols] : by_domain) {
    if (cols.size() >= 2 && is_doc_type_domain(domain, rules)) {
      types = &cols;
      break;
    }
  }
  if (!types) return std::nullopt;

  const std::vector<const ColumnDef*>* docs = nullptr;
  std::string doc_domain;
  for (const auto& [domain, cols] : by_domain) {
    if (cols.size() < 2 || is_doc_type_domain(domain, rules) ||
        rules.ignored_key_domains.count(domain)) {
      continue;
    }
    const bool named = std::any_of(cols.begin(), cols.end(),
                                   [&](const ColumnDef* c) { return c->field == domain; });
    if (named || !docs) {
      docs = &cols;
      doc_domain = domain;
      if (named) break;
    }
  }
  if (!docs) return std::nullopt;

  FlowColumns out;
  // document numbers: the column named like its domain is current
  const ColumnDef* cur = nullptr;
  for (const auto* c : *docs) {
    if (c->field == doc_domain) cur = c;
  }
  if (!cur) cur = (*docs)[1];
  for (const auto* c : *docs) {
    if (c != cur) {
      out.previous_doc = c->field;
      break;
    }
  }
  out.current_doc = cur->field;

  // document types: _N (nachfolger) is current, _V (vorgaenger) is previous
  const ColumnDef* cur_t = nullptr;
  const ColumnDef* prev_t = nullptr;
  for (const auto* c : *types) {
    if (!cur_t && ends_with(c->field, "_N")) cur_t = c;
    if (!prev_t && ends_with(c->field, "_V")) prev_t = c;
  }
  if (!cur_t || !prev_t || cur_t == prev_t) {
    prev_t = (*types)[0];
    cur_t = (*types)[1];
  }
  out.current_type = cur_t->field;
  out.previous_type = prev_t->field;
  return out;
}

std::optional<DetailLink> detail_link(const Catalog& catalog, const std::string& detail,
                                      const std::string& master, const ClassificationRules& rules) {
  if (detail == master) return std::nullopt;
  const auto& d = catalog.table(detail);
  const auto& m = catalog.table(master);
  const auto dk = key_pairs(d);
  const auto mk = key_pairs(m);
  if (mk.empty() || mk.size() >= dk.size()) return std::nullopt;
  if (!std::includes(dk.begin(), dk.end(), mk.begin(), mk.end())) return std::nullopt;
  const bool meaningful = std::any_of(mk.begin(), mk.end(), [&](const auto& p) {
    return !rules.ignored_key_domains.count(p.second);
  });
  if (!meaningful) return std::nullopt;
  return DetailLink{detail, master, m.primary_key};
}

std::vector<std::string> owning_masters(const Catalog& catalog, const std::string& table,
                                        const ClassificationRules& rules) {
  std::vector<std::string> parents;
  for (const auto& [name, t] : catalog.tables()) {
    if (detail_link(catalog, table, name, rules)) parents.push_back(name);
  }
  std::vector<std::string> roots;
  for (const auto& p : parents) {
    bool has_parent = std::any_of(catalog.tables().begin(), catalog.tables().end(),
                                  [&](const auto& kv) {
                                    return detail_link(catalog, p, kv.first, rules).has_value();
                                  });
    if (!has_parent) roots.push_back(p);
  }
  return roots;
}

TableCategory classify_table(const Catalog& catalog, const std::string& table,
                             const std::set<std::string>& candidate_masters,
                             const ClassificationRules& rules) {
  const TableSchema& t = catalog.table(table);

  if (auto it = rules.overrides.find(table); it != rules.overrides.end()) {
    return {it->second, {"user override"}};
  }

  if (auto flow = flow_columns(catalog, t, rules)) {
    return {Category::Flow,
            {"document pair " + flow->current_doc + "/" + flow->previous_doc,
             "document type pair " + flow->current_type + "/" + flow->previous_type}};
  }

  switch (change_role(t, rules)) {
    case ChangeRole::Header:
      return {Category::Change, {"change header: key " + rules.change_header_fields[0] + " with " +
                                 rules.change_header_fields[1]}};
    case ChangeRole::Item:
      return {Category::Change, {"change item: key " + rules.change_header_fields[0] + " with " +
                                 join(rules.change_item_fields, "/")}};
    case ChangeRole::None:
      break;
  }

  if (const auto* tc = tcode_column(t, rules)) {
    auto temporal = std::find_if(t.columns.begin(), t.columns.end(), [&](const ColumnDef& c) {
      return is_temporal(catalog.domain(c.domain).kind);
    });
    if (temporal != t.columns.end()) {
      return {Category::Transaction,
              {"transaction code column " + tc->field, "temporal column " + temporal->field}};
    }
  }

  TableCategory detail{Category::Detail, {}};
  for (const auto& m : candidate_masters) {
    if (auto link = detail_link(catalog, table, m, rules)) {
      detail.evidence.push_back("key contains key of " + m + " (" + join(link->shared_key_fields, ",") + ")");
    }
  }
  if (!detail.evidence.empty()) return detail;

  for (const auto& c : t.columns) {
    if (c.is_key && !rules.ignored_key_domains.count(c.domain) &&
        catalog.domain(c.domain).kind == DomainKind::Code) {
      return {Category::Record, {"key identifies a document (" + join(t.primary_key, ",") + ")"}};
    }
  }
  return {Category::Record, {}};
}

Classification classify_all(const Catalog& catalog, const GraphOfRelations& gor,
                            const ClassificationRules& rules) {
  std::set<std::string> masters;
  for (const auto& node : gor.nodes) {
    if (classify_table(catalog, node, {}, rules).value != Category::Detail) masters.insert(node);
  }

  Classification out;
  for (const auto& node : gor.nodes) {
    std::set<std::string> others = masters;
    others.erase(node);
    auto cat = classify_table(catalog, node, others, rules);
    if (cat.value == Category::Detail) {
      for (const auto& m : others) {
        if (auto link = detail_link(catalog, node, m, rules)) out.links.push_back(std::move(*link));
      }
    }
    out.categories.emplace(node, std::move(cat));
  }
  return out;
}

}  // namespace ocelforge
