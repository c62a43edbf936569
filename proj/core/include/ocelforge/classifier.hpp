#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocelforge/catalog.hpp"
#include "ocelforge/gor.hpp"

namespace ocelforge {

enum class Category { Flow, Transaction, Change, Record, Detail };

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view s) noexcept;

struct TableCategory {
  Category value = Category::Record;
  std::vector<std::string> evidence;

  bool operator==(const TableCategory&) const = default;
};

struct DetailLink {
  std::string detail_table;
  std::string master_table;
  std::vector<std::string> shared_key_fields;  // the master's primary key

  bool operator==(const DetailLink&) const = default;
};

// Schema signatures for the five table classes. Defaults follow SAP naming.
struct ClassificationRules {
  std::set<std::string> tcode_domains{"TCODE"};
  // change number, object class, object id
  std::vector<std::string> change_header_fields{"CHANGENR", "OBJECTCLAS", "OBJECTID"};
  // table name, field name, old value, new value
  std::vector<std::string> change_item_fields{"TABNAME", "FNAME", "VALUE_OLD", "VALUE_NEW"};
  std::vector<std::string> doc_type_domain_suffixes{"VBTYP"};
  // A master key made only of these domains (the client) never owns a detail.
  std::set<std::string> ignored_key_domains{"MANDT"};
  std::map<std::string, Category> overrides;

  bool operator==(const ClassificationRules&) const = default;
};

// Precedence: override > flow > change > transaction > detail > record.
TableCategory classify_table(const Catalog& catalog, const std::string& table,
                             const std::set<std::string>& candidate_masters,
                             const ClassificationRules& rules = {});

struct Classification {
  std::map<std::string, TableCategory> categories;
  std::vector<DetailLink> links;  // sorted by (detail, master)
};

Classification classify_all(const Catalog& catalog, const GraphOfRelations& gor,
                            const ClassificationRules& rules = {});

// Set when the master's (field, domain) key pairs are a strict subset of the
// detail's and include at least one non-ignored domain.
std::optional<DetailLink> detail_link(const Catalog& catalog, const std::string& detail,
                                      const std::string& master, const ClassificationRules& rules);

// Key-containment parents of `table` in the whole catalog that have no parent
// themselves (EKKO for EKET, not EKPO).
std::vector<std::string> owning_masters(const Catalog& catalog, const std::string& table,
                                        const ClassificationRules& rules);

struct FlowColumns {
  std::string current_doc;
  std::string previous_doc;
  std::string current_type;
  std::string previous_type;
};

std::optional<FlowColumns> flow_columns(const Catalog& catalog, const TableSchema& table,
                                        const ClassificationRules& rules);

enum class ChangeRole { None, Header, Item };

ChangeRole change_role(const TableSchema& table, const ClassificationRules& rules);

// First column whose domain is a transaction-code domain, or null.
const ColumnDef* tcode_column(const TableSchema& table, const ClassificationRules& rules);

}  // namespace ocelforge
