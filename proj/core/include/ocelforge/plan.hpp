#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocelforge/catalog.hpp"
#include "ocelforge/classifier.hpp"
#include "ocelforge/gor.hpp"

namespace ocelforge {

enum class ChangeStrategy { Tcode, Field, Semantic };

enum class ChangePredicate { Increased, Decreased, Changed, Set, Cleared };

std::string_view to_string(ChangeStrategy s) noexcept;
std::optional<ChangeStrategy> parse_change_strategy(std::string_view s) noexcept;
std::string_view to_string(ChangePredicate p) noexcept;
std::optional<ChangePredicate> parse_change_predicate(std::string_view s) noexcept;

// Names an activity after comparing old and new values of one field, e.g.
// (EKET, EINDT, increased) -> "Postpone Delivery".
struct SemanticChangeRule {
  std::string table;
  std::string field;
  ChangePredicate predicate = ChangePredicate::Changed;
  std::string activity_name;

  bool operator==(const SemanticChangeRule&) const = default;
};

// A date column, optionally paired with a time-of-day column.
struct TimestampSource {
  std::string date_field;
  std::string time_field;

  bool operator==(const TimestampSource&) const = default;
};

std::vector<TimestampSource> default_timestamp_priority();

struct ExtractionPlan {
  GraphOfRelations gor;
  std::map<std::string, TableCategory> categories;
  std::vector<DetailLink> detail_links;
  std::vector<KeyFilter> filters;
  ChangeStrategy change_strategy = ChangeStrategy::Tcode;
  std::vector<SemanticChangeRule> semantic_rules;
  std::vector<TimestampSource> timestamp_priority = default_timestamp_priority();
  std::set<std::string> object_blacklist{"MANDT"};
  bool transitive_links = false;

  bool operator==(const ExtractionPlan&) const = default;
};

struct KeyFieldUse {
  std::string field;
  std::vector<std::string> tables;

  bool operator==(const KeyFieldUse&) const = default;
};

// Every primary-key field of the GoR's tables, sorted by name, with the tables
// carrying it.
std::vector<KeyFieldUse> key_field_union(const Catalog& catalog, const GraphOfRelations& gor);

// Returns the plan unchanged when every invariant holds; throws otherwise.
ExtractionPlan validate_plan(const ExtractionPlan& plan, const Catalog& catalog);

// Filters that apply to `table`: those whose field is part of its key.
std::vector<KeyFilter> filters_for(const ExtractionPlan& plan, const TableSchema& table);

// Classifies `gor`, adding the owning masters of detail tables until the node
// set is stable; `gor` is updated in place.
Classification classify_including_masters(const Catalog& catalog, GraphOfRelations& gor,
                                          const ClassificationRules& rules = {},
                                          const std::set<std::string>& blacklist = default_domain_blacklist());

// GoR + classification + automatic inclusion of detail masters, the
// non-interactive equivalent of walking the wizard with default answers.
ExtractionPlan default_plan(const Catalog& catalog, const std::string& master,
                            const GorOptions& options = {}, const ClassificationRules& rules = {},
                            const std::set<std::string>& add = {});

}  // namespace ocelforge
