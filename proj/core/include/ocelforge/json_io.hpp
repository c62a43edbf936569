#pragma once

// JSON documents exchanged by the CLI and the service: GoR, classification,
// plan, rule file, run report, flattening stats.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocelforge/catalog.hpp"
#include "ocelforge/classifier.hpp"
#include "ocelforge/gor.hpp"
#include "ocelforge/ocel.hpp"
#include "ocelforge/pipeline.hpp"
#include "ocelforge/plan.hpp"

namespace ocelforge {

using json = nlohmann::json;

// Row counts come from `catalog` when given; categories are added when given.
json gor_to_json(const GraphOfRelations& gor, const Catalog* catalog = nullptr,
                 const std::map<std::string, TableCategory>* categories = nullptr);
GraphOfRelations gor_from_json(const json& doc);

json categories_to_json(const std::map<std::string, TableCategory>& categories);
std::map<std::string, TableCategory> categories_from_json(const json& doc);
json links_to_json(const std::vector<DetailLink>& links);
std::vector<DetailLink> links_from_json(const json& doc);
json classification_to_json(const Classification& cls);

json key_fields_to_json(const std::vector<KeyFieldUse>& fields);

ClassificationRules rules_from_json(const json& doc);
json rules_to_json(const ClassificationRules& rules);
ClassificationRules load_rules_file(const std::filesystem::path& path);

json plan_to_json(const ExtractionPlan& plan);
// A plan document may omit "gor" when it names a "master" (with optional
// "row_threshold", "max_distance", "include"); the GoR and categories are
// then derived as in default_plan. Missing "categories" are classified.
ExtractionPlan plan_from_json(const json& doc, const Catalog& catalog,
                              const ClassificationRules& rules = {});
ExtractionPlan load_plan_file(const std::filesystem::path& path, const Catalog& catalog,
                              const ClassificationRules& rules = {});

json diagnostics_to_json(const RunDiagnostics& diag);

json flatten_stats_to_json(const FlatLog& flat, const ConvergenceStats& conv,
                           const DivergenceStats& div);

json read_json_file(const std::filesystem::path& path);

}  // namespace ocelforge
