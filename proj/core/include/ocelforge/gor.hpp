#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ocelforge/catalog.hpp"

namespace ocelforge {

struct TableCategory;
struct ClassificationRules;

// Undirected join between two tables; table_a < table_b.
struct GorEdge {
  std::string table_a;
  std::string table_b;
  std::string join_domain;                          // empty for manual edges
  std::pair<std::string, std::string> join_fields;  // (field in a, field in b)
  bool manual = false;

  bool operator==(const GorEdge&) const = default;
};

struct GraphOfRelations {
  std::string master;
  std::set<std::string> nodes;
  std::vector<GorEdge> edges;  // sorted by (table_a, table_b), one per pair
  std::map<std::string, int> distance;
  bool no_relations = false;  // master had no candidate edge at build time

  bool operator==(const GraphOfRelations&) const = default;
};

// Client and fiscal-year domains. Temporal and numeric domains never join
// because only code domains are considered at all.
std::set<std::string> default_domain_blacklist();

struct GorOptions {
  std::size_t row_threshold = 0;
  int max_distance = 3;
  std::set<std::string> blacklist = default_domain_blacklist();
};

// One edge per table pair sharing a non-blacklisted code domain that is a key
// domain on at least one side. Preference: a domain keyed on both sides, then
// the lexicographically first domain.
std::vector<GorEdge> edge_candidates(const Catalog& catalog, const std::set<std::string>& blacklist);

// Breadth-first expansion from `master` over candidate edges. A table joins
// only when its row count reaches the threshold and its hop distance stays
// within max_distance; the master itself is never filtered.
GraphOfRelations build_gor(const Catalog& catalog, const std::string& master,
                           const GorOptions& options = {});

// Adds tables (with all candidate edges among the enlarged node set). A table
// that still cannot reach the master gets a manual edge to it.
GraphOfRelations extend_gor(const GraphOfRelations& gor, const Catalog& catalog,
                            const std::set<std::string>& add,
                            const std::set<std::string>& blacklist = default_domain_blacklist());

// For every node categorized as detail (or as record without an override,
// since its owner may lie outside the graph), adds its owning master table(s)
// when absent. Idempotent.
GraphOfRelations include_masters_of_details(
    const GraphOfRelations& gor, const Catalog& catalog,
    const std::map<std::string, TableCategory>& categories, const ClassificationRules& rules,
    const std::set<std::string>& blacklist = default_domain_blacklist());

// Hop distances from `from` over `edges` restricted to `nodes`.
std::map<std::string, int> bfs_distances(const std::string& from, const std::set<std::string>& nodes,
                                         const std::vector<GorEdge>& edges);

}  // namespace ocelforge
