#include "ocelforge/gor.hpp"

#include <algorithm>
#include <deque>

#include "ocelforge/classifier.hpp"
#include "ocelforge/error.hpp"

namespace ocelforge {

namespace {

struct DomainUse {
  std::vector<const ColumnDef*> columns;  // position order
  bool keyed = false;
};

using DomainIndex = std::map<std::string, DomainUse>;

DomainIndex index_code_domains(const Catalog& catalog, const TableSchema& t,
                               const std::set<std::string>& blacklist) {
  DomainIndex idx;
  for (const auto& c : t.columns) {
    if (blacklist.count(c.domain)) continue;
    if (catalog.domain(c.domain).kind != DomainKind::Code) continue;
    auto& use = idx[c.domain];
    use.columns.push_back(&c);
    use.keyed = use.keyed || c.is_key;
  }
  return idx;
}

// Key column first, then lowest position.
const ColumnDef* join_column(const DomainUse& use) {
  for (const auto* c : use.columns) {
    if (c->is_key) return c;
  }
  return use.columns.front();
}

std::vector<GorEdge> sorted_edges(std::vector<GorEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const GorEdge& x, const GorEdge& y) {
    return std::tie(x.table_a, x.table_b) < std::tie(y.table_a, y.table_b);
  });
  return edges;
}

}  // namespace

std::set<std::string> default_domain_blacklist() { return {"MANDT", "GJAHR"}; }

std::vector<GorEdge> edge_candidates(const Catalog& catalog, const std::set<std::string>& blacklist) {
  std::vector<std::pair<const TableSchema*, DomainIndex>> tables;
  for (const auto& [name, t] : catalog.tables()) {
    tables.emplace_back(&t, index_code_domains(catalog, t, blacklist));
  }

  std::vector<GorEdge> edges;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      const auto& [ta, da] = tables[i];
      const auto& [tb, db] = tables[j];
      const std::string* both_keyed = nullptr;
      const std::string* first = nullptr;
      // both maps are sorted, so the first hit of each kind is lexicographically first
      for (const auto& [domain, use_a] : da) {
        auto it = db.find(domain);
        if (it == db.end()) continue;
        if (!use_a.keyed && !it->second.keyed) continue;
        if (!first) first = &domain;
        if (use_a.keyed && it->second.keyed) {
          both_keyed = &domain;
          break;
        }
      }
      const std::string* chosen = both_keyed ? both_keyed : first;
      if (!chosen) continue;
      GorEdge e;
      e.table_a = ta->name;
      e.table_b = tb->name;
      e.join_domain = *chosen;
      e.join_fields = {join_column(da.at(*chosen))->field, join_column(db.at(*chosen))->field};
      edges.push_back(std::move(e));
    }
  }
  return sorted_edges(std::move(edges));
}

std::map<std::string, int> bfs_distances(const std::string& from, const std::set<std::string>& nodes,
                                         const std::vector<GorEdge>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : edges) {
    if (!nodes.count(e.table_a) || !nodes.count(e.table_b)) continue;
    adj[e.table_a].push_back(e.table_b);
    adj[e.table_b].push_back(e.table_a);
  }
  std::map<std::string, int> dist;
  if (!nodes.count(from)) return dist;
  dist[from] = 0;
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& nb : adj[cur]) {
      if (dist.count(nb)) continue;
      dist[nb] = dist[cur] + 1;
      queue.push_back(nb);
    }
  }
  return dist;
}

GraphOfRelations build_gor(const Catalog& catalog, const std::string& master,
                           const GorOptions& options) {
  if (!catalog.has_table(master)) {
    throw Error(ErrorCode::UnknownMasterTable, "unknown master table " + master);
  }
  if (options.max_distance < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_distance must be positive");
  }
  const auto candidates = edge_candidates(catalog, options.blacklist);

  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : candidates) {
    adj[e.table_a].push_back(e.table_b);
    adj[e.table_b].push_back(e.table_a);
  }

  GraphOfRelations gor;
  gor.master = master;
  gor.no_relations = adj[master].empty();
  gor.nodes.insert(master);
  gor.distance[master] = 0;

  std::deque<std::string> queue{master};
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    const int d = gor.distance[cur] + 1;
    if (d > options.max_distance) continue;
    for (const auto& nb : adj[cur]) {
      if (gor.nodes.count(nb)) continue;
      if (catalog.table(nb).row_count < options.row_threshold) continue;
      gor.nodes.insert(nb);
      gor.distance[nb] = d;
      queue.push_back(nb);
    }
  }

  for (const auto& e : candidates) {
    if (gor.nodes.count(e.table_a) && gor.nodes.count(e.table_b)) gor.edges.push_back(e);
  }
  return gor;
}

GraphOfRelations extend_gor(const GraphOfRelations& gor, const Catalog& catalog,
                            const std::set<std::string>& add,
                            const std::set<std::string>& blacklist) {
  for (const auto& t : add) {
    if (!catalog.has_table(t)) throw Error(ErrorCode::UnknownTable, "unknown table " + t);
  }
  GraphOfRelations out;
  out.master = gor.master;
  out.no_relations = gor.no_relations;
  out.nodes = gor.nodes;
  out.nodes.insert(add.begin(), add.end());

  for (const auto& e : edge_candidates(catalog, blacklist)) {
    if (out.nodes.count(e.table_a) && out.nodes.count(e.table_b)) out.edges.push_back(e);
  }
  // keep manual edges from earlier extensions unless a real join now exists
  for (const auto& e : gor.edges) {
    if (!e.manual) continue;
    bool covered = std::any_of(out.edges.begin(), out.edges.end(), [&](const GorEdge& x) {
      return x.table_a == e.table_a && x.table_b == e.table_b;
    });
    if (!covered) out.edges.push_back(e);
  }

  out.distance = bfs_distances(out.master, out.nodes, out.edges);
  for (const auto& t : add) {
    if (out.distance.count(t)) continue;
    GorEdge e;
    e.table_a = std::min(t, out.master);
    e.table_b = std::max(t, out.master);
    e.manual = true;
    out.edges.push_back(std::move(e));
    out.distance = bfs_distances(out.master, out.nodes, out.edges);
  }
  out.edges = sorted_edges(std::move(out.edges));
  return out;
}

GraphOfRelations include_masters_of_details(const GraphOfRelations& gor, const Catalog& catalog,
                                            const std::map<std::string, TableCategory>& categories,
                                            const ClassificationRules& rules,
                                            const std::set<std::string>& blacklist) {
  std::set<std::string> missing;
  for (const auto& node : gor.nodes) {
    // A record table may only look like one because its owner is outside the
    // graph; user overrides are taken at their word.
    auto it = categories.find(node);
    if (it == categories.end()) continue;
    const bool candidate = it->second.value == Category::Detail ||
                           (it->second.value == Category::Record && !rules.overrides.count(node));
    if (!candidate) continue;
    for (auto& m : owning_masters(catalog, node, rules)) {
      if (!gor.nodes.count(m)) missing.insert(std::move(m));
    }
  }
  if (missing.empty()) return gor;
  return extend_gor(gor, catalog, missing, blacklist);
}

}  // namespace ocelforge
