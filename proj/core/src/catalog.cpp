#include "ocelforge/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "ocelforge/csv.hpp"
#include "ocelforge/error.hpp"

namespace fs = std::filesystem;

namespace ocelforge {

namespace {

const std::vector<std::string> kFieldsHeader = {"TABNAME", "FIELDNAME", "DOMNAME", "KEYFLAG",
                                                "POSITION"};
const std::vector<std::string> kDomainsHeader = {"DOMNAME", "KIND", "DESCRIPTION"};

[[noreturn]] void malformed(const fs::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedMetadata,
              file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

void expect_header(csv::Reader& reader, const fs::path& file,
                   const std::vector<std::string>& expected) {
  std::vector<std::string> header;
  if (!reader.next(header)) malformed(file, 1, "missing header row");
  if (header != expected) malformed(file, reader.line(), "unexpected header");
}

std::size_t count_records(const fs::path& file) {
  auto reader = csv::Reader::from_file(file);
  std::vector<std::string> rec;
  if (!reader.next(rec)) return 0;
  std::size_t n = 0;
  while (reader.next(rec)) ++n;
  return n;
}

}  // namespace

std::string_view to_string(DomainKind kind) noexcept {
  switch (kind) {
    case DomainKind::TemporalDate: return "temporal-date";
    case DomainKind::TemporalTime: return "temporal-time";
    case DomainKind::Numeric: return "numeric";
    case DomainKind::Code: return "code";
    case DomainKind::Text: return "text";
  }
  return "text";
}

std::string_view metadata_token(DomainKind kind) noexcept {
  switch (kind) {
    case DomainKind::TemporalDate: return "DATE";
    case DomainKind::TemporalTime: return "TIME";
    case DomainKind::Numeric: return "NUM";
    case DomainKind::Code: return "CODE";
    case DomainKind::Text: return "TEXT";
  }
  return "TEXT";
}

std::optional<DomainKind> parse_domain_kind(std::string_view token) noexcept {
  if (token == "DATE") return DomainKind::TemporalDate;
  if (token == "TIME") return DomainKind::TemporalTime;
  if (token == "NUM") return DomainKind::Numeric;
  if (token == "CODE") return DomainKind::Code;
  if (token == "TEXT") return DomainKind::Text;
  return std::nullopt;
}

const ColumnDef* TableSchema::column(std::string_view field) const noexcept {
  for (const auto& c : columns) {
    if (c.field == field) return &c;
  }
  return nullptr;
}

std::optional<std::size_t> TableSchema::index_of(std::string_view field) const noexcept {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].field == field) return i;
  }
  return std::nullopt;
}

bool TableSchema::is_key_field(std::string_view field) const noexcept {
  const auto* c = column(field);
  return c && c->is_key;
}

const std::string* Row::find(std::string_view field) const noexcept {
  if (!fields_) return nullptr;
  for (std::size_t i = 0; i < fields_->size(); ++i) {
    if ((*fields_)[i] == field) return &values_[i];
  }
  return nullptr;
}

const std::string& Row::at(std::string_view field) const {
  if (const auto* v = find(field)) return *v;
  throw Error(ErrorCode::UnknownColumn, "row has no field " + std::string(field));
}

std::map<std::string, std::string> Row::to_map() const {
  std::map<std::string, std::string> out;
  if (!fields_) return out;
  for (std::size_t i = 0; i < fields_->size(); ++i) out[(*fields_)[i]] = values_[i];
  return out;
}

Catalog::Catalog(DomainMap domains, TableMap tables, fs::path data_root)
    : domains_(std::move(domains)), tables_(std::move(tables)), data_root_(std::move(data_root)) {}

bool Catalog::has_table(std::string_view name) const noexcept {
  return tables_.find(name) != tables_.end();
}

const TableSchema* Catalog::find_table(std::string_view name) const noexcept {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const TableSchema& Catalog::table(std::string_view name) const {
  if (const auto* t = find_table(name)) return *t;
  throw Error(ErrorCode::UnknownTable, "unknown table " + std::string(name));
}

const DomainInfo& Catalog::domain(std::string_view name) const {
  auto it = domains_.find(name);
  if (it == domains_.end()) {
    throw Error(ErrorCode::DanglingDomain, "unknown domain " + std::string(name));
  }
  return it->second;
}

fs::path Catalog::data_file(std::string_view table) const {
  return data_root_ / (std::string(table) + ".csv");
}

Catalog load_catalog(const fs::path& metadata_path) {
  fs::path dir = metadata_path;
  if (fs::is_regular_file(metadata_path)) dir = metadata_path.parent_path();
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::MissingSnapshot, "snapshot directory not found: " + dir.string());
  }
  const fs::path fields_file = dir / "dd_fields.csv";
  const fs::path domains_file = dir / "dd_domains.csv";
  if (!fs::exists(fields_file)) malformed(fields_file, 0, "file not found");

  DomainMap domains;
  std::vector<std::string> rec;
  if (fs::exists(domains_file)) {
    auto reader = csv::Reader::from_file(domains_file);
    expect_header(reader, domains_file, kDomainsHeader);
    while (reader.next(rec)) {
      if (rec.size() != kDomainsHeader.size()) malformed(domains_file, reader.line(), "wrong cell count");
      if (rec[0].empty()) malformed(domains_file, reader.line(), "empty DOMNAME");
      auto kind = parse_domain_kind(rec[1]);
      if (!kind) malformed(domains_file, reader.line(), "invalid KIND '" + rec[1] + "'");
      if (domains.count(rec[0])) malformed(domains_file, reader.line(), "duplicate domain " + rec[0]);
      domains.emplace(rec[0], DomainInfo{rec[0], *kind, rec[2]});
    }
  }

  TableMap tables;
  {
    auto reader = csv::Reader::from_file(fields_file);
    expect_header(reader, fields_file, kFieldsHeader);
    while (reader.next(rec)) {
      const auto line = reader.line();
      if (rec.size() != kFieldsHeader.size()) malformed(fields_file, line, "wrong cell count");
      if (rec[0].empty() || rec[1].empty() || rec[2].empty()) {
        malformed(fields_file, line, "TABNAME, FIELDNAME and DOMNAME are required");
      }
      if (rec[3] != "X" && !rec[3].empty()) malformed(fields_file, line, "KEYFLAG must be X or empty");
      int position = 0;
      auto [p, ec] = std::from_chars(rec[4].data(), rec[4].data() + rec[4].size(), position);
      if (ec != std::errc{} || p != rec[4].data() + rec[4].size()) {
        malformed(fields_file, line, "POSITION is not an integer");
      }
      if (!domains.count(rec[2])) {
        throw Error(ErrorCode::DanglingDomain, fields_file.filename().string() + ":" +
                                                   std::to_string(line) + ": " + rec[0] + "." +
                                                   rec[1] + " references unknown domain " + rec[2]);
      }
      auto& t = tables[rec[0]];
      t.name = rec[0];
      if (t.has_field(rec[1])) {
        throw Error(ErrorCode::DuplicateColumn, fields_file.filename().string() + ":" +
                                                    std::to_string(line) + ": duplicate column " +
                                                    rec[0] + "." + rec[1]);
      }
      t.columns.push_back(ColumnDef{rec[0], rec[1], rec[2], rec[3] == "X", position});
    }
  }

  for (auto& [name, t] : tables) {
    std::stable_sort(t.columns.begin(), t.columns.end(),
                     [](const ColumnDef& a, const ColumnDef& b) { return a.position < b.position; });
    for (const auto& c : t.columns) {
      if (c.is_key) t.primary_key.push_back(c.field);
    }
    const fs::path data = dir / (name + ".csv");
    t.row_count = fs::exists(data) ? count_records(data) : 0;
  }

  return Catalog(std::move(domains), std::move(tables), dir);
}

void write_catalog_metadata(const Catalog& catalog, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream domains(dir / "dd_domains.csv", std::ios::binary);
  std::ofstream fields(dir / "dd_fields.csv", std::ios::binary);
  if (!domains || !fields) throw Error(ErrorCode::IoFailure, "cannot write metadata into " + dir.string());

  csv::write_row(domains, std::span<const std::string>(kDomainsHeader));
  for (const auto& [name, d] : catalog.domains()) {
    csv::write_row(domains, {d.name, metadata_token(d.kind), d.description});
  }
  csv::write_row(fields, std::span<const std::string>(kFieldsHeader));
  for (const auto& [name, t] : catalog.tables()) {
    for (const auto& c : t.columns) {
      const std::string pos = std::to_string(c.position);
      csv::write_row(fields, {c.table, c.field, c.domain, c.is_key ? "X" : "", pos});
    }
  }
}

void scan_table(const Catalog& catalog, std::string_view table,
                const std::vector<KeyFilter>& filters, const RowCallback& on_row) {
  const TableSchema& schema = catalog.table(table);
  const fs::path file = catalog.data_file(table);
  if (!fs::exists(file)) {
    throw Error(ErrorCode::MissingDataFile, "no data file for table " + schema.name + ": " + file.string());
  }

  auto reader = csv::Reader::from_file(file);
  std::vector<std::string> rec;
  if (!reader.next(rec)) return;

  // file column i -> schema column permutation[i]
  if (rec.size() != schema.columns.size()) {
    throw Error(ErrorCode::HeaderMismatch, schema.name + ".csv header has " +
                                               std::to_string(rec.size()) + " columns, schema has " +
                                               std::to_string(schema.columns.size()));
  }
  std::vector<std::size_t> permutation(rec.size());
  std::vector<bool> seen(rec.size(), false);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    auto idx = schema.index_of(rec[i]);
    if (!idx || seen[*idx]) {
      throw Error(ErrorCode::HeaderMismatch, schema.name + ".csv header field '" + rec[i] +
                                                 "' does not match the schema");
    }
    seen[*idx] = true;
    permutation[i] = *idx;
  }

  struct ActiveFilter {
    std::size_t column;
    const std::set<std::string>* allowed;
  };
  std::vector<ActiveFilter> active;
  for (const auto& f : filters) {
    if (auto idx = schema.index_of(f.field)) active.push_back({*idx, &f.allowed_values});
  }

  auto names = std::make_shared<std::vector<std::string>>();
  for (const auto& c : schema.columns) names->push_back(c.field);
  std::shared_ptr<const std::vector<std::string>> shared_names = std::move(names);

  std::size_t row_index = 0;
  while (reader.next(rec)) {
    ++row_index;
    if (rec.size() != permutation.size()) {
      throw Error(ErrorCode::RowArityMismatch,
                  schema.name + ".csv row " + std::to_string(row_index) + " (line " +
                      std::to_string(reader.line()) + ") has " + std::to_string(rec.size()) +
                      " cells, expected " + std::to_string(permutation.size()));
    }
    std::vector<std::string> values(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) values[permutation[i]] = std::move(rec[i]);

    bool keep = true;
    for (const auto& f : active) {
      if (!f.allowed->count(values[f.column])) {
        keep = false;
        break;
      }
    }
    if (keep) on_row(Row(shared_names, std::move(values)));
  }
}

std::vector<Row> scan_table(const Catalog& catalog, std::string_view table,
                            const std::vector<KeyFilter>& filters) {
  std::vector<Row> rows;
  scan_table(catalog, table, filters, [&](const Row& r) { rows.push_back(r); });
  return rows;
}

DomainKind domain_kind(const Catalog& catalog, std::string_view table, std::string_view field) {
  const auto* t = catalog.find_table(table);
  const ColumnDef* c = t ? t->column(field) : nullptr;
  if (!c) {
    throw Error(ErrorCode::UnknownColumn,
                "unknown column " + std::string(table) + "." + std::string(field));
  }
  return catalog.domain(c->domain).kind;
}

}  // namespace ocelforge
