#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ocelforge {

enum class DomainKind { TemporalDate, TemporalTime, Numeric, Code, Text };

// "temporal-date", "temporal-time", "numeric", "code", "text"
std::string_view to_string(DomainKind kind) noexcept;
// Metadata spelling: DATE, TIME, NUM, CODE, TEXT.
std::string_view metadata_token(DomainKind kind) noexcept;
std::optional<DomainKind> parse_domain_kind(std::string_view token) noexcept;

inline bool is_temporal(DomainKind k) noexcept {
  return k == DomainKind::TemporalDate || k == DomainKind::TemporalTime;
}

struct DomainInfo {
  std::string name;
  DomainKind kind = DomainKind::Text;
  std::string description;

  bool operator==(const DomainInfo&) const = default;
};

struct ColumnDef {
  std::string table;
  std::string field;
  std::string domain;
  bool is_key = false;
  int position = 0;

  bool operator==(const ColumnDef&) const = default;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnDef> columns;       // ordered by position
  std::vector<std::string> primary_key;  // key fields, in column order
  std::size_t row_count = 0;

  const ColumnDef* column(std::string_view field) const noexcept;
  std::optional<std::size_t> index_of(std::string_view field) const noexcept;
  bool has_field(std::string_view field) const noexcept { return column(field) != nullptr; }
  bool is_key_field(std::string_view field) const noexcept;

  bool operator==(const TableSchema&) const = default;
};

// One data row, values held in the owning table's column order. Empty string
// means absent.
class Row {
public:
  Row() = default;
  Row(std::shared_ptr<const std::vector<std::string>> fields, std::vector<std::string> values)
      : fields_(std::move(fields)), values_(std::move(values)) {}

  const std::vector<std::string>& fields() const noexcept { return *fields_; }
  const std::vector<std::string>& values() const noexcept { return values_; }
  const std::string& value(std::size_t column) const { return values_.at(column); }

  const std::string* find(std::string_view field) const noexcept;
  // Throws Error(UnknownColumn).
  const std::string& at(std::string_view field) const;

  std::map<std::string, std::string> to_map() const;

private:
  std::shared_ptr<const std::vector<std::string>> fields_;
  std::vector<std::string> values_;
};

struct KeyFilter {
  std::string field;
  std::set<std::string> allowed_values;

  bool operator==(const KeyFilter&) const = default;
};

using DomainMap = std::map<std::string, DomainInfo, std::less<>>;
using TableMap = std::map<std::string, TableSchema, std::less<>>;

class Catalog {
public:
  Catalog() = default;
  Catalog(DomainMap domains, TableMap tables, std::filesystem::path data_root);

  const DomainMap& domains() const noexcept { return domains_; }
  const TableMap& tables() const noexcept { return tables_; }
  const std::filesystem::path& data_root() const noexcept { return data_root_; }

  bool has_table(std::string_view name) const noexcept;
  const TableSchema* find_table(std::string_view name) const noexcept;
  // Throws Error(UnknownTable).
  const TableSchema& table(std::string_view name) const;
  const DomainInfo& domain(std::string_view name) const;

  std::filesystem::path data_file(std::string_view table) const;

  bool operator==(const Catalog& other) const {
    return domains_ == other.domains_ && tables_ == other.tables_;
  }

private:
  DomainMap domains_;
  TableMap tables_;
  std::filesystem::path data_root_;
};

// Loads `dd_fields.csv` / `dd_domains.csv` from a snapshot directory (or from
// the directory holding the given dd_fields.csv). Row counts are taken from
// `<dir>/<TABNAME>.csv` when present, else 0.
Catalog load_catalog(const std::filesystem::path& metadata_path);

// Writes dd_fields.csv and dd_domains.csv for `catalog` into `dir`.
void write_catalog_metadata(const Catalog& catalog, const std::filesystem::path& dir);

using RowCallback = std::function<void(const Row&)>;

// Streams rows of `table` in file order, keeping those that satisfy every
// filter whose field the table carries. Filters on absent fields are ignored.
void scan_table(const Catalog& catalog, std::string_view table,
                const std::vector<KeyFilter>& filters, const RowCallback& on_row);

std::vector<Row> scan_table(const Catalog& catalog, std::string_view table,
                            const std::vector<KeyFilter>& filters = {});

DomainKind domain_kind(const Catalog& catalog, std::string_view table, std::string_view field);

}  // namespace ocelforge
