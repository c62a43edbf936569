#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocelforge {

using Timestamp = std::chrono::sys_seconds;

// "YYYYMMDD" or "YYYY-MM-DD"; rejects the SAP null date 00000000.
std::optional<std::chrono::sys_days> parse_date(std::string_view text);
// "HHMMSS" or "HH:MM:SS".
std::optional<std::chrono::seconds> parse_time_of_day(std::string_view text);

// ISO-8601 UTC at second precision: 2021-03-01T12:00:00Z
std::string format_iso(Timestamp ts);
std::optional<Timestamp> parse_iso(std::string_view text);

struct ObjectTypeName {
  std::string field;
  std::string domain;

  // "<field>-<domain>", e.g. BELNR-RE_BELNR
  std::string rendered() const { return field + "-" + domain; }
};

struct RawObject {
  std::string id;    // "<type>:<value>"
  std::string type;  // ObjectTypeName::rendered()
  std::map<std::string, std::string> ovmap;

  bool operator==(const RawObject&) const = default;
};

RawObject make_object(const ObjectTypeName& type, std::string_view value);

struct RawEvent {
  std::string id;  // "<source_table>:<source_row_key>"
  std::string activity;
  Timestamp timestamp{};
  std::vector<std::string> omap;  // sorted, unique object ids
  std::map<std::string, std::string> vmap;
  std::string source_table;
  std::string source_row_key;

  bool operator==(const RawEvent&) const = default;
};

}  // namespace ocelforge
