#include "ocelforge/events.hpp"

#include <cctype>
#include <cstdio>

namespace ocelforge {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::string strip(std::string_view s, char sep) {
  std::string out;
  for (char c : s) {
    if (c != sep) out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<std::chrono::sys_days> parse_date(std::string_view text) {
  std::string digits = text.size() == 10 ? strip(text, '-') : std::string(text);
  if (digits.size() != 8 || !all_digits(digits)) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{to_int(std::string_view(digits).substr(0, 4))},
                           month{static_cast<unsigned>(to_int(std::string_view(digits).substr(4, 2)))},
                           day{static_cast<unsigned>(to_int(std::string_view(digits).substr(6, 2)))}};
  if (!ymd.ok() || ymd.year() == year{0}) return std::nullopt;
  return sys_days{ymd};
}

std::optional<std::chrono::seconds> parse_time_of_day(std::string_view text) {
  std::string digits = text.size() == 8 ? strip(text, ':') : std::string(text);
  if (digits.size() != 6 || !all_digits(digits)) return std::nullopt;
  std::string_view d(digits);
  const int h = to_int(d.substr(0, 2));
  const int m = to_int(d.substr(2, 2));
  const int s = to_int(d.substr(4, 2));
  if (h > 23 || m > 59 || s > 59) return std::nullopt;
  return std::chrono::seconds{h * 3600 + m * 60 + s};
}

std::string format_iso(Timestamp ts) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(ts);
  const year_month_day ymd{days};
  const hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_iso(std::string_view text) {
  // 2021-03-01T12:00:00Z
  if (text.size() != 20 || text[10] != 'T' || text[19] != 'Z') return std::nullopt;
  auto date = parse_date(text.substr(0, 10));
  auto tod = parse_time_of_day(text.substr(11, 8));
  if (!date || !tod) return std::nullopt;
  return Timestamp{*date} + *tod;
}

RawObject make_object(const ObjectTypeName& type, std::string_view value) {
  RawObject o;
  o.type = type.rendered();
  o.id = o.type + ":" + std::string(value);
  return o;
}

}  // namespace ocelforge
