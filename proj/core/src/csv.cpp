#include "ocelforge/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "ocelforge/error.hpp"

namespace ocelforge::csv {

Reader::Reader(std::string content) : buf_(std::move(content)) {
  // UTF-8 byte order mark
  if (buf_.size() >= 3 && buf_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
}

Reader Reader::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return Reader(std::move(ss).str());
}

bool Reader::next(std::vector<std::string>& fields) {
  fields.clear();
  const std::size_t n = buf_.size();

  while (pos_ < n && (buf_[pos_] == '\n' || buf_[pos_] == '\r')) {
    if (buf_[pos_] == '\n') ++line_;
    ++pos_;
  }
  if (pos_ >= n) return false;

  record_line_ = line_;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;

  while (pos_ < n) {
    const char c = buf_[pos_];
    if (quoted) {
      if (c == '"') {
        if (pos_ + 1 < n && buf_[pos_ + 1] == '"') {
          field.push_back('"');
          pos_ += 2;
          continue;
        }
        quoted = false;
        ++pos_;
        continue;
      }
      if (c == '\n') ++line_;
      field.push_back(c);
      ++pos_;
      continue;
    }
    if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
      ++pos_;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
      ++pos_;
      continue;
    }
    if (c == '\r' && pos_ + 1 < n && buf_[pos_ + 1] == '\n') {
      ++pos_;
      continue;
    }
    if (c == '\n') {
      ++pos_;
      ++line_;
      fields.push_back(std::move(field));
      return true;
    }
    field.push_back(c);
    ++pos_;
  }
  if (quoted) {
    throw Error(ErrorCode::MalformedMetadata,
                "unterminated quoted field starting at line " + std::to_string(record_line_));
  }
  fields.push_back(std::move(field));
  return true;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  // a lone empty field would otherwise be a blank line, which readers skip
  if (fields.size() == 1 && fields[0].empty()) {
    out << "\"\"\n";
    return;
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  std::vector<std::string> owned(fields.begin(), fields.end());
  write_row(out, std::span<const std::string>(owned));
}

}  // namespace ocelforge::csv
