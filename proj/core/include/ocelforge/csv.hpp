#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocelforge::csv {

// RFC-4180 reader over an in-memory buffer. Accepts LF or CRLF record
// terminators; quoted fields may span lines. Blank lines are skipped.
class Reader {
public:
  explicit Reader(std::string content);

  static Reader from_file(const std::filesystem::path& path);

  // Parses the next record into `fields`. Returns false at end of input.
  // Throws Error(MalformedMetadata) on an unterminated quote.
  bool next(std::vector<std::string>& fields);

  // 1-based line on which the most recently returned record started.
  std::size_t line() const noexcept { return record_line_; }

private:
  std::string buf_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);
void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);

}  // namespace ocelforge::csv
