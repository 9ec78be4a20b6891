#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hle::csv {

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
// A leading UTF-8 byte-order mark is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // Returns std::nullopt at end of input. Blank lines are skipped.
  std::optional<std::vector<std::string>> next();

  // Physical line on which the most recently returned record started.
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hle::csv
