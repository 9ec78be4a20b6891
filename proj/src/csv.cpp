#include "hle/csv.hpp"

#include "hle/errors.hpp"

namespace hle::csv {

Reader::Reader(std::istream& in) : in_(in) {}

std::optional<std::vector<std::string>> Reader::next() {
  if (first_) {
    first_ = false;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB && static_cast<unsigned char>(bom[2]) == 0xBF)) {
        for (int i = 2; i >= 0; --i) in_.putback(bom[i]);
      }
    }
  }

  while (true) {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
    record_line_ = line_;

    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool quoted = false;
    bool done = false;
    char c;
    while (!done && in_.get(c)) {
      if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get(c);
            field += '"';
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line_;
          field += c;
        }
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty()) throw RowError(record_line_, "stray quote inside unquoted field");
          in_quotes = true;
          quoted = true;
          break;
        case ',':
          fields.push_back(std::move(field));
          field.clear();
          quoted = false;
          break;
        case '\r':
          if (in_.peek() == '\n') break;
          [[fallthrough]];
        case '\n':
          ++line_;
          done = true;
          break;
        default:
          if (quoted) throw RowError(record_line_, "characters after closing quote");
          field += c;
      }
    }
    if (in_quotes) throw RowError(record_line_, "unterminated quoted field");
    fields.push_back(std::move(field));

    if (fields.size() == 1 && fields.front().empty() && !quoted) continue;
    return fields;
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace hle::csv
