#include "fakenews/csv.hpp"

#include "fakenews/error.hpp"

namespace fakenews::csv {

std::vector<Record> parse(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool at_field_start = true;
  bool row_has_content = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    at_field_start = true;
  };
  auto end_record = [&] {
    if (row_has_content) {
      end_field();
      records.push_back(std::move(current));
    }
    current = Record{};
    field.clear();
    at_field_start = true;
    row_has_content = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (at_field_start && c == '"') {
      const std::size_t quote_line = line;
      if (!row_has_content) current.line = line;
      row_has_content = true;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        const char q = text[i];
        if (q == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (q == '\n') ++line;
        field.push_back(q);
        ++i;
      }
      if (!closed) {
        throw DataError("malformed CSV: unterminated quoted field starting at line " +
                        std::to_string(quote_line));
      }
      at_field_start = false;
      if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw DataError("malformed CSV: unexpected character after closing quote at line " +
                        std::to_string(line));
      }
      continue;
    }
    if (c == ',') {
      if (!row_has_content) current.line = line;
      row_has_content = true;
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      continue;
    }
    if (c == '"') {
      throw DataError("malformed CSV: stray quote inside unquoted field at line " +
                      std::to_string(line));
    }
    if (!row_has_content) current.line = line;
    row_has_content = true;
    at_field_start = false;
    field.push_back(c);
    ++i;
  }
  end_record();
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace fakenews::csv
