#include "causalbounds/csv.hpp"

#include <fstream>
#include <sstream>

#include "causalbounds/error.hpp"

namespace causalbounds {

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto k = find_column(name)) return *k;
  std::string avail;
  for (std::size_t k = 0; k < header.size(); ++k) avail += (k ? ", " : "") + header[k];
  throw SchemaError("no column '" + std::string(name) + "'; available columns: " + avail);
}

CsvTable parse_csv(std::string_view text, char delimiter) {
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
    throw DomainError("invalid delimiter");
  }
  // Skip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (record_has_content || record.size() > 1 || !record.front().empty()) {
      records.push_back(std::move(record));
    }
    record.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw DataFormatError("stray quote on line " + std::to_string(line), records.size() + 1);
      }
      in_quotes = true;
      field_was_quoted = true;
      record_has_content = true;
    } else if (c == delimiter) {
      end_field();
      record_has_content = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      ++line;
    } else {
      if (field_was_quoted) {
        throw DataFormatError("text after closing quote on line " + std::to_string(line),
                              records.size() + 1);
      }
      field.push_back(c);
    }
  }
  if (in_quotes) throw DataFormatError("unterminated quoted field", records.size() + 1);
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();

  if (records.empty()) throw EmptyDataError("file has no header row");
  CsvTable t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) {
      throw DataFormatError("record " + std::to_string(r + 1) + " has " +
                                std::to_string(records[r].size()) + " fields, header has " +
                                std::to_string(t.header.size()),
                            r + 1);
    }
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
  return parse_csv(read_file(path), delimiter);
}

}  // namespace causalbounds
