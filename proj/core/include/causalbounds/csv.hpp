#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causalbounds {

/// Header plus data records. Record numbers are 1-based with the header as
/// record 1, which matches DataFormatError::row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws SchemaError listing the available columns.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
  static constexpr std::size_t record_number(std::size_t row_index) noexcept { return row_index + 2; }
};

/// RFC 4180: quoted fields may contain the delimiter, doubled quotes and line
/// breaks; CRLF and LF both end records; a trailing newline is optional.
/// Blank lines are skipped. Throws DataFormatError on unterminated quotes,
/// stray quotes and ragged rows; EmptyDataError when there is no header.
CsvTable parse_csv(std::string_view text, char delimiter = ',');

/// Reads the whole file; throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

}  // namespace causalbounds
