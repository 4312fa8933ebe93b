#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalbounds/ingest.hpp"
#include "causalbounds/pkpd.hpp"
#include "causalbounds/box_search.hpp"

namespace causalbounds::cli {

/// Value in the small TOML subset accepted by config files: numbers, quoted
/// strings, booleans, and flat arrays of numbers or strings.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>, std::vector<std::string>>;

struct ConfigEntry {
  ConfigValue value;
  int line = 0;
};

/// section -> key -> value. Keys before any [section] land in "".
class Config {
 public:
  using Section = std::map<std::string, ConfigEntry, std::less<>>;

  const Section* section(std::string_view name) const;
  bool has(std::string_view section, std::string_view key) const;

  std::optional<double> number(std::string_view section, std::string_view key) const;
  std::optional<std::string> string(std::string_view section, std::string_view key) const;
  std::optional<bool> boolean(std::string_view section, std::string_view key) const;
  std::optional<std::vector<std::string>> strings(std::string_view section, std::string_view key) const;
  /// A bare number becomes [x, x]; a two-element numeric array becomes [lo, hi].
  std::optional<Interval> interval(std::string_view section, std::string_view key) const;

  /// Keys present in `section` but absent from `allowed`.
  std::vector<std::string> unknown_keys(std::string_view section,
                                        const std::vector<std::string_view>& allowed) const;

  std::map<std::string, Section, std::less<>> sections;
};

/// Throws DataFormatError (row = line number) on malformed input.
Config parse_config(std::string_view text);
Config read_config(const std::filesystem::path& path);

/// [model], [parameters], and [search] sections; absent keys keep defaults.
pkpd::PkpdConfig pkpd_config_from(const Config& cfg);
void apply_search_section(const Config& cfg, SearchConfig& search);
/// [data] section; value_column is required.
ColumnMap column_map_from(const Config& cfg);

}  // namespace causalbounds::cli
