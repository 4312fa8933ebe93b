#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalbounds/csv.hpp"
#include "causalbounds/pkpd.hpp"
#include "causalbounds/probability.hpp"

namespace causalbounds {

/// Where the measurement and its survey weight live. Empty cells are always
/// missing; `missing_codes` adds sentinels such as "." or "NA".
struct ColumnMap {
  std::string value_column;
  std::optional<std::string> weight_column;
  std::vector<std::string> missing_codes;
  char delimiter = ',';

  /// Throws DomainError on an empty value column.
  void validate() const;
};

struct IngestStats {
  std::size_t rows = 0;
  std::size_t retained = 0;
  std::size_t dropped_missing = 0;
  std::size_t dropped_nonpositive_weight = 0;
  std::size_t dropped() const noexcept { return dropped_missing + dropped_nonpositive_weight; }
  bool operator==(const IngestStats&) const = default;
};

struct WeightedIngest {
  pkpd::WeightedEmpiricalDist dist;
  IngestStats stats;
};

/// One point per row with a present value and a positive weight (unit weight
/// without a weight column). Throws SchemaError for a missing column,
/// DataFormatError for a non-numeric cell, EmptyDataError for zero usable rows.
WeightedIngest parse_weighted_csv(std::string_view text, const ColumnMap& map);
WeightedIngest read_weighted_csv(const std::filesystem::path& path, const ColumnMap& map);

struct BinaryColumns {
  std::string y = "y";
  std::string a = "a";
  std::optional<std::string> w;
  char delimiter = ',';
};

struct BinaryData {
  std::vector<BinaryRecord> records;
  BinaryJointTable joint;
  /// Present when a stratum column was named.
  std::optional<StratifiedTable> stratified;
};

/// Y and A must read as 0 or 1 in every row; otherwise ValidationError lists
/// each offending row. Stratum labels are free text.
BinaryData parse_binary_records_csv(std::string_view text, const BinaryColumns& cols);
BinaryData read_binary_records_csv(const std::filesystem::path& path, const BinaryColumns& cols);

/// Strict decimal parse of a trimmed cell (no trailing junk, finite).
std::optional<double> parse_number(std::string_view cell);

}  // namespace causalbounds
