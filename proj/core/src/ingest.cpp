#include "causalbounds/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "causalbounds/error.hpp"

namespace causalbounds {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view cell, const std::vector<std::string>& codes) {
  const auto t = trim(cell);
  if (t.empty()) return true;
  return std::find(codes.begin(), codes.end(), t) != codes.end();
}

double require_number(const std::string& cell, std::size_t row, const std::string& column) {
  if (auto v = parse_number(cell)) return *v;
  throw DataFormatError("row " + std::to_string(row) + ", column '" + column +
                            "': cannot parse '" + cell + "' as a number",
                        row);
}

}  // namespace

std::optional<double> parse_number(std::string_view cell) {
  auto t = trim(cell);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void ColumnMap::validate() const {
  if (value_column.empty()) throw DomainError("value column name must be nonempty");
  if (weight_column && weight_column->empty()) throw DomainError("weight column name must be nonempty");
}

WeightedIngest parse_weighted_csv(std::string_view text, const ColumnMap& map) {
  map.validate();
  const CsvTable t = parse_csv(text, map.delimiter);
  const std::size_t vcol = t.column(map.value_column);
  const std::optional<std::size_t> wcol =
      map.weight_column ? std::optional(t.column(*map.weight_column)) : std::nullopt;

  WeightedIngest out;
  out.stats.rows = t.rows.size();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t recno = CsvTable::record_number(r);
    if (is_missing(row[vcol], map.missing_codes) || (wcol && is_missing(row[*wcol], map.missing_codes))) {
      ++out.stats.dropped_missing;
      continue;
    }
    const double b = require_number(row[vcol], recno, map.value_column);
    const double w = wcol ? require_number(row[*wcol], recno, *map.weight_column) : 1.0;
    if (!(w > 0.0)) {
      ++out.stats.dropped_nonpositive_weight;
      continue;
    }
    out.dist.points.push_back({b, w});
  }
  out.stats.retained = out.dist.points.size();
  if (out.dist.points.empty()) {
    throw EmptyDataError("no usable rows in column '" + map.value_column + "' (" +
                         std::to_string(out.stats.rows) + " rows read)");
  }
  return out;
}

WeightedIngest read_weighted_csv(const std::filesystem::path& path, const ColumnMap& map) {
  return parse_weighted_csv(read_file(path), map);
}

BinaryData parse_binary_records_csv(std::string_view text, const BinaryColumns& cols) {
  const CsvTable t = parse_csv(text, cols.delimiter);
  const std::size_t ycol = t.column(cols.y);
  const std::size_t acol = t.column(cols.a);
  const std::optional<std::size_t> wcol = cols.w ? std::optional(t.column(*cols.w)) : std::nullopt;

  std::vector<BinaryRecord> records;
  records.reserve(t.rows.size());
  ValidationReport bad;
  auto binary = [&](const std::string& cell, std::size_t recno, const std::string& name) -> int {
    const auto v = parse_number(cell);
    if (v && (*v == 0.0 || *v == 1.0)) return static_cast<int>(*v);
    bad.push_back({"non_binary", "row " + std::to_string(recno) + ", column '" + name + "': '" +
                                     cell + "' is not 0 or 1"});
    return -1;
  };
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t recno = CsvTable::record_number(r);
    BinaryRecord rec;
    rec.y = binary(row[ycol], recno, cols.y);
    rec.a = binary(row[acol], recno, cols.a);
    if (wcol) rec.stratum = std::string(trim(row[*wcol]));
    records.push_back(std::move(rec));
  }
  if (!bad.empty()) {
    throw ValidationError(std::to_string(bad.size()) + " non-binary cell(s); first: " + bad.front().message,
                          bad);
  }
  if (records.empty()) throw EmptyDataError("no data rows");
  BinaryJointTable joint = joint_from_records(records);
  std::optional<StratifiedTable> strat;
  if (wcol) strat = stratify_records(records);
  return {std::move(records), std::move(joint), std::move(strat)};
}

BinaryData read_binary_records_csv(const std::filesystem::path& path, const BinaryColumns& cols) {
  return parse_binary_records_csv(read_file(path), cols);
}

}  // namespace causalbounds
