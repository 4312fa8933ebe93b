#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalbounds/probability.hpp"

namespace causalbounds::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

struct LabeledResult {
  std::string label;
  BoundsResult result;
};

struct InputDigest {
  std::string name;
  /// "fnv1a64:<16 hex digits>" of the file bytes or inline argument text.
  std::string digest;
};

struct RunReport {
  std::vector<std::string> command;
  std::vector<InputDigest> inputs;
  std::vector<LabeledResult> results;
  std::vector<std::string> warnings;
  /// Only written when timing was requested, so reports stay reproducible.
  std::optional<double> duration_ms;
};

std::string content_digest(std::string_view bytes);

Json to_json(const BoundsResult& r);
/// Inverse of to_json; throws DataFormatError on a malformed object.
BoundsResult bounds_from_json(const Json& j);

Json to_json(const RunReport& r);

/// Two-space indented JSON with every floating-point number written to 17
/// significant digits. Non-finite numbers become null.
std::string dump_json(const Json& j);

/// Throws IoError naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view text);
void emit_json(const RunReport& r, const std::filesystem::path& path);

}  // namespace causalbounds::cli
